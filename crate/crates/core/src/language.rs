//! The gesture vocabulary: one reference per label, each holding its salient
//! keypoints, their simplified motion paths, and cached descriptors.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::descriptors::{describe, DescriptorConfig, DescriptorSet};
use crate::error::{Error, Result};
use crate::geom::{round_sig9, Point, Polyline2D};
use crate::shape::RasterConfig;
use crate::trajectory::{
    extract_path, normalize, peak_to_peak, rdp_simplify, GestureTrajectory, DEFAULT_RDP_EPSILON,
};

pub const LANGUAGE_VERSION: u32 = 1;
pub const DEFAULT_SALIENCE_ALPHA: f64 = 0.6;

/// Tolerance for the cached-descriptor consistency check on load: absolute
/// `1e-9` plus the nine-significant-digit storage quantum.
const CACHE_ABS_TOL: f64 = 1e-9;
const CACHE_REL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceGesture {
    pub label: String,
    pub salient_keypoints: Vec<String>,
    pub polylines: BTreeMap<String, Polyline2D>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub descriptors: Option<DescriptorSet>,
}

impl ReferenceGesture {
    /// Polylines in keypoint-id order, the order used for rasterization.
    pub fn ordered_polylines(&self) -> Vec<Polyline2D> {
        self.polylines.values().cloned().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GestureLanguage {
    pub version: u32,
    #[serde(rename = "raster")]
    pub raster_config: RasterConfig,
    pub rdp_epsilon: f64,
    pub salience_alpha: f64,
    pub gestures: Vec<ReferenceGesture>,
}

impl Default for GestureLanguage {
    fn default() -> Self {
        Self {
            version: LANGUAGE_VERSION,
            raster_config: RasterConfig::default(),
            rdp_epsilon: DEFAULT_RDP_EPSILON,
            salience_alpha: DEFAULT_SALIENCE_ALPHA,
            gestures: Vec::new(),
        }
    }
}

impl GestureLanguage {
    pub fn new(raster_config: RasterConfig, rdp_epsilon: f64, salience_alpha: f64) -> Result<Self> {
        raster_config.validate()?;
        if !(rdp_epsilon >= 0.0 && rdp_epsilon.is_finite()) {
            return Err(Error::InvalidArgument(format!("rdp epsilon {rdp_epsilon}")));
        }
        if !(salience_alpha > 0.0 && salience_alpha <= 1.0) {
            return Err(Error::InvalidArgument(format!("salience alpha {salience_alpha}")));
        }
        Ok(Self {
            version: LANGUAGE_VERSION,
            raster_config,
            rdp_epsilon: round_sig9(rdp_epsilon),
            salience_alpha: round_sig9(salience_alpha),
            gestures: Vec::new(),
        })
    }

    pub fn labels(&self) -> Vec<&str> {
        self.gestures.iter().map(|g| g.label.as_str()).collect()
    }

    pub fn get(&self, label: &str) -> Option<&ReferenceGesture> {
        self.gestures.iter().find(|g| g.label == label)
    }

    pub fn len(&self) -> usize {
        self.gestures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gestures.is_empty()
    }

    /// Serialize to the language file format (pretty JSON, stable field order).
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("language is always serializable");
        s.push('\n');
        s
    }

    pub fn save(&self) -> Vec<u8> {
        self.to_json().into_bytes()
    }

    pub fn load(bytes: &[u8]) -> Result<Self> {
        #[derive(Deserialize)]
        struct Probe {
            version: Option<u32>,
        }
        let probe: Probe = serde_json::from_slice(bytes)
            .map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })?;
        match probe.version {
            Some(LANGUAGE_VERSION) => {}
            Some(found) => return Err(Error::VersionMismatch { found, expected: LANGUAGE_VERSION }),
            None => return Err(Error::Parse { line: 1, msg: "missing field `version`".into() }),
        }

        let mut de = serde_json::Deserializer::from_slice(bytes);
        let lang: GestureLanguage = serde_path_to_error::deserialize(&mut de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            Error::Parse { line: inner.line(), msg: format!("{path}: {inner}") }
        })?;
        lang.validate()?;
        Ok(lang)
    }

    /// Structural invariants plus the cached-descriptor consistency check.
    pub fn validate(&self) -> Result<()> {
        self.raster_config.validate()?;
        let mut seen = BTreeSet::new();
        for g in &self.gestures {
            if g.label.is_empty() {
                return Err(Error::InvalidArgument("empty gesture label".into()));
            }
            if !seen.insert(g.label.as_str()) {
                return Err(Error::DuplicateLabel(g.label.clone()));
            }
            if g.salient_keypoints.is_empty() {
                return Err(Error::InvalidArgument(format!("`{}` has no salient keypoints", g.label)));
            }
            for id in &g.salient_keypoints {
                let n = g.polylines.get(id).map_or(0, Polyline2D::len);
                if n < 2 {
                    return Err(Error::EmptyPath { id: id.clone(), count: n });
                }
            }
            if let Some(cached) = &g.descriptors {
                let fresh = canonical_descriptors(&g.ordered_polylines(), self.raster_config)?;
                if !descriptors_match(cached, &fresh) {
                    return Err(Error::InvalidArgument(format!(
                        "cached descriptors of `{}` do not match its polylines",
                        g.label
                    )));
                }
            }
        }
        Ok(())
    }
}

fn descriptors_match(a: &DescriptorSet, b: &DescriptorSet) -> bool {
    let flat = |d: &DescriptorSet| -> Vec<f64> {
        d.hu.0
            .iter()
            .chain(&d.zernike.0)
            .chain(&d.fourier.0)
            .copied()
            .chain(d.metrics.as_array())
            .collect()
    };
    let (fa, fb) = (flat(a), flat(b));
    fa.len() == fb.len()
        && fa
            .iter()
            .zip(&fb)
            .all(|(x, y)| (x - y).abs() <= CACHE_ABS_TOL + CACHE_REL_TOL * y.abs())
}

/// Keypoints whose peak-to-peak displacement reaches `alpha` of the largest,
/// ordered by descending displacement then id.
pub fn select_salient(traj: &GestureTrajectory, alpha: f64) -> Result<Vec<String>> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidArgument(format!("salience alpha {alpha} outside (0, 1]")));
    }
    let disp: Vec<(String, f64)> = traj
        .keypoint_ids()
        .into_iter()
        .map(|id| {
            let (px, py) = peak_to_peak(&traj.positions(&id));
            let d = px.hypot(py);
            (id, d)
        })
        .collect();
    let max = disp.iter().map(|(_, d)| *d).fold(0.0, f64::max);
    if !(max > 0.0) {
        return Err(Error::DegenerateExtent { extent: max });
    }
    let mut chosen: Vec<(String, f64)> = disp.into_iter().filter(|(_, d)| *d >= alpha * max).collect();
    chosen.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    Ok(chosen.into_iter().map(|(id, _)| id).collect())
}

/// Simplified, storage-quantized paths of `ids` from a normalized trajectory.
pub fn simplified_paths<S: AsRef<str>>(
    norm: &GestureTrajectory,
    ids: &[S],
    epsilon: f64,
) -> Result<Vec<Polyline2D>> {
    Ok(extract_path(norm, ids)?
        .iter()
        .map(|p| {
            let s = rdp_simplify(p, epsilon);
            Polyline2D::new(
                s.points
                    .into_iter()
                    .map(|q| Point::new(round_sig9(q.x), round_sig9(q.y)))
                    .collect(),
            )
        })
        .collect())
}

/// Descriptors as stored in (and compared against) a language: computed with
/// the default descriptor configuration and quantized to nine digits.
pub fn canonical_descriptors(polys: &[Polyline2D], raster: RasterConfig) -> Result<DescriptorSet> {
    Ok(describe(polys, raster, &DescriptorConfig::default())?.map_floats(round_sig9))
}

/// Add one demonstration to the language under `label`. The input language
/// is left untouched; the extended language is returned.
pub fn define_gesture(
    traj: &GestureTrajectory,
    label: &str,
    lang: &GestureLanguage,
) -> Result<GestureLanguage> {
    if label.is_empty() {
        return Err(Error::InvalidArgument("empty gesture label".into()));
    }
    if lang.get(label).is_some() {
        return Err(Error::DuplicateLabel(label.to_string()));
    }
    let norm = normalize(traj)?;
    let salient = select_salient(&norm, lang.salience_alpha)?;
    let polys = simplified_paths(&norm, &salient, lang.rdp_epsilon)?;
    let descriptors = canonical_descriptors(&polys, lang.raster_config)?;

    let mut sorted_ids: Vec<&String> = salient.iter().collect();
    sorted_ids.sort();
    let polylines = sorted_ids.into_iter().cloned().zip(polys).collect();

    let mut out = lang.clone();
    out.gestures.push(ReferenceGesture {
        label: label.to_string(),
        salient_keypoints: salient,
        polylines,
        descriptors: Some(descriptors),
    });
    Ok(out)
}
