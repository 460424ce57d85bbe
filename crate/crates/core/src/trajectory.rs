//! Recorded keypoint sequences and the preprocessing applied to them before
//! any shape is drawn: torso normalization, centroid recentering and
//! Ramer-Douglas-Peucker simplification.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::geom::{Point, Polyline2D};

/// Keypoints whose centroid defines the torso center.
pub const TORSO_KEYPOINTS: [&str; 4] = ["left_shoulder", "right_shoulder", "left_hip", "right_hip"];

/// Default RDP tolerance in normalized units.
pub const DEFAULT_RDP_EPSILON: f64 = 0.02;

/// Global extents below this are treated as "no motion".
const MIN_EXTENT: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Keypoint {
    pub pos: Point,
    pub confidence: Option<f64>,
}

impl Keypoint {
    pub fn at(x: f64, y: f64) -> Self {
        Self { pos: Point::new(x, y), confidence: None }
    }
}

/// All keypoints observed at one instant. Image coordinates, y pointing down.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct KeypointFrame {
    pub t: f64,
    pub keypoints: BTreeMap<String, Keypoint>,
}

impl KeypointFrame {
    pub fn new(t: f64) -> Self {
        Self { t, keypoints: BTreeMap::new() }
    }

    pub fn with(mut self, id: &str, x: f64, y: f64) -> Self {
        self.keypoints.insert(id.to_string(), Keypoint::at(x, y));
        self
    }

    pub fn insert(&mut self, id: impl Into<String>, pos: Point) {
        self.keypoints.insert(id.into(), Keypoint { pos, confidence: None });
    }

    pub fn get(&self, id: &str) -> Option<Point> {
        self.keypoints.get(id).map(|k| k.pos)
    }
}

/// One recorded gesture: a non-empty, time-ordered list of frames.
#[derive(Debug, Clone, PartialEq)]
pub struct GestureTrajectory {
    frames: Vec<KeypointFrame>,
}

impl GestureTrajectory {
    pub fn new(frames: Vec<KeypointFrame>) -> Result<Self> {
        if frames.is_empty() {
            return Err(Error::InvalidArgument("trajectory has no frames".into()));
        }
        let mut prev = f64::NEG_INFINITY;
        for f in &frames {
            if !(f.t.is_finite() && f.t >= 0.0) {
                return Err(Error::InvalidArgument(format!("invalid timestamp {}", f.t)));
            }
            if f.t < prev {
                return Err(Error::OutOfOrder { t: f.t, prev });
            }
            prev = f.t;
            if let Some((id, _)) = f.keypoints.iter().find(|(_, k)| !k.pos.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "non-finite position for `{id}` at t={}",
                    f.t
                )));
            }
        }
        Ok(Self { frames })
    }

    pub fn frames(&self) -> &[KeypointFrame] {
        &self.frames
    }

    pub fn into_frames(self) -> Vec<KeypointFrame> {
        self.frames
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn keypoint_ids(&self) -> BTreeSet<String> {
        self.frames
            .iter()
            .flat_map(|f| f.keypoints.keys().cloned())
            .collect()
    }

    pub fn duration(&self) -> f64 {
        self.frames.last().unwrap().t - self.frames[0].t
    }

    /// Positions of one keypoint in frame order, skipping frames that lack it.
    pub fn positions(&self, id: &str) -> Vec<Point> {
        self.frames.iter().filter_map(|f| f.get(id)).collect()
    }
}

/// Centroid of whichever shoulder/hip keypoints the frame carries.
pub fn torso_center(frame: &KeypointFrame) -> Result<Point> {
    let mut sum = Point::default();
    let mut n = 0usize;
    for id in TORSO_KEYPOINTS {
        if let Some(p) = frame.get(id) {
            sum = sum + p;
            n += 1;
        }
    }
    if n == 0 {
        return Err(Error::MissingTorso { t: frame.t });
    }
    Ok(sum * (1.0 / n as f64))
}

/// Per-axis peak-to-peak extent of a point set.
pub(crate) fn peak_to_peak(points: &[Point]) -> (f64, f64) {
    let mut min = Point::new(f64::INFINITY, f64::INFINITY);
    let mut max = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in points {
        min.x = min.x.min(p.x);
        min.y = min.y.min(p.y);
        max.x = max.x.max(p.x);
        max.y = max.y.max(p.y);
    }
    if points.is_empty() {
        (0.0, 0.0)
    } else {
        (max.x - min.x, max.y - min.y)
    }
}

/// Largest per-axis peak-to-peak extent over all keypoints after subtracting
/// the per-frame torso center. This is the "gesture extent" in input units.
pub fn torso_relative_extent(traj: &GestureTrajectory) -> Result<f64> {
    let rel = torso_relative(traj)?;
    let mut extent = 0.0f64;
    for id in rel.keypoint_ids() {
        let (ex, ey) = peak_to_peak(&rel.positions(&id));
        extent = extent.max(ex).max(ey);
    }
    Ok(extent)
}

fn torso_relative(traj: &GestureTrajectory) -> Result<GestureTrajectory> {
    let mut frames = Vec::with_capacity(traj.len());
    for f in traj.frames() {
        let c = torso_center(f)?;
        let mut out = KeypointFrame::new(f.t);
        for (id, k) in &f.keypoints {
            out.keypoints.insert(
                id.clone(),
                Keypoint { pos: k.pos - c, confidence: k.confidence },
            );
        }
        frames.push(out);
    }
    Ok(GestureTrajectory { frames })
}

/// Torso-relative, per-keypoint recentered, isotropically scaled copy of the
/// trajectory. The largest per-axis peak-to-peak extent becomes 2, so the
/// widest keypoint path spans `[-1, 1]` on its dominant axis.
pub fn normalize(traj: &GestureTrajectory) -> Result<GestureTrajectory> {
    let mut rel = torso_relative(traj)?;

    let mut means: BTreeMap<String, (Point, usize)> = BTreeMap::new();
    for f in rel.frames() {
        for (id, k) in &f.keypoints {
            let e = means.entry(id.clone()).or_insert((Point::default(), 0));
            e.0 = e.0 + k.pos;
            e.1 += 1;
        }
    }
    let means: BTreeMap<String, Point> = means
        .into_iter()
        .map(|(id, (s, n))| (id, s * (1.0 / n as f64)))
        .collect();
    for f in &mut rel.frames {
        for (id, k) in f.keypoints.iter_mut() {
            k.pos = k.pos - means[id];
        }
    }

    let mut extent = 0.0f64;
    for id in means.keys() {
        let (ex, ey) = peak_to_peak(&rel.positions(id));
        extent = extent.max(ex).max(ey);
    }
    if !(extent >= MIN_EXTENT) {
        return Err(Error::DegenerateExtent { extent });
    }
    let scale = 2.0 / extent;
    for f in &mut rel.frames {
        for k in f.keypoints.values_mut() {
            k.pos = k.pos * scale;
        }
    }
    Ok(rel)
}

/// One polyline per requested keypoint, in id order.
pub fn extract_path<S: AsRef<str>>(
    traj: &GestureTrajectory,
    ids: &[S],
) -> Result<Vec<Polyline2D>> {
    if ids.is_empty() {
        return Err(Error::InvalidArgument("no keypoint ids requested".into()));
    }
    let sorted: BTreeSet<&str> = ids.iter().map(|s| s.as_ref()).collect();
    sorted
        .into_iter()
        .map(|id| {
            let pts = traj.positions(id);
            if pts.len() < 2 {
                Err(Error::EmptyPath { id: id.to_string(), count: pts.len() })
            } else {
                Ok(Polyline2D::new(pts))
            }
        })
        .collect()
}

/// Distance from `p` to the segment `a`–`b` (point distance when `a == b`).
pub fn segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len_sq = ab.dot(ab);
    if len_sq == 0.0 {
        return p.distance(a);
    }
    let t = ((p - a).dot(ab) / len_sq).clamp(0.0, 1.0);
    p.distance(a + ab * t)
}

/// Indices kept by Ramer-Douglas-Peucker at tolerance `epsilon`.
pub fn rdp_indices(points: &[Point], epsilon: f64) -> Vec<usize> {
    let n = points.len();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut keep = vec![false; n];
    keep[0] = true;
    keep[n - 1] = true;
    let mut stack = vec![(0usize, n - 1)];
    while let Some((lo, hi)) = stack.pop() {
        if hi <= lo + 1 {
            continue;
        }
        let (a, b) = (points[lo], points[hi]);
        let mut best = (lo, -1.0f64);
        for (i, &p) in points.iter().enumerate().take(hi).skip(lo + 1) {
            let d = segment_distance(p, a, b);
            if d > best.1 {
                best = (i, d);
            }
        }
        if best.1 > epsilon {
            keep[best.0] = true;
            stack.push((lo, best.0));
            stack.push((best.0, hi));
        }
    }
    (0..n).filter(|&i| keep[i]).collect()
}

/// Ramer-Douglas-Peucker simplification. Endpoints are always kept.
pub fn rdp_simplify(poly: &Polyline2D, epsilon: f64) -> Polyline2D {
    Polyline2D::new(
        rdp_indices(&poly.points, epsilon.max(0.0))
            .into_iter()
            .map(|i| poly.points[i])
            .collect(),
    )
}
