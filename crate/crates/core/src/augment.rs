//! Seeded synthetic variations of a demonstration.
//!
//! Every sample is drawn from `ChaCha8Rng::seed_from_u64(seed)` positioned on
//! stream `k`, so sample `k` is reproducible on its own and independent of
//! how many other samples are generated or in which order.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::language::{select_salient, DEFAULT_SALIENCE_ALPHA};
use crate::trajectory::{normalize, torso_center, torso_relative_extent, GestureTrajectory, KeypointFrame};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AugmentConfig {
    pub seed: u64,
    /// Maximum absolute rotation about the torso center, in degrees.
    pub rotation_deg: f64,
    /// Uniform scale factor range `[lo, hi]`.
    pub scale_range: (f64, f64),
    /// Positional noise, as a fraction of the gesture extent.
    pub noise_sigma: f64,
    /// Maximum monotone time distortion.
    pub time_warp: f64,
    /// Extra noise on non-salient keypoints, fraction of extent.
    pub jitter_sigma: f64,
}

impl Default for AugmentConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            rotation_deg: 10.0,
            scale_range: (0.85, 1.15),
            noise_sigma: 0.02,
            time_warp: 0.15,
            jitter_sigma: 0.01,
        }
    }
}

impl AugmentConfig {
    /// A configuration whose output equals its input.
    pub fn identity(seed: u64) -> Self {
        Self {
            seed,
            rotation_deg: 0.0,
            scale_range: (1.0, 1.0),
            noise_sigma: 0.0,
            time_warp: 0.0,
            jitter_sigma: 0.0,
        }
    }

    pub fn with_noise(mut self, sigma: f64) -> Self {
        self.noise_sigma = sigma;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.scale_range;
        let ok = self.rotation_deg.is_finite()
            && self.rotation_deg >= 0.0
            && lo.is_finite()
            && hi.is_finite()
            && lo > 0.0
            && lo <= hi
            && self.noise_sigma.is_finite()
            && self.noise_sigma >= 0.0
            && self.jitter_sigma.is_finite()
            && self.jitter_sigma >= 0.0
            && (0.0..1.0).contains(&self.time_warp);
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("invalid augmentation config {self:?}")))
        }
    }
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

/// Sample `k` of the augmentation family of `traj`.
pub fn augment(traj: &GestureTrajectory, cfg: &AugmentConfig, k: u64) -> Result<GestureTrajectory> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(k);

    // Fixed draw order regardless of which transforms end up active.
    let angle = uniform(&mut rng, -cfg.rotation_deg, cfg.rotation_deg).to_radians();
    let scale = uniform(&mut rng, cfg.scale_range.0, cfg.scale_range.1);
    let warp_amp = uniform(&mut rng, -cfg.time_warp, cfg.time_warp);
    let count_u = uniform(&mut rng, -1.0, 1.0);

    let mut frames = time_warp(traj.frames(), cfg.time_warp, warp_amp, count_u);

    if angle != 0.0 || scale != 1.0 {
        let (sin, cos) = angle.sin_cos();
        for f in &mut frames {
            let c = torso_center(f)?;
            for kp in f.keypoints.values_mut() {
                let d = kp.pos - c;
                kp.pos = c + Point::new(cos * d.x - sin * d.y, sin * d.x + cos * d.y) * scale;
            }
        }
    }

    if cfg.noise_sigma > 0.0 || cfg.jitter_sigma > 0.0 {
        let extent = torso_relative_extent(traj)?;
        let salient: BTreeSet<String> = if cfg.jitter_sigma > 0.0 {
            let norm = normalize(traj)?;
            select_salient(&norm, DEFAULT_SALIENCE_ALPHA)?.into_iter().collect()
        } else {
            BTreeSet::new()
        };
        let ids: Vec<String> = traj.keypoint_ids().into_iter().collect();
        let m = frames.len();
        for id in &ids {
            let mut d = gaussian_offsets(&mut rng, m, cfg.noise_sigma * extent);
            if cfg.jitter_sigma > 0.0 && !salient.contains(id) {
                let j = gaussian_offsets(&mut rng, m, cfg.jitter_sigma * extent);
                for (a, b) in d.iter_mut().zip(j) {
                    *a = *a + b;
                }
            }
            for (f, e) in frames.iter_mut().zip(d) {
                if let Some(kp) = f.keypoints.get_mut(id) {
                    kp.pos = kp.pos + e;
                }
            }
        }
    }
    GestureTrajectory::new(frames)
}

/// `m` independent 2D Gaussian offsets with per-axis standard deviation `sigma`.
fn gaussian_offsets(rng: &mut ChaCha8Rng, m: usize, sigma: f64) -> Vec<Point> {
    let normal = Normal::new(0.0, sigma).expect("sigma is finite and non-negative");
    (0..m).map(|_| Point::new(normal.sample(rng), normal.sample(rng))).collect()
}

/// Monotone resampling `s_j = j(n-1)/(M-1) + a(n-1) sin(2πj/(M-1)) / 2π`
/// with `M` within ±20% of `n`; timestamps spread uniformly over the original span.
fn time_warp(frames: &[KeypointFrame], max_warp: f64, amp: f64, count_u: f64) -> Vec<KeypointFrame> {
    let n = frames.len();
    if n < 2 || max_warp == 0.0 {
        return frames.to_vec();
    }
    let lo = (0.8 * n as f64).ceil().max(2.0);
    let hi = (1.2 * n as f64).floor().max(lo);
    let m = (n as f64 * (1.0 + max_warp * count_u)).round().clamp(lo, hi) as usize;
    if m == n && amp == 0.0 {
        return frames.to_vec();
    }
    let span = (n - 1) as f64;
    let t0 = frames[0].t;
    let dur = frames[n - 1].t - t0;
    (0..m)
        .map(|j| {
            let u = j as f64 / (m - 1) as f64;
            let s = (u * span + amp * span * (std::f64::consts::TAU * u).sin() / std::f64::consts::TAU).clamp(0.0, span);
            let i = (s.floor() as usize).min(n - 2);
            let w = s - i as f64;
            let (a, b) = (&frames[i], &frames[i + 1]);
            let mut out = KeypointFrame::new(t0 + u * dur);
            for (id, ka) in &a.keypoints {
                let mut kp = *ka;
                if let Some(kb) = b.keypoints.get(id) {
                    kp.pos = ka.pos + (kb.pos - ka.pos) * w;
                }
                out.keypoints.insert(id.clone(), kp);
            }
            for (id, kb) in &b.keypoints {
                out.keypoints.entry(id.clone()).or_insert(*kb);
            }
            out
        })
        .collect()
}

/// `n_per_label` samples of every demonstration, in demonstration order. Sample
/// `i` of the `l`-th label uses stream `l * n_per_label + i`.
pub fn make_dataset(
    demos: &[(String, GestureTrajectory)],
    n_per_label: usize,
    cfg: &AugmentConfig,
) -> Result<Vec<(GestureTrajectory, String)>> {
    if n_per_label == 0 {
        return Err(Error::InvalidArgument("n_per_label must be at least 1".into()));
    }
    cfg.validate()?;
    let jobs: Vec<(usize, usize)> = (0..demos.len())
        .flat_map(|l| (0..n_per_label).map(move |i| (l, i)))
        .collect();
    jobs.par_iter()
        .map(|&(l, i)| {
            let (label, traj) = &demos[l];
            let k = (l * n_per_label + i) as u64;
            Ok((augment(traj, cfg, k)?, label.clone()))
        })
        .collect()
}
