//! Scripted demonstrations: a synthetic upper-body skeleton tracing each
//! vocabulary gesture with its wrist(s), in 640x480 image coordinates.

use std::f64::consts::{PI, TAU};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::geom::Point;
use crate::session::{KeypointStream, StreamHeader};
use crate::trajectory::{GestureTrajectory, KeypointFrame};

pub const SMALL_VOCABULARY: [&str; 3] = ["circle", "wedge", "three"];
pub const LARGE_VOCABULARY: [&str; 8] = ["circle", "wedge", "three", "infinity", "sweep", "triangle", "square", "line"];
pub const DEFAULT_FRAMES: usize = 45;
pub const FPS: f64 = 30.0;

const RIGHT_SHOULDER: Point = Point::new(280.0, 180.0);
const LEFT_SHOULDER: Point = Point::new(360.0, 180.0);
const RIGHT_HIP: Point = Point::new(290.0, 330.0);
const LEFT_HIP: Point = Point::new(350.0, 330.0);
const NOSE: Point = Point::new(320.0, 120.0);
const RESTING_LEFT_WRIST: Point = Point::new(400.0, 320.0);
const RESTING_RIGHT_WRIST: Point = Point::new(240.0, 320.0);
/// Center and radius of the drawing area of the right wrist.
const CANVAS: Point = Point::new(200.0, 190.0);
const CANVAS_RADIUS: f64 = 90.0;
/// Hand tremor of the demonstrator, as a fraction of the drawing size.
const TREMOR: f64 = 0.01;

/// Point at fraction `s` of the arc length of a polygonal path.
fn along(path: &[(f64, f64)], s: f64) -> Point {
    let pts: Vec<Point> = path.iter().map(|&(x, y)| Point::new(x, y)).collect();
    let total: f64 = pts.windows(2).map(|w| w[0].distance(w[1])).sum();
    let mut remaining = s.clamp(0.0, 1.0) * total;
    for w in pts.windows(2) {
        let len = w[0].distance(w[1]);
        if remaining <= len && len > 0.0 {
            return w[0] + (w[1] - w[0]) * (remaining / len);
        }
        remaining -= len;
    }
    *pts.last().unwrap()
}

/// Shape of a one-handed gesture on the unit canvas (y down), `s ∈ [0, 1]`.
fn unit_shape(name: &str, s: f64) -> Option<Point> {
    let p = match name {
        // Closed shapes overshoot their start slightly, as a hand does.
        "circle" => {
            let a = TAU * 1.08 * s;
            Point::new(a.sin(), -a.cos())
        }
        "wedge" => along(&[(-0.8, -1.0), (0.0, 1.0), (0.8, -1.0)], s),
        "triangle" => along(&[(0.0, -1.0), (0.9, 0.7), (-0.9, 0.7), (0.0, -1.0), (0.15, -0.72)], s),
        "square" => along(&[(-0.8, -0.8), (0.8, -0.8), (0.8, 0.8), (-0.8, 0.8), (-0.8, -0.8), (-0.5, -0.8)], s),
        "three" => {
            let (c, a) = if s < 0.5 {
                ((0.0, -0.5), -150.0 + 240.0 * (2.0 * s))
            } else {
                ((0.0, 0.5), -90.0 + 240.0 * (2.0 * s - 1.0))
            };
            let a = f64::to_radians(a);
            Point::new(c.0 + 0.5 * a.cos(), c.1 + 0.5 * a.sin())
        }
        "infinity" => {
            let t = TAU * s;
            let d = 1.0 + t.sin().powi(2);
            Point::new(t.cos() / d, t.sin() * t.cos() / d)
        }
        "line" => {
            let x = -1.0 + 2.0 * s;
            Point::new(x, 0.1 * (1.0 - x * x))
        }
        _ => return None,
    };
    Some(p)
}

/// Scripted demonstration of `name` with `frames` frames at 30 fps, including
/// a fixed, seeded hand tremor.
pub fn demonstration(name: &str, frames: usize) -> Option<GestureTrajectory> {
    if frames < 2 || !(LARGE_VOCABULARY.contains(&name)) {
        return None;
    }
    // Seeded per gesture name so every demonstration is reproducible.
    let seed = name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tremor = Normal::new(0.0, TREMOR * 2.0 * CANVAS_RADIUS).expect("finite tremor");
    let out = (0..frames)
        .map(|i| {
            let n = Point::new(tremor.sample(&mut rng), tremor.sample(&mut rng));
            let t = i as f64 / FPS;
            let s = i as f64 / (frames - 1) as f64;
            let (right, left) = if name == "sweep" {
                // Both arms swing up and back down, mirrored about the body axis.
                let a = PI * (0.65 + 0.7 * (PI * s).sin());
                let r = RIGHT_SHOULDER + Point::new(a.cos(), -a.sin()) * 130.0;
                let l = Point::new(2.0 * 320.0 - r.x, r.y);
                (r + n, l - n)
            } else {
                (CANVAS + unit_shape(name, s)? * CANVAS_RADIUS + n, RESTING_LEFT_WRIST)
            };
            Some(skeleton(t, right, left))
        })
        .collect::<Option<Vec<_>>>()?;
    GestureTrajectory::new(out).ok()
}

fn skeleton(t: f64, right_wrist: Point, left_wrist: Point) -> KeypointFrame {
    let sway = Point::new(3.0 * (TAU * t / 3.0).sin(), 2.0 * (TAU * t / 2.0).cos());
    let elbow = |shoulder: Point, wrist: Point| shoulder + (wrist - shoulder) * 0.45;
    let mut f = KeypointFrame::new(t);
    for (id, p) in [
        ("nose", NOSE),
        ("left_shoulder", LEFT_SHOULDER),
        ("right_shoulder", RIGHT_SHOULDER),
        ("left_hip", LEFT_HIP),
        ("right_hip", RIGHT_HIP),
        ("left_elbow", elbow(LEFT_SHOULDER, left_wrist)),
        ("right_elbow", elbow(RIGHT_SHOULDER, right_wrist)),
        ("left_wrist", left_wrist),
        ("right_wrist", right_wrist),
    ] {
        f.insert(id, p + sway);
    }
    f
}

/// The scripted demonstration wrapped in start/stop triggers.
pub fn demonstration_stream(name: &str, frames: usize) -> Option<KeypointStream> {
    let traj = demonstration(name, frames)?;
    Some(KeypointStream::bracket(&traj, StreamHeader::default(), 0.2))
}

/// A resting pose, useful as a non-gesture.
pub fn resting(frames: usize) -> Option<GestureTrajectory> {
    let f = (0..frames).map(|i| skeleton(i as f64 / FPS, RESTING_RIGHT_WRIST, RESTING_LEFT_WRIST)).collect();
    GestureTrajectory::new(f).ok()
}
