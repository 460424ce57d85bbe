//! Independent reference implementations used as test oracles, plus shared
//! generators. Nothing here calls into the code under test except for image
//! and geometry containers.
#![allow(dead_code)]

use osg_core::shape::ShapeImage;
use osg_core::{Point, Polyline2D};
use proptest::prelude::*;

/// μ_pq by brute force over every pixel of the grid.
pub fn direct_central_moment(img: &ShapeImage, p: u32, q: u32) -> f64 {
    let s = img.size() as i64;
    let (mut m00, mut m10, mut m01) = (0.0, 0.0, 0.0);
    for y in 0..s {
        for x in 0..s {
            if img.get(x, y) {
                m00 += 1.0;
                m10 += x as f64;
                m01 += y as f64;
            }
        }
    }
    let (cx, cy) = (m10 / m00, m01 / m00);
    let mut mu = 0.0;
    for y in 0..s {
        for x in 0..s {
            if img.get(x, y) {
                mu += (x as f64 - cx).powi(p as i32) * (y as f64 - cy).powi(q as i32);
            }
        }
    }
    mu
}

#[derive(Clone, Copy, Debug)]
pub struct C(pub f64, pub f64);

impl C {
    pub fn mul(self, o: C) -> C {
        C(self.0 * o.0 - self.1 * o.1, self.0 * o.1 + self.1 * o.0)
    }
    pub fn conj(self) -> C {
        C(self.0, -self.1)
    }
    pub fn pow(self, k: u32) -> C {
        (0..k).fold(C(1.0, 0.0), |a, _| a.mul(self))
    }
    pub fn abs2(self) -> f64 {
        self.0 * self.0 + self.1 * self.1
    }
}

/// Hu invariants through normalized complex moments c_pq = Σ (x+iy)^p (x-iy)^q.
pub fn hu_via_complex_moments(img: &ShapeImage) -> [f64; 7] {
    let pts: Vec<(f64, f64)> = img.stroke_pixels().map(|(x, y)| (x as f64, y as f64)).collect();
    let n = pts.len() as f64;
    let cx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let cy = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let c = |p: u32, q: u32| {
        let mut acc = C(0.0, 0.0);
        for &(x, y) in &pts {
            let z = C(x - cx, y - cy);
            let t = z.pow(p).mul(z.conj().pow(q));
            acc = C(acc.0 + t.0, acc.1 + t.1);
        }
        let norm = n.powf(1.0 + (p + q) as f64 / 2.0);
        C(acc.0 / norm, acc.1 / norm)
    };
    let (c11, c20, c30, c21) = (c(1, 1), c(2, 0), c(3, 0), c(2, 1));
    let c12 = c21.conj();
    let t5 = c30.mul(c12.pow(3));
    [
        c11.0,
        c20.abs2(),
        c30.abs2(),
        c21.abs2(),
        t5.0,
        c20.mul(c12.pow(2)).0,
        t5.1,
    ]
}

/// n! exactly, as an integer.
pub fn factorial(n: u32) -> u128 {
    (1..=n as u128).product()
}

/// R_n^m(ρ) from the explicit sum with exact integer coefficients.
pub fn radial_exact(n: u32, m: u32, rho: f64) -> f64 {
    (0..=(n - m) / 2)
        .map(|s| {
            let num = factorial(n - s);
            let den = factorial(s) * factorial((n + m) / 2 - s) * factorial((n - m) / 2 - s);
            assert_eq!(num % den, 0, "radial coefficients are integers");
            let coeff = (num / den) as f64;
            let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
            sign * coeff * rho.powi((n - 2 * s) as i32)
        })
        .sum()
}

/// R_n^m(ρ) via the three-term Kintner recurrence in n.
pub fn radial_kintner(n: u32, m: u32, rho: f64) -> f64 {
    if n == m {
        return rho.powi(m as i32);
    }
    if n == m + 2 {
        return (m as f64 + 2.0) * rho.powi(m as i32 + 2) - (m as f64 + 1.0) * rho.powi(m as i32);
    }
    let (nf, mf) = (n as f64, m as f64);
    let k1 = (nf + mf) * (nf - mf) * (nf - 2.0) / 2.0;
    let k2 = 2.0 * nf * (nf - 1.0) * (nf - 2.0);
    let k3 = -mf * mf * (nf - 1.0) - nf * (nf - 1.0) * (nf - 2.0);
    let k4 = -nf * (nf + mf - 2.0) * (nf - mf - 2.0) / 2.0;
    ((k2 * rho * rho + k3) * radial_kintner(n - 2, m, rho) + k4 * radial_kintner(n - 4, m, rho)) / k1
}

/// |Z_nm| by direct summation with polar angles from atan2, using the same
/// disk convention as the implementation (centroid, farthest pixel + 0.5).
pub fn zernike_direct(img: &ShapeImage, n_max: u32) -> Vec<f64> {
    let pts: Vec<(f64, f64)> = img.stroke_pixels().map(|(x, y)| (x as f64, y as f64)).collect();
    let n = pts.len() as f64;
    let cx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let cy = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let r = pts.iter().map(|&(x, y)| (x - cx).hypot(y - cy)).fold(0.0, f64::max) + 0.5;
    let mut out = Vec::new();
    for nn in 0..=n_max {
        for m in (nn % 2..=nn).step_by(2) {
            let (mut re, mut im) = (0.0, 0.0);
            for &(x, y) in &pts {
                let (dx, dy) = ((x - cx) / r, (y - cy) / r);
                let rho = dx.hypot(dy);
                let theta = dy.atan2(dx);
                let rad = radial_exact(nn, m, rho);
                re += rad * (m as f64 * theta).cos();
                im -= rad * (m as f64 * theta).sin();
            }
            out.push((nn as f64 + 1.0) / std::f64::consts::PI / (r * r) * re.hypot(im));
        }
    }
    out
}

/// O(N²) forward DFT of x + jy.
pub fn naive_dft(points: &[Point]) -> Vec<(f64, f64)> {
    let n = points.len();
    (0..n)
        .map(|u| {
            let (mut re, mut im) = (0.0, 0.0);
            for (k, p) in points.iter().enumerate() {
                let a = -std::f64::consts::TAU * (u * k % n) as f64 / n as f64;
                let (s, c) = a.sin_cos();
                re += p.x * c - p.y * s;
                im += p.x * s + p.y * c;
            }
            (re, im)
        })
        .collect()
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

/// A random hand-drawn-looking gesture: one or two strokes of 4 to 12
/// vertices in the unit box.
pub fn gesture_strategy() -> impl Strategy<Value = Vec<Polyline2D>> {
    let stroke = prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 4..12)
        .prop_map(|v| Polyline2D::new(v.into_iter().map(|(x, y)| Point::new(x, y)).collect()));
    prop::collection::vec(stroke, 1..3)
}

/// Small random binary image with at least a few set pixels.
pub fn image_strategy(size: usize) -> impl Strategy<Value = ShapeImage> {
    prop::collection::vec(prop::bool::weighted(0.3), size * size)
        .prop_filter("needs pixels", |v| v.iter().filter(|&&b| b).count() >= 3)
        .prop_map(move |v| ShapeImage::from_pixels(size, 1, v).unwrap())
}
