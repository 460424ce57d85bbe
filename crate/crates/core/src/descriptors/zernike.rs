use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::shape::ShapeImage;

/// Default maximum radial order; gives 25 magnitudes.
pub const DEFAULT_ZERNIKE_ORDER: u32 = 8;

// 20! is the largest factorial that fits in u64; orders stay far below.
const MAX_ORDER: u32 = 20;

fn factorials() -> [f64; (MAX_ORDER + 1) as usize] {
    let mut f = [1.0; (MAX_ORDER + 1) as usize];
    let mut acc: u64 = 1;
    for (i, v) in f.iter_mut().enumerate().skip(1) {
        acc *= i as u64;
        *v = acc as f64;
    }
    f
}

fn check_order(n: i32, m: i32) -> Result<()> {
    let am = m.abs();
    if n < 0 || n as u32 > MAX_ORDER || am > n || (n - am) % 2 != 0 {
        return Err(Error::InvalidOrder { n, m });
    }
    Ok(())
}

/// Coefficients of R_n^m as `(coefficient, power of rho)`.
fn radial_terms(n: i32, m: i32, fact: &[f64]) -> Vec<(f64, i32)> {
    let am = m.abs();
    (0..=(n - am) / 2)
        .map(|s| {
            let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
            let c = sign * fact[(n - s) as usize]
                / (fact[s as usize]
                    * fact[((n + am) / 2 - s) as usize]
                    * fact[((n - am) / 2 - s) as usize]);
            (c, n - 2 * s)
        })
        .collect()
}

/// Zernike radial polynomial R_n^m(ρ).
pub fn zernike_radial(n: i32, m: i32, rho: f64) -> Result<f64> {
    check_order(n, m)?;
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::InvalidArgument(format!("rho {rho} outside [0, 1]")));
    }
    Ok(radial_terms(n, m, &factorials())
        .into_iter()
        .map(|(c, k)| c * rho.powi(k))
        .sum())
}

/// Valid `(n, m)` pairs with m ≥ 0, ordered by n then m.
pub fn zernike_indices(n_max: u32) -> Vec<(i32, i32)> {
    let n_max = n_max as i32;
    (0..=n_max)
        .flat_map(|n| (n % 2..=n).step_by(2).map(move |m| (n, m)))
        .collect()
}

/// |Z_n^m| for every valid (n, m ≥ 0) up to `n_max`, in [`zernike_indices`] order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ZernikeVector(pub Vec<f64>);

/// Discretized Zernike moments of a binary image. The unit disk is centered
/// on the stroke centroid with a radius reaching half a pixel past the
/// farthest stroke pixel, so every stroke pixel has ρ ≤ 1 and the mapping
/// commutes with rotations of the raster.
pub fn zernike_moments(img: &ShapeImage, n_max: u32) -> Result<ZernikeVector> {
    if n_max > MAX_ORDER {
        return Err(Error::InvalidOrder { n: n_max as i32, m: 0 });
    }
    let pts: Vec<(f64, f64)> = img.stroke_pixels().map(|(x, y)| (x as f64, y as f64)).collect();
    if pts.is_empty() {
        return Err(Error::EmptyImage);
    }
    let n_pts = pts.len() as f64;
    let cx = pts.iter().map(|p| p.0).sum::<f64>() / n_pts;
    let cy = pts.iter().map(|p| p.1).sum::<f64>() / n_pts;
    let radius = pts
        .iter()
        .map(|&(x, y)| (x - cx).hypot(y - cy))
        .fold(0.0, f64::max)
        + 0.5;
    let area = 1.0 / (radius * radius);

    let fact = factorials();
    let idx = zernike_indices(n_max);
    let terms: Vec<Vec<(f64, i32)>> = idx.iter().map(|&(n, m)| radial_terms(n, m, &fact)).collect();
    let nm = n_max as usize;

    let mut acc = vec![(0.0f64, 0.0f64); idx.len()];
    let mut rho_pow = vec![1.0f64; nm + 1];
    let mut phase = vec![(1.0f64, 0.0f64); nm + 1];
    for &(x, y) in &pts {
        let dx = (x - cx) / radius;
        let dy = (y - cy) / radius;
        let rho = dx.hypot(dy);
        for k in 1..=nm {
            rho_pow[k] = rho_pow[k - 1] * rho;
        }
        // e^{-j m θ} as successive powers of (dx - j dy) / ρ
        let w = if rho > 0.0 { (dx / rho, -dy / rho) } else { (0.0, 0.0) };
        for k in 1..=nm {
            let (a, b) = phase[k - 1];
            phase[k] = (a * w.0 - b * w.1, a * w.1 + b * w.0);
        }
        for (j, &(_, m)) in idx.iter().enumerate() {
            let r: f64 = terms[j].iter().map(|&(c, k)| c * rho_pow[k as usize]).sum();
            let (pr, pi) = phase[m as usize];
            acc[j].0 += r * pr;
            acc[j].1 += r * pi;
        }
    }
    Ok(ZernikeVector(
        idx.iter()
            .zip(acc)
            .map(|(&(n, _), (re, im))| (n as f64 + 1.0) / PI * area * re.hypot(im))
            .collect(),
    ))
}
