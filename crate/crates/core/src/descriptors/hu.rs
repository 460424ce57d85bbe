use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::shape::ShapeImage;

/// Central moments μ_pq for p + q ≤ 3, indexed `mu[p][q]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CentralMoments {
    pub mu: [[f64; 4]; 4],
    pub centroid: (f64, f64),
}

impl CentralMoments {
    pub fn of(img: &ShapeImage) -> Result<Self> {
        let (mut n, mut sx, mut sy) = (0.0, 0.0, 0.0);
        for (x, y) in img.stroke_pixels() {
            n += 1.0;
            sx += x as f64;
            sy += y as f64;
        }
        if n == 0.0 {
            return Err(Error::EmptyImage);
        }
        let (cx, cy) = (sx / n, sy / n);
        let mut mu = [[0.0; 4]; 4];
        for (x, y) in img.stroke_pixels() {
            let dx = x as f64 - cx;
            let dy = y as f64 - cy;
            let xp = [1.0, dx, dx * dx, dx * dx * dx];
            let yp = [1.0, dy, dy * dy, dy * dy * dy];
            for p in 0..4 {
                for q in 0..4 - p {
                    mu[p][q] += xp[p] * yp[q];
                }
            }
        }
        // first-order central moments vanish by construction
        mu[1][0] = 0.0;
        mu[0][1] = 0.0;
        Ok(Self { mu, centroid: (cx, cy) })
    }

    /// Scale-normalized moment η_pq = μ_pq / μ00^(1 + (p+q)/2).
    pub fn eta(&self, p: usize, q: usize) -> f64 {
        self.mu[p][q] / self.mu[0][0].powf(1.0 + (p + q) as f64 / 2.0)
    }
}

/// μ_pq of a binary image for 0 ≤ p + q ≤ 3.
pub fn central_moments(img: &ShapeImage, p: usize, q: usize) -> Result<f64> {
    if p + q > 3 {
        return Err(Error::InvalidArgument(format!("moment order {p}+{q} > 3")));
    }
    Ok(CentralMoments::of(img)?.mu[p][q])
}

/// The seven Hu invariants, before any log transform.
pub fn hu_invariants(img: &ShapeImage) -> Result<[f64; 7]> {
    let m = CentralMoments::of(img)?;
    let e = |p, q| m.eta(p, q);
    let (n20, n02, n11) = (e(2, 0), e(0, 2), e(1, 1));
    let (n30, n03, n21, n12) = (e(3, 0), e(0, 3), e(2, 1), e(1, 2));

    let a = n30 + n12;
    let b = n21 + n03;
    let c = n30 - 3.0 * n12;
    let d = 3.0 * n21 - n03;

    Ok([
        n20 + n02,
        (n20 - n02).powi(2) + 4.0 * n11 * n11,
        c * c + d * d,
        a * a + b * b,
        c * a * (a * a - 3.0 * b * b) + d * b * (3.0 * a * a - b * b),
        (n20 - n02) * (a * a - b * b) + 4.0 * n11 * a * b,
        d * a * (a * a - 3.0 * b * b) - c * b * (3.0 * a * a - b * b),
    ])
}

/// Hu invariants in signed-log space: `sign(h)·log10(|h| + 1e-30)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HuVector(pub [f64; 7]);

pub fn signed_log(h: f64) -> f64 {
    if h == 0.0 {
        return 0.0;
    }
    h.signum() * (h.abs() + 1e-30).log10()
}

pub fn hu_moments(img: &ShapeImage) -> Result<HuVector> {
    Ok(HuVector(hu_invariants(img)?.map(signed_log)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn img(size: usize, on: &[(usize, usize)]) -> ShapeImage {
        let mut i = ShapeImage::blank(size, 1);
        for &(x, y) in on {
            i.set(x as i64, y as i64, true);
        }
        i
    }

    #[test]
    fn single_pixel() {
        let i = img(3, &[(1, 1)]);
        assert_eq!(central_moments(&i, 0, 0).unwrap(), 1.0);
        assert_eq!(central_moments(&i, 1, 1).unwrap(), 0.0);
        assert_eq!(central_moments(&i, 2, 0).unwrap(), 0.0);
    }

    #[test]
    fn diagonal_pair() {
        let i = img(3, &[(0, 0), (2, 2)]);
        let m = CentralMoments::of(&i).unwrap();
        assert_eq!(m.centroid, (1.0, 1.0));
        assert_eq!(m.mu[2][0], 2.0);
        assert_eq!(m.mu[0][2], 2.0);
        assert_eq!(m.mu[1][1], 2.0);
    }

    #[test]
    fn first_order_vanish_and_empty() {
        let i = img(8, &[(0, 1), (5, 2), (7, 7)]);
        assert_eq!(central_moments(&i, 1, 0).unwrap(), 0.0);
        assert_eq!(central_moments(&i, 0, 1).unwrap(), 0.0);
        assert_eq!(central_moments(&ShapeImage::blank(4, 1), 0, 0), Err(Error::EmptyImage));
        assert!(central_moments(&i, 2, 2).is_err());
    }

    #[test]
    fn identical_images_identical_hu() {
        let i = img(16, &[(1, 2), (3, 9), (4, 4), (10, 12), (11, 3)]);
        assert_eq!(hu_moments(&i).unwrap(), hu_moments(&i.clone()).unwrap());
    }

    #[test]
    fn signed_log_examples() {
        assert!((signed_log(1e-3) + 3.0).abs() < 1e-12);
        assert!((signed_log(-1e-3) - 3.0).abs() < 1e-12);
        assert_eq!(signed_log(0.0), 0.0);
    }
}
