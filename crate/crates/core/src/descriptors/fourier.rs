use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::shape::Contour;

/// Resampled contour length fed to the DFT.
pub const DEFAULT_CONTOUR_SAMPLES: usize = 128;
/// Number of low-frequency magnitudes kept.
pub const DEFAULT_FOURIER_K: usize = 16;

/// `(|Z_1|, |Z_2|, …, |Z_k|) / |Z_1|`; the first entry is always 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FourierVector(pub Vec<f64>);

/// Forward DFT `Z_u = Σ_k z_k e^{-j2πuk/N}` of the contour read as `x + jy`.
pub fn contour_spectrum(c: &Contour) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = c.points.iter().map(|p| Complex64::new(p.x, p.y)).collect();
    if !buf.is_empty() {
        FftPlanner::new().plan_fft_forward(buf.len()).process(&mut buf);
    }
    buf
}

/// Low-frequency Fourier magnitude descriptor of a (resampled) closed contour.
/// Dropping Z_0 removes translation, dividing by |Z_1| removes scale, and
/// keeping magnitudes only removes rotation and start point.
pub fn fourier_descriptors(c: &Contour, k: usize) -> Result<FourierVector> {
    let n = c.len();
    if k < 1 || 2 * k > n {
        return Err(Error::InvalidArgument(format!("k={k} invalid for {n} contour samples")));
    }
    let spec = contour_spectrum(c);
    let z1 = spec[1].norm();
    if !(z1 >= 1e-12) {
        return Err(Error::DegenerateContour);
    }
    Ok(FourierVector(spec[1..=k].iter().map(|z| z.norm() / z1).collect()))
}
