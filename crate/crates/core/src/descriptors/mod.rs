//! Primary-voter shape encodings (Hu, Zernike and Fourier descriptors) and
//! the full per-shape descriptor bundle used for comparison.

mod fourier;
mod hu;
mod zernike;

use serde::{Deserialize, Serialize};

pub use fourier::{
    contour_spectrum, fourier_descriptors, FourierVector, DEFAULT_CONTOUR_SAMPLES,
    DEFAULT_FOURIER_K,
};
pub use hu::{central_moments, hu_invariants, hu_moments, signed_log, CentralMoments, HuVector};
pub use zernike::{
    zernike_indices, zernike_moments, zernike_radial, ZernikeVector, DEFAULT_ZERNIKE_ORDER,
};

use crate::error::{Error, Result};
use crate::geom::Polyline2D;
use crate::metrics::{self, SecondaryMetrics};
use crate::shape::{self, RasterConfig};

/// Fixed parameters of the descriptor stage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DescriptorConfig {
    pub zernike_order: u32,
    pub fourier_k: usize,
    pub contour_samples: usize,
}

impl Default for DescriptorConfig {
    fn default() -> Self {
        Self {
            zernike_order: DEFAULT_ZERNIKE_ORDER,
            fourier_k: DEFAULT_FOURIER_K,
            contour_samples: DEFAULT_CONTOUR_SAMPLES,
        }
    }
}

/// Everything the seven voters compare for one shape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescriptorSet {
    pub hu: HuVector,
    pub zernike: ZernikeVector,
    pub fourier: FourierVector,
    pub metrics: SecondaryMetrics,
}

impl DescriptorSet {
    pub fn is_finite(&self) -> bool {
        self.hu.0.iter().all(|v| v.is_finite())
            && self.zernike.0.iter().all(|v| v.is_finite())
            && self.fourier.0.iter().all(|v| v.is_finite())
            && self.metrics.as_array().iter().all(|v| v.is_finite())
    }

    /// Largest absolute difference between any two corresponding entries.
    pub fn max_abs_diff(&self, other: &DescriptorSet) -> f64 {
        let pairs = self
            .hu
            .0
            .iter()
            .zip(&other.hu.0)
            .chain(self.zernike.0.iter().zip(&other.zernike.0))
            .chain(self.fourier.0.iter().zip(&other.fourier.0));
        let mut worst = pairs.map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if self.zernike.0.len() != other.zernike.0.len()
            || self.fourier.0.len() != other.fourier.0.len()
        {
            worst = f64::INFINITY;
        }
        let (ma, mb) = (self.metrics.as_array(), other.metrics.as_array());
        ma.iter().zip(mb).map(|(a, b)| (a - b).abs()).fold(worst, f64::max)
    }

    pub(crate) fn map_floats(&self, f: impl Fn(f64) -> f64) -> DescriptorSet {
        DescriptorSet {
            hu: HuVector(self.hu.0.map(&f)),
            zernike: ZernikeVector(self.zernike.0.iter().map(|&v| f(v)).collect()),
            fourier: FourierVector(self.fourier.0.iter().map(|&v| f(v)).collect()),
            metrics: SecondaryMetrics::from_array(self.metrics.as_array().map(&f)),
        }
    }
}

/// Render the polylines and compute the complete descriptor set.
pub fn describe(
    polys: &[Polyline2D],
    raster: RasterConfig,
    cfg: &DescriptorConfig,
) -> Result<DescriptorSet> {
    let img = shape::rasterize(polys, raster)?;
    let contour = shape::trace_contour(&img)?;
    let resampled = shape::resample_contour(&contour, cfg.contour_samples)?;
    Ok(DescriptorSet {
        hu: hu_moments(&img)?,
        zernike: zernike_moments(&img, cfg.zernike_order)?,
        fourier: fourier_descriptors(&resampled, cfg.fourier_k)?,
        metrics: SecondaryMetrics {
            aspect_ratio: metrics::aspect_ratio(polys)?,
            solidity: metrics::convex_solidity(&contour)?,
            circularity: metrics::circularity(&contour)?,
            path_complexity: metrics::path_complexity(polys)?,
        },
    })
}

/// Euclidean distance between equal-length descriptor vectors.
pub fn descriptor_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { left: a.len(), right: b.len() });
    }
    Ok(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_examples() {
        assert_eq!(descriptor_distance(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        assert_eq!(descriptor_distance(&[0.0, 0.0], &[3.0, 4.0]).unwrap(), 5.0);
        assert_eq!(
            descriptor_distance(&[0.0], &[3.0, 4.0]),
            Err(Error::LengthMismatch { left: 1, right: 2 })
        );
    }
}
