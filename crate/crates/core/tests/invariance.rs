//! Descriptor invariances over random gesture rasters.

mod common;

use common::*;
use osg_core::descriptors::{fourier_descriptors, hu_moments, zernike_moments};
use osg_core::shape::{resample_contour, trace_contour, Contour};
use osg_core::{describe, rasterize, DescriptorConfig, Point, Polyline2D, RasterConfig, ShapeImage};
use proptest::prelude::*;

fn raster(polys: &[Polyline2D], size: usize, stroke: usize) -> ShapeImage {
    rasterize(polys, RasterConfig { size, stroke }).unwrap()
}

fn upsample(img: &ShapeImage, k: usize) -> ShapeImage {
    let mut out = ShapeImage::blank(k * img.size(), k * img.stroke_width());
    for (x, y) in img.stroke_pixels() {
        for dy in 0..k {
            for dx in 0..k {
                out.set((k * x + dx) as i64, (k * y + dy) as i64, true);
            }
        }
    }
    out
}

fn transform(c: &Contour, shift: usize, angle: f64, scale: f64, offset: Point) -> Contour {
    let n = c.len();
    let (s, co) = angle.sin_cos();
    Contour::new(
        (0..n)
            .map(|i| {
                let p = c.points[(i + shift) % n];
                Point::new(co * p.x - s * p.y, s * p.x + co * p.y) * scale + offset
            })
            .collect(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hu_stable_under_quarter_turns(polys in gesture_strategy()) {
        let img = raster(&polys, 256, 3);
        let base = hu_moments(&img).unwrap().0;
        let mut r = img.clone();
        for _ in 0..3 {
            r = r.rotated_90();
            let h = hu_moments(&r).unwrap().0;
            for i in 0..7 {
                prop_assert!((h[i] - base[i]).abs() <= 1e-1, "h{}: {} vs {}", i + 1, h[i], base[i]);
            }
        }
    }

    #[test]
    fn hu_stable_under_scaling(
        polys in gesture_strategy(),
        s in 0.5f64..2.0,
        px in -3.0f64..3.0,
        py in -3.0f64..3.0,
    ) {
        let pivot = Point::new(px, py);
        let scaled: Vec<Polyline2D> = polys
            .iter()
            .map(|p| Polyline2D::new(p.points.iter().map(|q| pivot + (*q - pivot) * s).collect()))
            .collect();
        let base = hu_moments(&raster(&polys, 256, 3)).unwrap().0;
        let h = hu_moments(&raster(&scaled, 256, 3)).unwrap().0;
        for i in 0..7 {
            prop_assert!((h[i] - base[i]).abs() <= 1e-1, "scale {s}: h{}: {} vs {}", i + 1, h[i], base[i]);
        }
    }

    #[test]
    fn hu_stable_under_pixel_doubling(polys in gesture_strategy()) {
        let img = raster(&polys, 128, 2);
        let big = upsample(&img, 2);
        let base = hu_moments(&img).unwrap().0;
        let h = hu_moments(&big).unwrap().0;
        for i in 0..7 {
            prop_assert!((h[i] - base[i]).abs() <= 1e-1, "h{}: {} vs {}", i + 1, h[i], base[i]);
        }
    }

    #[test]
    fn first_hu_consistent_across_resolutions(polys in gesture_strategy()) {
        let a = hu_moments(&raster(&polys, 256, 3)).unwrap().0;
        let b = hu_moments(&raster(&polys, 512, 6)).unwrap().0;
        prop_assert!((a[0] - b[0]).abs() <= 1e-1, "{} vs {}", a[0], b[0]);
    }

    #[test]
    fn zernike_stable_under_quarter_turns(polys in gesture_strategy()) {
        let img = raster(&polys, 256, 3);
        let base = zernike_moments(&img, 8).unwrap().0;
        let rot = zernike_moments(&img.rotated_90(), 8).unwrap().0;
        let norm = base.iter().cloned().fold(0.0, f64::max);
        for (a, b) in base.iter().zip(&rot) {
            prop_assert!((a - b).abs() <= 5e-2 * a.abs().max(1e-3 * norm), "{a} vs {b}");
        }
    }

    #[test]
    fn fourier_invariant_to_shift_rotation_scale(
        polys in gesture_strategy(),
        shift in 0usize..128,
        angle in 0.0f64..std::f64::consts::TAU,
        scale in 0.1f64..10.0,
        ox in -100.0f64..100.0,
        oy in -100.0f64..100.0,
    ) {
        let c = resample_contour(&trace_contour(&raster(&polys, 256, 3)).unwrap(), 128).unwrap();
        let base = fourier_descriptors(&c, 16).unwrap().0;
        let moved = fourier_descriptors(&transform(&c, shift, angle, scale, Point::new(ox, oy)), 16).unwrap().0;
        for (a, b) in base.iter().zip(&moved) {
            prop_assert!((a - b).abs() <= 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn descriptors_ignore_input_translation(polys in gesture_strategy(), dx in -5i32..5, dy in -5i32..5) {
        let moved: Vec<Polyline2D> = polys
            .iter()
            .map(|p| Polyline2D::new(p.points.iter().map(|q| *q + Point::new(dx as f64, dy as f64)).collect()))
            .collect();
        let a = describe(&polys, RasterConfig::default(), &DescriptorConfig::default());
        let b = describe(&moved, RasterConfig::default(), &DescriptorConfig::default());
        match (a, b) {
            (Ok(a), Ok(b)) => prop_assert!(a.max_abs_diff(&b) <= 1e-9),
            (a, b) => prop_assert_eq!(a.is_err(), b.is_err()),
        }
    }
}
