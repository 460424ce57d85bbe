//! Secondary voters: four crude scalar summaries of a gesture's shape.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{BoundingBox, Point, Polyline2D};
use crate::shape::{approx_polygon, convex_hull, polygon_area_perimeter, Contour};

/// Relative floor applied to a vanishing bounding-box side.
const BOX_CLAMP: f64 = 1e-6;
/// Tolerance (pixels) of the polygonal approximation used for circularity.
pub const POLYGON_EPSILON_PX: f64 = 1.0;
const CIRCULARITY_MAX: f64 = 1.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecondaryMetrics {
    pub aspect_ratio: f64,
    pub solidity: f64,
    pub circularity: f64,
    pub path_complexity: f64,
}

impl SecondaryMetrics {
    pub fn as_array(&self) -> [f64; 4] {
        [self.aspect_ratio, self.solidity, self.circularity, self.path_complexity]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self { aspect_ratio: a[0], solidity: a[1], circularity: a[2], path_complexity: a[3] }
    }
}

/// Width and height of the polylines' bounding box, with a vanishing side
/// clamped to `1e-6` of the other.
fn clamped_box(polys: &[Polyline2D]) -> Result<(f64, f64)> {
    let bb = BoundingBox::of(polys.iter().flat_map(|p| p.points.iter()))
        .ok_or(Error::DegenerateShape("no points"))?;
    let (w, h) = (bb.width(), bb.height());
    if !(w.max(h) > 0.0) {
        return Err(Error::DegenerateShape("single point"));
    }
    Ok((w.max(BOX_CLAMP * h), h.max(BOX_CLAMP * w)))
}

pub fn aspect_ratio(polys: &[Polyline2D]) -> Result<f64> {
    let (w, h) = clamped_box(polys)?;
    Ok(w / h)
}

/// Total stroke length over bounding-box perimeter.
pub fn path_complexity(polys: &[Polyline2D]) -> Result<f64> {
    let (w, h) = clamped_box(polys)?;
    let length: f64 = polys.iter().map(Polyline2D::length).sum();
    Ok(length / (2.0 * (w + h)))
}

/// Area enclosed by the contour over the area of its convex hull.
pub fn convex_solidity(c: &Contour) -> Result<f64> {
    let hull = convex_hull(&c.points)?;
    let (hull_area, _) = polygon_area_perimeter(&hull.points);
    let (area, _) = polygon_area_perimeter(&c.points);
    if !(hull_area > 0.0) {
        return Err(Error::DegenerateHull);
    }
    Ok(area / hull_area)
}

/// 4πa/p² of the contour, measured on its 1-pixel polygonal approximation
/// (a raw 8-connected chain overstates a circle's perimeter by about 5%).
pub fn circularity(c: &Contour) -> Result<f64> {
    let poly = approx_polygon(c, POLYGON_EPSILON_PX);
    let (a, p) = polygon_area_perimeter(&poly.points);
    if !(a > 0.0 && p > 0.0) {
        return Err(Error::DegenerateShape("contour encloses no area"));
    }
    Ok((4.0 * PI * a / (p * p)).clamp(0.0, CIRCULARITY_MAX))
}

/// Convenience for tests and tools working on explicit polygons.
pub fn polygon_circularity(points: &[Point]) -> f64 {
    let (a, p) = polygon_area_perimeter(points);
    4.0 * PI * a / (p * p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(v: &[(f64, f64)]) -> Vec<Polyline2D> {
        vec![Polyline2D::new(v.iter().map(|&(x, y)| Point::new(x, y)).collect())]
    }

    fn circle(r: f64, n: usize) -> Vec<Polyline2D> {
        vec![Polyline2D::new(
            (0..=n)
                .map(|i| {
                    let a = std::f64::consts::TAU * i as f64 / n as f64;
                    Point::new(r * a.cos(), r * a.sin())
                })
                .collect(),
        )]
    }

    #[test]
    fn aspect_examples() {
        assert_eq!(aspect_ratio(&poly(&[(0., 0.), (2., 1.)])).unwrap(), 2.0);
        assert!((aspect_ratio(&circle(3.0, 360)).unwrap() - 1.0).abs() < 1e-6);
        assert_eq!(aspect_ratio(&poly(&[(0., 0.), (1., 0.)])).unwrap(), 1e6);
        assert!(matches!(aspect_ratio(&poly(&[(1., 1.), (1., 1.)])), Err(Error::DegenerateShape(_))));
    }

    #[test]
    fn path_complexity_examples() {
        let d = path_complexity(&poly(&[(0., 0.), (1., 1.)])).unwrap();
        assert!((d - 2f64.sqrt() / 4.0).abs() < 1e-12);
        let c = path_complexity(&circle(2.0, 2000)).unwrap();
        assert!((c - PI / 4.0).abs() < 1e-5);
        let zig: Vec<(f64, f64)> = (0..=10).map(|i| ((i % 2) as f64, i as f64 * 0.01)).collect();
        assert!(path_complexity(&poly(&zig)).unwrap() > 2.0);
    }

    #[test]
    fn zigzag_monotone() {
        let mut prev = 0.0;
        for k in 1..12 {
            let zig: Vec<(f64, f64)> = (0..=k).map(|i| ((i % 2) as f64, i as f64 / k as f64)).collect();
            let v = path_complexity(&poly(&zig)).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn polygon_circularity_closed_forms() {
        let sq = [Point::new(0., 0.), Point::new(1., 0.), Point::new(1., 1.), Point::new(0., 1.)];
        assert!((polygon_circularity(&sq) - PI / 4.0).abs() < 1e-12);
        let rect = [Point::new(0., 0.), Point::new(10., 0.), Point::new(10., 1.), Point::new(0., 1.)];
        assert!((polygon_circularity(&rect) - 4.0 * PI * 10.0 / 484.0).abs() < 1e-12);
    }
}
