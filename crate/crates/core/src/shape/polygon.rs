use crate::error::{Error, Result};
use crate::geom::{Point, Polyline2D};

/// Twice-halved shoelace sum; positive for clockwise-on-screen (y down)
/// orderings, i.e. counterclockwise in the usual y-up sense.
pub fn signed_area(points: &[Point]) -> f64 {
    let n = points.len();
    if n < 3 {
        return 0.0;
    }
    0.5 * (0..n).map(|i| points[i].cross(points[(i + 1) % n])).sum::<f64>()
}

/// Absolute shoelace area and perimeter (closing edge included).
pub fn polygon_area_perimeter(points: &[Point]) -> (f64, f64) {
    let n = points.len();
    if n < 2 {
        return (0.0, 0.0);
    }
    let perimeter = (0..n).map(|i| points[i].distance(points[(i + 1) % n])).sum();
    (signed_area(points).abs(), perimeter)
}

/// Andrew's monotone chain. Returns strictly convex vertices in positive
/// (shoelace) orientation, without repeating the first vertex.
pub fn convex_hull(points: &[Point]) -> Result<Polyline2D> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return Err(Error::DegenerateHull);
    }

    let turn = |o: Point, a: Point, b: Point| (a - o).cross(b - o);
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    if hull.len() < 3 {
        return Err(Error::DegenerateHull);
    }
    Ok(Polyline2D::new(hull))
}

/// Inside-or-on test for a positively oriented convex polygon.
pub fn point_in_convex(hull: &[Point], p: Point, tol: f64) -> bool {
    let n = hull.len();
    (0..n).all(|i| {
        let (a, b) = (hull[i], hull[(i + 1) % n]);
        (b - a).cross(p - a) >= -tol * (b - a).norm().max(1.0)
    })
}
