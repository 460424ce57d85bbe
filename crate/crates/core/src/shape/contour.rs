use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::shape::raster::ShapeImage;
use crate::trajectory::rdp_indices;

/// Closed boundary; `points[0]` conceptually follows `points[last]`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Contour {
    pub points: Vec<Point>,
}

impl Contour {
    pub fn new(points: Vec<Point>) -> Self {
        Self { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Perimeter including the closing edge.
    pub fn perimeter(&self) -> f64 {
        let n = self.points.len();
        (0..n).map(|i| self.points[i].distance(self.points[(i + 1) % n])).sum()
    }
}

// Moore neighborhood in clockwise screen order (y down), starting west.
const RING: [(i64, i64); 8] = [
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
];

fn ring_index(d: (i64, i64)) -> usize {
    RING.iter().position(|&r| r == d).expect("not a Moore neighbor")
}

/// Mask of the largest 8-connected stroke component (first in scan order on ties).
fn largest_component(img: &ShapeImage) -> Option<Vec<bool>> {
    let s = img.size();
    let px = img.pixels();
    let mut label = vec![0u32; s * s];
    let mut best = (0u32, 0usize);
    let mut next = 0u32;
    let mut queue = VecDeque::new();
    for start in 0..s * s {
        if !px[start] || label[start] != 0 {
            continue;
        }
        next += 1;
        label[start] = next;
        queue.push_back(start);
        let mut count = 0usize;
        while let Some(i) = queue.pop_front() {
            count += 1;
            let (x, y) = ((i % s) as i64, (i / s) as i64);
            for (dx, dy) in RING {
                let (nx, ny) = (x + dx, y + dy);
                if img.get(nx, ny) {
                    let j = ny as usize * s + nx as usize;
                    if label[j] == 0 {
                        label[j] = next;
                        queue.push_back(j);
                    }
                }
            }
        }
        if count > best.1 {
            best = (next, count);
        }
    }
    (best.1 > 0).then(|| label.iter().map(|&l| l == best.0).collect())
}

/// Outer boundary of the largest 8-connected stroke component, traced with
/// Moore-neighbor tracing. Tracing starts at the component's first pixel in
/// raster order and runs clockwise on screen; it stops when the first move
/// out of the start pixel is about to repeat (Jacob's criterion).
pub fn trace_contour(img: &ShapeImage) -> Result<Contour> {
    let mask = largest_component(img).ok_or(Error::EmptyImage)?;
    let s = img.size() as i64;
    let inside = |x: i64, y: i64| x >= 0 && y >= 0 && x < s && y < s && mask[(y * s + x) as usize];

    let first = mask.iter().position(|&m| m).unwrap() as i64;
    let start = (first % s, first / s);
    let mut path = vec![start];

    let mut cur = start;
    let mut back = 0usize; // west of the first pixel is background by scan order
    let limit = 4 * mask.iter().filter(|&&m| m).count() + 16;
    loop {
        let mut step = None;
        for i in 1..=8 {
            let d = (back + i) % 8;
            let q = (cur.0 + RING[d].0, cur.1 + RING[d].1);
            if inside(q.0, q.1) {
                step = Some((q, d));
                break;
            }
        }
        let Some((q, d)) = step else {
            break; // isolated pixel
        };
        if cur == start && path.len() > 1 && q == path[1] {
            path.pop();
            break;
        }
        let prev = RING[(d + 7) % 8];
        let prev_abs = (cur.0 + prev.0, cur.1 + prev.1);
        back = ring_index((prev_abs.0 - q.0, prev_abs.1 - q.1));
        path.push(q);
        cur = q;
        if path.len() > limit {
            log::warn!("contour trace hit its step limit; truncating");
            break;
        }
    }
    Ok(Contour::new(
        path.into_iter().map(|(x, y)| Point::new(x as f64, y as f64)).collect(),
    ))
}

/// Uniform arc-length resampling of the closed contour to exactly `n` points,
/// starting from the contour point nearest the image origin.
pub fn resample_contour(c: &Contour, n: usize) -> Result<Contour> {
    if c.is_empty() {
        return Err(Error::EmptyImage);
    }
    if n < 8 {
        return Err(Error::InvalidArgument(format!("resample count {n} < 8")));
    }
    let m = c.len();
    let start = (0..m)
        .min_by(|&a, &b| {
            let (pa, pb) = (c.points[a], c.points[b]);
            (pa.x * pa.x + pa.y * pa.y).total_cmp(&(pb.x * pb.x + pb.y * pb.y))
        })
        .unwrap();
    let pts: Vec<Point> = (0..=m).map(|i| c.points[(start + i) % m]).collect();
    let perimeter: f64 = pts.windows(2).map(|w| w[0].distance(w[1])).sum();
    if perimeter == 0.0 {
        return Ok(Contour::new(vec![pts[0]; n]));
    }

    let step = perimeter / n as f64;
    let mut out = Vec::with_capacity(n);
    let mut seg = 0usize;
    let mut seg_start = 0.0;
    let mut seg_len = pts[0].distance(pts[1]);
    for j in 0..n {
        let target = j as f64 * step;
        while seg + 1 < m && seg_start + seg_len < target {
            seg_start += seg_len;
            seg += 1;
            seg_len = pts[seg].distance(pts[seg + 1]);
        }
        let t = if seg_len > 0.0 { ((target - seg_start) / seg_len).clamp(0.0, 1.0) } else { 0.0 };
        out.push(pts[seg] + (pts[seg + 1] - pts[seg]) * t);
    }
    Ok(Contour::new(out))
}

/// Polygonal approximation of a closed contour: RDP over the boundary
/// (closed by repeating the start point) at `epsilon` pixels. Contours that
/// would collapse below 3 vertices are returned unchanged.
pub fn approx_polygon(c: &Contour, epsilon: f64) -> Contour {
    if c.len() < 4 {
        return c.clone();
    }
    let mut closed = c.points.clone();
    closed.push(c.points[0]);
    let mut keep = rdp_indices(&closed, epsilon);
    keep.pop();
    if keep.len() < 3 {
        return c.clone();
    }
    Contour::new(keep.into_iter().map(|i| c.points[i]).collect())
}
