use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{BoundingBox, Point, Polyline2D};

/// Fraction of the image side left empty on each border.
const MARGIN: f64 = 0.1;

/// Raster side and brush width, in pixels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RasterConfig {
    pub size: usize,
    pub stroke: usize,
}

impl Default for RasterConfig {
    fn default() -> Self {
        Self { size: 256, stroke: 3 }
    }
}

impl RasterConfig {
    pub fn validate(&self) -> Result<()> {
        if self.size < 32 {
            return Err(Error::InvalidArgument(format!("raster size {} < 32", self.size)));
        }
        if self.stroke < 1 {
            return Err(Error::InvalidArgument("stroke width must be >= 1".into()));
        }
        Ok(())
    }
}

/// Square binary image; `true` marks stroke pixels. Row-major, y down.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapeImage {
    size: usize,
    stroke_width: usize,
    pixels: Vec<bool>,
}

impl ShapeImage {
    pub fn blank(size: usize, stroke_width: usize) -> Self {
        Self { size, stroke_width, pixels: vec![false; size * size] }
    }

    /// Build from row-major pixels; `pixels.len()` must equal `size * size`.
    pub fn from_pixels(size: usize, stroke_width: usize, pixels: Vec<bool>) -> Result<Self> {
        if pixels.len() != size * size {
            return Err(Error::InvalidArgument(format!(
                "expected {} pixels, got {}",
                size * size,
                pixels.len()
            )));
        }
        Ok(Self { size, stroke_width, pixels })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn stroke_width(&self) -> usize {
        self.stroke_width
    }

    pub fn pixels(&self) -> &[bool] {
        &self.pixels
    }

    #[inline]
    pub fn get(&self, x: i64, y: i64) -> bool {
        let s = self.size as i64;
        x >= 0 && y >= 0 && x < s && y < s && self.pixels[(y * s + x) as usize]
    }

    #[inline]
    pub fn set(&mut self, x: i64, y: i64, v: bool) {
        let s = self.size as i64;
        if x >= 0 && y >= 0 && x < s && y < s {
            self.pixels[(y * s + x) as usize] = v;
        }
    }

    pub fn count(&self) -> usize {
        self.pixels.iter().filter(|&&p| p).count()
    }

    /// Stroke pixel coordinates in row-major order.
    pub fn stroke_pixels(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let s = self.size;
        self.pixels
            .iter()
            .enumerate()
            .filter(|(_, &p)| p)
            .map(move |(i, _)| (i % s, i / s))
    }

    /// Lossless quarter turn: pixel (x, y) moves to (size-1-y, x).
    pub fn rotated_90(&self) -> Self {
        let s = self.size;
        let mut out = Self::blank(s, self.stroke_width);
        for (x, y) in self.stroke_pixels() {
            out.pixels[x * s + (s - 1 - y)] = true;
        }
        out
    }

    fn stamp(&mut self, x: i64, y: i64) {
        let w = self.stroke_width as i64;
        let lo = -((w - 1) / 2);
        let hi = w / 2;
        for dy in lo..=hi {
            for dx in lo..=hi {
                self.set(x + dx, y + dy, true);
            }
        }
    }

    fn draw_segment(&mut self, (mut x0, mut y0): (i64, i64), (x1, y1): (i64, i64)) {
        let dx = (x1 - x0).abs();
        let dy = -(y1 - y0).abs();
        let sx = if x0 < x1 { 1 } else { -1 };
        let sy = if y0 < y1 { 1 } else { -1 };
        let mut err = dx + dy;
        loop {
            self.stamp(x0, y0);
            if x0 == x1 && y0 == y1 {
                break;
            }
            let e2 = 2 * err;
            if e2 >= dy {
                err += dy;
                x0 += sx;
            }
            if e2 <= dx {
                err += dx;
                y0 += sy;
            }
        }
    }
}

/// Draw normalized polylines into a `size`×`size` raster. The bounding square
/// of all points is centered and scaled to the central 80% of the image
/// (aspect preserved), then each segment is drawn with Bresenham's algorithm
/// and a square brush of `stroke` pixels.
pub fn rasterize(polys: &[Polyline2D], cfg: RasterConfig) -> Result<ShapeImage> {
    cfg.validate()?;
    let all: Vec<Point> = polys.iter().flat_map(|p| p.points.iter().copied()).collect();
    let bb = BoundingBox::of(&all).ok_or(Error::DegenerateShape("no points to rasterize"))?;
    let side = bb.width().max(bb.height());
    if !(side > 0.0) || !side.is_finite() {
        return Err(Error::DegenerateShape("fewer than 2 distinct points"));
    }

    let s = cfg.size as f64;
    let scale = (1.0 - 2.0 * MARGIN) * s / side;
    let c = bb.center();
    let max_px = cfg.size as i64 - 1;
    let to_px = |p: Point| -> (i64, i64) {
        let u = 0.5 * s + (p.x - c.x) * scale;
        let v = 0.5 * s + (p.y - c.y) * scale;
        (
            (u.floor() as i64).clamp(0, max_px),
            (v.floor() as i64).clamp(0, max_px),
        )
    };

    let mut img = ShapeImage::blank(cfg.size, cfg.stroke);
    for poly in polys {
        match poly.points.as_slice() {
            [] => {}
            [p] => {
                let (x, y) = to_px(*p);
                img.stamp(x, y);
            }
            pts => {
                for w in pts.windows(2) {
                    img.draw_segment(to_px(w[0]), to_px(w[1]));
                }
            }
        }
    }
    Ok(img)
}
