//! The "image representation" of a gesture and the geometric primitives
//! extracted from it: binary raster, outer contour, convex hull and polygon
//! measures.

mod contour;
mod polygon;
mod pnm;
mod raster;

pub use contour::{approx_polygon, resample_contour, trace_contour, Contour};
pub use pnm::{read_pbm, write_pbm, write_pgm};
pub use polygon::{convex_hull, point_in_convex, polygon_area_perimeter, signed_area};
pub use raster::{rasterize, RasterConfig, ShapeImage};
