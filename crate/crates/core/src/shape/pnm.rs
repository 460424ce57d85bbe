//! Netpbm output for rendered shapes.

use crate::error::{Error, Result};
use crate::shape::raster::ShapeImage;

/// Binary PBM (P4): `P4\n<w> <h>\n` then row-major bits, MSB first, each row
/// padded to a whole byte. Stroke pixels are 1.
pub fn write_pbm(img: &ShapeImage) -> Vec<u8> {
    let s = img.size();
    let row_bytes = s.div_ceil(8);
    let mut out = format!("P4\n{s} {s}\n").into_bytes();
    out.reserve(row_bytes * s);
    for row in img.pixels().chunks(s) {
        let mut bytes = vec![0u8; row_bytes];
        for (x, &on) in row.iter().enumerate() {
            if on {
                bytes[x / 8] |= 0x80 >> (x % 8);
            }
        }
        out.extend_from_slice(&bytes);
    }
    out
}

/// Plain PGM (P2) with maxval 255; stroke pixels are 255.
pub fn write_pgm(img: &ShapeImage) -> Vec<u8> {
    let s = img.size();
    let mut out = format!("P2\n{s} {s}\n255\n");
    for row in img.pixels().chunks(s) {
        for chunk in row.chunks(16) {
            let line: Vec<&str> = chunk.iter().map(|&p| if p { "255" } else { "0" }).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
    }
    out.into_bytes()
}

/// Read a square P4 image written by [`write_pbm`] (comments allowed in the header).
pub fn read_pbm(bytes: &[u8]) -> Result<ShapeImage> {
    let bad = |msg: &str| Error::Parse { line: 1, msg: msg.to_string() };
    let mut pos = 0usize;
    let mut fields = Vec::with_capacity(3);
    while fields.len() < 3 {
        while pos < bytes.len() && (bytes[pos].is_ascii_whitespace() || bytes[pos] == b'#') {
            if bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
            } else {
                pos += 1;
            }
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(bad("truncated PBM header"));
        }
        fields.push(std::str::from_utf8(&bytes[start..pos]).map_err(|_| bad("non-ASCII header"))?);
    }
    if fields[0] != "P4" {
        return Err(bad("not a binary PBM (P4)"));
    }
    let w: usize = fields[1].parse().map_err(|_| bad("bad width"))?;
    let h: usize = fields[2].parse().map_err(|_| bad("bad height"))?;
    if w != h {
        return Err(bad("shape images must be square"));
    }
    pos += 1; // single whitespace before raster
    let row_bytes = w.div_ceil(8);
    let data = bytes.get(pos..pos + row_bytes * h).ok_or_else(|| bad("truncated raster"))?;
    let mut px = Vec::with_capacity(w * h);
    for row in data.chunks(row_bytes) {
        for x in 0..w {
            px.push(row[x / 8] & (0x80 >> (x % 8)) != 0);
        }
    }
    ShapeImage::from_pixels(w, 1, px)
}
