//! Resampling primitives shared by the geometric transforms.

use super::{BinaryMask, RasterImage};

/// Clamp to `[0, 255]` and round half up.
#[inline]
pub(crate) fn round_half_up(v: f64) -> u8 {
    (v.clamp(0.0, 255.0) + 0.5).floor() as u8
}

#[inline]
fn clamp_coord(v: f64, len: usize) -> f64 {
    v.clamp(0.0, (len - 1) as f64)
}

/// Bilinear sample with out-of-range coordinates clamped to the border.
/// Integer coordinates return the stored pixel exactly.
pub(crate) fn bilinear(img: &RasterImage, sx: f64, sy: f64) -> [u8; 3] {
    let (w, h) = (img.width(), img.height());
    let sx = clamp_coord(sx, w);
    let sy = clamp_coord(sy, h);
    let x0 = sx.floor() as usize;
    let y0 = sy.floor() as usize;
    let fx = sx - x0 as f64;
    let fy = sy - y0 as f64;
    let x1 = (x0 + 1).min(w - 1);
    let y1 = (y0 + 1).min(h - 1);
    let (p00, p10, p01, p11) = (img.get(x0, y0), img.get(x1, y0), img.get(x0, y1), img.get(x1, y1));
    let mut out = [0u8; 3];
    for c in 0..3 {
        let top = if fx == 0.0 {
            p00[c] as f64
        } else {
            p00[c] as f64 * (1.0 - fx) + p10[c] as f64 * fx
        };
        let bottom = if fx == 0.0 {
            p01[c] as f64
        } else {
            p01[c] as f64 * (1.0 - fx) + p11[c] as f64 * fx
        };
        out[c] = round_half_up(if fy == 0.0 { top } else { top * (1.0 - fy) + bottom * fy });
    }
    out
}

/// Nearest-neighbour sample (half-up rounding of the coordinate), clamped.
pub(crate) fn nearest(mask: &BinaryMask, sx: f64, sy: f64) -> u8 {
    let x = (clamp_coord(sx, mask.width()) + 0.5).floor() as usize;
    let y = (clamp_coord(sy, mask.height()) + 0.5).floor() as usize;
    mask.get(x.min(mask.width() - 1), y.min(mask.height() - 1))
}

/// Half-sample symmetric reflection of a continuous coordinate into
/// `[-0.5, len - 0.5]`.
pub(crate) fn reflect(v: f64, len: usize) -> f64 {
    let period = 2.0 * len as f64;
    let mut u = (v + 0.5).rem_euclid(period);
    if u > len as f64 {
        u = period - u;
    }
    u - 0.5
}

/// Builds an image/mask pair by pulling every output pixel from a source
/// coordinate computed by `map`.
pub(crate) fn remap(
    img: &RasterImage,
    mask: &BinaryMask,
    map: impl Fn(usize, usize) -> (f64, f64),
) -> (RasterImage, BinaryMask) {
    let (w, h) = (img.width(), img.height());
    let mut out = Vec::with_capacity(w * h * 3);
    let mut m = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            let (sx, sy) = map(x, y);
            out.extend_from_slice(&bilinear(img, sx, sy));
            m.push(nearest(mask, sx, sy));
        }
    }
    (
        RasterImage::new(w, h, out).expect("remap preserves dimensions"),
        BinaryMask::new(w, h, m).expect("nearest sampling keeps mask binary"),
    )
}
