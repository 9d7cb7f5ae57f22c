//! Raster containers shared by every other module.
//!
//! Layout is row-major everywhere, addressed as `(x, y)` with `x` the column
//! and `y` the row.

mod io;
pub(crate) mod sample;

pub use io::{
    decode_image, decode_mask, encode_mask_png, encode_png, load_image, load_mask, load_pair, save_image, save_mask,
};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// An 8-bit RGB raster.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RasterImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

/// A villous (1) / intervillous (0) label raster.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

/// An image together with its ground-truth mask.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabeledPair {
    image: RasterImage,
    mask: BinaryMask,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FlipAxis {
    None,
    /// Mirror left/right.
    X,
    /// Mirror top/bottom.
    Y,
    /// Both, equivalent to a half turn.
    XY,
}

impl FlipAxis {
    pub const ALL: [FlipAxis; 4] = [FlipAxis::None, FlipAxis::X, FlipAxis::Y, FlipAxis::XY];

    pub fn flips_x(self) -> bool {
        matches!(self, FlipAxis::X | FlipAxis::XY)
    }

    pub fn flips_y(self) -> bool {
        matches!(self, FlipAxis::Y | FlipAxis::XY)
    }

    /// The flip equivalent to applying `self` then `other`.
    pub fn then(self, other: FlipAxis) -> FlipAxis {
        match (self.flips_x() ^ other.flips_x(), self.flips_y() ^ other.flips_y()) {
            (false, false) => FlipAxis::None,
            (true, false) => FlipAxis::X,
            (false, true) => FlipAxis::Y,
            (true, true) => FlipAxis::XY,
        }
    }
}

fn check_rect(width: usize, height: usize, x0: usize, y0: usize, w: usize, h: usize) -> Result<()> {
    let fits = x0.checked_add(w).is_some_and(|x1| x1 <= width)
        && y0.checked_add(h).is_some_and(|y1| y1 <= height);
    if fits {
        Ok(())
    } else {
        Err(Error::OutOfBounds {
            x0,
            y0,
            w,
            h,
            width,
            height,
        })
    }
}

fn crop_buf(data: &[u8], width: usize, ch: usize, x0: usize, y0: usize, w: usize, h: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(w * h * ch);
    for y in y0..y0 + h {
        let start = (y * width + x0) * ch;
        out.extend_from_slice(&data[start..start + w * ch]);
    }
    out
}

fn flip_buf(data: &[u8], width: usize, height: usize, ch: usize, axis: FlipAxis) -> Vec<u8> {
    if axis == FlipAxis::None {
        return data.to_vec();
    }
    let mut out = vec![0u8; data.len()];
    for y in 0..height {
        let sy = if axis.flips_y() { height - 1 - y } else { y };
        for x in 0..width {
            let sx = if axis.flips_x() { width - 1 - x } else { x };
            let (d, s) = ((y * width + x) * ch, (sy * width + sx) * ch);
            out[d..d + ch].copy_from_slice(&data[s..s + ch]);
        }
    }
    out
}

impl RasterImage {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if data.len() != width * height * 3 {
            return Err(Error::BadBuffer {
                expected: width * height * 3,
                actual: data.len(),
            });
        }
        Ok(Self { width, height, data })
    }

    pub fn filled(width: usize, height: usize, rgb: [u8; 3]) -> Self {
        let data = rgb.iter().copied().cycle().take(width * height * 3).collect();
        Self { width, height, data }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> [u8; 3]) -> Self {
        let mut data = Vec::with_capacity(width * height * 3);
        for y in 0..height {
            for x in 0..width {
                data.extend_from_slice(&f(x, y));
            }
        }
        Self { width, height, data }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn into_data(self) -> Vec<u8> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> [u8; 3] {
        let i = (y * self.width + x) * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    pub(crate) fn data_mut(&mut self) -> &mut [u8] {
        &mut self.data
    }

    pub fn crop(&self, x0: usize, y0: usize, w: usize, h: usize) -> Result<Self> {
        check_rect(self.width, self.height, x0, y0, w, h)?;
        Ok(Self {
            width: w,
            height: h,
            data: crop_buf(&self.data, self.width, 3, x0, y0, w, h),
        })
    }

    pub fn flip(&self, axis: FlipAxis) -> Self {
        Self {
            width: self.width,
            height: self.height,
            data: flip_buf(&self.data, self.width, self.height, 3, axis),
        }
    }
}

impl BinaryMask {
    /// Builds a mask from raw `{0, 1}` values.
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if data.len() != width * height {
            return Err(Error::BadBuffer {
                expected: width * height,
                actual: data.len(),
            });
        }
        if data.iter().any(|&v| v > 1) {
            return Err(Error::NonBinaryMask { levels: 3 });
        }
        Ok(Self { width, height, data })
    }

    pub fn filled(width: usize, height: usize, villous: bool) -> Self {
        Self {
            width,
            height,
            data: vec![u8::from(villous); width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(u8::from(f(x, y)));
            }
        }
        Self { width, height, data }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Values in `{0, 1}`, row-major.
    pub fn data(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn is_villous(&self, x: usize, y: usize) -> bool {
        self.get(x, y) == 1
    }

    pub fn villous_count(&self) -> usize {
        self.data.iter().filter(|&&v| v == 1).count()
    }

    pub fn crop(&self, x0: usize, y0: usize, w: usize, h: usize) -> Result<Self> {
        check_rect(self.width, self.height, x0, y0, w, h)?;
        Ok(Self {
            width: w,
            height: h,
            data: crop_buf(&self.data, self.width, 1, x0, y0, w, h),
        })
    }

    pub fn flip(&self, axis: FlipAxis) -> Self {
        Self {
            width: self.width,
            height: self.height,
            data: flip_buf(&self.data, self.width, self.height, 1, axis),
        }
    }

    /// Quarter turn clockwise.
    pub fn rotate90(&self) -> Self {
        let (w, h) = (self.height, self.width);
        Self::from_fn(w, h, |x, y| self.is_villous(y, self.height - 1 - x))
    }
}

impl LabeledPair {
    pub fn new(image: RasterImage, mask: BinaryMask) -> Result<Self> {
        if image.width != mask.width || image.height != mask.height {
            return Err(Error::DimensionMismatch {
                image_w: image.width,
                image_h: image.height,
                mask_w: mask.width,
                mask_h: mask.height,
            });
        }
        Ok(Self { image, mask })
    }

    pub fn image(&self) -> &RasterImage {
        &self.image
    }

    pub fn mask(&self) -> &BinaryMask {
        &self.mask
    }

    pub fn into_parts(self) -> (RasterImage, BinaryMask) {
        (self.image, self.mask)
    }

    pub fn width(&self) -> usize {
        self.image.width
    }

    pub fn height(&self) -> usize {
        self.image.height
    }

    pub fn crop(&self, x0: usize, y0: usize, w: usize, h: usize) -> Result<Self> {
        Ok(Self {
            image: self.image.crop(x0, y0, w, h)?,
            mask: self.mask.crop(x0, y0, w, h)?,
        })
    }

    pub fn flip(&self, axis: FlipAxis) -> Self {
        Self {
            image: self.image.flip(axis),
            mask: self.mask.flip(axis),
        }
    }
}
