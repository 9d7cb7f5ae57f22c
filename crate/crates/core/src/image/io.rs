use std::io::Cursor;
use std::path::Path;

use image::ImageFormat;

use super::{BinaryMask, LabeledPair, RasterImage};
use crate::{Error, Result};

pub fn load_image(path: impl AsRef<Path>) -> Result<RasterImage> {
    let path = path.as_ref();
    let img = image::open(path)
        .map_err(|source| Error::Decode {
            path: path.to_path_buf(),
            source,
        })?
        .into_rgb8();
    let (w, h) = (img.width() as usize, img.height() as usize);
    RasterImage::new(w, h, img.into_raw())
}

/// Loads a two-level mask; the darker level becomes intervillous (0) and the
/// lighter one villous (1). A single-level mask is villous when its level is
/// at least 128.
pub fn load_mask(path: impl AsRef<Path>) -> Result<BinaryMask> {
    let path = path.as_ref();
    let img = image::open(path).map_err(|source| Error::Decode {
        path: path.to_path_buf(),
        source,
    })?;
    mask_from_luma(img.into_luma8())
}

/// Decodes an in-memory RGB image; errors report `<memory>` as the path.
pub fn decode_image(bytes: &[u8]) -> Result<RasterImage> {
    let img = image::load_from_memory(bytes)
        .map_err(|source| Error::Decode {
            path: "<memory>".into(),
            source,
        })?
        .into_rgb8();
    let (w, h) = (img.width() as usize, img.height() as usize);
    RasterImage::new(w, h, img.into_raw())
}

/// In-memory counterpart of [`load_mask`].
pub fn decode_mask(bytes: &[u8]) -> Result<BinaryMask> {
    let img = image::load_from_memory(bytes).map_err(|source| Error::Decode {
        path: "<memory>".into(),
        source,
    })?;
    mask_from_luma(img.into_luma8())
}

fn mask_from_luma(img: image::GrayImage) -> Result<BinaryMask> {
    let (w, h) = (img.width() as usize, img.height() as usize);
    let raw = img.into_raw();
    let mut seen = [false; 256];
    for &v in &raw {
        seen[v as usize] = true;
    }
    let levels: Vec<u8> = (0..=255u8).filter(|&v| seen[v as usize]).collect();
    let threshold = match levels.as_slice() {
        [] => 128,
        [only] => {
            if *only >= 128 {
                *only
            } else {
                u8::MAX
            }
        }
        [_, hi] => *hi,
        _ => return Err(Error::NonBinaryMask { levels: levels.len() }),
    };
    let data = raw.into_iter().map(|v| u8::from(v >= threshold)).collect();
    BinaryMask::new(w, h, data)
}

pub fn load_pair(image_path: impl AsRef<Path>, mask_path: impl AsRef<Path>) -> Result<LabeledPair> {
    let image = load_image(image_path)?;
    let mask = load_mask(mask_path)?;
    LabeledPair::new(image, mask)
}

fn encode(path: &Path, w: usize, h: usize, raw: Vec<u8>, color: image::ExtendedColorType) -> Result<Vec<u8>> {
    let mut buf = Cursor::new(Vec::new());
    image::write_buffer_with_format(&mut buf, &raw, w as u32, h as u32, color, ImageFormat::Png).map_err(
        |source| Error::Encode {
            path: path.to_path_buf(),
            source,
        },
    )?;
    Ok(buf.into_inner())
}

/// PNG bytes of an RGB image.
pub fn encode_png(image: &RasterImage) -> Result<Vec<u8>> {
    encode(
        Path::new("<memory>"),
        image.width(),
        image.height(),
        image.data().to_vec(),
        image::ExtendedColorType::Rgb8,
    )
}

/// PNG bytes of a mask stored as 8-bit gray with levels {0, 255}.
pub fn encode_mask_png(mask: &BinaryMask) -> Result<Vec<u8>> {
    let raw = mask.data().iter().map(|&v| v * 255).collect();
    encode(
        Path::new("<memory>"),
        mask.width(),
        mask.height(),
        raw,
        image::ExtendedColorType::L8,
    )
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| Error::Encode {
        path: path.to_path_buf(),
        source: image::ImageError::IoError(e),
    })
}

pub fn save_image(image: &RasterImage, path: impl AsRef<Path>) -> Result<()> {
    write_bytes(path.as_ref(), &encode_png(image)?)
}

pub fn save_mask(mask: &BinaryMask, path: impl AsRef<Path>) -> Result<()> {
    write_bytes(path.as_ref(), &encode_mask_png(mask)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use image::GrayImage;

    #[test]
    fn round_trip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let img = RasterImage::from_fn(17, 9, |x, y| [(x * 13) as u8, (y * 29) as u8, (x ^ y) as u8]);
        let mask = BinaryMask::from_fn(17, 9, |x, y| (x * y) % 3 == 0);
        save_image(&img, dir.path().join("i.png")).unwrap();
        save_mask(&mask, dir.path().join("m.png")).unwrap();
        let pair = load_pair(dir.path().join("i.png"), dir.path().join("m.png")).unwrap();
        assert_eq!(pair.image(), &img);
        assert_eq!(pair.mask(), &mask);
    }

    #[test]
    fn two_level_mask_maps_darker_to_zero() {
        let dir = tempfile::tempdir().unwrap();
        let g = GrayImage::from_fn(4, 1, |x, _| image::Luma([if x < 2 { 40 } else { 90 }]));
        g.save(dir.path().join("m.png")).unwrap();
        let m = load_mask(dir.path().join("m.png")).unwrap();
        assert_eq!(m.data(), &[0, 0, 1, 1]);
    }

    #[test]
    fn three_levels_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let g = GrayImage::from_fn(3, 1, |x, _| image::Luma([x as u8 * 100]));
        g.save(dir.path().join("m.png")).unwrap();
        assert!(matches!(
            load_mask(dir.path().join("m.png")),
            Err(Error::NonBinaryMask { levels: 3 })
        ));
    }

    #[test]
    fn size_mismatch_rejected() {
        let dir = tempfile::tempdir().unwrap();
        save_image(&RasterImage::filled(256, 256, [9; 3]), dir.path().join("i.png")).unwrap();
        save_mask(&BinaryMask::filled(128, 128, true), dir.path().join("m.png")).unwrap();
        assert!(matches!(
            load_pair(dir.path().join("i.png"), dir.path().join("m.png")),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn missing_file_is_decode_error() {
        assert!(matches!(load_image("/nonexistent/x.png"), Err(Error::Decode { .. })));
    }
}
