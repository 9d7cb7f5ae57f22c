use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("image is {image_w}x{image_h} but mask is {mask_w}x{mask_h}")]
    DimensionMismatch {
        image_w: usize,
        image_h: usize,
        mask_w: usize,
        mask_h: usize,
    },
    #[error("mask has {levels} distinct intensity levels, expected at most 2")]
    NonBinaryMask { levels: usize },
    #[error("failed to decode {path}: {source}")]
    Decode {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },
    #[error("failed to encode {path}: {source}")]
    Encode {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },
    #[error("rectangle {w}x{h}+{x0}+{y0} does not fit in a {width}x{height} raster")]
    OutOfBounds {
        x0: usize,
        y0: usize,
        w: usize,
        h: usize,
        width: usize,
        height: usize,
    },
    #[error("raster data length {actual} does not match {expected}")]
    BadBuffer { expected: usize, actual: usize },
    #[error("exemplar {width}x{height} cannot hold a {extent}x{extent} tile")]
    ExemplarTooSmall {
        width: usize,
        height: usize,
        extent: usize,
    },
    #[error("patch dataset is empty")]
    EmptyDataset,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("point cloud is degenerate (fewer than 3 points or all collinear)")]
    DegenerateCloud,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
