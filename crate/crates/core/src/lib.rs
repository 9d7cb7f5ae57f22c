//! Single-exemplar synthesis and morphometrics for paired histology images
//! and villous/intervillous segmentation masks.
//!
//! The crate is organised around four pieces:
//!
//! * [`image`] – RGB rasters, binary masks, PNG I/O, crops and flips.
//! * [`augment`] – the conventional augmentation chain (color shift, zoom,
//!   rotation, flips and a sinusoidal elastic warp).
//! * [`patch`] – patch-dataset construction and edge-matched grid
//!   reconstruction of new image/mask realizations.
//! * [`morphology`] and [`diversity`] – distance maps, watershed chambers,
//!   chamber networks, scalar morphometrics and dataset-level diversity
//!   analyses.
//!
//! All randomness is driven by explicit 64-bit seeds (see [`rng`]), so every
//! output is a pure function of its inputs.

pub mod augment;
pub mod diversity;
mod error;
pub mod exemplar;
pub mod image;
pub mod morphology;
pub mod patch;
pub mod rng;

pub use error::{Error, Result};
pub use image::{BinaryMask, FlipAxis, LabeledPair, RasterImage};
