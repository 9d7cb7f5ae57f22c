//! Patch-based reconstruction of new image/mask realizations from a single
//! labeled exemplar.
//!
//! A [`PatchDataset`] sweeps a square window over the exemplar at a fixed
//! stride and keeps every window under the four flips. Reconstruction then
//! visits the cells of a [`GridSpec`] in random order. A cell with no filled
//! neighbours receives a random entry; otherwise the entry whose edge strips
//! best match the already-written neighbours (by mean squared error, with a
//! preference for unflipped entries) is placed. The new tile is mixed into
//! the existing canvas across a transition band with a cubic ramp, and the
//! mask follows the image's entry with a threshold and a local opening.

mod batch;
mod dataset;
mod fill;
mod grid;
mod matching;
mod reconstruct;
pub mod seams;

pub use batch::{generate_batch, generate_sample, sample_seeds, BatchConfig, BatchMode, GeneratedSample, StageOrder};
pub use dataset::{PatchDataset, PatchEntry, DEFAULT_STRIDE};
pub use fill::{binary_opening_3x3, transition_weight, BlendLayer, FillState};
pub use grid::{Cell, GridSpec, Rect, Side};
pub use matching::{find_match, EdgeStrip, MatchOutcome, MatchQuery, DEFAULT_PRIORITY_FACTOR};
pub use reconstruct::{reconstruct, reconstruct_from_dataset, reconstruct_with, Placement, ReconstructOptions, Reconstruction};
