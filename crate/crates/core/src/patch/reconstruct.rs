use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::dataset::{PatchDataset, DEFAULT_STRIDE};
use super::fill::FillState;
use super::grid::{Cell, GridSpec};
use super::matching::{find_match, DEFAULT_PRIORITY_FACTOR};
use crate::{Error, LabeledPair, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReconstructOptions {
    /// Sweep step of the sampling window over the exemplar.
    pub stride: usize,
    /// Unflipped matches are kept while within this factor of the best.
    pub priority_factor: f64,
}

impl Default for ReconstructOptions {
    fn default() -> Self {
        Self {
            stride: DEFAULT_STRIDE,
            priority_factor: DEFAULT_PRIORITY_FACTOR,
        }
    }
}

impl ReconstructOptions {
    pub fn validate(&self) -> Result<()> {
        if self.stride == 0 {
            return Err(Error::InvalidParameter("stride must be >= 1".into()));
        }
        if !(self.priority_factor >= 1.0 && self.priority_factor.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "priority_factor {} must be a finite value >= 1",
                self.priority_factor
            )));
        }
        Ok(())
    }
}

/// One step of the fill cycle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Placement {
    pub cell: Cell,
    pub image_entry: usize,
    pub mask_entry: usize,
    /// Edge error of the match; `None` for a free pick.
    pub mse: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub pair: LabeledPair,
    /// Placements in fill order.
    pub placements: Vec<Placement>,
}

/// Synthesizes a new image/mask realization of `spec.output_size()` from
/// `exemplar` with default options.
pub fn reconstruct(exemplar: &LabeledPair, spec: &GridSpec, seed: u64) -> Result<LabeledPair> {
    reconstruct_with(exemplar, spec, &ReconstructOptions::default(), seed).map(|r| r.pair)
}

pub fn reconstruct_with(
    exemplar: &LabeledPair,
    spec: &GridSpec,
    options: &ReconstructOptions,
    seed: u64,
) -> Result<Reconstruction> {
    options.validate()?;
    let dataset = PatchDataset::build(exemplar, spec, options.stride)?;
    reconstruct_from_dataset(&dataset, spec, options.priority_factor, seed)
}

/// The fill cycle: visit the cells in a seeded random order; for each, match
/// against the filled neighbours' edges, blend the image tile, then the mask
/// tile of the same entry.
pub fn reconstruct_from_dataset(
    dataset: &PatchDataset,
    spec: &GridSpec,
    priority_factor: f64,
    seed: u64,
) -> Result<Reconstruction> {
    if dataset.extent() < spec.tile_extent() {
        return Err(Error::InvalidParameter(format!(
            "dataset tiles of {} px are smaller than the grid's {} px placements",
            dataset.extent(),
            spec.tile_extent()
        )));
    }
    let mut state = FillState::new(*spec, seed);
    let mut order: Vec<Cell> = spec.cells().collect();
    order.shuffle(state.rng());
    let mut placements = Vec::with_capacity(order.len());
    for cell in order {
        let query = state.query(cell);
        let found = find_match(dataset, &query, priority_factor, state.rng())?;
        let layer = state.blend_tile(dataset, cell, found.index);
        let mask_entry = layer.entry();
        state.blend_mask(dataset, layer);
        placements.push(Placement {
            cell,
            image_entry: found.index,
            mask_entry,
            mse: found.mse,
        });
    }
    Ok(Reconstruction {
        pair: state.into_pair()?,
        placements,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{BinaryMask, RasterImage};

    fn exemplar() -> LabeledPair {
        let img = RasterImage::from_fn(96, 96, |x, y| {
            let v = ((x as f64 / 6.0).sin() * 60.0 + (y as f64 / 9.0).cos() * 50.0 + 128.0) as u8;
            [v, v / 2, 255 - v]
        });
        let mask = BinaryMask::from_fn(96, 96, |x, y| ((x as f64 / 6.0).sin() + (y as f64 / 9.0).cos()) > 0.3);
        LabeledPair::new(img, mask).unwrap()
    }

    #[test]
    fn single_cell_is_a_dataset_tile() {
        let ex = exemplar();
        let spec = GridSpec::new(64, 1, 5).unwrap();
        let opts = ReconstructOptions::default();
        let r = reconstruct_with(&ex, &spec, &opts, 5).unwrap();
        let d = PatchDataset::build(&ex, &spec, opts.stride).unwrap();
        assert_eq!(r.placements.len(), 1);
        assert_eq!(r.pair, d.tile(r.placements[0].image_entry));
    }

    #[test]
    fn four_by_four_fills_everything() {
        let ex = exemplar();
        let spec = GridSpec::new(80, 4, 5).unwrap();
        let r = reconstruct_with(&ex, &spec, &ReconstructOptions::default(), 1).unwrap();
        assert_eq!(r.placements.len(), 16);
        let mut cells: Vec<_> = r.placements.iter().map(|p| p.cell).collect();
        cells.sort();
        let mut expected: Vec<_> = spec.cells().collect();
        expected.sort();
        assert_eq!(cells, expected);
        assert!(r.placements.iter().all(|p| p.image_entry == p.mask_entry));
        assert_eq!(r.placements[0].mse, None);
        assert!(r.pair.mask().data().iter().all(|&v| v <= 1));
    }

    #[test]
    fn deterministic_per_seed() {
        let ex = exemplar();
        let spec = GridSpec::new(72, 3, 5).unwrap();
        let a = reconstruct(&ex, &spec, 42).unwrap();
        let b = reconstruct(&ex, &spec, 42).unwrap();
        let c = reconstruct(&ex, &spec, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn exemplar_too_small() {
        let ex = exemplar();
        let spec = GridSpec::new(256, 2, 5).unwrap();
        assert!(matches!(reconstruct(&ex, &spec, 0), Err(Error::ExemplarTooSmall { .. })));
    }

    #[test]
    fn options_validated() {
        let bad = ReconstructOptions {
            priority_factor: 0.5,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
