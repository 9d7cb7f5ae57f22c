//! Dataset-level comparisons: feature clouds in the (volume fraction,
//! specific surface) plane with their coverage, and the grid-ratio sweep.

mod hull;
mod stats;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use hull::{bounding_box_area, convex_hull, hull_area};
pub use stats::{average_ranks, mean_std, spearman};

use crate::morphology::morphometrics;
use crate::patch::{reconstruct_from_dataset, GridSpec, PatchDataset, ReconstructOptions};
use crate::rng::derive_seed;
use crate::{BinaryMask, Error, LabeledPair, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceTag {
    Training,
    Validation,
    BaseCase,
    Proposed,
}

impl SourceTag {
    pub fn as_str(self) -> &'static str {
        match self {
            SourceTag::Training => "training",
            SourceTag::Validation => "validation",
            SourceTag::BaseCase => "base_case",
            SourceTag::Proposed => "proposed",
        }
    }
}

impl fmt::Display for SourceTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SourceTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "training" => Ok(SourceTag::Training),
            "validation" => Ok(SourceTag::Validation),
            "base_case" | "base" => Ok(SourceTag::BaseCase),
            "proposed" => Ok(SourceTag::Proposed),
            other => Err(Error::InvalidParameter(format!("unknown source tag {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeaturePoint {
    pub volume_fraction: f64,
    pub specific_surface: f64,
    pub source_tag: SourceTag,
}

impl FeaturePoint {
    pub fn xy(&self) -> (f64, f64) {
        (self.volume_fraction, self.specific_surface)
    }
}

/// One feature point per mask, in input order.
pub fn feature_cloud(masks: &[BinaryMask], tag: SourceTag, h_min: f64) -> Vec<FeaturePoint> {
    masks
        .par_iter()
        .map(|m| {
            let r = morphometrics(m, h_min);
            FeaturePoint {
                volume_fraction: r.volume_fraction,
                specific_surface: r.specific_surface,
                source_tag: tag,
            }
        })
        .collect()
}

/// Convex hull area of a cloud in the (volume fraction, specific surface) plane.
pub fn cloud_hull_area(points: &[FeaturePoint]) -> Result<f64> {
    hull_area(&points.iter().map(FeaturePoint::xy).collect::<Vec<_>>())
}

pub fn cloud_bounding_box_area(points: &[FeaturePoint]) -> Result<f64> {
    bounding_box_area(&points.iter().map(FeaturePoint::xy).collect::<Vec<_>>())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub overlap: usize,
    pub options: ReconstructOptions,
    pub h_min: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            overlap: GridSpec::DEFAULT_OVERLAP,
            options: ReconstructOptions::default(),
            h_min: crate::morphology::DEFAULT_H_MIN,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub grid_ratio: usize,
    pub repeats: usize,
    pub seeds: Vec<u64>,
    pub volume_fractions: Vec<f64>,
    pub specific_surfaces: Vec<f64>,
    pub volume_fraction_mean: f64,
    pub volume_fraction_std: f64,
    pub specific_surface_mean: f64,
    pub specific_surface_std: f64,
}

/// Seed of one (ratio, repeat) cell of a sweep.
pub fn sweep_seed(seed: u64, grid_ratio: usize, repeat: usize) -> u64 {
    derive_seed(derive_seed(seed, "sweep", grid_ratio as u64), "repeat", repeat as u64)
}

/// Reconstructs the exemplar `repeats` times per grid ratio and aggregates
/// the resulting volume fractions and specific surfaces.
pub fn grid_sweep(
    exemplar: &LabeledPair,
    ratios: &[usize],
    repeats: usize,
    seed: u64,
    config: &SweepConfig,
) -> Result<Vec<SweepResult>> {
    if ratios.is_empty() {
        return Err(Error::InvalidParameter("no grid ratios given".into()));
    }
    if repeats == 0 {
        return Err(Error::InvalidParameter("repeats must be >= 1".into()));
    }
    config.options.validate()?;
    let size = exemplar.width().min(exemplar.height());
    let specs = ratios
        .iter()
        .map(|&r| GridSpec::new(size, r, config.overlap))
        .collect::<Result<Vec<_>>>()?;
    let datasets = specs
        .par_iter()
        .map(|s| PatchDataset::build(exemplar, s, config.options.stride))
        .collect::<Result<Vec<_>>>()?;

    let cells: Vec<(usize, usize)> = (0..ratios.len()).flat_map(|i| (0..repeats).map(move |r| (i, r))).collect();
    let features = cells
        .par_iter()
        .map(|&(i, r)| {
            let s = sweep_seed(seed, ratios[i], r);
            let out = reconstruct_from_dataset(&datasets[i], &specs[i], config.options.priority_factor, s)?;
            let m = morphometrics(out.pair.mask(), config.h_min);
            Ok((s, m.volume_fraction, m.specific_surface))
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(ratios
        .iter()
        .zip(features.chunks(repeats))
        .map(|(&grid_ratio, chunk)| {
            let volume_fractions: Vec<f64> = chunk.iter().map(|c| c.1).collect();
            let specific_surfaces: Vec<f64> = chunk.iter().map(|c| c.2).collect();
            let (vm, vs) = mean_std(&volume_fractions);
            let (sm, ss) = mean_std(&specific_surfaces);
            SweepResult {
                grid_ratio,
                repeats,
                seeds: chunk.iter().map(|c| c.0).collect(),
                volume_fractions,
                specific_surfaces,
                volume_fraction_mean: vm,
                volume_fraction_std: vs,
                specific_surface_mean: sm,
                specific_surface_std: ss,
            }
        })
        .collect())
}

/// Spearman correlations of grid ratio against mean volume fraction and mean
/// specific surface.
pub fn sweep_trend(results: &[SweepResult]) -> (Option<f64>, Option<f64>) {
    let ratios: Vec<f64> = results.iter().map(|r| r.grid_ratio as f64).collect();
    let vf: Vec<f64> = results.iter().map(|r| r.volume_fraction_mean).collect();
    let ss: Vec<f64> = results.iter().map(|r| r.specific_surface_mean).collect();
    (spearman(&ratios, &vf), spearman(&ratios, &ss))
}
