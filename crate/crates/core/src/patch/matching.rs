use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dataset::PatchDataset;
use super::grid::{Cell, Side};
use crate::rng::Rng;
use crate::{Error, Result};

pub const DEFAULT_PRIORITY_FACTOR: f64 = 1.1;

/// Known canvas pixels along one edge of a placement window.
///
/// Coordinates are relative to the placement window; `pixels` holds `w * h`
/// RGB triples, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeStrip {
    pub side: Side,
    pub x0: usize,
    pub y0: usize,
    pub w: usize,
    pub h: usize,
    pub pixels: Vec<u8>,
}

/// What a candidate tile has to agree with when placed on `cell`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchQuery {
    pub cell: Cell,
    /// Placement window size `(w, h)`.
    pub window: (usize, usize),
    pub strips: Vec<EdgeStrip>,
}

impl MatchQuery {
    pub fn unconstrained(cell: Cell, window: (usize, usize)) -> Self {
        Self {
            cell,
            window,
            strips: Vec::new(),
        }
    }

    pub fn is_constrained(&self) -> bool {
        !self.strips.is_empty()
    }

    pub fn constrained_sides(&self) -> Vec<Side> {
        self.strips.iter().map(|s| s.side).collect()
    }

    /// Number of constrained pixels (channels not counted).
    pub fn pixel_count(&self) -> usize {
        self.strips.iter().map(|s| s.w * s.h).sum()
    }
}

/// Result of a search.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchOutcome {
    pub index: usize,
    /// Mean squared error per channel sample; `None` for an unconstrained pick.
    pub mse: Option<f64>,
}

/// Sum of squared differences between the query strips and entry `index`.
pub(crate) fn strip_sse(dataset: &PatchDataset, query: &MatchQuery, index: usize) -> u64 {
    let mut sse = 0u64;
    for s in &query.strips {
        let row_bytes = s.w * 3;
        for r in 0..s.h {
            let cand = dataset.image_row(index, s.x0, s.y0 + r, s.w);
            let want = &s.pixels[r * row_bytes..(r + 1) * row_bytes];
            sse += cand
                .iter()
                .zip(want)
                .map(|(&a, &b)| {
                    let d = a as i32 - b as i32;
                    (d * d) as u64
                })
                .sum::<u64>();
        }
    }
    sse
}

fn argmin(values: &[u64]) -> usize {
    // First occurrence wins, so ties go to the lowest index.
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v < values[best] {
            best = i;
        }
    }
    best
}

/// Finds the entry whose edges best match `query`.
///
/// Candidates are ranked by mean squared error over the constrained strips.
/// The best unflipped entry is taken when its error is within
/// `priority_factor` times the best overall error, otherwise the overall best
/// is taken; ties go to the lowest index. With no constrained edges an entry
/// is drawn uniformly from the whole dataset.
pub fn find_match(
    dataset: &PatchDataset,
    query: &MatchQuery,
    priority_factor: f64,
    rng: &mut Rng,
) -> Result<MatchOutcome> {
    if dataset.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let (ww, wh) = query.window;
    if ww > dataset.extent() || wh > dataset.extent() {
        return Err(Error::InvalidParameter(format!(
            "placement window {ww}x{wh} exceeds tile extent {}",
            dataset.extent()
        )));
    }
    if !query.is_constrained() {
        return Ok(MatchOutcome {
            index: rng.gen_range(0..dataset.len()),
            mse: None,
        });
    }
    let sse: Vec<u64> = (0..dataset.len())
        .into_par_iter()
        .with_min_len(64)
        .map(|i| strip_sse(dataset, query, i))
        .collect();
    let best_unflipped = argmin(&sse[..dataset.group_len()]);
    let best = argmin(&sse);
    let index = if sse[best_unflipped] as f64 <= priority_factor * sse[best] as f64 {
        best_unflipped
    } else {
        best
    };
    let samples = (query.pixel_count() * 3) as f64;
    Ok(MatchOutcome {
        index,
        mse: Some(sse[index] as f64 / samples),
    })
}
