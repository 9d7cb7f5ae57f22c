//! Cross-seam discontinuity measurements.

use serde::{Deserialize, Serialize};

use super::dataset::PatchDataset;
use super::grid::{Cell, GridSpec, Side};
use super::reconstruct::Placement;
use crate::RasterImage;

/// Verbatim rendering of a placement list: every cell receives its entry's
/// pixels over the cell rectangle only, with no overhang and no blending.
pub fn render_unblended(dataset: &PatchDataset, spec: &GridSpec, placements: &[Placement]) -> RasterImage {
    let n = spec.output_size();
    let mut data = vec![0u8; n * n * 3];
    for pl in placements {
        let c = spec.cell_rect(pl.cell);
        let p = spec.placement_rect(pl.cell);
        for y in c.y0..c.y1() {
            let src = dataset.image_row(pl.image_entry, c.x0 - p.x0, y - p.y0, c.w);
            let start = (y * n + c.x0) * 3;
            data[start..start + c.w * 3].copy_from_slice(src);
        }
    }
    RasterImage::new(n, n, data).expect("canvas dimensions")
}

/// Boundary between two horizontally or vertically adjacent cells.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeamMeasure {
    pub first: Cell,
    pub second: Cell,
    /// Mean absolute channel difference across the boundary in the blended
    /// result.
    pub blended: f64,
    /// The same in the verbatim rendering.
    pub unblended: f64,
}

/// Mean absolute channel difference between the two pixel lines that face
/// each other across the boundary of `a` and its `side` neighbour.
pub fn seam_difference(image: &RasterImage, spec: &GridSpec, a: Cell, side: Side) -> Option<f64> {
    let b = spec.neighbor(a, side)?;
    let (ra, rb) = (spec.cell_rect(a), spec.cell_rect(b));
    let mut total = 0u64;
    let mut count = 0u64;
    let mut add = |p: [u8; 3], q: [u8; 3]| {
        for c in 0..3 {
            total += (p[c] as i32 - q[c] as i32).unsigned_abs() as u64;
        }
        count += 3;
    };
    match side {
        Side::Right => (ra.y0..ra.y1()).for_each(|y| add(image.get(ra.x1() - 1, y), image.get(rb.x0, y))),
        Side::Bottom => (ra.x0..ra.x1()).for_each(|x| add(image.get(x, ra.y1() - 1), image.get(x, rb.y0))),
        Side::Left => (ra.y0..ra.y1()).for_each(|y| add(image.get(rb.x1() - 1, y), image.get(ra.x0, y))),
        Side::Top => (ra.x0..ra.x1()).for_each(|x| add(image.get(x, rb.y1() - 1), image.get(x, ra.y0))),
    }
    Some(total as f64 / count as f64)
}

/// Every interior boundary of the grid, blended vs verbatim.
pub fn seam_report(
    blended: &RasterImage,
    dataset: &PatchDataset,
    spec: &GridSpec,
    placements: &[Placement],
) -> Vec<SeamMeasure> {
    let raw = render_unblended(dataset, spec, placements);
    let mut out = Vec::new();
    for cell in spec.cells() {
        for side in [Side::Right, Side::Bottom] {
            if let (Some(b), Some(u)) = (
                seam_difference(blended, spec, cell, side),
                seam_difference(&raw, spec, cell, side),
            ) {
                out.push(SeamMeasure {
                    first: cell,
                    second: spec.neighbor(cell, side).expect("checked by seam_difference"),
                    blended: b,
                    unblended: u,
                });
            }
        }
    }
    out
}
