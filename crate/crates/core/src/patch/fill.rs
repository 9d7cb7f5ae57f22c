use super::dataset::PatchDataset;
use super::grid::{Cell, GridSpec, Rect, Side};
use super::matching::{EdgeStrip, MatchQuery};
use crate::image::sample::round_half_up;
use crate::rng::{rng_from_seed, Rng};
use crate::{BinaryMask, Error, LabeledPair, RasterImage, Result};

/// Cubic ramp `3t^2 - 2t^3`: zero slope at both ends.
#[inline]
pub fn transition_weight(t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    t * t * (3.0 - 2.0 * t)
}

/// Per-pixel weight of the new tile over one placement window, produced by
/// [`FillState::blend_tile`] and consumed by [`FillState::blend_mask`].
#[derive(Clone, Debug)]
pub struct BlendLayer {
    cell: Cell,
    entry: usize,
    rect: Rect,
    /// 1.0 where the tile was written verbatim.
    weights: Vec<f64>,
}

impl BlendLayer {
    pub fn cell(&self) -> Cell {
        self.cell
    }

    pub fn entry(&self) -> usize {
        self.entry
    }

    pub fn rect(&self) -> Rect {
        self.rect
    }

    /// Weight of the new tile at canvas pixel `(x, y)` inside the window.
    pub fn weight(&self, x: usize, y: usize) -> f64 {
        self.weights[(y - self.rect.y0) * self.rect.w + (x - self.rect.x0)]
    }

    /// Canvas pixels where old content took part in the blend.
    pub fn blended_pixels(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.weights.iter().enumerate().filter(|(_, &w)| w < 1.0).map(|(i, _)| {
            (self.rect.x0 + i % self.rect.w, self.rect.y0 + i / self.rect.w)
        })
    }
}

/// The partially assembled canvas of one reconstruction.
#[derive(Clone, Debug)]
pub struct FillState {
    spec: GridSpec,
    image: Vec<u8>,
    mask: Vec<u8>,
    written: Vec<bool>,
    cells: Vec<Option<usize>>,
    rng: Rng,
}

impl FillState {
    pub fn new(spec: GridSpec, seed: u64) -> Self {
        let n = spec.output_size();
        Self {
            spec,
            image: vec![0; n * n * 3],
            mask: vec![0; n * n],
            written: vec![false; n * n],
            cells: vec![None; spec.cell_count()],
            rng: rng_from_seed(seed),
        }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub(crate) fn rng(&mut self) -> &mut Rng {
        &mut self.rng
    }

    pub fn placed_entry(&self, cell: Cell) -> Option<usize> {
        self.cells[self.spec.cell_index(cell)]
    }

    pub fn is_filled(&self, cell: Cell) -> bool {
        self.placed_entry(cell).is_some()
    }

    pub fn is_written(&self, x: usize, y: usize) -> bool {
        self.written[y * self.spec.output_size() + x]
    }

    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        let i = (y * self.spec.output_size() + x) * 3;
        [self.image[i], self.image[i + 1], self.image[i + 2]]
    }

    pub fn mask_value(&self, x: usize, y: usize) -> u8 {
        self.mask[y * self.spec.output_size() + x]
    }

    pub fn is_complete(&self) -> bool {
        self.cells.iter().all(Option::is_some) && self.written.iter().all(|&w| w)
    }

    /// Edge constraints for placing a tile on `cell`: one strip of width
    /// `overlap` just outside the cell for every filled neighbour.
    pub fn query(&self, cell: Cell) -> MatchQuery {
        let p = self.spec.placement_rect(cell);
        let c = self.spec.cell_rect(cell);
        let o = self.spec.overlap();
        let mut strips = Vec::new();
        for side in Side::ALL {
            let Some(nb) = self.spec.neighbor(cell, side) else {
                continue;
            };
            if !self.is_filled(nb) {
                continue;
            }
            // Canvas rectangle of the strip.
            let r = match side {
                Side::Left => Rect { x0: p.x0, y0: c.y0, w: o, h: c.h },
                Side::Right => Rect { x0: c.x1(), y0: c.y0, w: o, h: c.h },
                Side::Top => Rect { x0: c.x0, y0: p.y0, w: c.w, h: o },
                Side::Bottom => Rect { x0: c.x0, y0: c.y1(), w: c.w, h: o },
            };
            let mut pixels = Vec::with_capacity(r.w * r.h * 3);
            for y in r.y0..r.y1() {
                for x in r.x0..r.x1() {
                    debug_assert!(self.is_written(x, y));
                    pixels.extend_from_slice(&self.pixel(x, y));
                }
            }
            strips.push(EdgeStrip {
                side,
                x0: r.x0 - p.x0,
                y0: r.y0 - p.y0,
                w: r.w,
                h: r.h,
                pixels,
            });
        }
        MatchQuery {
            cell,
            window: (p.w, p.h),
            strips,
        }
    }

    fn band_weight(&self, cell: Cell, p: &Rect, x: usize, y: usize) -> f64 {
        let band = 2 * self.spec.overlap();
        let mut w = 1.0f64;
        for side in Side::ALL {
            if self.spec.neighbor(cell, side).is_none() {
                continue;
            }
            let d = match side {
                Side::Left => x - p.x0,
                Side::Right => p.x1() - 1 - x,
                Side::Top => y - p.y0,
                Side::Bottom => p.y1() - 1 - y,
            };
            if d < band {
                w = w.min(transition_weight((d as f64 + 0.5) / band as f64));
            }
        }
        w
    }

    /// Writes the image tile of `entry` on `cell`. Pixels not yet written are
    /// copied verbatim; already-written pixels inside the transition band
    /// (`overlap` pixels either side of the cell edge) are mixed as
    /// `w * new + (1 - w) * old` with `w` ramping from the old side to the new.
    pub fn blend_tile(&mut self, dataset: &PatchDataset, cell: Cell, entry: usize) -> BlendLayer {
        let p = self.spec.placement_rect(cell);
        let n = self.spec.output_size();
        let mut weights = Vec::with_capacity(p.w * p.h);
        for y in p.y0..p.y1() {
            for x in p.x0..p.x1() {
                let idx = y * n + x;
                let new = dataset.image_pixel(entry, x - p.x0, y - p.y0);
                let w = if self.written[idx] {
                    self.band_weight(cell, &p, x, y)
                } else {
                    1.0
                };
                let px = &mut self.image[idx * 3..idx * 3 + 3];
                if w >= 1.0 {
                    px.copy_from_slice(&new);
                } else {
                    for (o, nv) in px.iter_mut().zip(new) {
                        *o = round_half_up(w * nv as f64 + (1.0 - w) * *o as f64);
                    }
                }
                weights.push(w);
            }
        }
        BlendLayer {
            cell,
            entry,
            rect: p,
            weights,
        }
    }

    /// Writes the mask tile of the same entry through the same weights,
    /// thresholds blended values at 0.5, opens the result with a 3x3 square
    /// under the blended pixels, and marks the cell filled.
    pub fn blend_mask(&mut self, dataset: &PatchDataset, layer: BlendLayer) {
        let p = layer.rect;
        let n = self.spec.output_size();
        for y in p.y0..p.y1() {
            for x in p.x0..p.x1() {
                let idx = y * n + x;
                let new = dataset.mask_pixel(layer.entry, x - p.x0, y - p.y0) as f64;
                let w = layer.weight(x, y);
                let v = if w >= 1.0 {
                    new
                } else {
                    w * new + (1.0 - w) * self.mask[idx] as f64
                };
                self.mask[idx] = u8::from(v >= 0.5);
                self.written[idx] = true;
            }
        }
        let targets: Vec<(usize, usize)> = layer.blended_pixels().collect();
        if !targets.is_empty() {
            let opened = open_3x3_at(&self.mask, &self.written, n, n, &targets);
            for (&(x, y), v) in targets.iter().zip(opened) {
                self.mask[y * n + x] = v;
            }
        }
        let ci = self.spec.cell_index(layer.cell);
        self.cells[ci] = Some(layer.entry);
    }

    pub fn into_pair(self) -> Result<LabeledPair> {
        if !self.is_complete() {
            return Err(Error::InvalidParameter("reconstruction canvas is incomplete".into()));
        }
        let n = self.spec.output_size();
        LabeledPair::new(RasterImage::new(n, n, self.image)?, BinaryMask::new(n, n, self.mask)?)
    }
}

/// 3x3 opening evaluated at `targets` only. Neighbours outside the raster or
/// with `valid == false` are ignored by both the erosion and the dilation.
pub(crate) fn open_3x3_at(mask: &[u8], valid: &[bool], w: usize, h: usize, targets: &[(usize, usize)]) -> Vec<u8> {
    let neighbours = |x: usize, y: usize| {
        let xs = x.saturating_sub(1)..=(x + 1).min(w - 1);
        let ys = y.saturating_sub(1)..=(y + 1).min(h - 1);
        ys.flat_map(move |yy| xs.clone().map(move |xx| (xx, yy)))
            .filter(|&(xx, yy)| valid[yy * w + xx])
    };
    let erode = |x: usize, y: usize| neighbours(x, y).map(|(xx, yy)| mask[yy * w + xx]).min().unwrap_or(0);
    targets
        .iter()
        .map(|&(x, y)| neighbours(x, y).map(|(xx, yy)| erode(xx, yy)).max().unwrap_or(0))
        .collect()
}

/// Binary opening of a whole mask with a 3x3 square; pixels beyond the
/// raster are ignored.
pub fn binary_opening_3x3(mask: &BinaryMask) -> BinaryMask {
    let (w, h) = (mask.width(), mask.height());
    let valid = vec![true; w * h];
    let targets: Vec<_> = (0..h).flat_map(|y| (0..w).map(move |x| (x, y))).collect();
    BinaryMask::new(w, h, open_3x3_at(mask.data(), &valid, w, h, &targets)).expect("opening keeps values binary")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn weight_midpoint_and_ends() {
        assert_eq!(transition_weight(0.5), 0.5);
        assert_eq!(transition_weight(0.0), 0.0);
        assert_eq!(transition_weight(1.0), 1.0);
        assert!((transition_weight(0.25) - (3.0 * 0.0625 - 2.0 * 0.015625)).abs() < 1e-15);
    }

    /// Opening as the union of every fully-set 3x3 window, with windows
    /// truncated at the raster edge.
    fn opening_oracle(mask: &BinaryMask) -> BinaryMask {
        let (w, h) = (mask.width() as i64, mask.height() as i64);
        let inside = |x: i64, y: i64| x >= 0 && y >= 0 && x < w && y < h;
        let window_full = |cx: i64, cy: i64| {
            (-1..=1).all(|dy| {
                (-1..=1).all(|dx| !inside(cx + dx, cy + dy) || mask.is_villous((cx + dx) as usize, (cy + dy) as usize))
            })
        };
        BinaryMask::from_fn(w as usize, h as usize, |x, y| {
            let (x, y) = (x as i64, y as i64);
            (-1..=1).any(|dy| (-1..=1).any(|dx| inside(x + dx, y + dy) && window_full(x + dx, y + dy)))
        })
    }

    #[test]
    fn opening_removes_specks_keeps_blocks() {
        let m = BinaryMask::from_fn(9, 9, |x, y| (x == 1 && y == 1) || (4..8).contains(&x) && (3..7).contains(&y));
        let o = binary_opening_3x3(&m);
        assert!(!o.is_villous(1, 1));
        assert_eq!(o.villous_count(), 16);
        let checker = BinaryMask::from_fn(8, 8, |x, y| (x + y) % 2 == 0);
        assert_eq!(binary_opening_3x3(&checker), opening_oracle(&checker));
    }

    proptest! {
        #[test]
        fn opening_matches_window_union(w in 1usize..16, h in 1usize..16, bits in proptest::collection::vec(any::<bool>(), 256)) {
            let m = BinaryMask::from_fn(w, h, |x, y| bits[y * 16 + x]);
            prop_assert_eq!(binary_opening_3x3(&m), opening_oracle(&m));
        }
    }
}
