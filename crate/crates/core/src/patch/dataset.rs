use serde::{Deserialize, Serialize};

use super::grid::GridSpec;
use crate::{Error, FlipAxis, LabeledPair, RasterImage, Result};

pub const DEFAULT_STRIDE: usize = 5;

/// One dataset entry: a square window of the exemplar, possibly flipped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatchEntry {
    pub index: usize,
    pub flip: FlipAxis,
    /// Top-left corner of the source window in the unflipped exemplar.
    pub source: (usize, usize),
}

/// Overlapping square tiles swept over an exemplar at a fixed stride, in four
/// flip groups (`None`, `X`, `Y`, `XY`, in that index order).
///
/// Tiles are not copied out: each group keeps the whole exemplar under its
/// flip, and a tile is a window into that frame.
#[derive(Clone, Debug)]
pub struct PatchDataset {
    frames: [LabeledPair; 4],
    extent: usize,
    stride: usize,
    positions: Vec<(usize, usize)>,
}

fn group_of(flip: FlipAxis) -> usize {
    FlipAxis::ALL.iter().position(|&f| f == flip).expect("closed set")
}

impl PatchDataset {
    /// Dataset with tiles sized for `spec`.
    pub fn build(exemplar: &LabeledPair, spec: &GridSpec, stride: usize) -> Result<Self> {
        Self::with_extent(exemplar, spec.tile_extent(), stride)
    }

    pub fn with_extent(exemplar: &LabeledPair, extent: usize, stride: usize) -> Result<Self> {
        if stride == 0 {
            return Err(Error::InvalidParameter("stride must be >= 1".into()));
        }
        let (w, h) = (exemplar.width(), exemplar.height());
        if extent == 0 || extent > w || extent > h {
            return Err(Error::ExemplarTooSmall {
                width: w,
                height: h,
                extent,
            });
        }
        let mut positions = Vec::new();
        for y in (0..=h - extent).step_by(stride) {
            for x in (0..=w - extent).step_by(stride) {
                positions.push((x, y));
            }
        }
        let frames = FlipAxis::ALL.map(|f| exemplar.flip(f));
        Ok(Self {
            frames,
            extent,
            stride,
            positions,
        })
    }

    pub fn len(&self) -> usize {
        4 * self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Entries per flip group; indices `0..group_len()` are the unflipped ones.
    pub fn group_len(&self) -> usize {
        self.positions.len()
    }

    pub fn extent(&self) -> usize {
        self.extent
    }

    pub fn stride(&self) -> usize {
        self.stride
    }

    pub fn exemplar(&self) -> &LabeledPair {
        &self.frames[0]
    }

    pub fn entry(&self, index: usize) -> PatchEntry {
        let n = self.positions.len();
        PatchEntry {
            index,
            flip: FlipAxis::ALL[index / n],
            source: self.positions[index % n],
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = PatchEntry> + '_ {
        (0..self.len()).map(|i| self.entry(i))
    }

    /// Index of the entry with the given flip and source position.
    pub fn index_of(&self, flip: FlipAxis, source: (usize, usize)) -> Option<usize> {
        let p = self.positions.iter().position(|&s| s == source)?;
        Some(group_of(flip) * self.positions.len() + p)
    }

    /// Frame and top-left corner of the entry's window inside that frame.
    #[inline]
    pub(crate) fn locate(&self, index: usize) -> (&LabeledPair, usize, usize) {
        let n = self.positions.len();
        let flip = FlipAxis::ALL[index / n];
        let (sx, sy) = self.positions[index % n];
        let frame = &self.frames[index / n];
        let fx = if flip.flips_x() { frame.width() - self.extent - sx } else { sx };
        let fy = if flip.flips_y() { frame.height() - self.extent - sy } else { sy };
        (frame, fx, fy)
    }

    /// RGB bytes of `len` pixels of entry `index` starting at window `(wx, wy)`.
    #[inline]
    pub(crate) fn image_row(&self, index: usize, wx: usize, wy: usize, len: usize) -> &[u8] {
        let (frame, fx, fy) = self.locate(index);
        let start = ((fy + wy) * frame.width() + fx + wx) * 3;
        &frame.image().data()[start..start + len * 3]
    }

    #[inline]
    pub(crate) fn image_pixel(&self, index: usize, wx: usize, wy: usize) -> [u8; 3] {
        let (frame, fx, fy) = self.locate(index);
        frame.image().get(fx + wx, fy + wy)
    }

    #[inline]
    pub(crate) fn mask_pixel(&self, index: usize, wx: usize, wy: usize) -> u8 {
        let (frame, fx, fy) = self.locate(index);
        frame.mask().get(fx + wx, fy + wy)
    }

    /// The full tile of entry `index` as an owned pair.
    pub fn tile(&self, index: usize) -> LabeledPair {
        let (frame, fx, fy) = self.locate(index);
        frame.crop(fx, fy, self.extent, self.extent).expect("window inside frame")
    }

    pub fn image_tile(&self, index: usize) -> RasterImage {
        self.tile(index).into_parts().0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{BinaryMask, RasterImage};

    fn exemplar(w: usize, h: usize) -> LabeledPair {
        let img = RasterImage::from_fn(w, h, |x, y| [(x * 3) as u8, (y * 7) as u8, (x * y) as u8]);
        let mask = BinaryMask::from_fn(w, h, |x, y| (x / 5 + y / 7) % 2 == 1);
        LabeledPair::new(img, mask).unwrap()
    }

    #[test]
    fn entry_count_matches_sweep_formula() {
        // floor((256 - 46) / 5) + 1 = 43 positions per axis.
        let d = PatchDataset::with_extent(&exemplar(256, 256), 46, 5).unwrap();
        assert_eq!(d.len(), 4 * 43 * 43);
        assert_eq!(d.len(), 7396);
        let d = PatchDataset::with_extent(&exemplar(100, 60), 20, 7).unwrap();
        assert_eq!(d.len(), 4 * (80 / 7 + 1) * (40 / 7 + 1));
    }

    #[test]
    fn single_position_and_too_small() {
        let ex = exemplar(64, 64);
        let d = PatchDataset::with_extent(&ex, 64, 64).unwrap();
        assert_eq!(d.len(), 4);
        assert!(matches!(
            PatchDataset::with_extent(&ex, 65, 64),
            Err(Error::ExemplarTooSmall { .. })
        ));
        let g = GridSpec::new(256, 2, 5).unwrap();
        assert!(matches!(PatchDataset::build(&ex, &g, 5), Err(Error::ExemplarTooSmall { .. })));
    }

    #[test]
    fn tiles_are_verbatim_crops_under_their_flip() {
        let ex = exemplar(70, 50);
        let d = PatchDataset::with_extent(&ex, 16, 6).unwrap();
        let groups: Vec<_> = FlipAxis::ALL
            .iter()
            .map(|&f| d.entries().filter(|e| e.flip == f).count())
            .collect();
        assert_eq!(groups, vec![d.group_len(); 4]);
        for e in d.entries() {
            let (x, y) = e.source;
            let expected = ex.crop(x, y, 16, 16).unwrap().flip(e.flip);
            assert_eq!(d.tile(e.index), expected, "entry {e:?}");
            assert_eq!(d.image_pixel(e.index, 3, 5), expected.image().get(3, 5));
            assert_eq!(d.mask_pixel(e.index, 9, 2), expected.mask().get(9, 2));
            assert_eq!(d.index_of(e.flip, e.source), Some(e.index));
        }
    }
}
