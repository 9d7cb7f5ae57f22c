use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Output raster and reconstruction grid geometry.
///
/// The square output of side `output_size` is cut into `grid_ratio` x
/// `grid_ratio` cells of side `output_size / grid_ratio`; the last row and
/// column absorb any remainder. A tile placed on a cell spills `overlap`
/// pixels past every cell edge that has a neighbouring cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    output_size: usize,
    grid_ratio: usize,
    overlap: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub col: usize,
    pub row: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
    Top,
    Bottom,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::Left, Side::Right, Side::Top, Side::Bottom];
}

/// Axis-aligned pixel rectangle `[x0, x0 + w) x [y0, y0 + h)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rect {
    pub x0: usize,
    pub y0: usize,
    pub w: usize,
    pub h: usize,
}

impl Rect {
    pub fn x1(&self) -> usize {
        self.x0 + self.w
    }

    pub fn y1(&self) -> usize {
        self.y0 + self.h
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        x >= self.x0 && x < self.x1() && y >= self.y0 && y < self.y1()
    }
}

impl GridSpec {
    pub const DEFAULT_GRID_RATIO: usize = 6;
    pub const DEFAULT_OVERLAP: usize = 5;

    pub fn new(output_size: usize, grid_ratio: usize, overlap: usize) -> Result<Self> {
        if grid_ratio == 0 {
            return Err(Error::InvalidParameter("grid_ratio must be >= 1".into()));
        }
        if overlap == 0 {
            return Err(Error::InvalidParameter("overlap must be >= 1".into()));
        }
        let tile = output_size / grid_ratio;
        if tile <= 2 * overlap {
            return Err(Error::InvalidParameter(format!(
                "tile size {tile} (output {output_size} / ratio {grid_ratio}) must exceed twice the overlap {overlap}"
            )));
        }
        Ok(Self {
            output_size,
            grid_ratio,
            overlap,
        })
    }

    pub fn output_size(&self) -> usize {
        self.output_size
    }

    pub fn grid_ratio(&self) -> usize {
        self.grid_ratio
    }

    pub fn overlap(&self) -> usize {
        self.overlap
    }

    /// Nominal cell side.
    pub fn tile_size(&self) -> usize {
        self.output_size / self.grid_ratio
    }

    pub fn cell_count(&self) -> usize {
        self.grid_ratio * self.grid_ratio
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..self.grid_ratio).flat_map(move |row| (0..self.grid_ratio).map(move |col| Cell { col, row }))
    }

    pub fn cell_index(&self, cell: Cell) -> usize {
        cell.row * self.grid_ratio + cell.col
    }

    fn span(&self, i: usize) -> (usize, usize) {
        let t = self.tile_size();
        let start = i * t;
        let len = if i + 1 == self.grid_ratio {
            self.output_size - start
        } else {
            t
        };
        (start, len)
    }

    /// Canvas rectangle owned by `cell`.
    pub fn cell_rect(&self, cell: Cell) -> Rect {
        let (x0, w) = self.span(cell.col);
        let (y0, h) = self.span(cell.row);
        Rect { x0, y0, w, h }
    }

    pub fn neighbor(&self, cell: Cell, side: Side) -> Option<Cell> {
        let n = self.grid_ratio;
        match side {
            Side::Left => cell.col.checked_sub(1).map(|col| Cell { col, ..cell }),
            Side::Right => (cell.col + 1 < n).then_some(Cell {
                col: cell.col + 1,
                ..cell
            }),
            Side::Top => cell.row.checked_sub(1).map(|row| Cell { row, ..cell }),
            Side::Bottom => (cell.row + 1 < n).then_some(Cell {
                row: cell.row + 1,
                ..cell
            }),
        }
    }

    /// Canvas rectangle written when a tile is placed on `cell`: the cell
    /// grown by `overlap` on every side that has a neighbour.
    pub fn placement_rect(&self, cell: Cell) -> Rect {
        let r = self.cell_rect(cell);
        let grow = |side| {
            if self.neighbor(cell, side).is_some() {
                self.overlap
            } else {
                0
            }
        };
        let (l, rt, t, b) = (grow(Side::Left), grow(Side::Right), grow(Side::Top), grow(Side::Bottom));
        Rect {
            x0: r.x0 - l,
            y0: r.y0 - t,
            w: r.w + l + rt,
            h: r.h + t + b,
        }
    }

    /// Side of the square dataset tiles: the largest placement extent.
    pub fn tile_extent(&self) -> usize {
        (0..self.grid_ratio)
            .map(|col| self.placement_rect(Cell { col, row: 0 }).w)
            .max()
            .unwrap_or(self.output_size)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(GridSpec::new(256, 0, 5).is_err());
        assert!(GridSpec::new(256, 6, 0).is_err());
        assert!(GridSpec::new(256, 20, 5).is_ok());
        assert!(GridSpec::new(256, 26, 5).is_err());
    }

    #[test]
    fn geometry_ratio_6() {
        let g = GridSpec::new(256, 6, 5).unwrap();
        assert_eq!(g.tile_size(), 42);
        let last = g.cell_rect(Cell { col: 5, row: 5 });
        assert_eq!((last.x0, last.w), (210, 46));
        assert_eq!(g.tile_extent(), 52);
        let corner = g.placement_rect(Cell { col: 0, row: 0 });
        assert_eq!(corner, Rect { x0: 0, y0: 0, w: 47, h: 47 });
        let mid = g.placement_rect(Cell { col: 2, row: 3 });
        assert_eq!(mid, Rect { x0: 79, y0: 121, w: 52, h: 52 });
    }

    #[test]
    fn single_cell_covers_everything() {
        let g = GridSpec::new(256, 1, 5).unwrap();
        assert_eq!(g.tile_extent(), 256);
        assert_eq!(g.placement_rect(Cell { col: 0, row: 0 }), Rect { x0: 0, y0: 0, w: 256, h: 256 });
    }

    #[test]
    fn cells_partition_the_canvas() {
        for ratio in [1, 2, 3, 6, 7, 20] {
            let g = GridSpec::new(256, ratio, 5).unwrap();
            let mut hits = vec![0u8; 256 * 256];
            for c in g.cells() {
                let r = g.cell_rect(c);
                for y in r.y0..r.y1() {
                    for x in r.x0..r.x1() {
                        hits[y * 256 + x] += 1;
                    }
                }
            }
            assert!(hits.iter().all(|&h| h == 1), "ratio {ratio}");
            assert_eq!(g.cells().count(), ratio * ratio);
        }
    }
}
