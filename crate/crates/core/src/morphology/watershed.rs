use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, VecDeque};

use super::distance::DistanceMap;

pub const DEFAULT_H_MIN: f64 = 2.0;

/// Partition of the intervillous pixels into watershed chambers.
#[derive(Clone, Debug, PartialEq)]
pub struct ChamberLabeling {
    width: usize,
    height: usize,
    /// 0 on villous pixels, `1..=chamber_count` elsewhere.
    labels: Vec<u32>,
    radii: Vec<f64>,
    areas: Vec<usize>,
}

impl ChamberLabeling {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn label(&self, x: usize, y: usize) -> u32 {
        self.labels[y * self.width + x]
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn chamber_count(&self) -> usize {
        self.radii.len()
    }

    /// Maximal inscribed radius of chamber `id` (1-based).
    pub fn radius(&self, id: u32) -> f64 {
        self.radii[id as usize - 1]
    }

    /// Radii indexed by `id - 1`.
    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    /// Pixel areas indexed by `id - 1`.
    pub fn areas(&self) -> &[usize] {
        &self.areas
    }
}

#[derive(Clone, Copy, PartialEq)]
struct Key(f64);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

fn neighbours4(i: usize, w: usize, h: usize) -> impl Iterator<Item = usize> {
    let (x, y) = (i % w, i / w);
    [
        (x > 0).then(|| i - 1),
        (x + 1 < w).then(|| i + 1),
        (y > 0).then(|| i - w),
        (y + 1 < h).then(|| i + w),
    ]
    .into_iter()
    .flatten()
}

/// Morphological reconstruction by dilation of `marker` under `limit`, over
/// the pixels where `domain` holds, 4-connected.
fn reconstruct_by_dilation(marker: &[f64], limit: &[f64], domain: &[bool], w: usize, h: usize) -> Vec<f64> {
    let mut rec = marker.to_vec();
    let mut done = vec![false; rec.len()];
    let mut heap: BinaryHeap<(Key, Reverse<usize>)> = (0..rec.len())
        .filter(|&i| domain[i])
        .map(|i| (Key(rec[i]), Reverse(i)))
        .collect();
    while let Some((Key(v), Reverse(i))) = heap.pop() {
        if done[i] || v < rec[i] {
            continue;
        }
        done[i] = true;
        for j in neighbours4(i, w, h) {
            if !domain[j] || done[j] {
                continue;
            }
            let nv = v.min(limit[j]);
            if nv > rec[j] {
                rec[j] = nv;
                heap.push((Key(nv), Reverse(j)));
            }
        }
    }
    rec
}

/// Marker-controlled watershed of the negated distance map.
///
/// Markers are the regional maxima left after suppressing maxima shallower
/// than `h_min` (h-maxima transform). Flooding proceeds from the deepest
/// pixels outwards; a pixel reached by several basins joins the neighbouring
/// basin whose pixel has the larger distance, ties going to the lower label.
pub fn watershed_chambers(dmap: &DistanceMap, h_min: f64) -> ChamberLabeling {
    let (w, h) = (dmap.width(), dmap.height());
    let f = dmap.values();
    let void: Vec<bool> = f.iter().map(|&v| v > 0.0).collect();
    let h_min = h_min.max(0.0);
    let rec = if h_min > 0.0 {
        let marker: Vec<f64> = f.iter().map(|&v| (v - h_min).max(0.0)).collect();
        reconstruct_by_dilation(&marker, f, &void, w, h)
    } else {
        f.to_vec()
    };

    // Regional maxima of the suppressed map become markers.
    let mut labels = vec![0u32; w * h];
    let mut visited = vec![false; w * h];
    let mut next_label = 0u32;
    for start in 0..w * h {
        if !void[start] || visited[start] {
            continue;
        }
        let level = rec[start];
        let mut plateau = vec![start];
        let mut queue = VecDeque::from([start]);
        visited[start] = true;
        let mut is_max = true;
        while let Some(i) = queue.pop_front() {
            for j in neighbours4(i, w, h) {
                if !void[j] {
                    continue;
                }
                if rec[j] > level {
                    is_max = false;
                } else if rec[j] == level && !visited[j] {
                    visited[j] = true;
                    plateau.push(j);
                    queue.push_back(j);
                }
            }
        }
        if is_max {
            next_label += 1;
            for i in plateau {
                labels[i] = next_label;
            }
        }
    }

    // Priority flood on the original distances: deepest first, FIFO on ties.
    let mut queued = vec![false; w * h];
    let mut heap: BinaryHeap<(Key, Reverse<u64>, usize)> = BinaryHeap::new();
    let mut counter = 0u64;
    for i in 0..w * h {
        if labels[i] != 0 {
            queued[i] = true;
        }
    }
    for i in 0..w * h {
        if labels[i] == 0 {
            continue;
        }
        for j in neighbours4(i, w, h) {
            if void[j] && !queued[j] {
                queued[j] = true;
                heap.push((Key(f[j]), Reverse(counter), j));
                counter += 1;
            }
        }
    }
    while let Some((_, _, i)) = heap.pop() {
        let mut best: Option<(f64, u32)> = None;
        for j in neighbours4(i, w, h) {
            let l = labels[j];
            if l == 0 {
                continue;
            }
            let better = match best {
                None => true,
                Some((bv, bl)) => f[j] > bv || (f[j] == bv && l < bl),
            };
            if better {
                best = Some((f[j], l));
            }
        }
        labels[i] = best.expect("queued pixels touch a labelled pixel").1;
        for j in neighbours4(i, w, h) {
            if void[j] && !queued[j] {
                queued[j] = true;
                heap.push((Key(f[j]), Reverse(counter), j));
                counter += 1;
            }
        }
    }

    let n = next_label as usize;
    let mut radii = vec![0.0f64; n];
    let mut areas = vec![0usize; n];
    for (i, &l) in labels.iter().enumerate() {
        if l > 0 {
            let k = l as usize - 1;
            radii[k] = radii[k].max(f[i]);
            areas[k] += 1;
        }
    }
    ChamberLabeling {
        width: w,
        height: h,
        labels,
        radii,
        areas,
    }
}
