use std::collections::BTreeSet;

use super::watershed::ChamberLabeling;

/// Chamber adjacency graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChamberNetwork {
    nodes: Vec<u32>,
    edges: BTreeSet<(u32, u32)>,
}

impl ChamberNetwork {
    pub fn nodes(&self) -> &[u32] {
        &self.nodes
    }

    /// Unordered pairs stored as `(low, high)`.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn degree(&self, node: u32) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == node || b == node).count()
    }

    /// Mean number of links per node, `2E / N`; 0 for an empty network.
    pub fn mean_connectivity(&self) -> f64 {
        if self.nodes.is_empty() {
            0.0
        } else {
            2.0 * self.edges.len() as f64 / self.nodes.len() as f64
        }
    }
}

/// Links every pair of chambers that touch in the 8-neighbourhood.
pub fn extract_network(labeling: &ChamberLabeling) -> ChamberNetwork {
    let (w, h) = (labeling.width(), labeling.height());
    let mut edges = BTreeSet::new();
    for y in 0..h {
        for x in 0..w {
            let a = labeling.label(x, y);
            if a == 0 {
                continue;
            }
            // Forward half of the 8-neighbourhood covers every pair once.
            for (dx, dy) in [(1i64, 0i64), (-1, 1), (0, 1), (1, 1)] {
                let (nx, ny) = (x as i64 + dx, y as i64 + dy);
                if nx < 0 || nx >= w as i64 || ny >= h as i64 {
                    continue;
                }
                let b = labeling.label(nx as usize, ny as usize);
                if b != 0 && b != a {
                    edges.insert((a.min(b), a.max(b)));
                }
            }
        }
    }
    ChamberNetwork {
        nodes: (1..=labeling.chamber_count() as u32).collect(),
        edges,
    }
}
