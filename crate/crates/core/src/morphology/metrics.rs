use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::distance::distance_map;
use super::network::extract_network;
use super::watershed::watershed_chambers;
use crate::BinaryMask;

/// Chamber radius histogram with unit-width bins `[k, k + 1)`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RadiusHistogram {
    pub bin_width: f64,
    pub counts: Vec<usize>,
}

impl RadiusHistogram {
    pub fn from_radii(radii: &[f64]) -> Self {
        let mut counts = Vec::new();
        for &r in radii {
            let k = r.floor() as usize;
            if counts.len() <= k {
                counts.resize(k + 1, 0);
            }
            counts[k] += 1;
        }
        Self { bin_width: 1.0, counts }
    }

    pub fn bin_center(&self, k: usize) -> f64 {
        (k as f64 + 0.5) * self.bin_width
    }

    /// `bin_center,count` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("bin_center,count\n");
        for (k, c) in self.counts.iter().enumerate() {
            let _ = writeln!(s, "{},{}", self.bin_center(k), c);
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MorphometricsReport {
    pub width: usize,
    pub height: usize,
    pub intervillous_pixels: usize,
    /// Intervillous pixels over all pixels.
    pub volume_fraction: f64,
    /// Length of the villous/intervillous interface in pixels, raster border
    /// included as wall.
    pub interface_length: f64,
    /// 4-neighbour villous/intervillous pixel edges, raster border included.
    pub boundary_edges: usize,
    /// `interface_length / intervillous_pixels`, in 1/pixel.
    pub specific_surface: f64,
    pub chamber_count: usize,
    pub mean_chamber_radius: f64,
    pub network_edges: usize,
    pub mean_connectivity: f64,
    pub radius_distribution: RadiusHistogram,
}

/// Counts of straight half-unit and diagonal (`sqrt(2)/2`) interface pieces.
///
/// Inside the raster the interface runs midway between the centres of
/// adjacent villous and intervillous pixels (marching squares). Along the
/// raster border, which counts as wall, it follows the outer pixel edges.
fn interface_pieces(mask: &BinaryMask) -> (usize, usize) {
    let (w, h) = (mask.width() as i64, mask.height() as i64);
    // Some(true) = intervillous, Some(false) = villous, None = beyond border.
    let at = |x: i64, y: i64| -> Option<bool> {
        (x >= 0 && y >= 0 && x < w && y < h).then(|| !mask.is_villous(x as usize, y as usize))
    };
    let (mut halves, mut diagonals) = (0usize, 0usize);
    for y in -1..h {
        for x in -1..w {
            let c = [at(x, y), at(x + 1, y), at(x + 1, y + 1), at(x, y + 1)];
            if c.iter().any(Option::is_none) {
                // Crack edges inside this square: each contributes half of its
                // unit length here.
                let void = c.map(|v| v == Some(true));
                for (a, b) in [(0, 1), (1, 2), (2, 3), (3, 0)] {
                    if void[a] != void[b] {
                        halves += 1;
                    }
                }
                continue;
            }
            let v = c.map(|v| v == Some(true));
            match v.iter().filter(|&&b| b).count() {
                1 | 3 => diagonals += 1,
                2 if v[0] == v[2] => diagonals += 2,
                2 => halves += 2,
                _ => {}
            }
        }
    }
    (halves, diagonals)
}

/// Interface length between the phases; see [`MorphometricsReport`].
pub fn interface_length(mask: &BinaryMask) -> f64 {
    let (halves, diagonals) = interface_pieces(mask);
    0.5 * halves as f64 + FRAC_1_SQRT_2 * diagonals as f64
}

/// 4-neighbour villous/intervillous edges, counting the raster border as
/// villous.
pub fn boundary_edge_count(mask: &BinaryMask) -> usize {
    let (w, h) = (mask.width(), mask.height());
    let void = |x: usize, y: usize| !mask.is_villous(x, y);
    let mut n = 0;
    for y in 0..h {
        for x in 0..w {
            if !void(x, y) {
                continue;
            }
            n += usize::from(x == 0 || !void(x - 1, y));
            n += usize::from(x + 1 == w || !void(x + 1, y));
            n += usize::from(y == 0 || !void(x, y - 1));
            n += usize::from(y + 1 == h || !void(x, y + 1));
        }
    }
    n
}

/// Volume fraction, specific surface, chamber radii and connectivity of the
/// intervillous phase.
pub fn morphometrics(mask: &BinaryMask, h_min: f64) -> MorphometricsReport {
    let (w, h) = (mask.width(), mask.height());
    let total = w * h;
    let void = total - mask.villous_count();
    let interface = interface_length(mask);
    let dmap = distance_map(mask);
    let chambers = watershed_chambers(&dmap, h_min);
    let network = extract_network(&chambers);
    let radii = chambers.radii();
    MorphometricsReport {
        width: w,
        height: h,
        intervillous_pixels: void,
        volume_fraction: if total == 0 { 0.0 } else { void as f64 / total as f64 },
        interface_length: interface,
        boundary_edges: boundary_edge_count(mask),
        specific_surface: if void == 0 { 0.0 } else { interface / void as f64 },
        chamber_count: chambers.chamber_count(),
        mean_chamber_radius: if radii.is_empty() {
            0.0
        } else {
            radii.iter().sum::<f64>() / radii.len() as f64
        },
        network_edges: network.edge_count(),
        mean_connectivity: network.mean_connectivity(),
        radius_distribution: RadiusHistogram::from_radii(radii),
    }
}
