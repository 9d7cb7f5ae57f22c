//! Bundled synthetic exemplar.
//!
//! A procedurally generated stand-in for an H&E placenta crop: branching
//! pink villi with a darker trophoblast rim and scattered nuclei, separated by
//! pale intervillous space holding red blood cells. Generation uses only
//! IEEE-exact arithmetic so the bundled PNGs can be checked against it.

use rand::Rng as _;

use crate::image::{decode_image, decode_mask};
use crate::rng::{rng_from_seed, Rng};
use crate::{BinaryMask, LabeledPair, RasterImage};

pub const EXEMPLAR_SIZE: usize = 256;
pub const EXEMPLAR_SEED: u64 = 20_230_512;
const BRANCHES: f64 = 50.0;
const RMIN: f64 = 5.0;
const RSPAN: f64 = 7.0;

const BUNDLED_IMAGE: &[u8] = include_bytes!("../assets/exemplar_img.png");
const BUNDLED_MASK: &[u8] = include_bytes!("../assets/exemplar_mask.png");

/// The bundled 256 x 256 exemplar, decoded from the shipped PNGs.
pub fn bundled_exemplar() -> LabeledPair {
    let image = decode_image(BUNDLED_IMAGE).expect("bundled exemplar image decodes");
    let mask = decode_mask(BUNDLED_MASK).expect("bundled exemplar mask decodes");
    LabeledPair::new(image, mask).expect("bundled exemplar halves agree in size")
}

pub fn bundled_exemplar_png() -> (&'static [u8], &'static [u8]) {
    (BUNDLED_IMAGE, BUNDLED_MASK)
}

struct Ball {
    x: f64,
    y: f64,
    r2: f64,
}

/// Smooth random field on a coarse lattice, bilinearly interpolated, in [0, 1).
struct ValueNoise {
    cell: usize,
    cols: usize,
    values: Vec<f64>,
}

impl ValueNoise {
    fn new(size: usize, cell: usize, rng: &mut Rng) -> Self {
        let cols = size / cell + 2;
        let values = (0..cols * cols).map(|_| rng.gen::<f64>()).collect();
        Self { cell, cols, values }
    }

    fn at(&self, x: usize, y: usize) -> f64 {
        let (gx, gy) = (x / self.cell, y / self.cell);
        let tx = (x % self.cell) as f64 / self.cell as f64;
        let ty = (y % self.cell) as f64 / self.cell as f64;
        let v = |i: usize, j: usize| self.values[j * self.cols + i];
        let top = v(gx, gy) * (1.0 - tx) + v(gx + 1, gy) * tx;
        let bottom = v(gx, gy + 1) * (1.0 - tx) + v(gx + 1, gy + 1) * tx;
        top * (1.0 - ty) + bottom * ty
    }
}

/// Shortest signed offset on a ring of length `side`.
fn wrap(d: f64, side: f64) -> f64 {
    if d > side / 2.0 {
        d - side
    } else if d < -side / 2.0 {
        d + side
    } else {
        d
    }
}

fn clamp_u8(v: f64) -> u8 {
    v.round().clamp(0.0, 255.0) as u8
}

fn stamp_discs(
    size: usize,
    count: usize,
    radius: (f64, f64),
    rng: &mut Rng,
    mut accept: impl FnMut(usize, usize) -> bool,
) -> Vec<bool> {
    let mut hit = vec![false; size * size];
    for _ in 0..count {
        let cx = rng.gen::<f64>() * size as f64;
        let cy = rng.gen::<f64>() * size as f64;
        let r = radius.0 + rng.gen::<f64>() * (radius.1 - radius.0);
        if !accept(cx as usize, cy as usize) {
            continue;
        }
        let (x0, x1) = ((cx - r).floor().max(0.0) as usize, ((cx + r).ceil() as usize).min(size - 1));
        let (y0, y1) = ((cy - r).floor().max(0.0) as usize, ((cy + r).ceil() as usize).min(size - 1));
        for y in y0..=y1 {
            for x in x0..=x1 {
                let (dx, dy) = (x as f64 + 0.5 - cx, y as f64 + 0.5 - cy);
                if dx * dx + dy * dy <= r * r {
                    hit[y * size + x] = true;
                }
            }
        }
    }
    hit
}

/// Generates a `size` x `size` synthetic exemplar from `seed`.
pub fn synthetic_exemplar(size: usize, seed: u64) -> LabeledPair {
    let mut rng = rng_from_seed(seed);
    let scale = size as f64 / EXEMPLAR_SIZE as f64;

    // Villi: random-walk chains of soft balls, thresholded as a metaball field
    // on a torus so the border is statistically no different from the centre.
    let mut balls = Vec::new();
    let branches = (BRANCHES * scale * scale).ceil() as usize;
    for _ in 0..branches {
        let mut x = rng.gen::<f64>() * size as f64;
        let mut y = rng.gen::<f64>() * size as f64;
        let (mut hx, mut hy) = (rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
        let steps = rng.gen_range(2..9);
        let base = (RMIN + rng.gen::<f64>() * RSPAN) * scale;
        for _ in 0..steps {
            let r = base * (0.7 + 0.6 * rng.gen::<f64>());
            balls.push(Ball { x, y, r2: r * r });
            hx += (rng.gen::<f64>() - 0.5) * 0.9;
            hy += (rng.gen::<f64>() - 0.5) * 0.9;
            let norm = (hx * hx + hy * hy).sqrt().max(1e-9);
            hx /= norm;
            hy /= norm;
            x = (x + hx * base * 1.1).rem_euclid(size as f64);
            y = (y + hy * base * 1.1).rem_euclid(size as f64);
        }
    }
    let side = size as f64;
    let field: Vec<f64> = (0..size * size)
        .map(|i| {
            let (px, py) = ((i % size) as f64 + 0.5, (i / size) as f64 + 0.5);
            balls
                .iter()
                .map(|b| {
                    let (dx, dy) = (wrap(px - b.x, side), wrap(py - b.y, side));
                    let d2 = dx * dx + dy * dy;
                    let t = (1.0 - d2 / (2.0 * b.r2)).max(0.0);
                    t * t
                })
                .sum()
        })
        .collect();
    // A lone ball reaches the threshold exactly at its radius.
    let threshold = 0.25;
    let villous: Vec<bool> = field.iter().map(|&f| f >= threshold).collect();
    let rim: Vec<bool> = field.iter().map(|&f| f >= threshold && f < threshold * 1.8).collect();

    let stain = ValueNoise::new(size, (24.0 * scale).max(4.0) as usize, &mut rng);
    let nuclei = stamp_discs(size, (900.0 * scale * scale) as usize, (1.2, 2.4), &mut rng, |x, y| {
        villous[y * size + x]
    });
    let cells = stamp_discs(size, (260.0 * scale * scale) as usize, (1.8, 3.0), &mut rng, |x, y| {
        !villous[y * size + x]
    });

    let mut data = Vec::with_capacity(size * size * 3);
    for i in 0..size * size {
        let (x, y) = (i % size, i / size);
        let tone = stain.at(x, y) - 0.5;
        let base: [f64; 3] = if villous[i] {
            if nuclei[i] {
                [92.0, 44.0, 128.0]
            } else if rim[i] {
                [176.0, 86.0, 156.0]
            } else {
                [220.0, 146.0, 186.0]
            }
        } else if cells[i] {
            [214.0, 102.0, 118.0]
        } else {
            [244.0, 234.0, 240.0]
        };
        let amp = if villous[i] { 36.0 } else { 10.0 };
        let grain = if villous[i] { 14.0 } else { 6.0 };
        for c in base {
            let n = (rng.gen::<f64>() - 0.5) * grain;
            data.push(clamp_u8(c + tone * amp + n));
        }
    }
    let image = RasterImage::new(size, size, data).expect("buffer sized to the raster");
    let mask = BinaryMask::from_fn(size, size, |x, y| villous[y * size + x]);
    LabeledPair::new(image, mask).expect("image and mask share the raster size")
}

/// The generator output the bundled PNGs were written from.
pub fn default_synthetic_exemplar() -> LabeledPair {
    synthetic_exemplar(EXEMPLAR_SIZE, EXEMPLAR_SEED)
}
