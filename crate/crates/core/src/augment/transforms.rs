use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::image::sample::{reflect, remap, round_half_up};
use crate::{Error, LabeledPair, RasterImage, Result};

/// Which coordinate drives the vertical elastic wave.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum ElasticVariant {
    /// Both waves are driven by the column coordinate `x`.
    #[default]
    AsPrinted,
    /// The vertical wave is driven by the row coordinate `y`.
    YUsesY,
}

/// Parameters of the sinusoidal elastic warp.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ElasticParams {
    sigma: f64,
    mesh_ratio: f64,
    phase: f64,
    variant: ElasticVariant,
}

impl ElasticParams {
    /// `sigma` in `[0, 1]`, `mesh_ratio` in `[1, 5]`, `phase` in `[0, 1]`.
    pub fn new(sigma: f64, mesh_ratio: f64, phase: f64) -> Result<Self> {
        let ok = (0.0..=1.0).contains(&sigma) && (1.0..=5.0).contains(&mesh_ratio) && (0.0..=1.0).contains(&phase);
        if !ok {
            return Err(Error::InvalidParameter(format!(
                "elastic parameters out of range: sigma={sigma}, mesh_ratio={mesh_ratio}, phase={phase}"
            )));
        }
        Ok(Self {
            sigma,
            mesh_ratio,
            phase,
            variant: ElasticVariant::AsPrinted,
        })
    }

    pub fn with_variant(mut self, variant: ElasticVariant) -> Self {
        self.variant = variant;
        self
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn mesh_ratio(&self) -> f64 {
        self.mesh_ratio
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn variant(&self) -> ElasticVariant {
        self.variant
    }

    /// Displacement `(x_new - x, y_new - y)` of pixel `(x, y)` in a
    /// `width x height` raster.
    pub fn displacement(&self, width: usize, height: usize, x: f64, y: f64) -> (f64, f64) {
        let (s1, s2) = (width as f64, height as f64);
        let dx = 0.025 * s1 * self.sigma * (x / (s1 / self.mesh_ratio) * PI + PI * self.phase).sin();
        let driver = match self.variant {
            ElasticVariant::AsPrinted => x,
            ElasticVariant::YUsesY => y,
        };
        let dy = 0.025 * s2 * self.sigma * (driver / (s2 / self.mesh_ratio) * PI + PI * self.phase).cos();
        (dx, dy)
    }
}

/// Sinusoidal elastic warp. Output pixel `(x, y)` is read from the displaced
/// coordinate `(x_new, y_new)`; bilinear for the image, nearest for the mask,
/// clamped at the border.
pub fn elastic_deform(pair: &LabeledPair, params: &ElasticParams) -> LabeledPair {
    let (w, h) = (pair.width(), pair.height());
    let (img, mask) = remap(pair.image(), pair.mask(), |x, y| {
        let (dx, dy) = params.displacement(w, h, x as f64, y as f64);
        (x as f64 + dx, y as f64 + dy)
    });
    LabeledPair::new(img, mask).expect("dimensions preserved")
}

/// Scales every channel by `1 + delta`, clamping and rounding half up.
pub fn color_shift(image: &RasterImage, deltas: [f64; 3]) -> RasterImage {
    let mut out = image.clone();
    for px in out.data_mut().chunks_exact_mut(3) {
        for (v, d) in px.iter_mut().zip(deltas) {
            *v = round_half_up(*v as f64 * (1.0 + d));
        }
    }
    out
}

/// Upscales by `factor` and crops the centre back to the original size.
pub fn zoom(pair: &LabeledPair, factor: f64) -> Result<LabeledPair> {
    if !(factor >= 1.0 && factor.is_finite()) {
        return Err(Error::InvalidParameter(format!("zoom factor {factor} must be >= 1")));
    }
    let (w, h) = (pair.width(), pair.height());
    let wu = (w as f64 * factor).round() as usize;
    let hu = (h as f64 * factor).round() as usize;
    let (ox, oy) = ((wu - w) / 2, (hu - h) / 2);
    let (sx_scale, sy_scale) = (w as f64 / wu as f64, h as f64 / hu as f64);
    let (img, mask) = remap(pair.image(), pair.mask(), |x, y| {
        (
            (x + ox) as f64 * sx_scale + 0.5 * sx_scale - 0.5,
            (y + oy) as f64 * sy_scale + 0.5 * sy_scale - 0.5,
        )
    });
    Ok(LabeledPair::new(img, mask).expect("dimensions preserved"))
}

/// Clockwise rotation by `degrees` about the raster centre. Pixels revealed at
/// the corners are filled by reflecting the source across the border.
pub fn rotate(pair: &LabeledPair, degrees: f64) -> LabeledPair {
    let (w, h) = (pair.width(), pair.height());
    let (cx, cy) = ((w as f64 - 1.0) / 2.0, (h as f64 - 1.0) / 2.0);
    let (sin, cos) = degrees.to_radians().sin_cos();
    let (img, mask) = remap(pair.image(), pair.mask(), |x, y| {
        let (dx, dy) = (x as f64 - cx, y as f64 - cy);
        let sx = cx + cos * dx + sin * dy;
        let sy = cy - sin * dx + cos * dy;
        (reflect(sx, w), reflect(sy, h))
    });
    LabeledPair::new(img, mask).expect("dimensions preserved")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::BinaryMask;

    fn textured(n: usize) -> LabeledPair {
        let img = RasterImage::from_fn(n, n, |x, y| [(x * 7 + y) as u8, (y * 5) as u8, ((x * y) % 251) as u8]);
        let mask = BinaryMask::from_fn(n, n, |x, y| ((x / 4) + (y / 3)) % 2 == 0);
        LabeledPair::new(img, mask).unwrap()
    }

    #[test]
    fn elastic_zero_sigma_is_identity() {
        let p = textured(32);
        for (m, r) in [(1.0, 0.0), (3.3, 0.7), (5.0, 1.0)] {
            let params = ElasticParams::new(0.0, m, r).unwrap();
            assert_eq!(elastic_deform(&p, &params), p);
        }
    }

    #[test]
    fn elastic_peak_displacement() {
        // sigma=1, M=1, R=0 on 256: 0.025 * 256 * sin(pi/2) = 6.4 at x = 128.
        let params = ElasticParams::new(1.0, 1.0, 0.0).unwrap();
        let (dx, _) = params.displacement(256, 256, 128.0, 0.0);
        assert!((dx - 6.4).abs() < 1e-12);
    }

    #[test]
    fn elastic_variant_changes_vertical_driver() {
        let p = ElasticParams::new(0.5, 2.0, 0.25).unwrap();
        let (_, a) = p.displacement(100, 100, 10.0, 40.0);
        let (_, b) = p.with_variant(ElasticVariant::YUsesY).displacement(100, 100, 10.0, 40.0);
        let expect_a = 0.025 * 100.0 * 0.5 * (10.0 / 50.0 * PI + PI * 0.25).cos();
        let expect_b = 0.025 * 100.0 * 0.5 * (40.0 / 50.0 * PI + PI * 0.25).cos();
        assert!((a - expect_a).abs() < 1e-12);
        assert!((b - expect_b).abs() < 1e-12);
    }

    #[test]
    fn elastic_params_validated() {
        assert!(ElasticParams::new(1.1, 2.0, 0.0).is_err());
        assert!(ElasticParams::new(0.5, 0.5, 0.0).is_err());
        assert!(ElasticParams::new(0.5, 2.0, -0.1).is_err());
    }

    #[test]
    fn color_shift_cases() {
        let img = RasterImage::from_fn(2, 1, |x, _| if x == 0 { [200, 100, 0] } else { [250, 10, 255] });
        assert_eq!(color_shift(&img, [0.0; 3]), img);
        let s = color_shift(&img, [0.1, -0.1, 0.1]);
        assert_eq!(s.get(0, 0), [220, 90, 0]);
        assert_eq!(s.get(1, 0), [255, 9, 255]);
    }

    #[test]
    fn zoom_identity_and_constant() {
        let p = textured(20);
        assert_eq!(zoom(&p, 1.0).unwrap(), p);
        let flat = LabeledPair::new(RasterImage::filled(20, 20, [3, 4, 5]), BinaryMask::filled(20, 20, true)).unwrap();
        assert_eq!(zoom(&flat, 1.37).unwrap(), flat);
        assert!(zoom(&p, 0.9).is_err());
    }

    #[test]
    fn zoom_reads_the_centre_window() {
        // 256 -> 384 upscale, crop offset 64: output x maps to (x + 64 + 0.5)/1.5 - 0.5.
        let img = RasterImage::from_fn(256, 1, |x, _| [x as u8, 0, 0]);
        let p = LabeledPair::new(img, BinaryMask::filled(256, 1, false)).unwrap();
        let z = zoom(&p, 1.5).unwrap();
        // x = 1: source 65.5 / 1.5 - 0.5 = 43.17 -> 43; x = 2: 43.83 -> 44.
        assert_eq!(z.image().get(1, 0)[0], 43);
        assert_eq!(z.image().get(2, 0)[0], 44);
    }

    #[test]
    fn rotate_cases() {
        let p = textured(16);
        assert_eq!(rotate(&p, 0.0), p);
        let flat = LabeledPair::new(RasterImage::filled(16, 16, [90, 10, 200]), BinaryMask::filled(16, 16, false))
            .unwrap();
        assert_eq!(rotate(&flat, 7.3), flat);
        let dot = LabeledPair::new(
            RasterImage::filled(15, 15, [0; 3]),
            BinaryMask::from_fn(15, 15, |x, y| x == 7 && y == 7),
        )
        .unwrap();
        for a in [1.0, 4.5, 9.9] {
            assert!(rotate(&dot, a).mask().is_villous(7, 7));
        }
    }

    #[test]
    fn rotation_is_clockwise() {
        // A bright pixel right of centre moves downward under a clockwise turn.
        let mask = BinaryMask::from_fn(41, 41, |x, y| x == 35 && y == 20);
        let p = LabeledPair::new(RasterImage::filled(41, 41, [0; 3]), mask).unwrap();
        let r = rotate(&p, 9.0);
        let (mut sx, mut sy, mut n) = (0usize, 0usize, 0usize);
        for y in 0..41 {
            for x in 0..41 {
                if r.mask().is_villous(x, y) {
                    sx += x;
                    sy += y;
                    n += 1;
                }
            }
        }
        assert!(n > 0);
        assert!(sy / n > 20, "expected downward motion, got row {}", sy / n);
        assert!(sx / n <= 35);
    }
}
