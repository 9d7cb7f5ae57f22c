//! The conventional augmentation chain: per-channel color shift, zoom,
//! clockwise rotation, flips and a sinusoidal elastic warp.
//!
//! Every transform maps binary masks to binary masks and preserves raster
//! dimensions.

mod transforms;

pub use transforms::{color_shift, elastic_deform, rotate, zoom, ElasticParams, ElasticVariant};

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::rng::{rng_from_seed, Rng};
use crate::{Error, FlipAxis, LabeledPair, Result};

/// Ranges and switches for [`sample_base_augmentation`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BaseAugmentConfig {
    /// Maximum per-channel fractional shift.
    pub color_shift_limit: f64,
    /// Largest zoom factor.
    pub zoom_max: f64,
    /// Largest clockwise rotation in degrees (exclusive).
    pub rotation_max: f64,
    pub enable_color_shift: bool,
    pub enable_zoom: bool,
    pub enable_rotation: bool,
    pub enable_flip: bool,
    pub enable_elastic: bool,
    /// Drive the vertical elastic wave with `y` instead of `x`.
    pub elastic_y_uses_y: bool,
    pub seed: u64,
}

impl Default for BaseAugmentConfig {
    fn default() -> Self {
        Self {
            color_shift_limit: 0.10,
            zoom_max: 1.5,
            rotation_max: 10.0,
            enable_color_shift: true,
            enable_zoom: true,
            enable_rotation: true,
            enable_flip: true,
            enable_elastic: true,
            elastic_y_uses_y: false,
            seed: 0,
        }
    }
}

impl BaseAugmentConfig {
    /// Every transform switched off.
    pub fn disabled() -> Self {
        Self {
            enable_color_shift: false,
            enable_zoom: false,
            enable_rotation: false,
            enable_flip: false,
            enable_elastic: false,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.color_shift_limit) {
            return Err(Error::InvalidParameter(format!(
                "color_shift_limit {} outside [0, 1]",
                self.color_shift_limit
            )));
        }
        if !(self.zoom_max >= 1.0 && self.zoom_max.is_finite()) {
            return Err(Error::InvalidParameter(format!("zoom_max {} must be >= 1", self.zoom_max)));
        }
        if !(0.0..90.0).contains(&self.rotation_max) {
            return Err(Error::InvalidParameter(format!(
                "rotation_max {} outside [0, 90)",
                self.rotation_max
            )));
        }
        Ok(())
    }
}

/// The parameters drawn for one augmented sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaseAugmentDraw {
    pub color_deltas: [f64; 3],
    pub zoom: f64,
    pub rotation: f64,
    pub flip: FlipAxis,
    pub elastic: ElasticParams,
}

/// Draws every parameter in a fixed order, whether or not the transform is
/// enabled, so switching one transform off leaves the others' draws intact.
pub fn draw_parameters(config: &BaseAugmentConfig, rng: &mut Rng) -> BaseAugmentDraw {
    let limit = config.color_shift_limit;
    let mut color_deltas = [0.0; 3];
    for d in &mut color_deltas {
        *d = rng.gen_range(-limit..=limit);
    }
    let zoom = rng.gen_range(1.0..=config.zoom_max);
    let rotation = if config.rotation_max > 0.0 {
        rng.gen_range(0.0..config.rotation_max)
    } else {
        0.0
    };
    let flip = FlipAxis::ALL[rng.gen_range(0..4)];
    let sigma = rng.gen_range(0.0..=1.0);
    let mesh_ratio = rng.gen_range(1.0..=5.0);
    let phase = rng.gen_range(0.0..=1.0);
    let variant = if config.elastic_y_uses_y {
        ElasticVariant::YUsesY
    } else {
        ElasticVariant::AsPrinted
    };
    let elastic = ElasticParams::new(sigma, mesh_ratio, phase)
        .expect("drawn inside the valid ranges")
        .with_variant(variant);
    BaseAugmentDraw {
        color_deltas,
        zoom,
        rotation,
        flip,
        elastic,
    }
}

/// Applies a drawn parameter set in the order color, zoom, rotate, flip,
/// elastic.
pub fn apply_draw(pair: &LabeledPair, config: &BaseAugmentConfig, draw: &BaseAugmentDraw) -> LabeledPair {
    let mut out = pair.clone();
    if config.enable_color_shift {
        let (img, mask) = out.into_parts();
        out = LabeledPair::new(color_shift(&img, draw.color_deltas), mask).expect("dimensions preserved");
    }
    if config.enable_zoom {
        out = zoom(&out, draw.zoom).expect("zoom factor drawn >= 1");
    }
    if config.enable_rotation {
        out = rotate(&out, draw.rotation);
    }
    if config.enable_flip {
        out = out.flip(draw.flip);
    }
    if config.enable_elastic {
        out = elastic_deform(&out, &draw.elastic);
    }
    out
}

/// One randomized pass of the conventional augmentation chain.
pub fn sample_base_augmentation(pair: &LabeledPair, config: &BaseAugmentConfig, rng: &mut Rng) -> LabeledPair {
    let draw = draw_parameters(config, rng);
    apply_draw(pair, config, &draw)
}

/// [`sample_base_augmentation`] seeded from `seed`.
pub fn augment_with_seed(pair: &LabeledPair, config: &BaseAugmentConfig, seed: u64) -> LabeledPair {
    sample_base_augmentation(pair, config, &mut rng_from_seed(seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{BinaryMask, RasterImage};

    fn sample_pair() -> LabeledPair {
        let img = RasterImage::from_fn(48, 40, |x, y| [(x * 5) as u8, (y * 6) as u8, ((x + y) * 2) as u8]);
        let mask = BinaryMask::from_fn(48, 40, |x, y| (x as i32 - 20).pow(2) + (y as i32 - 18).pow(2) < 120);
        LabeledPair::new(img, mask).unwrap()
    }

    #[test]
    fn same_seed_same_output() {
        let p = sample_pair();
        let cfg = BaseAugmentConfig::default();
        assert_eq!(augment_with_seed(&p, &cfg, 11), augment_with_seed(&p, &cfg, 11));
        assert_ne!(augment_with_seed(&p, &cfg, 11), augment_with_seed(&p, &cfg, 12));
    }

    #[test]
    fn all_disabled_is_identity() {
        let p = sample_pair();
        for seed in 0..5 {
            assert_eq!(augment_with_seed(&p, &BaseAugmentConfig::disabled(), seed), p);
        }
    }

    #[test]
    fn draws_stay_in_range() {
        let cfg = BaseAugmentConfig::default();
        let mut rng = rng_from_seed(3);
        for _ in 0..500 {
            let d = draw_parameters(&cfg, &mut rng);
            assert!(d.color_deltas.iter().all(|c| c.abs() <= 0.10));
            assert!((1.0..=1.5).contains(&d.zoom));
            assert!((0.0..10.0).contains(&d.rotation));
        }
    }

    #[test]
    fn config_validation_and_json() {
        assert!(BaseAugmentConfig::default().validate().is_ok());
        let bad = BaseAugmentConfig {
            zoom_max: 0.5,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = BaseAugmentConfig {
            rotation_max: 90.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let cfg: BaseAugmentConfig = serde_json::from_str(r#"{"zoom_max": 1.2, "enable_flip": false}"#).unwrap();
        assert_eq!(cfg.zoom_max, 1.2);
        assert!(!cfg.enable_flip);
        assert_eq!(cfg.color_shift_limit, 0.10);
        assert!(serde_json::from_str::<BaseAugmentConfig>(r#"{"zoom": 1}"#).is_err());
    }

    #[test]
    fn dimensions_and_binarity_preserved() {
        let p = sample_pair();
        let cfg = BaseAugmentConfig::default();
        for seed in 0..40 {
            let a = augment_with_seed(&p, &cfg, seed);
            assert_eq!((a.width(), a.height()), (48, 40));
            assert!(a.mask().data().iter().all(|&v| v <= 1));
        }
    }
}
