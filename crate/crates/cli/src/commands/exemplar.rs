use std::path::Path;

use histosynth::exemplar::{bundled_exemplar_png, synthetic_exemplar, EXEMPLAR_SEED, EXEMPLAR_SIZE};
use histosynth::image::{encode_mask_png, encode_png};
use serde_json::{json, Value};

use crate::manifest::OutputDir;
use crate::UsageError;

pub const IMAGE_NAME: &str = "exemplar_img.png";
pub const MASK_NAME: &str = "exemplar_mask.png";

pub fn run(out_dir: &Path, size: Option<usize>, seed: Option<u64>) -> anyhow::Result<Value> {
    let mut out = OutputDir::create(out_dir)?;
    let generated = size.is_some() || seed.is_some();
    let (size, seed) = (size.unwrap_or(EXEMPLAR_SIZE), seed.unwrap_or(EXEMPLAR_SEED));
    if generated {
        if size < 16 {
            return Err(UsageError("--size must be >= 16".into()).into());
        }
        let pair = synthetic_exemplar(size, seed);
        out.write(IMAGE_NAME, &encode_png(pair.image())?)?;
        out.write(MASK_NAME, &encode_mask_png(pair.mask())?)?;
    } else {
        let (img, mask) = bundled_exemplar_png();
        out.write(IMAGE_NAME, img)?;
        out.write(MASK_NAME, mask)?;
    }
    let config = json!({ "generated": generated, "size": size, "seed": seed });
    let manifest = out.finish("exemplar", Some(seed), &config, Vec::new(), Vec::new())?;
    Ok(json!({
        "status": "ok",
        "command": "exemplar",
        "image": out_dir.join(IMAGE_NAME),
        "mask": out_dir.join(MASK_NAME),
        "manifest": manifest,
    }))
}
