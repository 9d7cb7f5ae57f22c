pub mod analyze;
pub mod augment;
pub mod exemplar;
pub mod reconstruct;
pub mod sweep;

use std::path::Path;

use histosynth::image::{encode_mask_png, encode_png};
use histosynth::patch::Placement;
use histosynth::LabeledPair;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::manifest::{digest_file, sample_names, FileDigest, OutputDir};
use crate::UsageError;

pub fn existing(path: &Path, what: &str) -> anyhow::Result<()> {
    if path.exists() {
        Ok(())
    } else {
        Err(UsageError(format!("{what} {} does not exist", path.display())).into())
    }
}

pub fn load_exemplar(image: &Path, mask: &Path) -> anyhow::Result<(LabeledPair, Vec<FileDigest>)> {
    existing(image, "image")?;
    existing(mask, "mask")?;
    let pair = histosynth::image::load_pair(image, mask)?;
    log::info!("exemplar {}x{} from {}", pair.width(), pair.height(), image.display());
    Ok((pair, vec![digest_file(image)?, digest_file(mask)?]))
}

pub struct Sample<'a> {
    pub index: usize,
    pub seeds: Value,
    pub pair: &'a LabeledPair,
    pub placements: &'a [Placement],
}

/// Encodes the samples in parallel, writes them in index order and returns
/// their manifest records.
pub fn write_samples(out: &mut OutputDir, samples: &[Sample<'_>]) -> anyhow::Result<Vec<Value>> {
    let encoded = samples
        .par_iter()
        .map(|s| Ok((encode_png(s.pair.image())?, encode_mask_png(s.pair.mask())?)))
        .collect::<histosynth::Result<Vec<_>>>()?;
    let mut records = Vec::with_capacity(samples.len());
    for (s, (img, mask)) in samples.iter().zip(encoded) {
        let (img_name, mask_name) = sample_names(s.index);
        out.write(&img_name, &img)?;
        out.write(&mask_name, &mask)?;
        records.push(json!({
            "index": s.index,
            "seeds": s.seeds,
            "image": img_name,
            "mask": mask_name,
            "placements": s.placements,
        }));
    }
    Ok(records)
}
