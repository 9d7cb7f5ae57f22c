use histosynth::patch::{reconstruct_from_dataset, sample_seeds, PatchDataset};
use rayon::prelude::*;
use serde_json::{json, Value};

use super::{load_exemplar, write_samples, Sample};
use crate::config::{grid_spec, reconstruct_options, required, ReconstructConfig};
use crate::manifest::OutputDir;
use crate::UsageError;

pub fn run(cfg: ReconstructConfig) -> anyhow::Result<Value> {
    let image = required(&cfg.image, "--image")?;
    let mask = required(&cfg.mask, "--mask")?;
    let out_dir = required(&cfg.out_dir, "--out-dir")?;
    if cfg.n == 0 {
        return Err(UsageError("--n must be >= 1".into()).into());
    }
    let (exemplar, inputs) = load_exemplar(image, mask)?;
    let spec = grid_spec(exemplar.width().min(exemplar.height()), cfg.grid_ratio, cfg.overlap)?;
    let options = reconstruct_options(cfg.stride, cfg.priority_factor)?;
    let dataset = PatchDataset::build(&exemplar, &spec, options.stride)?;
    log::info!("{} dataset entries, {} cells per sample", dataset.len(), spec.cell_count());

    let outputs = (0..cfg.n)
        .into_par_iter()
        .map(|i| {
            let (_, seed) = sample_seeds(cfg.seed, i as u64);
            reconstruct_from_dataset(&dataset, &spec, options.priority_factor, seed).map(|r| (seed, r))
        })
        .collect::<histosynth::Result<Vec<_>>>()?;
    let samples: Vec<Sample<'_>> = outputs
        .iter()
        .enumerate()
        .map(|(index, (seed, r))| Sample {
            index,
            seeds: json!({ "reconstruct": seed }),
            pair: &r.pair,
            placements: &r.placements,
        })
        .collect();

    let mut out = OutputDir::create(out_dir)?;
    let records = write_samples(&mut out, &samples)?;
    let files = out.file_count();
    let manifest = out.finish("reconstruct", Some(cfg.seed), &cfg, inputs, records)?;
    Ok(json!({
        "status": "ok",
        "command": "reconstruct",
        "samples": cfg.n,
        "files": files,
        "manifest": manifest,
    }))
}
