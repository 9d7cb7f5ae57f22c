use histosynth::patch::{generate_batch, BatchConfig, BatchMode};
use serde_json::{json, Value};

use super::{load_exemplar, write_samples, Sample};
use crate::config::{grid_spec, reconstruct_options, required, AugmentConfig, Method};
use crate::manifest::OutputDir;
use crate::UsageError;

pub fn run(cfg: AugmentConfig) -> anyhow::Result<Value> {
    let image = required(&cfg.image, "--image")?;
    let mask = required(&cfg.mask, "--mask")?;
    let out_dir = required(&cfg.out_dir, "--out-dir")?;
    if cfg.n == 0 {
        return Err(UsageError("--n must be >= 1".into()).into());
    }
    cfg.augment.validate().map_err(|e| UsageError(e.to_string()))?;
    let (exemplar, inputs) = load_exemplar(image, mask)?;
    let batch = BatchConfig {
        spec: grid_spec(exemplar.width().min(exemplar.height()), cfg.grid_ratio, cfg.overlap)?,
        options: reconstruct_options(cfg.stride, cfg.priority_factor)?,
        augment: cfg.augment.clone(),
        mode: match cfg.method {
            Method::Base => BatchMode::Base,
            Method::Proposed => BatchMode::Proposed,
        },
        order: cfg.order.into(),
    };
    log::info!("generating {} {:?} samples", cfg.n, cfg.method);
    let generated = generate_batch(&exemplar, &batch, cfg.n, cfg.seed)?;
    let samples: Vec<Sample<'_>> = generated
        .iter()
        .map(|g| Sample {
            index: g.index as usize,
            seeds: match cfg.method {
                Method::Base => json!({ "augment": g.augment_seed }),
                Method::Proposed => json!({ "augment": g.augment_seed, "reconstruct": g.reconstruct_seed }),
            },
            pair: &g.pair,
            placements: &g.placements,
        })
        .collect();

    let mut out = OutputDir::create(out_dir)?;
    let records = write_samples(&mut out, &samples)?;
    let files = out.file_count();
    let manifest = out.finish("augment", Some(cfg.seed), &cfg, inputs, records)?;
    Ok(json!({
        "status": "ok",
        "command": "augment",
        "method": cfg.method,
        "samples": cfg.n,
        "files": files,
        "manifest": manifest,
    }))
}
