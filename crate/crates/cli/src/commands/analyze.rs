use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::Context;
use histosynth::diversity::{cloud_bounding_box_area, cloud_hull_area, FeaturePoint, SourceTag};
use histosynth::image::load_mask;
use histosynth::morphology::{morphometrics, MorphometricsReport};
use rayon::prelude::*;
use serde_json::{json, Value};

use super::existing;
use crate::config::{required, AnalyzeConfig};
use crate::manifest::{digest_file, OutputDir};
use crate::UsageError;

/// The masks named by `input`. In a directory of generated samples only the
/// `*_mask.png` files are taken.
fn collect_masks(input: &Path) -> anyhow::Result<Vec<PathBuf>> {
    existing(input, "input")?;
    if input.is_file() {
        return Ok(vec![input.to_path_buf()]);
    }
    let mut pngs: Vec<PathBuf> = std::fs::read_dir(input)
        .with_context(|| format!("listing {}", input.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|e| e.eq_ignore_ascii_case("png")))
        .collect();
    pngs.sort();
    let is_mask = |p: &PathBuf| p.file_name().and_then(|n| n.to_str()).is_some_and(|n| n.ends_with("_mask.png"));
    if pngs.iter().any(is_mask) {
        pngs.retain(is_mask);
    }
    if pngs.is_empty() {
        return Err(UsageError(format!("no PNG masks in {}", input.display())).into());
    }
    Ok(pngs)
}

fn stem(path: &Path) -> String {
    path.file_stem().and_then(|s| s.to_str()).unwrap_or("mask").to_string()
}

pub fn run(cfg: AnalyzeConfig) -> anyhow::Result<Value> {
    let input = required(&cfg.input, "INPUT")?;
    let out_dir = required(&cfg.out_dir, "--out-dir")?;
    if !(cfg.h_min >= 0.0) {
        return Err(UsageError("--h-min must be >= 0".into()).into());
    }
    let masks = collect_masks(input)?;
    log::info!("analyzing {} masks", masks.len());
    let reports = masks
        .par_iter()
        .map(|p| Ok(morphometrics(&load_mask(p)?, cfg.h_min)))
        .collect::<anyhow::Result<Vec<MorphometricsReport>>>()?;

    let mut out = OutputDir::create(out_dir)?;
    for (path, report) in masks.iter().zip(&reports) {
        let name = stem(path);
        out.write(&format!("{name}.json"), (serde_json::to_string_pretty(report)? + "\n").as_bytes())?;
        if cfg.hist {
            out.write(&format!("{name}_radii.csv"), report.radius_distribution.to_csv().as_bytes())?;
        }
    }

    let mut summary = json!({
        "status": "ok",
        "command": "analyze",
        "masks": masks.len(),
    });
    if let [only] = reports.as_slice() {
        summary["report"] = serde_json::to_value(only)?;
    }
    if cfg.cloud {
        let tag = SourceTag::from(cfg.tag);
        let points: Vec<FeaturePoint> = reports
            .iter()
            .map(|r| FeaturePoint {
                volume_fraction: r.volume_fraction,
                specific_surface: r.specific_surface,
                source_tag: tag,
            })
            .collect();
        let mut csv = String::from("file,volume_fraction,specific_surface,source_tag\n");
        for (path, p) in masks.iter().zip(&points) {
            let file = path.file_name().and_then(|n| n.to_str()).unwrap_or_default();
            let _ = writeln!(csv, "{file},{},{},{}", p.volume_fraction, p.specific_surface, p.source_tag);
        }
        out.write("features.csv", csv.as_bytes())?;
        let hull = cloud_hull_area(&points).ok();
        let bbox = cloud_bounding_box_area(&points).ok();
        let cloud = json!({ "points": points.len(), "tag": tag, "hull_area": hull, "bounding_box_area": bbox });
        out.write("cloud.json", (serde_json::to_string_pretty(&cloud)? + "\n").as_bytes())?;
        summary["hull_area"] = json!(hull);
        summary["bounding_box_area"] = json!(bbox);
    }
    let inputs = masks.iter().map(|p| digest_file(p)).collect::<anyhow::Result<Vec<_>>>()?;
    summary["manifest"] = json!(out.finish("analyze", None, &cfg, inputs, Vec::new())?);
    Ok(summary)
}
