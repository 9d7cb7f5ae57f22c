use std::fmt::Write as _;

use histosynth::diversity::{grid_sweep, sweep_trend, SweepConfig as CoreSweepConfig};
use serde_json::{json, Value};

use super::load_exemplar;
use crate::config::{reconstruct_options, required, SweepConfig};
use crate::manifest::OutputDir;
use crate::UsageError;

const GNUPLOT: &str = r#"set datafile separator ","
set key autotitle columnhead
set xlabel "grid ratio"
set terminal pngcairo size 1000,400
set output "sweep.png"
set multiplot layout 1,2
set ylabel "volume fraction"
plot "sweep_means.csv" using 1:2:3 with yerrorlines title "volume fraction"
set ylabel "specific surface (1/px)"
plot "sweep_means.csv" using 1:4:5 with yerrorlines title "specific surface"
unset multiplot
"#;

pub fn run(cfg: SweepConfig) -> anyhow::Result<Value> {
    let image = required(&cfg.image, "--image")?;
    let mask = required(&cfg.mask, "--mask")?;
    let out_dir = required(&cfg.out_dir, "--out-dir")?;
    if cfg.repeats == 0 {
        return Err(UsageError("--repeats must be >= 1".into()).into());
    }
    if cfg.ratios.0.is_empty() || cfg.ratios.0.contains(&0) {
        return Err(UsageError("grid ratios must be >= 1".into()).into());
    }
    if !(cfg.h_min >= 0.0) {
        return Err(UsageError("--h-min must be >= 0".into()).into());
    }
    let (exemplar, inputs) = load_exemplar(image, mask)?;
    let core = CoreSweepConfig {
        overlap: cfg.overlap,
        options: reconstruct_options(cfg.stride, cfg.priority_factor)?,
        h_min: cfg.h_min,
    };
    let size = exemplar.width().min(exemplar.height());
    for &r in &cfg.ratios.0 {
        crate::config::grid_spec(size, r, cfg.overlap)?;
    }
    log::info!("sweeping ratios {} with {} repeats", cfg.ratios, cfg.repeats);
    let results = grid_sweep(&exemplar, &cfg.ratios.0, cfg.repeats, cfg.seed, &core)?;
    let (rho_vf, rho_ss) = sweep_trend(&results);

    let mut rows = String::from("grid_ratio,repeat,seed,volume_fraction,specific_surface\n");
    let mut means =
        String::from("grid_ratio,volume_fraction_mean,volume_fraction_std,specific_surface_mean,specific_surface_std\n");
    for r in &results {
        for k in 0..r.repeats {
            let _ = writeln!(
                rows,
                "{},{},{},{},{}",
                r.grid_ratio, k, r.seeds[k], r.volume_fractions[k], r.specific_surfaces[k]
            );
        }
        let _ = writeln!(
            means,
            "{},{},{},{},{}",
            r.grid_ratio,
            r.volume_fraction_mean,
            r.volume_fraction_std,
            r.specific_surface_mean,
            r.specific_surface_std
        );
    }
    let summary_doc = json!({
        "results": results,
        "spearman_volume_fraction": rho_vf,
        "spearman_specific_surface": rho_ss,
    });

    let mut out = OutputDir::create(out_dir)?;
    out.write("sweep.csv", rows.as_bytes())?;
    out.write("sweep_means.csv", means.as_bytes())?;
    out.write("sweep_summary.json", (serde_json::to_string_pretty(&summary_doc)? + "\n").as_bytes())?;
    if cfg.plot {
        out.write("sweep.gp", GNUPLOT.as_bytes())?;
    }
    let manifest = out.finish("sweep", Some(cfg.seed), &cfg, inputs, Vec::new())?;
    Ok(json!({
        "status": "ok",
        "command": "sweep",
        "ratios": cfg.ratios.0,
        "repeats": cfg.repeats,
        "spearman_volume_fraction": rho_vf,
        "spearman_specific_surface": rho_ss,
        "manifest": manifest,
    }))
}
