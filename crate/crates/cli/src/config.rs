//! Resolved per-command settings. Each value comes from, in rising
//! precedence: built-in defaults, a JSON config file (or the `config` object
//! of an earlier run's manifest), then command-line flags.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::Context;
use histosynth::augment::BaseAugmentConfig;
use histosynth::diversity::SourceTag;
use histosynth::morphology::DEFAULT_H_MIN;
use histosynth::patch::{GridSpec, ReconstructOptions, StageOrder, DEFAULT_PRIORITY_FACTOR, DEFAULT_STRIDE};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::UsageError;

/// Grid ratios given either as an inclusive range `a..b` or a comma list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RatioList(pub Vec<usize>);

impl FromStr for RatioList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |part: &str| format!("invalid grid ratio {part:?}");
        let ratios = if let Some((a, b)) = s.split_once("..") {
            let a: usize = a.trim().parse().map_err(|_| bad(a))?;
            let b: usize = b.trim().trim_start_matches('=').parse().map_err(|_| bad(b))?;
            if a > b {
                return Err(format!("empty ratio range {s:?}"));
            }
            (a..=b).collect()
        } else {
            s.split(',')
                .map(|p| p.trim().parse::<usize>().map_err(|_| bad(p)))
                .collect::<Result<Vec<_>, _>>()?
        };
        if ratios.is_empty() || ratios.contains(&0) {
            return Err(format!("grid ratios must be >= 1, got {s:?}"));
        }
        Ok(Self(ratios))
    }
}

impl fmt::Display for RatioList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Base,
    Proposed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Tag {
    Training,
    Validation,
    BaseCase,
    Proposed,
}

impl From<Tag> for SourceTag {
    fn from(t: Tag) -> Self {
        match t {
            Tag::Training => SourceTag::Training,
            Tag::Validation => SourceTag::Validation,
            Tag::BaseCase => SourceTag::BaseCase,
            Tag::Proposed => SourceTag::Proposed,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Order {
    AugmentThenReconstruct,
    ReconstructThenAugment,
}

impl From<Order> for StageOrder {
    fn from(o: Order) -> Self {
        match o {
            Order::AugmentThenReconstruct => StageOrder::AugmentThenReconstruct,
            Order::ReconstructThenAugment => StageOrder::ReconstructThenAugment,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReconstructConfig {
    pub image: Option<PathBuf>,
    pub mask: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
    pub n: usize,
    pub seed: u64,
    pub grid_ratio: usize,
    pub overlap: usize,
    pub stride: usize,
    pub priority_factor: f64,
}

impl Default for ReconstructConfig {
    fn default() -> Self {
        Self {
            image: None,
            mask: None,
            out_dir: None,
            n: 1,
            seed: 0,
            grid_ratio: GridSpec::DEFAULT_GRID_RATIO,
            overlap: GridSpec::DEFAULT_OVERLAP,
            stride: DEFAULT_STRIDE,
            priority_factor: DEFAULT_PRIORITY_FACTOR,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AugmentConfig {
    pub image: Option<PathBuf>,
    pub mask: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
    pub method: Method,
    pub n: usize,
    pub seed: u64,
    pub grid_ratio: usize,
    pub overlap: usize,
    pub stride: usize,
    pub priority_factor: f64,
    pub order: Order,
    pub augment: BaseAugmentConfig,
}

impl Default for AugmentConfig {
    fn default() -> Self {
        let r = ReconstructConfig::default();
        Self {
            image: None,
            mask: None,
            out_dir: None,
            method: Method::Proposed,
            n: r.n,
            seed: r.seed,
            grid_ratio: r.grid_ratio,
            overlap: r.overlap,
            stride: r.stride,
            priority_factor: r.priority_factor,
            order: Order::AugmentThenReconstruct,
            augment: BaseAugmentConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyzeConfig {
    pub input: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
    pub cloud: bool,
    pub hist: bool,
    pub tag: Tag,
    pub h_min: f64,
}

impl Default for AnalyzeConfig {
    fn default() -> Self {
        Self {
            input: None,
            out_dir: None,
            cloud: false,
            hist: false,
            tag: Tag::Training,
            h_min: DEFAULT_H_MIN,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub image: Option<PathBuf>,
    pub mask: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
    pub ratios: RatioList,
    pub repeats: usize,
    pub seed: u64,
    pub overlap: usize,
    pub stride: usize,
    pub priority_factor: f64,
    pub h_min: f64,
    pub plot: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        let r = ReconstructConfig::default();
        Self {
            image: None,
            mask: None,
            out_dir: None,
            ratios: RatioList((1..=20).collect()),
            repeats: 20,
            seed: r.seed,
            overlap: r.overlap,
            stride: r.stride,
            priority_factor: r.priority_factor,
            h_min: DEFAULT_H_MIN,
            plot: false,
        }
    }
}

pub fn reconstruct_options(stride: usize, priority_factor: f64) -> anyhow::Result<ReconstructOptions> {
    let o = ReconstructOptions { stride, priority_factor };
    o.validate().map_err(|e| UsageError(e.to_string()))?;
    Ok(o)
}

pub fn grid_spec(output_size: usize, grid_ratio: usize, overlap: usize) -> anyhow::Result<GridSpec> {
    GridSpec::new(output_size, grid_ratio, overlap).map_err(|e| UsageError(e.to_string()).into())
}

pub fn required<'a, T>(value: &'a Option<T>, flag: &str) -> anyhow::Result<&'a T> {
    value.as_ref().ok_or_else(|| UsageError(format!("missing required {flag}")).into())
}

/// Overlays `overlay` onto `base`; nested objects merge key by key and nulls
/// in the overlay are skipped.
fn merge(base: &mut Value, overlay: Value) {
    match (base, overlay) {
        (Value::Object(b), Value::Object(o)) => {
            for (k, v) in o {
                if v.is_null() {
                    continue;
                }
                match b.get_mut(&k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

/// Reads a config file. A run manifest is accepted too, in which case its
/// `config` object is used and its command must match.
fn read_config_file(path: &Path, command: &str) -> anyhow::Result<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| UsageError(format!("config {} is not valid JSON: {e}", path.display())))?;
    match (value.get("command"), value.get("config")) {
        (Some(Value::String(c)), Some(cfg)) => {
            if c != command {
                return Err(UsageError(format!("manifest {} is for `{c}`, not `{command}`", path.display())).into());
            }
            Ok(cfg.clone())
        }
        _ => Ok(value),
    }
}

/// Defaults, then the optional config file, then the flags that were given.
pub fn resolve<T, F>(command: &str, file: Option<&Path>, flags: &F) -> anyhow::Result<T>
where
    T: Default + Serialize + DeserializeOwned,
    F: Serialize,
{
    let mut value = serde_json::to_value(T::default()).context("serializing defaults")?;
    if let Some(path) = file {
        merge(&mut value, read_config_file(path, command)?);
    }
    merge(&mut value, serde_json::to_value(flags).context("serializing flags")?);
    serde_json::from_value(value).map_err(|e| UsageError(format!("invalid configuration: {e}")).into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_lists() {
        assert_eq!("1..4".parse::<RatioList>().unwrap().0, vec![1, 2, 3, 4]);
        assert_eq!("1,6, 20".parse::<RatioList>().unwrap().0, vec![1, 6, 20]);
        assert!("0,2".parse::<RatioList>().is_err());
        assert!("5..2".parse::<RatioList>().is_err());
        assert!("a".parse::<RatioList>().is_err());
    }

    #[test]
    fn merge_prefers_overlay_and_recurses() {
        let mut base = serde_json::json!({"a": 1, "b": {"c": 2, "d": 3}});
        merge(&mut base, serde_json::json!({"a": null, "b": {"d": 4}}));
        assert_eq!(base, serde_json::json!({"a": 1, "b": {"c": 2, "d": 4}}));
    }
}
