//! Declarative run configuration (TOML) for the benchmark harness.
//!
//! One config file captures the whole run: registered datasets, methods,
//! grid overrides, thresholds, seed, and worker count. CLI flags override
//! individual fields.

use crate::dataset::{ColumnSchema, FingerprintDataset, LoadOptions, SyntheticParams};
use crate::error::{Error, Result};
use crate::estimators::method_by_id;
use crate::tuning::SearchGrid;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Where a dataset's samples come from.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DatasetSource {
    /// Pre-split train/test CSV pair.
    PreSplit {
        train_path: PathBuf,
        test_path: PathBuf,
    },
    /// Single CSV split deterministically by the run seed.
    SingleFile {
        path: PathBuf,
        split_fraction: f64,
    },
    /// Synthetic grid generated in-process.
    Synthetic { synthetic: SyntheticSpec },
}

/// Synthetic generator parameters as written in the config. AP positions
/// may be listed explicitly or requested by count (auto-placed on the grid's
/// bounding box at ceiling height).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    #[serde(default = "default_spacing")]
    pub spacing: f64,
    #[serde(default)]
    pub ap_positions: Vec<[f64; 3]>,
    #[serde(default)]
    pub ap_count: Option<usize>,
    #[serde(default = "default_tx_power")]
    pub tx_power: f64,
    #[serde(default = "default_exponent")]
    pub path_loss_exponent: f64,
    #[serde(default)]
    pub noise_sd: f64,
    #[serde(default = "default_split")]
    pub split_fraction: f64,
}

fn default_spacing() -> f64 {
    2.0
}
fn default_tx_power() -> f64 {
    -30.0
}
fn default_exponent() -> f64 {
    2.5
}
fn default_split() -> f64 {
    0.7
}

impl SyntheticSpec {
    pub fn to_params(&self, seed: u64) -> SyntheticParams {
        let ap_positions = if self.ap_positions.is_empty() {
            crate::dataset::default_ap_layout(
                (self.nx, self.ny, self.nz),
                self.spacing,
                self.ap_count.unwrap_or(4),
            )
        } else {
            self.ap_positions.clone()
        };
        SyntheticParams {
            grid: (self.nx, self.ny, self.nz),
            spacing: self.spacing,
            ap_positions,
            tx_power: self.tx_power,
            path_loss_exponent: self.path_loss_exponent,
            noise_sd: self.noise_sd,
            seed,
        }
    }
}

/// One registered dataset.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetConfig {
    pub name: String,
    #[serde(flatten)]
    pub source: DatasetSource,
    #[serde(default)]
    pub schema: ColumnSchema,
    #[serde(default)]
    pub load: LoadOptions,
}

/// The full run configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub datasets: Vec<DatasetConfig>,
    pub methods: Vec<String>,
    #[serde(default = "default_tau")]
    pub tau_epsilon: f64,
    #[serde(default = "default_k_min")]
    pub k_min: usize,
    #[serde(default = "default_min_coverage")]
    pub min_coverage: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_out_dir")]
    pub output_dir: PathBuf,
    /// Worker count; absent means one worker per logical CPU.
    #[serde(default)]
    pub workers: Option<usize>,
    #[serde(default)]
    pub grid: GridOverrides,
    /// Tune on a held-out validation slice of the training set instead of
    /// the test set. Off by default: the evaluation protocol reports
    /// test-set optima.
    #[serde(default)]
    pub tune_on_validation: bool,
    #[serde(default = "default_validation_fraction")]
    pub validation_fraction: f64,
}

fn default_tau() -> f64 {
    5.0
}
fn default_k_min() -> usize {
    1
}
fn default_min_coverage() -> f64 {
    90.0
}
fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}
fn default_validation_fraction() -> f64 {
    0.25
}

/// Optional per-field replacements for the default search grids.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct GridOverrides {
    pub k: Option<Vec<usize>>,
    pub r_max_euclidean: Option<Vec<f64>>,
    pub r_max_cityblock: Option<Vec<f64>>,
    pub r_max_cosine: Option<Vec<f64>>,
    pub p: Option<Vec<f64>>,
    pub tau: Option<Vec<f64>>,
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            toml::from_str(text).map_err(|e| Error::Config(format!("config parse: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.datasets.is_empty() {
            return Err(Error::Config("no datasets registered".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::Config("empty methods list".into()));
        }
        for m in &self.methods {
            if method_by_id(m).is_none() {
                return Err(Error::Config(format!(
                    "unknown method id '{m}' (known: M1-M3, M14-M25)"
                )));
            }
        }
        if self.tau_epsilon <= 0.0 {
            return Err(Error::Config("tau_epsilon must be positive".into()));
        }
        if !(0.0..=100.0).contains(&self.min_coverage) {
            return Err(Error::Config("min_coverage must be in [0,100]".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for d in &self.datasets {
            if !seen.insert(&d.name) {
                return Err(Error::Config(format!("duplicate dataset name '{}'", d.name)));
            }
        }
        Ok(())
    }

    /// Effective search grid: defaults with overrides applied, plus this
    /// run's minimum coverage.
    pub fn search_grid(&self) -> SearchGrid {
        let mut g = SearchGrid {
            min_coverage: self.min_coverage,
            ..SearchGrid::default()
        };
        if let Some(k) = &self.grid.k {
            g.k = k.clone();
        }
        if let Some(v) = &self.grid.r_max_euclidean {
            g.r_max_euclidean = v.clone();
        }
        if let Some(v) = &self.grid.r_max_cityblock {
            g.r_max_cityblock = v.clone();
        }
        if let Some(v) = &self.grid.r_max_cosine {
            g.r_max_cosine = v.clone();
        }
        if let Some(v) = &self.grid.p {
            g.p = v.clone();
        }
        if let Some(v) = &self.grid.tau {
            g.tau = v.clone();
        }
        g
    }
}

impl DatasetConfig {
    /// Materialize the (train, test) pair for this dataset.
    pub fn load_pair(&self, seed: u64) -> Result<(FingerprintDataset, FingerprintDataset)> {
        match &self.source {
            DatasetSource::PreSplit {
                train_path,
                test_path,
            } => {
                let train = crate::dataset::load_csv(
                    train_path,
                    &format!("{}-train", self.name),
                    &self.schema,
                    &self.load,
                )?;
                let test = crate::dataset::load_csv(
                    test_path,
                    &format!("{}-test", self.name),
                    &self.schema,
                    &self.load,
                )?;
                if train.ap_count() != test.ap_count() {
                    return Err(Error::Data(format!(
                        "dataset '{}': train has {} APs but test has {}",
                        self.name,
                        train.ap_count(),
                        test.ap_count()
                    )));
                }
                Ok((train, test))
            }
            DatasetSource::SingleFile {
                path,
                split_fraction,
            } => {
                let ds = crate::dataset::load_csv(path, &self.name, &self.schema, &self.load)?;
                ds.split(*split_fraction, seed)
            }
            DatasetSource::Synthetic { synthetic } => {
                let ds = crate::dataset::generate_synthetic(
                    &self.name,
                    &synthetic.to_params(seed),
                )?;
                ds.split(synthetic.split_fraction, seed)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
methods = ["M1", "M17", "M23"]

[[datasets]]
name = "desk"
synthetic = { nx = 8, ny = 8, nz = 1, noise_sd = 2.0 }
"#;

    #[test]
    fn minimal_config_parses_with_defaults() {
        let cfg = RunConfig::from_toml_str(MINIMAL).unwrap();
        assert_eq!(cfg.tau_epsilon, 5.0);
        assert_eq!(cfg.min_coverage, 90.0);
        assert_eq!(cfg.k_min, 1);
        assert_eq!(cfg.seed, 0);
        assert!(!cfg.tune_on_validation);
        let (train, test) = cfg.datasets[0].load_pair(cfg.seed).unwrap();
        assert_eq!(train.len() + test.len(), 64);
    }

    #[test]
    fn unknown_method_rejected_at_parse() {
        let text = MINIMAL.replace("M23", "M9");
        let err = RunConfig::from_toml_str(&text).unwrap_err();
        assert!(err.to_string().contains("unknown method id 'M9'"));
    }

    #[test]
    fn empty_methods_rejected() {
        let text = MINIMAL.replace(r#"["M1", "M17", "M23"]"#, "[]");
        let err = RunConfig::from_toml_str(&text).unwrap_err();
        assert!(err.to_string().contains("empty methods list"));
    }

    #[test]
    fn grid_override_applies() {
        let text = format!("{MINIMAL}\n[grid]\nk = [3, 5]\n");
        let cfg = RunConfig::from_toml_str(&text).unwrap();
        assert_eq!(cfg.search_grid().k, vec![3, 5]);
        // untouched grids keep protocol defaults
        assert_eq!(cfg.search_grid().r_max_euclidean.len(), 101);
    }

    #[test]
    fn duplicate_dataset_names_rejected() {
        let text = format!(
            "{MINIMAL}\n[[datasets]]\nname = \"desk\"\nsynthetic = {{ nx = 2, ny = 2, nz = 1 }}\n"
        );
        let err = RunConfig::from_toml_str(&text).unwrap_err();
        assert!(err.to_string().contains("duplicate dataset name"));
    }
}
