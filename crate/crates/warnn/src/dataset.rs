//! WiFi fingerprint datasets: CSV ingestion, synthetic generation, splitting.
//!
//! A dataset is an ordered, immutable collection of fingerprints. Sample
//! order is preserved from the source file (or generator) and defines all
//! downstream tie-breaking, so loaders never reorder rows.

use crate::error::{Error, Result};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// One RSS observation with its 3D ground-truth position (meters).
#[derive(Debug, Clone, PartialEq)]
pub struct Fingerprint {
    pub rss: Vec<f64>,
    pub position: [f64; 3],
}

/// Ordered collection of fingerprints sharing one AP count.
#[derive(Debug, Clone, PartialEq)]
pub struct FingerprintDataset {
    name: String,
    ap_count: usize,
    not_detected_fill: f64,
    samples: Vec<Fingerprint>,
}

impl FingerprintDataset {
    /// Build a dataset from already-clean fingerprints. Every sample must
    /// have `ap_count` RSS entries, all finite.
    pub fn new(
        name: impl Into<String>,
        ap_count: usize,
        not_detected_fill: f64,
        samples: Vec<Fingerprint>,
    ) -> Result<Self> {
        if ap_count == 0 {
            return Err(Error::Data("ap_count must be positive".into()));
        }
        if samples.is_empty() {
            return Err(Error::Data("empty dataset".into()));
        }
        for (i, s) in samples.iter().enumerate() {
            if s.rss.len() != ap_count {
                return Err(Error::Data(format!(
                    "sample {i}: expected {ap_count} RSS values, got {}",
                    s.rss.len()
                )));
            }
            if s.rss.iter().any(|v| !v.is_finite()) {
                return Err(Error::Data(format!("sample {i}: non-finite RSS value")));
            }
            if s.position.iter().any(|v| !v.is_finite()) {
                return Err(Error::Data(format!("sample {i}: non-finite position")));
            }
        }
        Ok(Self {
            name: name.into(),
            ap_count,
            not_detected_fill,
            samples,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ap_count(&self) -> usize {
        self.ap_count
    }

    /// The dBm value that replaced not-detected markers during ingestion.
    /// Also used as the floor for the positive transform required by the
    /// Min-Max and Clark metrics.
    pub fn not_detected_fill(&self) -> f64 {
        self.not_detected_fill
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[Fingerprint] {
        &self.samples
    }

    pub fn positions(&self) -> Vec<[f64; 3]> {
        self.samples.iter().map(|s| s.position).collect()
    }

    /// Deterministic shuffled partition into (train, test).
    pub fn split(&self, fraction: f64, seed: u64) -> Result<(Self, Self)> {
        if !(fraction > 0.0 && fraction < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "split fraction must be in (0,1), got {fraction}"
            )));
        }
        let n = self.samples.len();
        let train_n = (fraction * n as f64).floor() as usize;
        if train_n == 0 || train_n == n {
            return Err(Error::InvalidArgument(format!(
                "fraction {fraction} yields an empty split side for {n} samples"
            )));
        }
        let mut idx: Vec<usize> = (0..n).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        idx.shuffle(&mut rng);
        let (train_idx, test_idx) = idx.split_at(train_n);
        // Keep file order within each side so tie-breaking stays stable.
        let mut train_idx = train_idx.to_vec();
        let mut test_idx = test_idx.to_vec();
        train_idx.sort_unstable();
        test_idx.sort_unstable();
        let pick = |ids: &[usize], suffix: &str| -> Result<Self> {
            Self::new(
                format!("{}-{suffix}", self.name),
                self.ap_count,
                self.not_detected_fill,
                ids.iter().map(|&i| self.samples[i].clone()).collect(),
            )
        };
        Ok((pick(&train_idx, "train")?, pick(&test_idx, "test")?))
    }

    /// Write the dataset in the loadable CSV schema (`AP001..APn,x,y,z`).
    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        let mut header: Vec<String> = (1..=self.ap_count).map(|i| format!("AP{i:03}")).collect();
        header.extend(["x".into(), "y".into(), "z".into()]);
        w.write_record(&header)?;
        for s in &self.samples {
            let mut row: Vec<String> = s.rss.iter().map(|v| format!("{v}")).collect();
            row.extend(s.position.iter().map(|v| format!("{v}")));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Column bindings for CSV ingestion.
///
/// RSS columns are selected either by header prefix or by explicit list.
/// The vertical coordinate comes either from a metric `z` column or from an
/// integer floor index converted via `floor_height`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ColumnSchema {
    #[serde(default = "default_rss_prefix")]
    pub rss_prefix: Option<String>,
    #[serde(default)]
    pub rss_columns: Option<Vec<String>>,
    #[serde(default = "default_x")]
    pub x_column: String,
    #[serde(default = "default_y")]
    pub y_column: String,
    #[serde(default = "default_z")]
    pub z_column: Option<String>,
    #[serde(default)]
    pub floor_column: Option<String>,
}

fn default_rss_prefix() -> Option<String> {
    Some("AP".into())
}
fn default_x() -> String {
    "x".into()
}
fn default_y() -> String {
    "y".into()
}
fn default_z() -> Option<String> {
    Some("z".into())
}

impl Default for ColumnSchema {
    fn default() -> Self {
        Self {
            rss_prefix: Some("AP".into()),
            rss_columns: None,
            x_column: "x".into(),
            y_column: "y".into(),
            z_column: Some("z".into()),
            floor_column: None,
        }
    }
}

/// Ingestion parameters beyond the column schema.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LoadOptions {
    /// Sentinel value the file uses for not-detected APs (UJIIndoorLoc uses 100).
    #[serde(default = "default_marker")]
    pub missing_marker: f64,
    /// dBm value substituted for the marker.
    #[serde(default = "default_fill")]
    pub fill: f64,
    /// Meters per floor index when `floor_column` is used.
    #[serde(default = "default_floor_height")]
    pub floor_height: f64,
}

fn default_marker() -> f64 {
    100.0
}
fn default_fill() -> f64 {
    -105.0
}
fn default_floor_height() -> f64 {
    4.0
}

impl Default for LoadOptions {
    fn default() -> Self {
        Self {
            missing_marker: 100.0,
            fill: -105.0,
            floor_height: 4.0,
        }
    }
}

/// Load a fingerprint CSV, replacing the missing marker and converting
/// floor indices to meters.
pub fn load_csv(
    path: &Path,
    name: &str,
    schema: &ColumnSchema,
    opts: &LoadOptions,
) -> Result<FingerprintDataset> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::Data(format!("cannot open {}: {e}", path.display())))?;

    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| Error::Data(format!("{}: bad header: {e}", path.display())))?
        .iter()
        .map(|h| h.to_string())
        .collect();

    let col = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Data(format!("{}: missing column '{name}'", path.display())))
    };

    let rss_idx: Vec<usize> = match (&schema.rss_columns, &schema.rss_prefix) {
        (Some(cols), _) => cols
            .iter()
            .map(|c| col(c))
            .collect::<Result<Vec<_>>>()?,
        (None, Some(prefix)) => headers
            .iter()
            .enumerate()
            .filter(|(_, h)| h.starts_with(prefix.as_str()))
            .map(|(i, _)| i)
            .collect(),
        (None, None) => {
            return Err(Error::Config(
                "schema must name rss_columns or an rss_prefix".into(),
            ))
        }
    };
    if rss_idx.is_empty() {
        return Err(Error::Data(format!(
            "{}: no RSS columns matched the schema",
            path.display()
        )));
    }

    let x_idx = col(&schema.x_column)?;
    let y_idx = col(&schema.y_column)?;
    let vertical = match (&schema.z_column, &schema.floor_column) {
        (_, Some(fc)) => (col(fc)?, true),
        (Some(zc), None) => (col(zc)?, false),
        (None, None) => {
            return Err(Error::Config(
                "schema must name a z_column or a floor_column".into(),
            ))
        }
    };

    let parse = |field: &str, row: usize, what: &str| -> Result<f64> {
        field.parse::<f64>().map_err(|_| {
            Error::Data(format!(
                "{}: row {row}: non-numeric {what} value '{field}'",
                path.display()
            ))
        })
    };

    let mut samples = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 2; // 1-based, after the header
        let record = record.map_err(|e| {
            // csv reports unequal field counts here
            Error::Data(format!(
                "{}: row {row}: inconsistent column count or malformed row: {e}",
                path.display()
            ))
        })?;
        let mut rss = Vec::with_capacity(rss_idx.len());
        for &ci in &rss_idx {
            let v = parse(&record[ci], row, "RSS")?;
            rss.push(if v == opts.missing_marker { opts.fill } else { v });
        }
        let x = parse(&record[x_idx], row, "coordinate")?;
        let y = parse(&record[y_idx], row, "coordinate")?;
        let raw_z = parse(&record[vertical.0], row, "coordinate")?;
        let z = if vertical.1 {
            raw_z * opts.floor_height
        } else {
            raw_z
        };
        samples.push(Fingerprint {
            rss,
            position: [x, y, z],
        });
    }

    if samples.is_empty() {
        return Err(Error::Data(format!("{}: empty dataset", path.display())));
    }
    FingerprintDataset::new(name, rss_idx.len(), opts.fill, samples)
}

/// Parameters for the synthetic grid generator.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SyntheticParams {
    pub grid: (usize, usize, usize),
    pub spacing: f64,
    pub ap_positions: Vec<[f64; 3]>,
    pub tx_power: f64,
    pub path_loss_exponent: f64,
    pub noise_sd: f64,
    pub seed: u64,
}

impl Default for SyntheticParams {
    fn default() -> Self {
        Self {
            grid: (10, 10, 1),
            spacing: 2.0,
            ap_positions: vec![],
            tx_power: -30.0,
            path_loss_exponent: 2.5,
            noise_sd: 0.0,
            seed: 0,
        }
    }
}

/// Generate a log-distance path-loss dataset on a regular grid.
///
/// `RSS(ap) = tx_power - 10 * exponent * log10(max(dist, 1 m)) + N(0, noise_sd)`.
/// Deterministic for a fixed seed.
pub fn generate_synthetic(name: &str, params: &SyntheticParams) -> Result<FingerprintDataset> {
    let (nx, ny, nz) = params.grid;
    if nx == 0 || ny == 0 || nz == 0 {
        return Err(Error::InvalidArgument("grid dimensions must be >= 1".into()));
    }
    if params.spacing <= 0.0 {
        return Err(Error::InvalidArgument("spacing must be positive".into()));
    }
    if params.ap_positions.is_empty() {
        return Err(Error::InvalidArgument("at least one AP is required".into()));
    }
    if params.noise_sd < 0.0 {
        return Err(Error::InvalidArgument("noise_sd must be non-negative".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let normal = Normal::new(0.0, params.noise_sd.max(f64::MIN_POSITIVE))
        .expect("valid normal parameters");

    let mut samples = Vec::with_capacity(nx * ny * nz);
    for iz in 0..nz {
        for iy in 0..ny {
            for ix in 0..nx {
                let pos = [
                    ix as f64 * params.spacing,
                    iy as f64 * params.spacing,
                    iz as f64 * params.spacing,
                ];
                let rss = params
                    .ap_positions
                    .iter()
                    .map(|ap| {
                        let dist = ((pos[0] - ap[0]).powi(2)
                            + (pos[1] - ap[1]).powi(2)
                            + (pos[2] - ap[2]).powi(2))
                        .sqrt()
                        .max(1.0);
                        let noise = if params.noise_sd > 0.0 {
                            normal.sample(&mut rng)
                        } else {
                            0.0
                        };
                        params.tx_power - 10.0 * params.path_loss_exponent * dist.log10() + noise
                    })
                    .collect();
                samples.push(Fingerprint { rss, position: pos });
            }
        }
    }

    FingerprintDataset::new(name, params.ap_positions.len(), -105.0, samples)
}

/// Place `count` APs at ceiling height on the corners (then edges) of the
/// grid's bounding box. Convenience for configs that do not pin AP positions.
pub fn default_ap_layout(grid: (usize, usize, usize), spacing: f64, count: usize) -> Vec<[f64; 3]> {
    let ext = |n: usize| (n.saturating_sub(1)) as f64 * spacing;
    let (w, d, h) = (ext(grid.0), ext(grid.1), ext(grid.2) + spacing);
    let corners = [
        [0.0, 0.0, h],
        [w, d, h],
        [w, 0.0, h],
        [0.0, d, h],
        [w / 2.0, d / 2.0, h],
        [w / 2.0, 0.0, h],
        [w / 2.0, d, h],
        [0.0, d / 2.0, h],
    ];
    corners.iter().cycle().take(count.max(1)).copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_csv(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn marker_replacement() {
        let f = write_csv("AP001,AP002,x,y,z\n-50,100,1,2,0\n100,-60,3,4,0\n-70,-80,5,6,0\n");
        let ds = load_csv(
            f.path(),
            "t",
            &ColumnSchema::default(),
            &LoadOptions::default(),
        )
        .unwrap();
        assert_eq!(ds.ap_count(), 2);
        assert_eq!(ds.len(), 3);
        assert_eq!(ds.samples()[0].rss, vec![-50.0, -105.0]);
        assert_eq!(ds.samples()[1].rss, vec![-105.0, -60.0]);
        // no marker survives ingestion
        for s in ds.samples() {
            assert!(s.rss.iter().all(|&v| v != 100.0));
        }
    }

    #[test]
    fn inconsistent_column_count_is_reported() {
        let f = write_csv("AP001,AP002,x,y,z\n-50,-60,1,2,0\n-50,-60,-70,1,2,0\n");
        let err = load_csv(
            f.path(),
            "t",
            &ColumnSchema::default(),
            &LoadOptions::default(),
        )
        .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("row 3"), "{msg}");
        assert!(msg.contains("inconsistent column count"), "{msg}");
    }

    #[test]
    fn non_numeric_rss_is_reported() {
        let f = write_csv("AP001,x,y,z\nabc,1,2,0\n");
        let err = load_csv(
            f.path(),
            "t",
            &ColumnSchema::default(),
            &LoadOptions::default(),
        )
        .unwrap_err();
        assert!(err.to_string().contains("non-numeric RSS"));
    }

    #[test]
    fn empty_dataset_is_error() {
        let f = write_csv("AP001,x,y,z\n");
        let err = load_csv(
            f.path(),
            "t",
            &ColumnSchema::default(),
            &LoadOptions::default(),
        )
        .unwrap_err();
        assert!(err.to_string().contains("empty dataset"));
    }

    #[test]
    fn floor_index_converts_to_height() {
        let f = write_csv("AP001,x,y,floor\n-50,1,2,0\n-51,1,2,1\n-52,1,2,2\n");
        let schema = ColumnSchema {
            z_column: None,
            floor_column: Some("floor".into()),
            ..ColumnSchema::default()
        };
        let opts = LoadOptions {
            floor_height: 4.0,
            ..LoadOptions::default()
        };
        let ds = load_csv(f.path(), "t", &schema, &opts).unwrap();
        let z: Vec<f64> = ds.samples().iter().map(|s| s.position[2]).collect();
        assert_eq!(z, vec![0.0, 4.0, 8.0]);
    }

    #[test]
    fn load_save_load_round_trip() {
        let f = write_csv("AP001,AP002,x,y,z\n-50,100,1.5,2.25,0\n-70,-80,5,6,4\n");
        let ds = load_csv(
            f.path(),
            "t",
            &ColumnSchema::default(),
            &LoadOptions::default(),
        )
        .unwrap();
        let out = tempfile::NamedTempFile::new().unwrap();
        ds.save_csv(out.path()).unwrap();
        let ds2 = load_csv(
            out.path(),
            "t",
            &ColumnSchema::default(),
            &LoadOptions::default(),
        )
        .unwrap();
        assert_eq!(ds, ds2);
    }

    #[test]
    fn synthetic_zero_distance_clamps_to_tx_power() {
        let params = SyntheticParams {
            grid: (1, 1, 1),
            spacing: 1.0,
            ap_positions: vec![[0.0, 0.0, 0.0]],
            tx_power: -30.0,
            path_loss_exponent: 2.0,
            noise_sd: 0.0,
            seed: 7,
        };
        let ds = generate_synthetic("t", &params).unwrap();
        assert_eq!(ds.samples()[0].rss, vec![-30.0]);
    }

    #[test]
    fn synthetic_is_deterministic() {
        let params = SyntheticParams {
            grid: (5, 5, 1),
            spacing: 2.0,
            ap_positions: default_ap_layout((5, 5, 1), 2.0, 3),
            noise_sd: 3.0,
            seed: 42,
            ..SyntheticParams::default()
        };
        let a = generate_synthetic("t", &params).unwrap();
        let b = generate_synthetic("t", &params).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn synthetic_rss_decreases_with_distance_when_noiseless() {
        let ap = [0.0, 0.0, 0.0];
        let params = SyntheticParams {
            grid: (10, 1, 1),
            spacing: 2.0,
            ap_positions: vec![ap],
            noise_sd: 0.0,
            seed: 0,
            ..SyntheticParams::default()
        };
        let ds = generate_synthetic("t", &params).unwrap();
        // samples are ordered by increasing x, hence increasing distance to the AP
        let rss: Vec<f64> = ds.samples().iter().map(|s| s.rss[0]).collect();
        for w in rss.windows(2) {
            assert!(w[1] <= w[0]);
        }
        // cross-check one value against the path-loss formula
        let d = ds.samples()[5].position[0];
        let expect = params.tx_power - 10.0 * params.path_loss_exponent * d.log10();
        assert!((rss[5] - expect).abs() < 1e-12);
    }

    #[test]
    fn split_partitions_deterministically() {
        let params = SyntheticParams {
            grid: (5, 2, 1),
            spacing: 1.0,
            ap_positions: vec![[0.0, 0.0, 3.0]],
            ..SyntheticParams::default()
        };
        let ds = generate_synthetic("t", &params).unwrap();
        let (tr, te) = ds.split(0.8, 1).unwrap();
        assert_eq!(tr.len(), 8);
        assert_eq!(te.len(), 2);
        let (tr2, te2) = ds.split(0.8, 1).unwrap();
        assert_eq!(tr.samples(), tr2.samples());
        assert_eq!(te.samples(), te2.samples());
        // union is the original multiset
        let mut all: Vec<&Fingerprint> = tr.samples().iter().chain(te.samples()).collect();
        all.sort_by(|a, b| a.position.partial_cmp(&b.position).unwrap());
        let mut orig: Vec<&Fingerprint> = ds.samples().iter().collect();
        orig.sort_by(|a, b| a.position.partial_cmp(&b.position).unwrap());
        assert_eq!(all, orig);
    }

    #[test]
    fn split_rejects_empty_side() {
        let params = SyntheticParams {
            grid: (2, 1, 1),
            spacing: 1.0,
            ap_positions: vec![[0.0, 0.0, 3.0]],
            ..SyntheticParams::default()
        };
        let ds = generate_synthetic("t", &params).unwrap();
        assert!(ds.split(0.2, 1).is_err());
    }
}
