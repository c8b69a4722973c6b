//! Brute-force neighbor queries: top-k and within-radius, with deterministic
//! tie-breaking by training index.
//!
//! All three query kinds are exhaustive linear scans. The free functions
//! operate on raw feature slices; [`Searcher`] binds a training dataset to a
//! metric and handles the positive transform the Min-Max and Clark metrics
//! require.

use crate::dataset::FingerprintDataset;
use crate::error::Result;
use crate::metrics::{positive_transform, DistanceMetric};

/// One matched training sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub index: usize,
    pub distance: f64,
}

/// Query result, sorted ascending by distance, ties broken by ascending
/// training index.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct NeighborSet {
    entries: Vec<Neighbor>,
}

impl NeighborSet {
    fn from_unsorted(mut entries: Vec<Neighbor>) -> Self {
        entries.sort_unstable_by(|a, b| {
            a.distance
                .partial_cmp(&b.distance)
                .expect("finite distances")
                .then(a.index.cmp(&b.index))
        });
        Self { entries }
    }

    pub fn entries(&self) -> &[Neighbor] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Neighbor> {
        self.entries.iter()
    }
}

fn all_distances(
    features: &[Vec<f64>],
    metric: DistanceMetric,
    x: &[f64],
) -> Result<Vec<Neighbor>> {
    features
        .iter()
        .enumerate()
        .map(|(index, f)| {
            Ok(Neighbor {
                index,
                distance: metric.distance(f, x)?,
            })
        })
        .collect()
}

/// The k nearest training samples under the fixed tie-break.
pub fn knn_query(
    features: &[Vec<f64>],
    metric: DistanceMetric,
    x: &[f64],
    k: usize,
) -> Result<NeighborSet> {
    let n = features.len();
    if k == 0 || k > n {
        return Err(crate::Error::InvalidArgument(format!(
            "k must be in 1..={n}, got {k}"
        )));
    }
    let mut set = NeighborSet::from_unsorted(all_distances(features, metric, x)?);
    set.entries.truncate(k);
    Ok(set)
}

/// All training samples with distance <= r (inclusive boundary).
pub fn radius_query(
    features: &[Vec<f64>],
    metric: DistanceMetric,
    x: &[f64],
    r: f64,
) -> Result<NeighborSet> {
    if r < 0.0 {
        return Err(crate::Error::InvalidArgument(format!(
            "radius must be non-negative, got {r}"
        )));
    }
    let entries = all_distances(features, metric, x)?
        .into_iter()
        .filter(|nb| nb.distance <= r)
        .collect();
    Ok(NeighborSet::from_unsorted(entries))
}

/// All training samples i with distance <= r_i, for per-sample radii.
/// Samples with r_i = 0 match only at distance exactly zero.
pub fn adaptive_radius_query(
    features: &[Vec<f64>],
    radii: &[f64],
    metric: DistanceMetric,
    x: &[f64],
) -> Result<NeighborSet> {
    assert_eq!(
        features.len(),
        radii.len(),
        "radii length must equal training size"
    );
    let entries = all_distances(features, metric, x)?
        .into_iter()
        .filter(|nb| nb.distance <= radii[nb.index])
        .collect();
    Ok(NeighborSet::from_unsorted(entries))
}

/// A training dataset bound to one metric, with features pre-transformed
/// when the metric requires the non-negative domain.
#[derive(Debug, Clone)]
pub struct Searcher {
    metric: DistanceMetric,
    floor: f64,
    features: Vec<Vec<f64>>,
    positions: Vec<[f64; 3]>,
}

impl Searcher {
    pub fn new(train: &FingerprintDataset, metric: DistanceMetric) -> Self {
        let floor = train.not_detected_fill();
        let features = train
            .samples()
            .iter()
            .map(|s| {
                if metric.requires_nonnegative() {
                    positive_transform(&s.rss, floor)
                } else {
                    s.rss.clone()
                }
            })
            .collect();
        Self {
            metric,
            floor,
            features,
            positions: train.positions(),
        }
    }

    pub fn metric(&self) -> DistanceMetric {
        self.metric
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn features(&self) -> &[Vec<f64>] {
        &self.features
    }

    pub fn positions(&self) -> &[[f64; 3]] {
        &self.positions
    }

    /// Map a raw RSS query into this searcher's feature space.
    pub fn prepare_query(&self, rss: &[f64]) -> Vec<f64> {
        if self.metric.requires_nonnegative() {
            positive_transform(rss, self.floor)
        } else {
            rss.to_vec()
        }
    }

    pub fn knn(&self, rss: &[f64], k: usize) -> Result<NeighborSet> {
        knn_query(&self.features, self.metric, &self.prepare_query(rss), k)
    }

    pub fn within_radius(&self, rss: &[f64], r: f64) -> Result<NeighborSet> {
        radius_query(&self.features, self.metric, &self.prepare_query(rss), r)
    }

    pub fn within_adaptive_radii(&self, rss: &[f64], radii: &[f64]) -> Result<NeighborSet> {
        adaptive_radius_query(&self.features, radii, self.metric, &self.prepare_query(rss))
    }
}
