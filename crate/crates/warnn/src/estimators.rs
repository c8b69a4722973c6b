//! Position estimators: kNN/WkNN baselines, fixed-radius (FRNN), adaptive
//! radius (ARNN) training and query, and weighted adaptive radius (WARNN)
//! with fixed or adaptive inverse-distance decay.
//!
//! Radius training performs, for every training sample, a leave-one-out
//! search over neighbor counts `K = K_min..=K_max` and records the K-th
//! sorted distance of the largest K whose unweighted-centroid estimate lands
//! within the error threshold. A sample whose estimates never land within
//! the threshold keeps radius zero and only ever matches exact-duplicate
//! queries.

use crate::error::{Error, Result};
use crate::eval::positioning_error;
use crate::metrics::DistanceMetric;
use crate::neighbors::{NeighborSet, Searcher};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Estimator family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Knn,
    Frnn,
    Arnn,
    Warnn,
}

/// How neighbor positions are combined into an estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Weighting {
    /// Arithmetic mean of neighbor positions.
    Unweighted,
    /// Inverse distance weighting with a fixed decay factor alpha.
    Idw(f64),
    /// Per-neighbor decay alpha = 1 + d_i / r_i, bounded in [1, 2].
    AdaptiveIdw,
}

/// A method's fixed configuration: family, metric, and weighting.
/// Family-specific hyperparameters (k, r_max, p) are chosen by the tuner.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimatorSpec {
    pub family: Family,
    pub metric: DistanceMetric,
    pub weighting: Weighting,
}

/// Outcome of a single position query.
#[derive(Debug, Clone, PartialEq)]
pub enum EstimateStatus {
    Estimated([f64; 3]),
    NoCoverage,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateOutcome {
    pub status: EstimateStatus,
    pub neighbors_used: usize,
    /// Normalized contribution weights, present for weighted estimates.
    pub weights: Option<Vec<f64>>,
}

impl EstimateOutcome {
    pub fn no_coverage() -> Self {
        Self {
            status: EstimateStatus::NoCoverage,
            neighbors_used: 0,
            weights: None,
        }
    }

    pub fn is_estimated(&self) -> bool {
        matches!(self.status, EstimateStatus::Estimated(_))
    }

    pub fn position(&self) -> Option<[f64; 3]> {
        match self.status {
            EstimateStatus::Estimated(p) => Some(p),
            EstimateStatus::NoCoverage => None,
        }
    }
}

/// Trained per-sample radii for ARNN/WARNN.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusModel {
    radii: Vec<f64>,
    zero_radius_count: usize,
    pub k_min: usize,
    pub k_max: usize,
    pub tau_epsilon: f64,
}

impl RadiusModel {
    /// Build a model from externally supplied radii. Useful for degenerate
    /// setups (uniform radii reduce ARNN to FRNN) and for reloading
    /// persisted radii.
    pub fn from_radii(radii: Vec<f64>, k_min: usize, k_max: usize, tau_epsilon: f64) -> Self {
        let zero_radius_count = radii.iter().filter(|r| **r == 0.0).count();
        Self {
            radii,
            zero_radius_count,
            k_min,
            k_max,
            tau_epsilon,
        }
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    /// Number of training samples whose radius stayed at zero.
    pub fn zero_radius_count(&self) -> usize {
        self.zero_radius_count
    }
}

fn centroid(set: &NeighborSet, positions: &[[f64; 3]]) -> [f64; 3] {
    let mut sum = [0.0; 3];
    for nb in set.iter() {
        let p = positions[nb.index];
        sum[0] += p[0];
        sum[1] += p[1];
        sum[2] += p[2];
    }
    let n = set.len() as f64;
    [sum[0] / n, sum[1] / n, sum[2] / n]
}

/// Combine admitted neighbors into an estimate.
///
/// Exact matches dominate: if any admitted neighbor sits at distance zero,
/// the estimate is the unweighted mean of the zero-distance neighbors and
/// the rest are ignored. This also keeps the adaptive decay's d/r term away
/// from 0/0 for zero-radius samples, which are only admitted at d = 0.
fn combine(
    set: &NeighborSet,
    positions: &[[f64; 3]],
    weighting: Weighting,
    radii: Option<&[f64]>,
) -> EstimateOutcome {
    if set.is_empty() {
        return EstimateOutcome::no_coverage();
    }

    if let Weighting::Unweighted = weighting {
        return EstimateOutcome {
            status: EstimateStatus::Estimated(centroid(set, positions)),
            neighbors_used: set.len(),
            weights: None,
        };
    }

    let zero: Vec<usize> = set
        .iter()
        .filter(|nb| nb.distance == 0.0)
        .map(|nb| nb.index)
        .collect();
    if !zero.is_empty() {
        let n = zero.len() as f64;
        let mut sum = [0.0; 3];
        for &i in &zero {
            sum[0] += positions[i][0];
            sum[1] += positions[i][1];
            sum[2] += positions[i][2];
        }
        return EstimateOutcome {
            status: EstimateStatus::Estimated([sum[0] / n, sum[1] / n, sum[2] / n]),
            neighbors_used: zero.len(),
            weights: Some(vec![1.0 / n; zero.len()]),
        };
    }

    let raw: Vec<f64> = set
        .iter()
        .map(|nb| {
            let alpha = match weighting {
                Weighting::Idw(a) => a,
                Weighting::AdaptiveIdw => {
                    let r = radii.expect("adaptive weighting needs radii")[nb.index];
                    1.0 + nb.distance / r
                }
                Weighting::Unweighted => unreachable!(),
            };
            1.0 / nb.distance.powf(alpha)
        })
        .collect();
    let total: f64 = raw.iter().sum();
    let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
    let mut est = [0.0; 3];
    for (nb, w) in set.iter().zip(&weights) {
        let p = positions[nb.index];
        est[0] += w * p[0];
        est[1] += w * p[1];
        est[2] += w * p[2];
    }
    EstimateOutcome {
        status: EstimateStatus::Estimated(est),
        neighbors_used: set.len(),
        weights: Some(weights),
    }
}

/// kNN position estimate (M1 unweighted, M2 IDW, M3 IDW squared).
pub fn knn_estimate(
    searcher: &Searcher,
    rss: &[f64],
    k: usize,
    weighting: Weighting,
) -> Result<EstimateOutcome> {
    let set = searcher.knn(rss, k)?;
    Ok(combine(&set, searcher.positions(), weighting, None))
}

/// Fixed-radius estimate: unweighted centroid of everything within r_max.
pub fn frnn_estimate(searcher: &Searcher, rss: &[f64], r_max: f64) -> Result<EstimateOutcome> {
    let set = searcher.within_radius(rss, r_max)?;
    Ok(combine(&set, searcher.positions(), Weighting::Unweighted, None))
}

/// Leave-one-out radius training shared by ARNN and WARNN.
///
/// `K_max = max(K_min, ceil(p_percent/100 * N))`, clamped to N-1. The
/// radius assigned to sample i is the K-th sorted leave-one-out distance
/// for the largest K whose centroid estimate has 3D error within
/// `tau_epsilon`; later succeeding K values overwrite earlier ones.
pub fn train_radii(
    searcher: &Searcher,
    k_min: usize,
    p_percent: f64,
    tau_epsilon: f64,
) -> Result<RadiusModel> {
    let n = searcher.len();
    if n < 2 {
        return Err(Error::InvalidArgument(
            "radius training needs at least 2 training samples".into(),
        ));
    }
    if k_min < 1 || k_min > n - 1 {
        return Err(Error::InvalidArgument(format!(
            "K_min must be in 1..={}, got {k_min}",
            n - 1
        )));
    }
    if p_percent <= 0.0 {
        return Err(Error::InvalidArgument("p_percent must be positive".into()));
    }
    if tau_epsilon <= 0.0 {
        return Err(Error::InvalidArgument("tau_epsilon must be positive".into()));
    }
    let k_max = k_min
        .max((p_percent / 100.0 * n as f64).ceil() as usize)
        .min(n - 1);

    let features = searcher.features();
    let positions = searcher.positions();
    let metric = searcher.metric();

    let radii: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            // sorted leave-one-out distances, ties broken by index
            let mut dists: Vec<(f64, usize)> = Vec::with_capacity(n - 1);
            for j in 0..n {
                if j == i {
                    continue;
                }
                let d = metric
                    .distance(&features[i], &features[j])
                    .expect("equal-length training features");
                dists.push((d, j));
            }
            dists.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite distances"));

            let mut radius = 0.0;
            let mut sum = [0.0; 3];
            for (k, (d, j)) in dists.iter().take(k_max).enumerate() {
                let p = positions[*j];
                sum[0] += p[0];
                sum[1] += p[1];
                sum[2] += p[2];
                let count = (k + 1) as f64;
                if k + 1 >= k_min {
                    let est = [sum[0] / count, sum[1] / count, sum[2] / count];
                    if positioning_error(est, positions[i]) <= tau_epsilon {
                        radius = *d;
                    }
                }
            }
            radius
        })
        .collect();

    let zero_radius_count = radii.iter().filter(|r| **r == 0.0).count();
    Ok(RadiusModel {
        radii,
        zero_radius_count,
        k_min,
        k_max,
        tau_epsilon,
    })
}

/// ARNN estimate: unweighted centroid over the admitted set C.
pub fn arnn_estimate(
    searcher: &Searcher,
    model: &RadiusModel,
    rss: &[f64],
) -> Result<EstimateOutcome> {
    let set = searcher.within_adaptive_radii(rss, model.radii())?;
    Ok(combine(&set, searcher.positions(), Weighting::Unweighted, None))
}

/// WARNN estimate: inverse-distance weighted combination over C, with
/// fixed or adaptive decay.
pub fn warnn_estimate(
    searcher: &Searcher,
    model: &RadiusModel,
    rss: &[f64],
    weighting: Weighting,
) -> Result<EstimateOutcome> {
    if matches!(weighting, Weighting::Unweighted) {
        return Err(Error::InvalidArgument(
            "warnn_estimate requires a weighted scheme; use arnn_estimate".into(),
        ));
    }
    let set = searcher.within_adaptive_radii(rss, model.radii())?;
    Ok(combine(
        &set,
        searcher.positions(),
        weighting,
        Some(model.radii()),
    ))
}

/// One catalogued method: a stable ID plus its estimator spec.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Method {
    pub id: &'static str,
    pub spec: EstimatorSpec,
}

/// The fixed method catalog: kNN baselines M1-M3 and radius methods M14-M25.
pub fn method_catalog() -> Vec<Method> {
    use DistanceMetric::*;
    use Family::*;
    use Weighting::*;
    let m = |id, family, metric, weighting| Method {
        id,
        spec: EstimatorSpec {
            family,
            metric,
            weighting,
        },
    };
    vec![
        m("M1", Knn, Cityblock, Unweighted),
        m("M2", Knn, Cityblock, Idw(1.0)),
        m("M3", Knn, Cityblock, Idw(2.0)),
        m("M14", Frnn, Euclidean, Unweighted),
        m("M15", Frnn, Cityblock, Unweighted),
        m("M16", Frnn, Cosine, Unweighted),
        m("M17", Arnn, Euclidean, Unweighted),
        m("M18", Arnn, Cityblock, Unweighted),
        m("M19", Arnn, Cosine, Unweighted),
        m("M20", Warnn, Euclidean, Idw(2.0)),
        m("M21", Warnn, Euclidean, AdaptiveIdw),
        m("M22", Warnn, Cityblock, Idw(2.0)),
        m("M23", Warnn, Cityblock, AdaptiveIdw),
        m("M24", Warnn, Cosine, Idw(2.0)),
        m("M25", Warnn, Cosine, AdaptiveIdw),
    ]
}

/// Look up a catalogued method by ID.
pub fn method_by_id(id: &str) -> Option<Method> {
    method_catalog().into_iter().find(|m| m.id == id)
}
