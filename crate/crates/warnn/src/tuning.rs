//! Brute-force hyperparameter search under a minimum-coverage constraint:
//! k for the kNN baselines, r_max for FRNN, the neighbor-budget percentage p
//! for ARNN/WARNN, and the error-threshold sweep.

use crate::dataset::FingerprintDataset;
use crate::error::{Error, Result};
use crate::estimators::{
    arnn_estimate, frnn_estimate, knn_estimate, train_radii, warnn_estimate, EstimateOutcome,
    Family, Method,
};
use crate::eval::{coverage_ratio, mean_error};
use crate::metrics::DistanceMetric;
use crate::neighbors::Searcher;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// A family-specific hyperparameter value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum HyperValue {
    K(usize),
    RMax(f64),
    P(f64),
}

impl HyperValue {
    pub fn as_f64(self) -> f64 {
        match self {
            HyperValue::K(k) => k as f64,
            HyperValue::RMax(r) => r,
            HyperValue::P(p) => p,
        }
    }

    pub fn label(self) -> String {
        match self {
            HyperValue::K(k) => format!("k={k}"),
            HyperValue::RMax(r) => format!("r_max={r}"),
            HyperValue::P(p) => format!("p={p}"),
        }
    }
}

/// Search grids with the evaluation-protocol defaults.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchGrid {
    pub k: Vec<usize>,
    pub r_max_euclidean: Vec<f64>,
    pub r_max_cityblock: Vec<f64>,
    pub r_max_cosine: Vec<f64>,
    pub p: Vec<f64>,
    pub tau: Vec<f64>,
    /// Minimum coverage ratio (percent) a hyperparameter value must reach.
    pub min_coverage: f64,
}

impl Default for SearchGrid {
    fn default() -> Self {
        // k in {1..21} U {23,25,..,51}
        let k: Vec<usize> = (1..=21).chain((23..=51).step_by(2)).collect();
        // Euclidean r_max in {60,62,..,260}
        let r_max_euclidean: Vec<f64> = (30..=130).map(|i| (i * 2) as f64).collect();
        // Cityblock r_max in {150,152,..,300} U {305,310,..,1000} U {1010,1020,..,2350}
        let r_max_cityblock: Vec<f64> = (75..=150)
            .map(|i| (i * 2) as f64)
            .chain((61..=200).map(|i| (i * 5) as f64))
            .chain((101..=235).map(|i| (i * 10) as f64))
            .collect();
        // Cosine r_max in {0.010,0.012,..,0.098} U {0.100,0.105,..,0.500}
        let r_max_cosine: Vec<f64> = (5..=49)
            .map(|i| i as f64 * 0.002)
            .chain((20..=100).map(|i| i as f64 * 0.005))
            .collect();
        // p in {0.1,0.2,..,25.0} U {26,27,..,40} (25.0 appears once)
        let p: Vec<f64> = (1..=250)
            .map(|i| i as f64 / 10.0)
            .chain((26..=40).map(|i| i as f64))
            .collect();
        let tau: Vec<f64> = (3..=11).map(|i| i as f64).collect();
        Self {
            k,
            r_max_euclidean,
            r_max_cityblock,
            r_max_cosine,
            p,
            tau,
            min_coverage: 90.0,
        }
    }
}

impl SearchGrid {
    pub fn r_max_for(&self, metric: DistanceMetric) -> Result<&[f64]> {
        match metric {
            DistanceMetric::Euclidean => Ok(&self.r_max_euclidean),
            DistanceMetric::Cityblock => Ok(&self.r_max_cityblock),
            DistanceMetric::Cosine => Ok(&self.r_max_cosine),
            other => Err(Error::Config(format!(
                "no default r_max grid for metric '{other}'; supply one in the config"
            ))),
        }
    }

    /// Grid values for one method family.
    pub fn values_for(&self, method: &Method) -> Result<Vec<HyperValue>> {
        let values = match method.spec.family {
            Family::Knn => self.k.iter().map(|&k| HyperValue::K(k)).collect::<Vec<_>>(),
            Family::Frnn => self
                .r_max_for(method.spec.metric)?
                .iter()
                .map(|&r| HyperValue::RMax(r))
                .collect(),
            Family::Arnn | Family::Warnn => self.p.iter().map(|&p| HyperValue::P(p)).collect(),
        };
        if values.is_empty() {
            return Err(Error::Config(format!(
                "empty hyperparameter grid for {}",
                method.id
            )));
        }
        Ok(values)
    }
}

/// Evaluate one method at one hyperparameter value over the whole test set.
pub fn evaluate_at(
    method: &Method,
    searcher: &Searcher,
    test: &FingerprintDataset,
    hyper: HyperValue,
    tau_epsilon: f64,
    k_min: usize,
) -> Result<Vec<EstimateOutcome>> {
    match (method.spec.family, hyper) {
        (Family::Knn, HyperValue::K(k)) => {
            let k = k.min(searcher.len());
            test.samples()
                .par_iter()
                .map(|s| knn_estimate(searcher, &s.rss, k, method.spec.weighting))
                .collect()
        }
        (Family::Frnn, HyperValue::RMax(r)) => test
            .samples()
            .par_iter()
            .map(|s| frnn_estimate(searcher, &s.rss, r))
            .collect(),
        (Family::Arnn, HyperValue::P(p)) => {
            let model = train_radii(searcher, k_min, p, tau_epsilon)?;
            test.samples()
                .par_iter()
                .map(|s| arnn_estimate(searcher, &model, &s.rss))
                .collect()
        }
        (Family::Warnn, HyperValue::P(p)) => {
            let model = train_radii(searcher, k_min, p, tau_epsilon)?;
            test.samples()
                .par_iter()
                .map(|s| warnn_estimate(searcher, &model, &s.rss, method.spec.weighting))
                .collect()
        }
        (family, hyper) => Err(Error::InvalidArgument(format!(
            "hyperparameter {hyper:?} does not fit family {family:?}"
        ))),
    }
}

/// One row of the tuning trace.
#[derive(Debug, Clone, Serialize)]
pub struct TracePoint {
    pub value: f64,
    pub mean_error: Option<f64>,
    pub coverage: f64,
    pub feasible: bool,
}

/// Result of a brute-force search for one method on one dataset.
#[derive(Debug, Clone)]
pub struct TunedMethod {
    pub method_id: String,
    pub chosen: HyperValue,
    pub mean_error: f64,
    pub coverage: f64,
    pub trace: Vec<TracePoint>,
    /// Per-test-sample outcomes at the chosen value.
    pub outcomes: Vec<EstimateOutcome>,
}

impl TunedMethod {
    /// `hyper,mean_error,coverage,feasible` rows, grid order.
    pub fn write_trace_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["hyper", "mean_error_m", "coverage_pct", "feasible"])?;
        for t in &self.trace {
            w.write_record([
                format!("{}", t.value),
                t.mean_error.map_or(String::new(), |e| format!("{e}")),
                format!("{}", t.coverage),
                t.feasible.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Brute-force search over the method's grid: every value is evaluated
/// end-to-end on (train, test); values below the coverage floor are kept in
/// the trace but excluded from selection; the feasible value with the
/// smallest mean error wins, ties going to the smaller value.
pub fn tune(
    method: &Method,
    train: &FingerprintDataset,
    test: &FingerprintDataset,
    grid: &SearchGrid,
    tau_epsilon: f64,
    k_min: usize,
) -> Result<TunedMethod> {
    let searcher = Searcher::new(train, method.spec.metric);
    let values = grid.values_for(method)?;
    let truths = test.positions();

    let evaluated: Vec<(HyperValue, Vec<EstimateOutcome>)> = values
        .par_iter()
        .map(|&v| {
            evaluate_at(method, &searcher, test, v, tau_epsilon, k_min).map(|o| (v, o))
        })
        .collect::<Result<_>>()?;

    let mut trace = Vec::with_capacity(evaluated.len());
    let mut best: Option<(usize, f64)> = None;
    for (i, (v, outcomes)) in evaluated.iter().enumerate() {
        let coverage = coverage_ratio(outcomes)?;
        let err = mean_error(outcomes, &truths);
        let feasible = coverage >= grid.min_coverage && err.is_some();
        if feasible {
            let e = err.expect("feasible implies an error value");
            // strict < keeps the earliest (smallest) grid value on ties
            if best.map_or(true, |(_, b)| e < b) {
                best = Some((i, e));
            }
        }
        trace.push(TracePoint {
            value: v.as_f64(),
            mean_error: err,
            coverage,
            feasible,
        });
    }

    let (idx, err) = best.ok_or_else(|| Error::Infeasible {
        method: method.id.to_string(),
        reason: format!(
            "no grid value reached the minimum coverage ratio of {}%",
            grid.min_coverage
        ),
    })?;
    let (chosen, outcomes) = evaluated.into_iter().nth(idx).expect("index from trace");
    Ok(TunedMethod {
        method_id: method.id.to_string(),
        chosen,
        mean_error: err,
        coverage: trace[idx].coverage,
        trace,
        outcomes,
    })
}

/// One row of an error-threshold sweep.
#[derive(Debug, Clone, Serialize)]
pub struct TauPoint {
    pub tau: f64,
    pub feasible: bool,
    pub chosen_p: Option<f64>,
    pub mean_error: Option<f64>,
    pub coverage: Option<f64>,
}

/// Retune p for each error threshold. Thresholds where no p satisfies the
/// coverage floor are reported as infeasible rather than dropped.
pub fn sweep_tau(
    method: &Method,
    train: &FingerprintDataset,
    test: &FingerprintDataset,
    tau_grid: &[f64],
    grid: &SearchGrid,
    k_min: usize,
) -> Result<Vec<TauPoint>> {
    if !matches!(method.spec.family, Family::Arnn | Family::Warnn) {
        return Err(Error::InvalidArgument(format!(
            "sweep requires a radius-based method with trained radii, got {} ({:?})",
            method.id, method.spec.family
        )));
    }
    if tau_grid.is_empty() {
        return Err(Error::InvalidArgument("empty tau grid".into()));
    }
    tau_grid
        .iter()
        .map(|&tau| match tune(method, train, test, grid, tau, k_min) {
            Ok(t) => Ok(TauPoint {
                tau,
                feasible: true,
                chosen_p: Some(t.chosen.as_f64()),
                mean_error: Some(t.mean_error),
                coverage: Some(t.coverage),
            }),
            Err(Error::Infeasible { .. }) => Ok(TauPoint {
                tau,
                feasible: false,
                chosen_p: None,
                mean_error: None,
                coverage: None,
            }),
            Err(e) => Err(e),
        })
        .collect()
}

/// `tau_m,mean_error_m,coverage_pct,chosen_p,feasible` rows for plotting.
pub fn write_sweep_csv(points: &[TauPoint], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["tau_m", "mean_error_m", "coverage_pct", "chosen_p", "feasible"])?;
    for p in points {
        w.write_record([
            format!("{}", p.tau),
            p.mean_error.map_or(String::new(), |e| format!("{e}")),
            p.coverage.map_or(String::new(), |c| format!("{c}")),
            p.chosen_p.map_or(String::new(), |v| format!("{v}")),
            p.feasible.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
