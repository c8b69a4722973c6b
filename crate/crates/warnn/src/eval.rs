//! Error metrics, coverage ratio, and report aggregation: per-dataset mean
//! errors, cross-dataset averages, and min-rank assignment.

use crate::error::{Error, Result};
use crate::estimators::EstimateOutcome;
use serde::Serialize;
use std::io::Write;
use std::path::Path;

/// 3D positioning error: the Euclidean norm of the estimate/truth difference.
pub fn positioning_error(estimate: [f64; 3], truth: [f64; 3]) -> f64 {
    let dx = estimate[0] - truth[0];
    let dy = estimate[1] - truth[1];
    let dz = estimate[2] - truth[2];
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// Percentage of outcomes that produced an estimate: `100 * h / m`.
pub fn coverage_ratio(outcomes: &[EstimateOutcome]) -> Result<f64> {
    if outcomes.is_empty() {
        return Err(Error::InvalidArgument(
            "coverage ratio of an empty outcome list".into(),
        ));
    }
    let h = outcomes.iter().filter(|o| o.is_estimated()).count();
    Ok(100.0 * h as f64 / outcomes.len() as f64)
}

/// Mean 3D error over estimated outcomes only. `None` when nothing was
/// estimated. NoCoverage samples are excluded from the mean and show up in
/// the coverage column instead.
pub fn mean_error(outcomes: &[EstimateOutcome], truths: &[[f64; 3]]) -> Option<f64> {
    assert_eq!(outcomes.len(), truths.len());
    let mut sum = 0.0;
    let mut count = 0usize;
    for (o, t) in outcomes.iter().zip(truths) {
        if let Some(p) = o.position() {
            sum += positioning_error(p, *t);
            count += 1;
        }
    }
    (count > 0).then(|| sum / count as f64)
}

/// Raw outcomes for one method on one dataset.
#[derive(Debug, Clone)]
pub struct MethodOutcomes {
    pub method_id: String,
    /// Chosen hyperparameter rendered as text (e.g. "k=7", "r_max=120").
    pub hyper: Option<String>,
    pub outcomes: Vec<EstimateOutcome>,
}

/// All method outcomes for one dataset, with the shared ground truth.
#[derive(Debug, Clone)]
pub struct DatasetOutcomes {
    pub dataset: String,
    pub truths: Vec<[f64; 3]>,
    pub methods: Vec<MethodOutcomes>,
}

/// One report cell: a method on a dataset.
#[derive(Debug, Clone, Serialize)]
pub struct ReportCell {
    pub dataset: String,
    pub method_id: String,
    pub mean_error_m: Option<f64>,
    pub coverage_pct: f64,
    pub hyper: Option<String>,
}

/// Cross-dataset summary of one method.
#[derive(Debug, Clone, Serialize)]
pub struct MethodSummary {
    pub method_id: String,
    /// Mean of per-dataset mean errors, over datasets where the method
    /// produced a result.
    pub average_error_m: Option<f64>,
    /// Min-rank by ascending average error; ties at 2-decimal precision
    /// share the smaller rank.
    pub rank: Option<usize>,
    pub average_coverage_pct: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EvaluationReport {
    pub datasets: Vec<String>,
    pub methods: Vec<String>,
    pub cells: Vec<ReportCell>,
    pub summaries: Vec<MethodSummary>,
}

impl EvaluationReport {
    pub fn cell(&self, dataset: &str, method_id: &str) -> Option<&ReportCell> {
        self.cells
            .iter()
            .find(|c| c.dataset == dataset && c.method_id == method_id)
    }

    pub fn summary(&self, method_id: &str) -> Option<&MethodSummary> {
        self.summaries.iter().find(|s| s.method_id == method_id)
    }

    /// `dataset,method,mean_error_m,coverage_pct,hyper` rows.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["dataset", "method", "mean_error_m", "coverage_pct", "hyper"])?;
        for c in &self.cells {
            w.write_record([
                c.dataset.as_str(),
                c.method_id.as_str(),
                &c.mean_error_m.map_or(String::new(), |e| format!("{e}")),
                &format!("{}", c.coverage_pct),
                c.hyper.as_deref().unwrap_or(""),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// `method,average_error_m,rank,average_coverage_pct` rows.
    pub fn write_summary_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["method", "average_error_m", "rank", "average_coverage_pct"])?;
        for s in &self.summaries {
            w.write_record([
                s.method_id.as_str(),
                &s.average_error_m.map_or(String::new(), |e| format!("{e}")),
                &s.rank.map_or(String::new(), |r| r.to_string()),
                &format!("{}", s.average_coverage_pct),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        let text = serde_json::to_string_pretty(self)
            .map_err(|e| Error::Data(format!("report serialization: {e}")))?;
        f.write_all(text.as_bytes())?;
        f.write_all(b"\n")?;
        Ok(())
    }

    /// Console matrix: datasets as rows, methods as columns, plus average
    /// and rank footer rows.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let col = 10usize;
        out.push_str(&format!("{:<12}", "dataset"));
        for m in &self.methods {
            out.push_str(&format!("{m:>col$}"));
        }
        out.push('\n');
        for d in &self.datasets {
            out.push_str(&format!("{d:<12}"));
            for m in &self.methods {
                let text = self
                    .cell(d, m)
                    .and_then(|c| c.mean_error_m)
                    .map_or("-".to_string(), |e| format!("{e:.2}"));
                out.push_str(&format!("{text:>col$}"));
            }
            out.push('\n');
        }
        out.push_str(&format!("{:<12}", "average"));
        for m in &self.methods {
            let text = self
                .summary(m)
                .and_then(|s| s.average_error_m)
                .map_or("-".to_string(), |e| format!("{e:.2}"));
            out.push_str(&format!("{text:>col$}"));
        }
        out.push('\n');
        out.push_str(&format!("{:<12}", "rank"));
        for m in &self.methods {
            let text = self
                .summary(m)
                .and_then(|s| s.rank)
                .map_or("-".to_string(), |r| r.to_string());
            out.push_str(&format!("{text:>col$}"));
        }
        out.push('\n');
        out.push_str(&format!("{:<12}", "coverage"));
        for m in &self.methods {
            let text = self
                .summary(m)
                .map_or("-".to_string(), |s| format!("{:.1}", s.average_coverage_pct));
            out.push_str(&format!("{text:>col$}"));
        }
        out.push('\n');
        out
    }
}

/// Min-rank assignment over averages rounded to 2 decimals; `None` entries
/// are unranked.
fn assign_ranks(averages: &[Option<f64>]) -> Vec<Option<usize>> {
    let rounded: Vec<Option<f64>> = averages
        .iter()
        .map(|a| a.map(|v| (v * 100.0).round() / 100.0))
        .collect();
    rounded
        .iter()
        .map(|a| {
            a.map(|v| {
                1 + rounded
                    .iter()
                    .filter(|o| matches!(o, Some(w) if *w < v))
                    .count()
            })
        })
        .collect()
}

/// Aggregate raw per-sample outcomes into the evaluation report.
pub fn summarize(data: &[DatasetOutcomes]) -> Result<EvaluationReport> {
    if data.is_empty() || data.iter().all(|d| d.methods.is_empty()) {
        return Err(Error::InvalidArgument(
            "summarize needs at least one method x dataset cell".into(),
        ));
    }

    let datasets: Vec<String> = data.iter().map(|d| d.dataset.clone()).collect();
    let mut methods: Vec<String> = Vec::new();
    for d in data {
        for m in &d.methods {
            if !methods.contains(&m.method_id) {
                methods.push(m.method_id.clone());
            }
        }
    }

    let mut cells = Vec::new();
    for d in data {
        for m in &d.methods {
            cells.push(ReportCell {
                dataset: d.dataset.clone(),
                method_id: m.method_id.clone(),
                mean_error_m: mean_error(&m.outcomes, &d.truths),
                coverage_pct: coverage_ratio(&m.outcomes)?,
                hyper: m.hyper.clone(),
            });
        }
    }

    let averages: Vec<Option<f64>> = methods
        .iter()
        .map(|m| {
            let errs: Vec<f64> = cells
                .iter()
                .filter(|c| &c.method_id == m)
                .filter_map(|c| c.mean_error_m)
                .collect();
            (!errs.is_empty()).then(|| errs.iter().sum::<f64>() / errs.len() as f64)
        })
        .collect();
    let ranks = assign_ranks(&averages);

    let summaries = methods
        .iter()
        .zip(averages.iter().zip(&ranks))
        .map(|(m, (avg, rank))| {
            let covs: Vec<f64> = cells
                .iter()
                .filter(|c| &c.method_id == m)
                .map(|c| c.coverage_pct)
                .collect();
            MethodSummary {
                method_id: m.clone(),
                average_error_m: *avg,
                rank: *rank,
                average_coverage_pct: covs.iter().sum::<f64>() / covs.len() as f64,
            }
        })
        .collect();

    Ok(EvaluationReport {
        datasets,
        methods,
        cells,
        summaries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::{EstimateOutcome, EstimateStatus};

    fn estimated(p: [f64; 3]) -> EstimateOutcome {
        EstimateOutcome {
            status: EstimateStatus::Estimated(p),
            neighbors_used: 1,
            weights: None,
        }
    }

    #[test]
    fn positioning_error_basics() {
        assert_eq!(positioning_error([1.0, 2.0, 3.0], [1.0, 2.0, 3.0]), 0.0);
        assert_eq!(positioning_error([3.0, 4.0, 0.0], [0.0, 0.0, 0.0]), 5.0);
        assert_eq!(positioning_error([1.0, 2.0, 2.0], [0.0, 0.0, 0.0]), 3.0);
    }

    #[test]
    fn coverage_arithmetic() {
        let mut outcomes = vec![estimated([0.0; 3]); 9];
        outcomes.push(EstimateOutcome::no_coverage());
        assert_eq!(coverage_ratio(&outcomes).unwrap(), 90.0);
        assert_eq!(coverage_ratio(&outcomes[..9]).unwrap(), 100.0);
        assert!(coverage_ratio(&[]).is_err());
    }

    #[test]
    fn coverage_matches_recount_oracle() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(4);
        let outcomes: Vec<EstimateOutcome> = (0..500)
            .map(|_| {
                if rng.gen_bool(0.7) {
                    estimated([0.0; 3])
                } else {
                    EstimateOutcome::no_coverage()
                }
            })
            .collect();
        let h = outcomes.iter().filter(|o| o.is_estimated()).count();
        let expect = 100.0 * h as f64 / 500.0;
        assert_eq!(coverage_ratio(&outcomes).unwrap(), expect);
    }

    #[test]
    fn mean_error_excludes_no_coverage() {
        let outcomes = vec![
            estimated([3.0, 4.0, 0.0]),
            EstimateOutcome::no_coverage(),
            estimated([0.0, 0.0, 1.0]),
        ];
        let truths = [[0.0; 3], [0.0; 3], [0.0; 3]];
        assert_eq!(mean_error(&outcomes, &truths), Some(3.0));
    }

    #[test]
    fn single_cell_gets_rank_one() {
        let data = vec![DatasetOutcomes {
            dataset: "d1".into(),
            truths: vec![[0.0; 3]],
            methods: vec![MethodOutcomes {
                method_id: "M1".into(),
                hyper: Some("k=1".into()),
                outcomes: vec![estimated([1.0, 0.0, 0.0])],
            }],
        }];
        let report = summarize(&data).unwrap();
        assert_eq!(report.summary("M1").unwrap().rank, Some(1));
    }

    #[test]
    fn tied_rounded_averages_share_min_rank() {
        // 4.231 and 4.234 both round to 4.23 -> both rank 1; 5.0 -> rank 3
        let ranks = assign_ranks(&[Some(4.231), Some(4.234), Some(5.0), None]);
        assert_eq!(ranks, vec![Some(1), Some(1), Some(3), None]);
    }

    #[test]
    fn ranks_match_sort_oracle() {
        let avgs = [Some(3.5), Some(1.25), Some(2.75)];
        let ranks = assign_ranks(&avgs);
        assert_eq!(ranks, vec![Some(3), Some(1), Some(2)]);
    }

    #[test]
    fn mean_error_invariant_under_permutation() {
        let outcomes = vec![
            estimated([1.0, 0.0, 0.0]),
            estimated([0.0, 2.0, 0.0]),
            estimated([0.0, 0.0, 4.0]),
        ];
        let truths = [[0.0; 3]; 3];
        let a = mean_error(&outcomes, &truths);
        let rev: Vec<EstimateOutcome> = outcomes.iter().rev().cloned().collect();
        let b = mean_error(&rev, &truths);
        assert_eq!(a, b);
    }
}
