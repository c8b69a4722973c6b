//! Run orchestration: bind a config to datasets, tune and evaluate every
//! method, and emit report, trace, sweep, and outcome files.
//!
//! All parallelism happens inside a run-local rayon pool sized by the
//! config; results are gathered in deterministic order, so reports are
//! byte-identical for any worker count.

use crate::config::RunConfig;
use crate::dataset::FingerprintDataset;
use crate::error::{Error, Result};
use crate::estimators::{method_by_id, EstimateOutcome, Method};
use crate::eval::{summarize, DatasetOutcomes, EvaluationReport, MethodOutcomes, positioning_error};
use crate::neighbors::Searcher;
use crate::tuning::{evaluate_at, sweep_tau, tune, write_sweep_csv, TauPoint, TunedMethod};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

fn build_pool(workers: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        if n == 0 {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        b = b.num_threads(n);
    }
    b.build()
        .map_err(|e| Error::Config(format!("cannot build worker pool: {e}")))
}

fn resolve_methods(ids: &[String]) -> Result<Vec<Method>> {
    ids.iter()
        .map(|id| {
            method_by_id(id).ok_or_else(|| Error::Config(format!("unknown method id '{id}'")))
        })
        .collect()
}

/// Tune one method on one dataset and produce its final test outcomes.
///
/// In validation mode the hyperparameter is chosen on a held-out slice of
/// the training set and then re-evaluated on the test set with the full
/// training set behind it.
fn run_method(
    method: &Method,
    train: &FingerprintDataset,
    test: &FingerprintDataset,
    cfg: &RunConfig,
) -> Result<TunedMethod> {
    let grid = cfg.search_grid();
    if !cfg.tune_on_validation {
        return tune(method, train, test, &grid, cfg.tau_epsilon, cfg.k_min);
    }
    let (tune_train, validation) = train.split(1.0 - cfg.validation_fraction, cfg.seed)?;
    let mut tuned = tune(
        method,
        &tune_train,
        &validation,
        &grid,
        cfg.tau_epsilon,
        cfg.k_min,
    )?;
    let searcher = Searcher::new(train, method.spec.metric);
    let outcomes = evaluate_at(
        method,
        &searcher,
        test,
        tuned.chosen,
        cfg.tau_epsilon,
        cfg.k_min,
    )?;
    tuned.coverage = crate::eval::coverage_ratio(&outcomes)?;
    tuned.mean_error =
        crate::eval::mean_error(&outcomes, &test.positions()).unwrap_or(f64::NAN);
    tuned.outcomes = outcomes;
    Ok(tuned)
}

fn write_outcomes_csv(
    path: &Path,
    outcomes: &[EstimateOutcome],
    truths: &[[f64; 3]],
) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record([
        "sample_index",
        "status",
        "est_x",
        "est_y",
        "est_z",
        "true_x",
        "true_y",
        "true_z",
        "error_m",
        "neighbors_used",
    ])?;
    for (i, (o, t)) in outcomes.iter().zip(truths).enumerate() {
        let (status, est, err) = match o.position() {
            Some(p) => (
                "estimated",
                p.map(|v| format!("{v}")),
                format!("{}", positioning_error(p, *t)),
            ),
            None => ("no_coverage", [(); 3].map(|_| String::new()), String::new()),
        };
        w.write_record([
            i.to_string(),
            status.to_string(),
            est[0].clone(),
            est[1].clone(),
            est[2].clone(),
            format!("{}", t[0]),
            format!("{}", t[1]),
            format!("{}", t[2]),
            err,
            o.neighbors_used.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Full evaluation run: tune and evaluate every configured method on every
/// configured dataset, then write `report.csv`, `report_summary.csv`,
/// `report.json`, per-cell tuning traces, and a MANIFEST.
///
/// On per-cell failures the remaining cells still run; partial results are
/// flushed, the MANIFEST marks the failures, and the first error is
/// returned.
pub fn run_evaluate(cfg: &RunConfig, dump_outcomes: bool) -> Result<EvaluationReport> {
    cfg.validate()?;
    let methods = resolve_methods(&cfg.methods)?;
    let pool = build_pool(cfg.workers)?;
    let out_dir = &cfg.output_dir;
    fs::create_dir_all(out_dir)?;

    let mut manifest: Vec<String> = Vec::new();
    let mut first_error: Option<Error> = None;
    let mut data: Vec<DatasetOutcomes> = Vec::new();

    for ds_cfg in &cfg.datasets {
        let pair = ds_cfg.load_pair(cfg.seed);
        let (train, test) = match pair {
            Ok(p) => p,
            Err(e) => {
                manifest.push(format!("{}\t*\tfailed: {e}", ds_cfg.name));
                if first_error.is_none() {
                    first_error = Some(e);
                }
                continue;
            }
        };
        let truths = test.positions();
        let mut method_outcomes = Vec::new();
        for method in &methods {
            let result = pool.install(|| run_method(method, &train, &test, cfg));
            match result {
                Ok(tuned) => {
                    let trace_path =
                        out_dir.join(format!("trace_{}_{}.csv", ds_cfg.name, method.id));
                    tuned.write_trace_csv(&trace_path)?;
                    if dump_outcomes {
                        let dump_path =
                            out_dir.join(format!("outcomes_{}_{}.csv", ds_cfg.name, method.id));
                        write_outcomes_csv(&dump_path, &tuned.outcomes, &truths)?;
                    }
                    manifest.push(format!("{}\t{}\tok", ds_cfg.name, method.id));
                    method_outcomes.push(MethodOutcomes {
                        method_id: method.id.to_string(),
                        hyper: Some(tuned.chosen.label()),
                        outcomes: tuned.outcomes,
                    });
                }
                Err(e) => {
                    manifest.push(format!("{}\t{}\tfailed: {e}", ds_cfg.name, method.id));
                    if first_error.is_none() {
                        first_error = Some(e);
                    }
                }
            }
        }
        if !method_outcomes.is_empty() {
            data.push(DatasetOutcomes {
                dataset: ds_cfg.name.clone(),
                truths,
                methods: method_outcomes,
            });
        }
    }

    let mut mf = fs::File::create(out_dir.join("MANIFEST.txt"))?;
    for line in &manifest {
        writeln!(mf, "{line}")?;
    }

    let report = if data.is_empty() {
        None
    } else {
        let report = summarize(&data)?;
        report.write_csv(&out_dir.join("report.csv"))?;
        report.write_summary_csv(&out_dir.join("report_summary.csv"))?;
        report.write_json(&out_dir.join("report.json"))?;
        Some(report)
    };

    match (first_error, report) {
        (Some(e), _) => Err(e),
        (None, Some(report)) => Ok(report),
        (None, None) => Err(Error::Data("no results produced".into())),
    }
}

/// Error-threshold sweep for one radius-based method across all configured
/// datasets. Writes one `sweep_<dataset>_<method>.csv` per dataset.
pub fn run_sweep_tau(
    cfg: &RunConfig,
    method_id: &str,
    tau_grid: &[f64],
) -> Result<Vec<(String, Vec<TauPoint>)>> {
    cfg.validate()?;
    let method = method_by_id(method_id)
        .ok_or_else(|| Error::Config(format!("unknown method id '{method_id}'")))?;
    let pool = build_pool(cfg.workers)?;
    fs::create_dir_all(&cfg.output_dir)?;
    let grid = cfg.search_grid();

    let mut results = Vec::new();
    for ds_cfg in &cfg.datasets {
        let (train, test) = ds_cfg.load_pair(cfg.seed)?;
        let points =
            pool.install(|| sweep_tau(&method, &train, &test, tau_grid, &grid, cfg.k_min))?;
        let path = cfg
            .output_dir
            .join(format!("sweep_{}_{}.csv", ds_cfg.name, method.id));
        write_sweep_csv(&points, &path)?;
        results.push((ds_cfg.name.clone(), points));
    }
    Ok(results)
}

/// Generate a synthetic dataset CSV at `path`.
pub fn run_generate(
    params: &crate::dataset::SyntheticParams,
    name: &str,
    path: &PathBuf,
) -> Result<()> {
    let ds = crate::dataset::generate_synthetic(name, params)?;
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    ds.save_csv(path)
}
