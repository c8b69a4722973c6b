//! Radius-based near neighbor search for WiFi fingerprint positioning.
//!
//! This crate implements three radius near neighbor (RNN) regression
//! estimators together with kNN/WkNN baselines and the benchmark harness
//! used to compare them:
//!
//! - **FRNN** — fixed radius: estimate from every training sample within a
//!   single global radius of the query; may return no estimate.
//! - **ARNN** — adaptive radius: each training sample learns its own radius
//!   by leave-one-out self-estimation; a query is answered from all samples
//!   whose sphere contains it.
//! - **WARNN** — weighted ARNN: inverse-distance weights with a fixed decay
//!   factor or an adaptive decay `alpha = 1 + d/r` in `[1, 2]`.
//!
//! Because RNN estimators may legitimately answer "no coverage", every
//! evaluation reports a coverage ratio beside the mean error, and the
//! hyperparameter search only accepts values whose coverage stays above a
//! configurable floor (90% by default).
//!
//! # Quick start
//!
//! ```
//! use warnn::dataset::{generate_synthetic, SyntheticParams, default_ap_layout};
//! use warnn::estimators::{train_radii, warnn_estimate, Weighting};
//! use warnn::neighbors::Searcher;
//! use warnn::metrics::DistanceMetric;
//!
//! let params = SyntheticParams {
//!     grid: (6, 6, 1),
//!     ap_positions: default_ap_layout((6, 6, 1), 2.0, 4),
//!     ..SyntheticParams::default()
//! };
//! let data = generate_synthetic("demo", &params).unwrap();
//! let (train, test) = data.split(0.8, 1).unwrap();
//!
//! let searcher = Searcher::new(&train, DistanceMetric::Euclidean);
//! let model = train_radii(&searcher, 1, 20.0, 5.0).unwrap();
//! let out = warnn_estimate(&searcher, &model, &test.samples()[0].rss, Weighting::AdaptiveIdw).unwrap();
//! assert!(out.is_estimated() || out.neighbors_used == 0);
//! ```
//!
//! The `examples/` directory holds one runnable example per capability;
//! the `warnn` binary wraps the same pipeline behind `evaluate`,
//! `sweep-tau`, `generate`, and `validate-config` subcommands.

pub mod config;
pub mod dataset;
pub mod estimators;
pub mod eval;
pub mod metrics;
pub mod neighbors;
pub mod pipeline;
pub mod tuning;

mod error;

pub use error::{Error, Result};
