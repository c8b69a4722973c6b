//! Distance metrics over RSS vectors.
//!
//! Five metrics are supported: Euclidean, Cityblock, Cosine, Min-Max, and
//! Clark. Min-Max and Clark are only meaningful on non-negative features;
//! callers must map raw dBm vectors through [`positive_transform`] first
//! (the query engine does this automatically).

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MetricError {
    #[error("vector length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("cosine distance is undefined for a zero-norm vector")]
    ZeroNorm,
}

/// The distance metrics used throughout the evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistanceMetric {
    Euclidean,
    Cityblock,
    Cosine,
    MinMax,
    Clark,
}

impl DistanceMetric {
    pub const ALL: [DistanceMetric; 5] = [
        DistanceMetric::Euclidean,
        DistanceMetric::Cityblock,
        DistanceMetric::Cosine,
        DistanceMetric::MinMax,
        DistanceMetric::Clark,
    ];

    /// Min-Max and Clark operate on positive-transformed RSS only.
    pub fn requires_nonnegative(self) -> bool {
        matches!(self, DistanceMetric::MinMax | DistanceMetric::Clark)
    }

    /// Distance between two equal-length vectors.
    pub fn distance(self, a: &[f64], b: &[f64]) -> Result<f64, MetricError> {
        if a.len() != b.len() {
            return Err(MetricError::LengthMismatch {
                left: a.len(),
                right: b.len(),
            });
        }
        let d = match self {
            DistanceMetric::Euclidean => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt(),
            DistanceMetric::Cityblock => a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum(),
            DistanceMetric::Cosine => {
                let mut dot = 0.0;
                let mut na = 0.0;
                let mut nb = 0.0;
                for (x, y) in a.iter().zip(b) {
                    dot += x * y;
                    na += x * x;
                    nb += y * y;
                }
                if na == 0.0 || nb == 0.0 {
                    return Err(MetricError::ZeroNorm);
                }
                // Clamp rounding noise so identical vectors report exactly 0.
                (1.0 - dot / (na.sqrt() * nb.sqrt())).max(0.0)
            }
            DistanceMetric::MinMax => {
                let mut mins = 0.0;
                let mut maxs = 0.0;
                for (x, y) in a.iter().zip(b) {
                    mins += x.min(*y);
                    maxs += x.max(*y);
                }
                if maxs == 0.0 {
                    0.0
                } else {
                    1.0 - mins / maxs
                }
            }
            DistanceMetric::Clark => a
                .iter()
                .zip(b)
                .filter(|(x, y)| **x + **y != 0.0)
                .map(|(x, y)| {
                    let t = (x - y) / (x + y);
                    t * t
                })
                .sum::<f64>()
                .sqrt(),
        };
        Ok(d)
    }
}

impl fmt::Display for DistanceMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DistanceMetric::Euclidean => "euclidean",
            DistanceMetric::Cityblock => "cityblock",
            DistanceMetric::Cosine => "cosine",
            DistanceMetric::MinMax => "minmax",
            DistanceMetric::Clark => "clark",
        };
        f.write_str(s)
    }
}

impl FromStr for DistanceMetric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "euclidean" => Ok(DistanceMetric::Euclidean),
            "cityblock" => Ok(DistanceMetric::Cityblock),
            "cosine" => Ok(DistanceMetric::Cosine),
            "minmax" => Ok(DistanceMetric::MinMax),
            "clark" => Ok(DistanceMetric::Clark),
            other => Err(format!("unknown distance metric '{other}'")),
        }
    }
}

/// Shift a dBm vector into the non-negative domain: `max(rss - floor, 0)`.
pub fn positive_transform(rss: &[f64], floor: f64) -> Vec<f64> {
    rss.iter().map(|v| (v - floor).max(0.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn euclidean_pythagorean() {
        let d = DistanceMetric::Euclidean
            .distance(&[0.0, 0.0], &[3.0, 4.0])
            .unwrap();
        assert_eq!(d, 5.0);
    }

    #[test]
    fn cityblock_identity() {
        let x = [-40.0, -73.5, -105.0];
        assert_eq!(DistanceMetric::Cityblock.distance(&x, &x).unwrap(), 0.0);
    }

    #[test]
    fn cosine_orthogonal() {
        let d = DistanceMetric::Cosine
            .distance(&[1.0, 0.0], &[0.0, 1.0])
            .unwrap();
        assert!((d - 1.0).abs() < 1e-15);
    }

    #[test]
    fn cosine_zero_norm_is_error() {
        let err = DistanceMetric::Cosine
            .distance(&[0.0, 0.0], &[1.0, 1.0])
            .unwrap_err();
        assert_eq!(err, MetricError::ZeroNorm);
    }

    #[test]
    fn length_mismatch_is_error() {
        for m in DistanceMetric::ALL {
            let err = m.distance(&[1.0], &[1.0, 2.0]).unwrap_err();
            assert_eq!(err, MetricError::LengthMismatch { left: 1, right: 2 });
        }
    }

    #[test]
    fn positive_transform_floors_and_clamps() {
        assert_eq!(positive_transform(&[-50.0, -105.0], -105.0), vec![55.0, 0.0]);
        assert_eq!(positive_transform(&[-105.0, -105.0], -105.0), vec![0.0, 0.0]);
    }

    #[test]
    fn clark_matches_hand_sum_on_transformed_pair() {
        // a = [-50,-80,-105], b = [-60,-105,-90], floor = -105
        // transformed: [55,25,0] vs [45,0,15]
        let a = positive_transform(&[-50.0, -80.0, -105.0], -105.0);
        let b = positive_transform(&[-60.0, -105.0, -90.0], -105.0);
        let expect = ((10.0f64 / 100.0).powi(2) + (25.0f64 / 25.0).powi(2)
            + (15.0f64 / 15.0).powi(2))
        .sqrt();
        let d = DistanceMetric::Clark.distance(&a, &b).unwrap();
        assert!((d - expect).abs() < 1e-12);
    }

    #[test]
    fn clark_skips_jointly_zero_dimensions() {
        let d = DistanceMetric::Clark
            .distance(&[0.0, 10.0], &[0.0, 10.0])
            .unwrap();
        assert_eq!(d, 0.0);
    }

    #[test]
    fn minmax_identical_vectors() {
        let x = [55.0, 25.0, 0.0];
        assert_eq!(DistanceMetric::MinMax.distance(&x, &x).unwrap(), 0.0);
    }

    #[test]
    fn metric_name_round_trip() {
        for m in DistanceMetric::ALL {
            assert_eq!(m.to_string().parse::<DistanceMetric>().unwrap(), m);
        }
    }

    proptest! {
        #[test]
        fn symmetry_and_nonnegativity(
            pair in proptest::collection::vec((1.0f64..200.0, 1.0f64..200.0), 1..20)
        ) {
            let a: Vec<f64> = pair.iter().map(|p| p.0).collect();
            let b: Vec<f64> = pair.iter().map(|p| p.1).collect();
            for m in DistanceMetric::ALL {
                let ab = m.distance(&a, &b).unwrap();
                let ba = m.distance(&b, &a).unwrap();
                prop_assert!(ab >= 0.0);
                prop_assert!((ab - ba).abs() < 1e-12);
                prop_assert!(m.distance(&a, &a).unwrap().abs() < 1e-12);
            }
        }

        #[test]
        fn euclidean_bounded_by_cityblock(
            pair in proptest::collection::vec((-110.0f64..0.0, -110.0f64..0.0), 1..30)
        ) {
            let a: Vec<f64> = pair.iter().map(|p| p.0).collect();
            let b: Vec<f64> = pair.iter().map(|p| p.1).collect();
            let e = DistanceMetric::Euclidean.distance(&a, &b).unwrap();
            let c = DistanceMetric::Cityblock.distance(&a, &b).unwrap();
            prop_assert!(e <= c + 1e-9);
        }
    }
}
