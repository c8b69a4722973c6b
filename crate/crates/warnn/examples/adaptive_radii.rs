//! Train per-sample radii by leave-one-out self-estimation and run ARNN
//! queries against them.

use warnn::dataset::{default_ap_layout, generate_synthetic, SyntheticParams};
use warnn::estimators::{arnn_estimate, train_radii};
use warnn::eval::{coverage_ratio, mean_error};
use warnn::metrics::DistanceMetric;
use warnn::neighbors::Searcher;

fn main() -> warnn::Result<()> {
    let params = SyntheticParams {
        grid: (10, 10, 1),
        ap_positions: default_ap_layout((10, 10, 1), 2.0, 4),
        noise_sd: 3.0,
        seed: 2,
        ..SyntheticParams::default()
    };
    let data = generate_synthetic("arnn-demo", &params)?;
    let (train, test) = data.split(0.8, 2)?;
    let searcher = Searcher::new(&train, DistanceMetric::Euclidean);

    // K_max = ceil(10% of N); threshold 5 m on the leave-one-out error
    let model = train_radii(&searcher, 1, 10.0, 5.0)?;
    let radii = model.radii();
    let max = radii.iter().cloned().fold(0.0, f64::max);
    let positive = radii.iter().filter(|r| **r > 0.0).count();
    println!(
        "trained {} radii: {} positive, {} zero (likely outliers), max {:.2}",
        radii.len(),
        positive,
        model.zero_radius_count(),
        max
    );

    let truths = test.positions();
    let outcomes: Vec<_> = test
        .samples()
        .iter()
        .map(|s| arnn_estimate(&searcher, &model, &s.rss))
        .collect::<warnn::Result<_>>()?;
    println!(
        "ARNN: coverage {:.1}%, mean 3D error {:.2} m",
        coverage_ratio(&outcomes)?,
        mean_error(&outcomes, &truths).unwrap()
    );

    // a tighter threshold shrinks radii and coverage
    let tight = train_radii(&searcher, 1, 10.0, 2.0)?;
    let outcomes: Vec<_> = test
        .samples()
        .iter()
        .map(|s| arnn_estimate(&searcher, &tight, &s.rss))
        .collect::<warnn::Result<_>>()?;
    println!(
        "ARNN with tau=2 m: coverage {:.1}%, zero radii {}",
        coverage_ratio(&outcomes)?,
        tight.zero_radius_count()
    );
    Ok(())
}
