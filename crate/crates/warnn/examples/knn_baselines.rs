//! kNN position estimates with unweighted and inverse-distance-weighted
//! centroids (the M1/M2/M3 baselines).

use warnn::dataset::{default_ap_layout, generate_synthetic, SyntheticParams};
use warnn::estimators::{knn_estimate, Weighting};
use warnn::eval::{mean_error, positioning_error};
use warnn::metrics::DistanceMetric;
use warnn::neighbors::Searcher;

fn main() -> warnn::Result<()> {
    let params = SyntheticParams {
        grid: (10, 10, 1),
        ap_positions: default_ap_layout((10, 10, 1), 2.0, 4),
        noise_sd: 3.0,
        seed: 5,
        ..SyntheticParams::default()
    };
    let data = generate_synthetic("knn-demo", &params)?;
    let (train, test) = data.split(0.8, 5)?;
    let searcher = Searcher::new(&train, DistanceMetric::Cityblock);
    let truths = test.positions();

    for (label, weighting) in [
        ("unweighted centroid", Weighting::Unweighted),
        ("IDW alpha=1", Weighting::Idw(1.0)),
        ("IDW alpha=2", Weighting::Idw(2.0)),
    ] {
        let outcomes: Vec<_> = test
            .samples()
            .iter()
            .map(|s| knn_estimate(&searcher, &s.rss, 5, weighting))
            .collect::<warnn::Result<_>>()?;
        let mean = mean_error(&outcomes, &truths).unwrap();
        println!("k=5 {label}: mean 3D error {mean:.2} m");
    }

    // single query in detail
    let query = &test.samples()[0];
    let out = knn_estimate(&searcher, &query.rss, 3, Weighting::Idw(2.0))?;
    let est = out.position().unwrap();
    println!(
        "query 0: estimate {est:?}, truth {:?}, error {:.2} m, weights {:?}",
        query.position,
        positioning_error(est, query.position),
        out.weights.unwrap()
    );
    Ok(())
}
