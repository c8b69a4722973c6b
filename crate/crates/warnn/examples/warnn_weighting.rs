//! WARNN weighting schemes: fixed inverse-distance decay versus the
//! adaptive decay alpha = 1 + d/r that reflects where the query sits inside
//! each neighbor's sphere.

use warnn::dataset::{default_ap_layout, generate_synthetic, SyntheticParams};
use warnn::estimators::{train_radii, warnn_estimate, RadiusModel, Weighting};
use warnn::eval::{coverage_ratio, mean_error};
use warnn::metrics::DistanceMetric;
use warnn::neighbors::Searcher;

fn main() -> warnn::Result<()> {
    // two-member worked example: distances (1, 2), radii (4, 2)
    // adaptive decay: alpha = (1.25, 2.0) -> normalized weights (0.8, 0.2)
    let pair = warnn::dataset::FingerprintDataset::new(
        "pair",
        1,
        -105.0,
        vec![
            warnn::dataset::Fingerprint { rss: vec![-50.0], position: [0.0, 0.0, 0.0] },
            warnn::dataset::Fingerprint { rss: vec![-53.0], position: [10.0, 0.0, 0.0] },
        ],
    )?;
    let searcher = Searcher::new(&pair, DistanceMetric::Cityblock);
    let model = RadiusModel::from_radii(vec![4.0, 2.0], 1, 1, 5.0);
    let out = warnn_estimate(&searcher, &model, &[-51.0], Weighting::AdaptiveIdw)?;
    println!(
        "worked example: weights {:?}, estimate x = {:.2}",
        out.weights.as_ref().unwrap(),
        out.position().unwrap()[0]
    );

    // benchmark comparison on a noisy grid
    let params = SyntheticParams {
        grid: (10, 10, 2),
        ap_positions: default_ap_layout((10, 10, 2), 2.0, 4),
        noise_sd: 4.0,
        seed: 99,
        ..SyntheticParams::default()
    };
    let data = generate_synthetic("warnn-demo", &params)?;
    let (train, test) = data.split(0.7, 99)?;
    let searcher = Searcher::new(&train, DistanceMetric::Cityblock);
    let model = train_radii(&searcher, 1, 5.0, 5.0)?;
    let truths = test.positions();

    for (label, weighting) in [
        ("IDW alpha=2   ", Weighting::Idw(2.0)),
        ("adaptive decay", Weighting::AdaptiveIdw),
    ] {
        let outcomes: Vec<_> = test
            .samples()
            .iter()
            .map(|s| warnn_estimate(&searcher, &model, &s.rss, weighting))
            .collect::<warnn::Result<_>>()?;
        println!(
            "WARNN {label}: coverage {:.1}%, mean error {:.2} m",
            coverage_ratio(&outcomes)?,
            mean_error(&outcomes, &truths).unwrap()
        );
    }
    Ok(())
}
