//! Error-threshold sweep: retune the neighbor-budget p for each training
//! threshold tau and watch the accuracy/coverage trade-off.

use warnn::dataset::{default_ap_layout, generate_synthetic, SyntheticParams};
use warnn::estimators::method_by_id;
use warnn::tuning::{sweep_tau, SearchGrid};

fn main() -> warnn::Result<()> {
    let params = SyntheticParams {
        grid: (10, 10, 1),
        ap_positions: default_ap_layout((10, 10, 1), 2.0, 4),
        noise_sd: 3.0,
        seed: 6,
        ..SyntheticParams::default()
    };
    let data = generate_synthetic("sweep-demo", &params)?;
    let (train, test) = data.split(0.8, 6)?;

    let grid = SearchGrid {
        p: vec![2.0, 5.0, 10.0, 20.0],
        ..SearchGrid::default()
    };
    let method = method_by_id("M23").unwrap();
    let taus: Vec<f64> = (3..=11).map(|i| i as f64).collect();
    let points = sweep_tau(&method, &train, &test, &taus, &grid, 1)?;

    println!("tau      mean error    coverage    chosen p");
    for p in &points {
        match (p.mean_error, p.coverage, p.chosen_p) {
            (Some(e), Some(c), Some(cp)) => {
                println!("{:>4} m    {e:7.2} m    {c:>6.1}%    {cp}", p.tau)
            }
            _ => println!("{:>4} m    infeasible (coverage floor not reached)", p.tau),
        }
    }
    Ok(())
}
