//! The whole pipeline through a declarative config: tune and evaluate a set
//! of methods on a registered dataset, then print the report matrix.
//!
//! The same run is available from the command line:
//! `warnn evaluate --config run.toml --out out/`.

use warnn::config::RunConfig;
use warnn::pipeline::run_evaluate;

fn main() -> warnn::Result<()> {
    let out_dir = std::env::temp_dir().join("warnn_full_evaluation");
    let config = format!(
        r#"
methods = ["M1", "M3", "M14", "M17", "M23"]
seed = 21
tau_epsilon = 5.0
min_coverage = 90.0
output_dir = "{}"

# desk-scale grids; defaults reproduce the full evaluation protocol
[grid]
k = [1, 3, 5, 7, 9]
p = [2.0, 5.0, 10.0, 20.0]
r_max_euclidean = [10, 15, 20, 25, 30, 40, 60]

[[datasets]]
name = "office"
synthetic = {{ nx = 10, ny = 10, nz = 2, noise_sd = 4.0, split_fraction = 0.7 }}
"#,
        out_dir.display()
    );

    let cfg = RunConfig::from_toml_str(&config)?;
    let report = run_evaluate(&cfg, false)?;
    print!("{}", report.render_table());
    for cell in &report.cells {
        println!(
            "{} {}: hyper {}, coverage {:.1}%",
            cell.dataset,
            cell.method_id,
            cell.hyper.as_deref().unwrap_or("-"),
            cell.coverage_pct
        );
    }
    println!("\nreport files in {}", out_dir.display());
    Ok(())
}
