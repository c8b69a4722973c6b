//! Benchmark CLI: dataset registration via a TOML config, method tuning and
//! evaluation, error-threshold sweeps, and synthetic dataset generation.

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use warnn::config::RunConfig;
use warnn::dataset::{default_ap_layout, SyntheticParams};
use warnn::pipeline;

#[derive(Parser)]
#[command(name = "warnn", about = "Radius near neighbor positioning benchmark")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonFlags {
    /// Run configuration (TOML)
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides the config)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed (overrides the config)
    #[arg(long)]
    seed: Option<u64>,
    /// Worker count, or "auto" for one per logical CPU
    #[arg(long)]
    workers: Option<String>,
    /// Comma-separated method IDs (overrides the config)
    #[arg(long)]
    methods: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Tune and evaluate all configured methods; write report files
    Evaluate {
        #[command(flatten)]
        common: CommonFlags,
        /// Also write per-sample outcome dumps
        #[arg(long)]
        dump_outcomes: bool,
    },
    /// Retune a radius-based method across error thresholds
    SweepTau {
        #[command(flatten)]
        common: CommonFlags,
        /// Method to sweep (ARNN/WARNN family)
        #[arg(long)]
        method: String,
        /// Comma-separated thresholds in meters (default: config tau grid)
        #[arg(long)]
        tau_grid: Option<String>,
    },
    /// Generate a synthetic fingerprint dataset CSV
    Generate {
        #[arg(long, default_value_t = 10)]
        nx: usize,
        #[arg(long, default_value_t = 10)]
        ny: usize,
        #[arg(long, default_value_t = 1)]
        nz: usize,
        #[arg(long, default_value_t = 2.0)]
        spacing: f64,
        /// AP position as "x,y,z"; repeatable. Four corner APs when omitted.
        #[arg(long = "ap")]
        aps: Vec<String>,
        #[arg(long, default_value_t = -30.0, allow_hyphen_values = true)]
        tx_power: f64,
        #[arg(long, default_value_t = 2.5)]
        exponent: f64,
        #[arg(long, default_value_t = 0.0)]
        noise_sd: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
    },
    /// Parse and validate a run configuration
    ValidateConfig {
        #[arg(long)]
        config: PathBuf,
    },
}

fn apply_overrides(cfg: &mut RunConfig, common: &CommonFlags) -> warnn::Result<()> {
    if let Some(out) = &common.out {
        cfg.output_dir = out.clone();
    }
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(w) = &common.workers {
        cfg.workers = if w == "auto" {
            None
        } else {
            Some(w.parse().map_err(|_| {
                warnn::Error::Config(format!("workers must be a number or 'auto', got '{w}'"))
            })?)
        };
    }
    if let Some(methods) = &common.methods {
        cfg.methods = methods.split(',').map(|s| s.trim().to_string()).collect();
    }
    cfg.validate()
}

fn parse_ap(text: &str) -> warnn::Result<[f64; 3]> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| warnn::Error::InvalidArgument(format!("bad AP position '{text}'")))?;
    if parts.len() != 3 {
        return Err(warnn::Error::InvalidArgument(format!(
            "AP position needs 3 coordinates, got '{text}'"
        )));
    }
    Ok([parts[0], parts[1], parts[2]])
}

fn run(cli: Cli) -> warnn::Result<()> {
    match cli.command {
        Command::Evaluate {
            common,
            dump_outcomes,
        } => {
            let mut cfg = RunConfig::from_path(&common.config)?;
            apply_overrides(&mut cfg, &common)?;
            let report = pipeline::run_evaluate(&cfg, dump_outcomes)?;
            print!("{}", report.render_table());
            println!("reports written to {}", cfg.output_dir.display());
            Ok(())
        }
        Command::SweepTau {
            common,
            method,
            tau_grid,
        } => {
            let mut cfg = RunConfig::from_path(&common.config)?;
            apply_overrides(&mut cfg, &common)?;
            let taus: Vec<f64> = match tau_grid {
                Some(text) => text
                    .split(',')
                    .map(|s| {
                        s.trim().parse::<f64>().map_err(|_| {
                            warnn::Error::InvalidArgument(format!("bad tau value '{s}'"))
                        })
                    })
                    .collect::<warnn::Result<_>>()?,
                None => cfg.search_grid().tau,
            };
            let results = pipeline::run_sweep_tau(&cfg, &method, &taus)?;
            for (dataset, points) in &results {
                println!("{dataset}:");
                for p in points {
                    match (p.mean_error, p.coverage) {
                        (Some(e), Some(c)) => {
                            println!("  tau={:>5} m  error={e:.3} m  coverage={c:.2}%", p.tau)
                        }
                        _ => println!("  tau={:>5} m  infeasible", p.tau),
                    }
                }
            }
            Ok(())
        }
        Command::Generate {
            nx,
            ny,
            nz,
            spacing,
            aps,
            tx_power,
            exponent,
            noise_sd,
            seed,
            out,
        } => {
            let ap_positions = if aps.is_empty() {
                default_ap_layout((nx, ny, nz), spacing, 4)
            } else {
                aps.iter().map(|a| parse_ap(a)).collect::<warnn::Result<_>>()?
            };
            let params = SyntheticParams {
                grid: (nx, ny, nz),
                spacing,
                ap_positions,
                tx_power,
                path_loss_exponent: exponent,
                noise_sd,
                seed,
            };
            pipeline::run_generate(&params, "synthetic", &out)?;
            println!("wrote {} samples to {}", nx * ny * nz, out.display());
            Ok(())
        }
        Command::ValidateConfig { config } => {
            let cfg = RunConfig::from_path(&config)?;
            println!(
                "config ok: {} dataset(s), {} method(s)",
                cfg.datasets.len(),
                cfg.methods.len()
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
