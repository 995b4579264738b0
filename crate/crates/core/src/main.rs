use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ensemble_pf::harness::verify::{run_check, CHECK_IDS};
use ensemble_pf::harness::{bench_to_file, run_to_file, simulate_to_files, ExperimentConfig, Scale, WORKERS_ENV};
use ensemble_pf::Result;

#[derive(Parser)]
#[command(name = "ensemble-pf", version, about = "Ensembles of independent particle filters")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a ground-truth trajectory and its observations.
    Simulate(ConfigArgs),
    /// Run one filter configuration and write its per-step estimates.
    Run(ConfigArgs),
    /// Sweep variants over M and N and write one metrics row per point.
    Bench(ConfigArgs),
    /// Run the oracle-backed checks and print pass/fail lines.
    Verify {
        /// Smaller replicate counts; the tolerances stay the same.
        #[arg(long)]
        quick: bool,
        /// Check numbers to run (default: all).
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
    },
}

/// Every flag overrides the key of the same name in `--config`.
#[derive(Args)]
struct ConfigArgs {
    /// Flat key=value file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    side: Option<String>,
    #[arg(long)]
    steps: Option<String>,
    /// Comma-separated variants.
    #[arg(long)]
    variant: Option<String>,
    #[arg(long = "M")]
    m: Option<String>,
    #[arg(long = "N")]
    n: Option<String>,
    #[arg(long)]
    reps: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long, env = WORKERS_ENV)]
    workers: Option<String>,
    #[arg(long)]
    island_period: Option<String>,
    #[arg(long)]
    reference_particles: Option<String>,
    #[arg(long)]
    observations: Option<String>,
    #[arg(long)]
    trajectory: Option<String>,
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    trajectory_out: Option<String>,
    #[arg(long)]
    observations_out: Option<String>,
}

impl ConfigArgs {
    fn resolve(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(p) => ExperimentConfig::from_file(p)?,
            None => ExperimentConfig::default(),
        };
        let flags = [
            ("model", &self.model),
            ("side", &self.side),
            ("steps", &self.steps),
            ("variant", &self.variant),
            ("M", &self.m),
            ("N", &self.n),
            ("reps", &self.reps),
            ("seed", &self.seed),
            ("workers", &self.workers),
            ("island_period", &self.island_period),
            ("reference_particles", &self.reference_particles),
            ("observations", &self.observations),
            ("trajectory", &self.trajectory),
            ("out", &self.out),
            ("trajectory_out", &self.trajectory_out),
            ("observations_out", &self.observations_out),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                cfg.set(key, v)?;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Simulate(args) => {
            let cfg = args.resolve()?;
            let sim = simulate_to_files(&cfg)?;
            println!(
                "wrote {} steps to {} and {}",
                sim.horizon(),
                cfg.trajectory_out.display(),
                cfg.observations_out.display()
            );
        }
        Command::Run(args) => {
            let cfg = args.resolve()?;
            let s = run_to_file(&cfg)?;
            let mse = s.mse.map_or("n/a".to_string(), |m| format!("{m:.6e}"));
            println!(
                "{} M={} N={}: {} steps in {:.3} s, collapses {}, mse {mse}; estimates in {}",
                s.variant,
                s.m,
                s.n,
                s.steps,
                s.wall_seconds,
                s.collapses,
                cfg.out.display()
            );
        }
        Command::Bench(args) => {
            let cfg = args.resolve()?;
            let rows = bench_to_file(&cfg)?;
            println!("wrote {} rows to {}", rows.len(), cfg.out.display());
        }
        Command::Verify { quick, only } => {
            let scale = if quick { Scale::Quick } else { Scale::Full };
            let ids: Vec<usize> = if only.is_empty() { CHECK_IDS.collect() } else { only };
            let mut ok = true;
            for id in ids {
                let report = run_check(id, scale)?;
                println!("{report}");
                ok &= !report.failed();
            }
            return Ok(ok);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
