//! A small benchmark sweep driven from code, written as CSV to stdout.

use ensemble_pf::harness::records::write_metrics;
use ensemble_pf::harness::{bench, ExperimentConfig};

fn main() -> ensemble_pf::Result<()> {
    let mut cfg = ExperimentConfig::default();
    cfg.apply_str(
        "model = lorenz63
         steps = 30
         variant = centralised-bf, ensemble-bf, ensemble-apf, double-bf
         M = 4
         N = 50, 200
         reps = 4
         reference_particles = 5000
         seed = 7",
    )?;
    let rows = bench(&cfg)?;
    write_metrics(std::io::stdout(), &rows)
}
