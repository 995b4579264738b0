//! Ensemble of independent bootstrap filters against one centralised filter
//! with the same total particle count on the stochastic Lorenz 63 system.
//!
//! Run with `--release`; the reference filter alone uses 10^4 particles.

use ensemble_pf::metrics::{empirical_mse, mean};
use ensemble_pf::models::{simulate, Lorenz63Model};
use ensemble_pf::{derive_seed, run_ensemble, run_filter, FilterVariant};

fn main() -> ensemble_pf::Result<()> {
    let model = Lorenz63Model::default();
    let sim = simulate(&model, 50, 3)?;
    let reference = run_filter(&model, &sim.observations, FilterVariant::Bootstrap, 10_000, 99)?.estimates;
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let m = 8;

    println!("{:>5} {:>12} {:>12} {:>7}", "N", "ensemble", "centralised", "ratio");
    for n in [50, 100, 400] {
        let mut ens = Vec::new();
        let mut cen = Vec::new();
        for r in 0..10 {
            let seed = derive_seed(5, r);
            let e = run_ensemble(&model, &sim.observations, FilterVariant::Bootstrap, m, n, seed, workers)?;
            ens.push(empirical_mse(&e.estimates, &reference)?);
            let c = run_filter(&model, &sim.observations, FilterVariant::Bootstrap, m * n, seed)?;
            cen.push(empirical_mse(&c.estimates, &reference)?);
        }
        let (e, c) = (mean(&ens), mean(&cen));
        println!("{n:5} {e:12.4e} {c:12.4e} {:7.2}", e / c);
    }
    Ok(())
}
