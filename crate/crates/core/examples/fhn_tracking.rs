//! Tracking a FitzHugh-Nagumo lattice with an ensemble of auxiliary
//! particle filters. Prints the voltage error and field correlation over
//! time, and a coarse map of the final field.
//!
//! Run with `--release`.

use ensemble_pf::metrics::pearson;
use ensemble_pf::models::{simulate, FhnNetworkModel, FhnParams};
use ensemble_pf::{run_ensemble, FilterVariant};

fn shade(u: f64) -> char {
    match u {
        u if u > 2.0 => '#',
        u if u > 0.5 => '+',
        u if u > -0.5 => '.',
        _ => ' ',
    }
}

fn main() -> ensemble_pf::Result<()> {
    let model = FhnNetworkModel::new(FhnParams::with_side(16))?;
    let side = model.params().side;
    println!("{} nodes, {} observed", model.nodes(), model.params().observed.len());

    let sim = simulate(&model, 100, 21)?;
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let out = run_ensemble(&model, &sim.observations, FilterVariant::Auxiliary, 4, 200, 3, workers)?;

    for t in (9..100).step_by(10) {
        let truth = model.voltage(&sim.states[t + 1]);
        let est = &out.estimates[t];
        let mse = est.iter().zip(truth).map(|(a, b)| (a - b).powi(2)).sum::<f64>() / est.len() as f64;
        println!("t = {:3}  MSE/node {mse:.4}  correlation {:.3}", t + 1, pearson(est, truth)?);
    }

    let truth = model.voltage(&sim.states[100]);
    let est = &out.estimates[99];
    println!("\nfinal voltage, truth | estimate");
    for i in 0..side {
        let row = |v: &[f64]| (0..side).map(|j| shade(v[i * side + j])).collect::<String>();
        println!("{} | {}", row(truth), row(est));
    }
    Ok(())
}
