//! Bootstrap filter against the Kalman filter on a scalar linear-Gaussian
//! model: the MSE of the posterior mean falls like 1/K.

use ensemble_pf::metrics::{empirical_mse, loglog_slope, mean};
use ensemble_pf::models::{kalman_filter, simulate, LinearGaussianModel};
use ensemble_pf::{derive_seed, run_filter, FilterVariant};

fn main() -> ensemble_pf::Result<()> {
    let model = LinearGaussianModel::scalar(0.9, 1.0, 1.0, 1.0, 0.0, 1.0)?;
    let sim = simulate(&model, 25, 1)?;
    let exact: Vec<Vec<f64>> = kalman_filter(&model, &sim.observations)?
        .iter()
        .skip(1)
        .map(|(m, _)| vec![m[0]])
        .collect();

    let ks = [100, 200, 400, 800, 1600];
    let mut mses = Vec::new();
    for &k in &ks {
        let runs: Vec<f64> = (0..100)
            .map(|r| {
                let out = run_filter(&model, &sim.observations, FilterVariant::Bootstrap, k, derive_seed(k as u64, r))?;
                empirical_mse(&out.estimates, &exact)
            })
            .collect::<ensemble_pf::Result<_>>()?;
        let m = mean(&runs);
        println!("K = {k:5}  MSE = {m:.3e}  K * MSE = {:.3}", k as f64 * m);
        mses.push(m);
    }
    let xs: Vec<f64> = ks.iter().map(|&k| k as f64).collect();
    println!("log-log slope: {:.3}", loglog_slope(&xs, &mses)?);
    Ok(())
}
