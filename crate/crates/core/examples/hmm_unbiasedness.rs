//! The particle estimate of the observation likelihood is unbiased, while
//! its logarithm is not.

use ensemble_pf::metrics::{mean, standard_error};
use ensemble_pf::models::{hmm_exact_filter, DiscreteHmm};
use ensemble_pf::{derive_seed, run_filter, FilterVariant};

fn main() -> ensemble_pf::Result<()> {
    let hmm = DiscreteHmm::two_state_example();
    let obs: Vec<Vec<f64>> = [0, 1, 1, 0, 1].iter().map(|&s| vec![s as f64]).collect();
    let exact = hmm_exact_filter(&hmm, &obs)?;
    let truth = exact.last().unwrap().mass;

    for n in [5, 20, 100] {
        let logs: Vec<f64> = (0..20_000)
            .map(|r| Ok(*run_filter(&hmm, &obs, FilterVariant::Bootstrap, n, derive_seed(n as u64, r))?.log_norm_const.last().unwrap()))
            .collect::<ensemble_pf::Result<_>>()?;
        let g: Vec<f64> = logs.iter().map(|l| l.exp()).collect();
        println!(
            "N = {n:3}: E[G] = {:.5e} +- {:.1e} (exact {truth:.5e}), E[log G] - log p = {:+.4}",
            mean(&g),
            standard_error(&g),
            mean(&logs) - truth.ln()
        );
    }
    Ok(())
}
