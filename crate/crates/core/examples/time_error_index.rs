//! Time-error index of the ensemble scheme next to measured wall times of
//! the ensemble and of a centralised filter with the same particle count.

use ensemble_pf::models::{simulate, Lorenz63Model};
use ensemble_pf::{run_ensemble, run_filter, time_error_index, FilterVariant, Scheme};

fn main() -> ensemble_pf::Result<()> {
    let model = Lorenz63Model::default();
    let obs = simulate(&model, 20, 1)?.observations;
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    println!("{workers} worker(s)");
    println!("{:>3} {:>6} {:>10} {:>10} {:>10}", "M", "N", "C_ens", "wall ens", "wall cen");
    for (m, n) in [(1, 2000), (2, 1000), (4, 500), (8, 250)] {
        let ens = run_ensemble(&model, &obs, FilterVariant::Bootstrap, m, n, 1, workers)?;
        let cen = run_filter(&model, &obs, FilterVariant::Bootstrap, m * n, 1)?;
        println!(
            "{m:3} {n:6} {:10.4} {:9.3}s {:9.3}s",
            time_error_index(Scheme::Ensemble, m, n),
            ens.wall_seconds,
            cen.wall_seconds()
        );
    }
    println!("centralised index: {}", time_error_index(Scheme::Centralised, 8, 250));
    Ok(())
}
