//! Island filter: islands run bootstrap filters and are themselves
//! resampled by their accumulated evidence every few steps.

use ensemble_pf::filters::{dbf_step, IslandSystem};
use ensemble_pf::models::{kalman_filter, simulate, LinearGaussianModel};
use ensemble_pf::SmcRng;
use rand::SeedableRng;

fn main() -> ensemble_pf::Result<()> {
    let model = LinearGaussianModel::scalar(0.95, 0.5, 1.0, 2.0, 0.0, 1.0)?;
    let sim = simulate(&model, 15, 8)?;
    let kf = kalman_filter(&model, &sim.observations)?;

    let mut rng = SmcRng::seed_from_u64(1);
    let mut system = IslandSystem::init(&model, 8, 200, &mut rng)?;
    for (k, y) in sim.observations.iter().enumerate() {
        let t = k + 1;
        let step = dbf_step(&model, &system, y, t, 5, &mut rng)?;
        system = step.system;
        let est = system.estimate_statistics(&model)[0];
        println!(
            "t = {t:2}  estimate {est:+.4}  kalman {:+.4}  log G {:.3}{}",
            kf[t].0[0],
            system.log_norm_const(),
            if step.resampled { "  (islands resampled)" } else { "" }
        );
    }
    Ok(())
}
