//! Offspring counts of multinomial and systematic resampling against their
//! expectations.

use ensemble_pf::resampling::{offspring_counts, Resampler};
use ensemble_pf::SmcRng;
use rand::SeedableRng;

fn main() -> ensemble_pf::Result<()> {
    let weights = [0.1, 0.2, 0.3, 0.4];
    let n_out = 1000;
    let mut rng = SmcRng::seed_from_u64(7);
    for resampler in [Resampler::Multinomial, Resampler::Systematic] {
        let idx = resampler.indices(&weights, n_out, &mut rng)?;
        let counts = offspring_counts(&idx, weights.len());
        println!("{resampler:?}");
        for (w, c) in weights.iter().zip(&counts) {
            println!("  weight {w:.1}: {c:4} offspring (expected {:.0})", w * n_out as f64);
        }
    }
    Ok(())
}
