//! Resampling kernels.
//!
//! Multinomial resampling is the kernel every filter in this crate uses.
//! Systematic resampling is available behind the same interface for
//! experimentation; it is not covered by the convergence and bias results the
//! scaling checks verify, so treat it as opt-in.

use rand::Rng;
use rand_distr::{Distribution, Exp1};

use crate::error::{Error, Result};

/// Tolerance on `|sum(w) - 1|` accepted as "normalised".
const NORMALISED_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Resampler {
    #[default]
    Multinomial,
    /// Single-uniform systematic scheme. Lower variance, but offspring counts
    /// are not multinomial.
    Systematic,
}

impl Resampler {
    pub fn indices<R: Rng + ?Sized>(self, weights: &[f64], n_out: usize, rng: &mut R) -> Result<Vec<usize>> {
        match self {
            Resampler::Multinomial => multinomial_indices(weights, n_out, rng),
            Resampler::Systematic => systematic_indices(weights, n_out, rng),
        }
    }
}

fn check_weights(weights: &[f64], n_out: usize) -> Result<()> {
    if n_out == 0 {
        return Err(Error::invalid("n_out must be at least 1"));
    }
    if weights.is_empty() {
        return Err(Error::invalid("cannot resample from zero particles"));
    }
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::invalid("weights must be finite and non-negative"));
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > NORMALISED_TOL {
        return Err(Error::invalid(format!("weights are not normalised (sum = {sum})")));
    }
    Ok(())
}

/// Walks the cumulative weights with non-decreasing targets in `[0, total]`.
fn invert_sorted(weights: &[f64], targets: impl Iterator<Item = f64>, n_out: usize) -> Vec<usize> {
    let last = weights.len() - 1;
    let mut out = Vec::with_capacity(n_out);
    let mut k = 0;
    let mut cum = weights[0];
    for u in targets {
        while k < last && (cum < u || weights[k] == 0.0) {
            k += 1;
            cum += weights[k];
        }
        out.push(k);
    }
    out
}

/// Ancestor indices for multinomial resampling: `n_out` i.i.d. draws with
/// `P(k) = w_k`, returned in non-decreasing order.
///
/// Sorted uniforms are generated directly from normalised exponential
/// spacings, so the cost is `O(N + n_out)`.
pub fn multinomial_indices<R: Rng + ?Sized>(weights: &[f64], n_out: usize, rng: &mut R) -> Result<Vec<usize>> {
    check_weights(weights, n_out)?;
    let total: f64 = weights.iter().sum();
    let mut spacings: Vec<f64> = Vec::with_capacity(n_out);
    let mut acc = 0.0;
    for _ in 0..n_out {
        let e: f64 = Exp1.sample(rng);
        acc += e;
        spacings.push(acc);
    }
    let e: f64 = Exp1.sample(rng);
    let scale = total / (acc + e);
    Ok(invert_sorted(weights, spacings.into_iter().map(|s| s * scale), n_out))
}

/// Ancestor indices for systematic resampling.
pub fn systematic_indices<R: Rng + ?Sized>(weights: &[f64], n_out: usize, rng: &mut R) -> Result<Vec<usize>> {
    check_weights(weights, n_out)?;
    let total: f64 = weights.iter().sum();
    let u0: f64 = rng.random::<f64>();
    let step = total / n_out as f64;
    Ok(invert_sorted(
        weights,
        (0..n_out).map(|j| (j as f64 + u0) * step),
        n_out,
    ))
}

/// Copies the selected rows of a row-major particle buffer.
pub fn gather(particles: &[f64], dim: usize, indices: &[usize]) -> Vec<f64> {
    let mut out = Vec::with_capacity(indices.len() * dim);
    for &k in indices {
        out.extend_from_slice(&particles[k * dim..(k + 1) * dim]);
    }
    out
}

/// Multinomial resampling of a row-major particle buffer.
pub fn multinomial_resample<R: Rng + ?Sized>(
    particles: &[f64],
    dim: usize,
    weights: &[f64],
    n_out: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if dim == 0 || particles.len() != dim * weights.len() {
        return Err(Error::invalid("particle buffer does not match weights and dimension"));
    }
    let idx = multinomial_indices(weights, n_out, rng)?;
    Ok(gather(particles, dim, &idx))
}

/// Number of times each particle index appears.
pub fn offspring_counts(indices: &[usize], n: usize) -> Vec<usize> {
    let mut counts = vec![0; n];
    for &k in indices {
        counts[k] += 1;
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smc::SmcRng;
    use rand::SeedableRng;

    #[test]
    fn point_mass_selects_only_the_heavy_particle() {
        let mut rng = SmcRng::seed_from_u64(1);
        let out = multinomial_resample(&[1.0, 2.0, 3.0], 1, &[1.0, 0.0, 0.0], 17, &mut rng).unwrap();
        assert_eq!(out, vec![1.0; 17]);
        let out = multinomial_resample(&[1.0, 2.0, 3.0], 1, &[0.0, 0.0, 1.0], 5, &mut rng).unwrap();
        assert_eq!(out, vec![3.0; 5]);
    }

    #[test]
    fn single_particle_is_copied() {
        let mut rng = SmcRng::seed_from_u64(2);
        let out = multinomial_resample(&[4.0, 5.0], 2, &[1.0], 3, &mut rng).unwrap();
        assert_eq!(out, vec![4.0, 5.0, 4.0, 5.0, 4.0, 5.0]);
    }

    #[test]
    fn rejects_bad_arguments() {
        let mut rng = SmcRng::seed_from_u64(3);
        assert!(matches!(
            multinomial_indices(&[0.5, 0.5], 0, &mut rng),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            multinomial_indices(&[0.5, 0.6], 4, &mut rng),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            multinomial_indices(&[-0.5, 1.5], 4, &mut rng),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn zero_weight_particles_are_never_selected() {
        let mut rng = SmcRng::seed_from_u64(4);
        let w = [0.0, 0.5, 0.0, 0.5, 0.0];
        for r in [Resampler::Multinomial, Resampler::Systematic] {
            let idx = r.indices(&w, 10_000, &mut rng).unwrap();
            assert!(idx.iter().all(|&k| k == 1 || k == 3));
        }
    }

    #[test]
    fn offspring_mean_matches_binomial() {
        // Offspring count of particle 2 is Binomial(1000, 0.8): mean 800,
        // sd sqrt(160); the mean over R runs has sd sqrt(160 / R).
        let mut rng = SmcRng::seed_from_u64(5);
        let reps = 100_000;
        let mut total = 0usize;
        for _ in 0..reps {
            let idx = multinomial_indices(&[0.2, 0.8], 1000, &mut rng).unwrap();
            total += idx.iter().filter(|&&k| k == 1).count();
        }
        let mean = total as f64 / reps as f64;
        let se = (1000.0 * 0.8 * 0.2 / reps as f64).sqrt();
        assert!((mean - 800.0).abs() < 3.0 * se, "mean {mean}, se {se}");
    }

    #[test]
    fn systematic_counts_are_within_one_of_expectation() {
        let mut rng = SmcRng::seed_from_u64(6);
        let w = [0.1, 0.2, 0.3, 0.4];
        let idx = systematic_indices(&w, 1000, &mut rng).unwrap();
        let counts = offspring_counts(&idx, 4);
        for (c, w) in counts.iter().zip(w) {
            assert!((*c as f64 - 1000.0 * w).abs() <= 1.0 + 1e-9);
        }
    }
}
