//! Model abstraction, particle sets and log-domain weight arithmetic.
//!
//! A [`StateSpaceModel`] bundles the prior, the Markov transition kernel and
//! the observation likelihood. States are dense `f64` vectors of length
//! [`StateSpaceModel::dim_x`]; particle sets store them contiguously,
//! row-major, in a single buffer.

use rand::Rng;

use crate::error::{Error, Result};

/// Random number generator used by every filter in the crate.
///
/// ChaCha8 supports independent streams, which the ensemble and the island
/// filter use to give every filter (or island) its own sequence.
pub type SmcRng = rand_chacha::ChaCha8Rng;

/// A discrete-time Markov state-space model with conditionally independent
/// observations.
///
/// Implementations must be pure given the rng stream: two calls with equal
/// inputs and equal rng states produce bitwise-equal outputs.
pub trait StateSpaceModel: Sync {
    /// State dimension.
    fn dim_x(&self) -> usize;

    /// Observation dimension.
    fn dim_y(&self) -> usize;

    /// Draws `X_0` into `out`.
    fn sample_prior<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]);

    /// Draws `X_t` given `X_{t-1} = prev` into `out`.
    fn sample_transition<R: Rng + ?Sized>(
        &self,
        prev: &[f64],
        t: usize,
        rng: &mut R,
        out: &mut [f64],
    ) -> Result<()>;

    /// `log g_t(y | x)`, possibly without an additive constant that depends
    /// only on `(t, y)`.
    fn log_likelihood(&self, y: &[f64], x: &[f64], t: usize) -> f64;

    /// Draws `Y_t` given `X_t = x` into `out`.
    fn sample_observation<R: Rng + ?Sized>(&self, x: &[f64], t: usize, rng: &mut R, out: &mut [f64]);

    /// Deterministic summary of the transition from `prev` (typically the
    /// noise-free map). Used by the first stage of the auxiliary filter.
    fn transition_point_prediction(&self, _prev: &[f64], _t: usize, _out: &mut [f64]) -> Result<()> {
        Err(Error::UnsupportedModel("transition point prediction"))
    }

    /// Number of test functions whose posterior expectations filters record.
    fn statistics_dim(&self) -> usize {
        self.dim_x()
    }

    /// Evaluates the recorded test functions at `x`. The default is the
    /// identity, so filters record posterior means of the state.
    fn statistics(&self, x: &[f64], out: &mut [f64]) {
        out.copy_from_slice(x);
    }
}

/// Checks that every observation has the model's observation dimension.
pub fn check_observations<M: StateSpaceModel>(model: &M, observations: &[Vec<f64>]) -> Result<()> {
    if let Some((t, y)) = observations
        .iter()
        .enumerate()
        .find(|(_, y)| y.len() != model.dim_y())
    {
        return Err(Error::invalid(format!(
            "observation {} has dimension {}, model expects {}",
            t + 1,
            y.len(),
            model.dim_y()
        )));
    }
    Ok(())
}

/// A weighted particle approximation at step `t`.
///
/// `log_norm_const` is the running estimate `log G_t^N`: the sum, over
/// processed steps, of the log of the mean raw weight.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleApproximation {
    dim: usize,
    particles: Vec<f64>,
    weights: Vec<f64>,
    log_norm_const: f64,
    t: usize,
}

const WEIGHT_SUM_TOL: f64 = 1e-12;

impl ParticleApproximation {
    pub fn new(dim: usize, particles: Vec<f64>, weights: Vec<f64>, log_norm_const: f64, t: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("state dimension must be positive"));
        }
        if weights.is_empty() {
            return Err(Error::invalid("a particle approximation needs N >= 1"));
        }
        if particles.len() != dim * weights.len() {
            return Err(Error::invalid(format!(
                "{} particle values do not match N={} and dim={}",
                particles.len(),
                weights.len(),
                dim
            )));
        }
        if weights.iter().any(|w| !(0.0..=1.0).contains(w)) {
            return Err(Error::invalid("weights must lie in [0, 1]"));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL * weights.len().max(1) as f64 {
            return Err(Error::invalid(format!("weights sum to {sum}, not 1")));
        }
        Ok(Self {
            dim,
            particles,
            weights,
            log_norm_const,
            t,
        })
    }

    /// Equally weighted particles.
    pub fn uniform(dim: usize, particles: Vec<f64>, log_norm_const: f64, t: usize) -> Result<Self> {
        if dim == 0 || particles.is_empty() || !particles.len().is_multiple_of(dim) {
            return Err(Error::invalid(format!(
                "cannot split {} values into particles of dimension {dim}",
                particles.len()
            )));
        }
        let n = particles.len() / dim;
        Self::new(dim, particles, vec![1.0 / n as f64; n], log_norm_const, t)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn log_norm_const(&self) -> f64 {
        self.log_norm_const
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// All particle values, row-major.
    pub fn particles(&self) -> &[f64] {
        &self.particles
    }

    pub fn particle(&self, i: usize) -> &[f64] {
        &self.particles[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64], f64)> + '_ {
        self.particles.chunks_exact(self.dim).zip(self.weights.iter().copied())
    }

    /// True when all weights equal `1/N` up to rounding.
    pub fn has_uniform_weights(&self) -> bool {
        let u = 1.0 / self.len() as f64;
        self.weights.iter().all(|w| (w - u).abs() <= 1e-12)
    }

    /// Weighted average of the model's test functions, `sum_i w_i f(x_i)`.
    pub fn estimate_statistics<M: StateSpaceModel>(&self, model: &M) -> Vec<f64> {
        let k = model.statistics_dim();
        let mut acc = vec![0.0; k];
        let mut buf = vec![0.0; k];
        for (x, w) in self.iter() {
            model.statistics(x, &mut buf);
            for (a, b) in acc.iter_mut().zip(&buf) {
                *a += w * b;
            }
        }
        acc
    }
}

/// `log(sum_i exp(v_i))`, computed around the maximum. Returns `-inf` when
/// every entry is `-inf` (or the slice is empty).
pub fn logsumexp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let sum: f64 = values.iter().map(|v| (v - max).exp()).sum();
    max + sum.ln()
}

/// Normalises log-weights.
///
/// Returns the normalised weights and `logsumexp(log_w) - ln N`, the log of
/// the mean raw weight, which is the per-step increment of `log G_t^N`.
pub fn normalize_log_weights(log_w: &[f64]) -> Result<(Vec<f64>, f64)> {
    if log_w.is_empty() {
        return Err(Error::invalid("cannot normalise an empty weight vector"));
    }
    if log_w.iter().any(|v| v.is_nan() || *v == f64::INFINITY) {
        return Err(Error::invalid("log-weights must be finite or -inf"));
    }
    let max = log_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return Err(Error::WeightCollapse);
    }
    let mut weights: Vec<f64> = log_w.iter().map(|v| (v - max).exp()).collect();
    let sum: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= sum;
    }
    let log_mean_raw = max + sum.ln() - (log_w.len() as f64).ln();
    Ok((weights, log_mean_raw))
}

/// `sum_i w_i f(x_i)` over a particle approximation.
pub fn estimate_integral<F>(f: F, approx: &ParticleApproximation) -> f64
where
    F: Fn(&[f64]) -> f64,
{
    approx.iter().map(|(x, w)| w * f(x)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn uniform_log_weights() {
        let (w, lm) = normalize_log_weights(&[0.0; 4]).unwrap();
        assert_eq!(w, vec![0.25; 4]);
        assert_eq!(lm, 0.0);
    }

    #[test]
    fn single_particle() {
        let (w, lm) = normalize_log_weights(&[5.0]).unwrap();
        assert_eq!(w, vec![1.0]);
        assert_relative_eq!(lm, 5.0, max_relative = 1e-15);
    }

    #[test]
    fn two_to_one_ratio() {
        let (w, lm) = normalize_log_weights(&[0.0, 2f64.ln()]).unwrap();
        assert_relative_eq!(w[0], 1.0 / 3.0, max_relative = 1e-15);
        assert_relative_eq!(w[1], 2.0 / 3.0, max_relative = 1e-15);
        // ln(1.5) = 0.405465108108164381978013115464...
        assert_relative_eq!(lm, 0.405_465_108_108_164_4, max_relative = 1e-15);
    }

    #[test]
    fn total_underflow_is_a_collapse() {
        let err = normalize_log_weights(&[f64::NEG_INFINITY; 3]).unwrap_err();
        assert!(matches!(err, Error::WeightCollapse));
        assert!(matches!(normalize_log_weights(&[]), Err(Error::InvalidArgument(_))));
        assert!(matches!(normalize_log_weights(&[0.0, f64::NAN]), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn huge_negative_log_weights_do_not_underflow() {
        let (w, lm) = normalize_log_weights(&[-2000.0, -2000.0 + 3f64.ln()]).unwrap();
        assert_relative_eq!(w[1], 0.75, max_relative = 1e-12);
        assert_relative_eq!(lm, -2000.0 + 2f64.ln(), max_relative = 1e-14);
    }

    fn two_point() -> ParticleApproximation {
        ParticleApproximation::new(1, vec![0.0, 1.0], vec![0.25, 0.75], 0.0, 0).unwrap()
    }

    #[test]
    fn integral_examples() {
        let a = two_point();
        assert_eq!(estimate_integral(|_| 1.0, &a), 1.0);
        assert_eq!(estimate_integral(|x| x[0], &a), 0.75);

        let x0 = [1.5, -2.0];
        let same = ParticleApproximation::uniform(2, x0.repeat(5), 0.0, 0).unwrap();
        assert_relative_eq!(estimate_integral(|x| x[1], &same), -2.0, max_relative = 1e-15);
    }

    #[test]
    fn construction_checks() {
        assert!(ParticleApproximation::new(1, vec![], vec![], 0.0, 0).is_err());
        assert!(ParticleApproximation::new(1, vec![0.0, 1.0], vec![0.5, 0.6], 0.0, 0).is_err());
        assert!(ParticleApproximation::new(2, vec![0.0, 1.0], vec![0.5, 0.5], 0.0, 0).is_err());
        assert!(ParticleApproximation::uniform(3, vec![0.0; 7], 0.0, 0).is_err());
    }

    proptest! {
        #[test]
        fn shift_invariance(log_w in prop::collection::vec(-50.0f64..50.0, 1..40), c in -100.0f64..100.0) {
            let (w, lm) = normalize_log_weights(&log_w).unwrap();
            let shifted: Vec<f64> = log_w.iter().map(|v| v + c).collect();
            let (ws, lms) = normalize_log_weights(&shifted).unwrap();
            for (a, b) in w.iter().zip(&ws) {
                prop_assert!((a - b).abs() <= 1e-12 * a.max(1e-300) + 1e-300);
            }
            prop_assert!((lms - lm - c).abs() <= 1e-12 * (1.0 + lm.abs() + c.abs()));
            let sum: f64 = w.iter().sum();
            prop_assert!((sum - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn integral_is_linear_and_bounded(
            xs in prop::collection::vec(-10.0f64..10.0, 1..30),
            a in -3.0f64..3.0,
            b in -3.0f64..3.0,
        ) {
            let log_w: Vec<f64> = xs.iter().map(|x| -0.1 * x * x).collect();
            let (w, _) = normalize_log_weights(&log_w).unwrap();
            let approx = ParticleApproximation::new(1, xs.clone(), w, 0.0, 0).unwrap();
            let f = |x: &[f64]| x[0].sin();
            let g = |x: &[f64]| x[0] * x[0] / 100.0;
            let lhs = estimate_integral(|x| a * f(x) + b * g(x), &approx);
            let rhs = a * estimate_integral(f, &approx) + b * estimate_integral(g, &approx);
            prop_assert!((lhs - rhs).abs() <= 1e-12);
            prop_assert!(estimate_integral(f, &approx).abs() <= 1.0 + 1e-12);
        }
    }
}
