use rand::Rng;

use crate::error::{Error, Result};
use crate::resampling::{gather, multinomial_indices};
use crate::smc::{normalize_log_weights, ParticleApproximation, StateSpaceModel};

/// Result of one filter step.
#[derive(Debug, Clone)]
pub struct StepOutcome {
    /// Resampled, equally weighted particles at the new step.
    pub approx: ParticleApproximation,
    /// Increment added to `log G`: log of the mean raw weight.
    pub log_increment: f64,
    /// Every raw weight underflowed; weights were reset to uniform and the
    /// estimates of this step are not valid.
    pub collapsed: bool,
}

/// Draws `n` particles from the prior, with uniform weights and `log G = 0`.
pub fn bf_init<M, R>(model: &M, n: usize, rng: &mut R) -> Result<ParticleApproximation>
where
    M: StateSpaceModel,
    R: Rng + ?Sized,
{
    if n == 0 {
        return Err(Error::invalid("number of particles must be at least 1"));
    }
    let dim = model.dim_x();
    let mut particles = vec![0.0; n * dim];
    for x in particles.chunks_exact_mut(dim) {
        model.sample_prior(rng, x);
    }
    ParticleApproximation::uniform(dim, particles, 0.0, 0)
}

/// Normalises log-weights, resetting to uniform on collapse.
pub(crate) fn weights_or_uniform(log_w: &[f64]) -> Result<(Vec<f64>, f64, bool)> {
    match normalize_log_weights(log_w) {
        Ok((w, inc)) => Ok((w, inc, false)),
        Err(Error::WeightCollapse) => {
            let n = log_w.len();
            Ok((vec![1.0 / n as f64; n], f64::NEG_INFINITY, true))
        }
        Err(e) => Err(e),
    }
}

pub(crate) fn require_uniform(state: &ParticleApproximation) -> Result<()> {
    if state.has_uniform_weights() {
        Ok(())
    } else {
        Err(Error::invalid("filter steps expect equally weighted input particles"))
    }
}

/// One bootstrap-filter step: propagate, weight by the likelihood of `y`,
/// accumulate `log G`, resample multinomially.
pub fn bf_step<M, R>(model: &M, state: &ParticleApproximation, y: &[f64], rng: &mut R) -> Result<StepOutcome>
where
    M: StateSpaceModel,
    R: Rng + ?Sized,
{
    require_uniform(state)?;
    let t = state.t() + 1;
    let dim = state.dim();
    let n = state.len();

    let mut proposed = vec![0.0; n * dim];
    for (prev, out) in state.particles().chunks_exact(dim).zip(proposed.chunks_exact_mut(dim)) {
        model.sample_transition(prev, t, rng, out)?;
    }
    let log_w: Vec<f64> = proposed
        .chunks_exact(dim)
        .map(|x| model.log_likelihood(y, x, t))
        .collect();
    let (weights, log_increment, collapsed) = weights_or_uniform(&log_w)?;

    let ancestors = multinomial_indices(&weights, n, rng)?;
    let particles = gather(&proposed, dim, &ancestors);
    let approx = ParticleApproximation::uniform(dim, particles, state.log_norm_const() + log_increment, t)?;
    Ok(StepOutcome {
        approx,
        log_increment,
        collapsed,
    })
}
