use rand::Rng;

use super::bootstrap::{require_uniform, weights_or_uniform, StepOutcome};
use crate::error::Result;
use crate::resampling::{gather, multinomial_indices};
use crate::smc::{ParticleApproximation, StateSpaceModel};

/// One step of the two-stage auxiliary particle filter.
///
/// First stage: each particle is scored by the likelihood of `y` at its
/// deterministic point prediction, and ancestors are drawn multinomially from
/// those scores. Second stage: the selected ancestors are propagated through
/// the transition and reweighted by `g(y | x) / g(y | mu(ancestor))`. The
/// evidence increment is the product of the mean first-stage and mean
/// second-stage raw weights. The returned particles are resampled to uniform
/// weights.
pub fn apf_step<M, R>(model: &M, state: &ParticleApproximation, y: &[f64], rng: &mut R) -> Result<StepOutcome>
where
    M: StateSpaceModel,
    R: Rng + ?Sized,
{
    require_uniform(state)?;
    let t = state.t() + 1;
    let dim = state.dim();
    let n = state.len();

    let mut predicted = vec![0.0; dim];
    let mut first_stage = Vec::with_capacity(n);
    for prev in state.particles().chunks_exact(dim) {
        model.transition_point_prediction(prev, t, &mut predicted)?;
        first_stage.push(model.log_likelihood(y, &predicted, t));
    }
    let (first_weights, first_inc, first_collapsed) = weights_or_uniform(&first_stage)?;
    if first_collapsed {
        first_stage.iter_mut().for_each(|l| *l = 0.0);
    }
    let ancestors = multinomial_indices(&first_weights, n, rng)?;

    let mut proposed = vec![0.0; n * dim];
    let mut log_w = Vec::with_capacity(n);
    for (&a, out) in ancestors.iter().zip(proposed.chunks_exact_mut(dim)) {
        model.sample_transition(state.particle(a), t, rng, out)?;
        log_w.push(model.log_likelihood(y, out, t) - first_stage[a]);
    }
    let (weights, second_inc, collapsed) = weights_or_uniform(&log_w)?;

    // A collapsed first stage falls back to bootstrap proposals (lambda = 0).
    let log_increment = match (first_collapsed, collapsed) {
        (_, true) => f64::NEG_INFINITY,
        (true, false) => second_inc,
        (false, false) => first_inc + second_inc,
    };
    let selected = multinomial_indices(&weights, n, rng)?;
    let particles = gather(&proposed, dim, &selected);
    let approx = ParticleApproximation::uniform(dim, particles, state.log_norm_const() + log_increment, t)?;
    Ok(StepOutcome {
        approx,
        log_increment,
        collapsed,
    })
}
