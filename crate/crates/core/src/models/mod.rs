//! Concrete state-space models and exact-filter oracles.

mod fhn;
mod hmm;
mod linear_gaussian;
mod lorenz;

pub use fhn::{left_column, observation_zones, von_neumann_neighbours, FhnNetworkModel, FhnParams};
pub use hmm::{hmm_exact_filter, DiscreteHmm, HmmFilterStep};
pub use linear_gaussian::{kalman_filter, LinearGaussianModel};
pub use lorenz::Lorenz63Model;

use rand::SeedableRng;

use crate::error::Result;
use crate::smc::{SmcRng, StateSpaceModel};

/// Ground truth and synthetic observations.
#[derive(Debug, Clone, PartialEq)]
pub struct Simulation {
    /// `X_0, ..., X_T`.
    pub states: Vec<Vec<f64>>,
    /// `Y_1, ..., Y_T`.
    pub observations: Vec<Vec<f64>>,
}

impl Simulation {
    pub fn horizon(&self) -> usize {
        self.observations.len()
    }
}

/// Simulates `steps` transitions and observations, seeded ChaCha8.
pub fn simulate<M: StateSpaceModel>(model: &M, steps: usize, seed: u64) -> Result<Simulation> {
    let mut rng = SmcRng::seed_from_u64(seed);
    let mut x = vec![0.0; model.dim_x()];
    model.sample_prior(&mut rng, &mut x);
    let mut states = Vec::with_capacity(steps + 1);
    let mut observations = Vec::with_capacity(steps);
    states.push(x);
    for t in 1..=steps {
        let mut next = vec![0.0; model.dim_x()];
        model.sample_transition(&states[t - 1], t, &mut rng, &mut next)?;
        let mut y = vec![0.0; model.dim_y()];
        model.sample_observation(&next, t, &mut rng, &mut y);
        states.push(next);
        observations.push(y);
    }
    Ok(Simulation { states, observations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_horizon() {
        let sim = simulate(&Lorenz63Model::default(), 0, 3).unwrap();
        assert_eq!(sim.states.len(), 1);
        assert!(sim.observations.is_empty());
    }

    #[test]
    fn lorenz_record_length_and_determinism() {
        let m = Lorenz63Model::default();
        let a = simulate(&m, 200, 42).unwrap();
        let b = simulate(&m, 200, 42).unwrap();
        assert_eq!(a.observations.len(), 200);
        assert_eq!(a.states.len(), 201);
        assert_eq!(a, b);
        let c = simulate(&m, 200, 43).unwrap();
        assert_ne!(a.observations, c.observations);
    }
}
