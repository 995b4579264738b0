//! Finite-state hidden Markov model with an exact forward filter.
//!
//! States are stored as a single `f64` holding the state index; observations
//! as a single `f64` holding the symbol index. Recorded statistics are the
//! state indicators, so filter estimates are posterior probability vectors.

use rand::Rng;

use crate::error::{Error, Result};
use crate::smc::StateSpaceModel;

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteHmm {
    prior: Vec<f64>,
    transition: Vec<Vec<f64>>,
    /// `emission[state][symbol] = g(symbol | state)`.
    emission: Vec<Vec<f64>>,
}

fn is_distribution(p: &[f64]) -> bool {
    p.iter().all(|v| *v >= 0.0 && v.is_finite()) && (p.iter().sum::<f64>() - 1.0).abs() < 1e-12
}

fn sample_categorical<R: Rng + ?Sized>(p: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (k, pk) in p.iter().enumerate() {
        acc += pk;
        if u < acc {
            return k;
        }
    }
    p.iter().rposition(|&v| v > 0.0).unwrap_or(p.len() - 1)
}

/// Sum with Neumaier compensation.
fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    sum + c
}

impl DiscreteHmm {
    pub fn new(prior: Vec<f64>, transition: Vec<Vec<f64>>, emission: Vec<Vec<f64>>) -> Result<Self> {
        let k = prior.len();
        if k == 0 {
            return Err(Error::invalid("HMM needs at least one state"));
        }
        if !is_distribution(&prior) {
            return Err(Error::invalid("prior must be a probability vector"));
        }
        if transition.len() != k || transition.iter().any(|row| row.len() != k || !is_distribution(row)) {
            return Err(Error::invalid("transition rows must be probability vectors of length K"));
        }
        let symbols = emission.first().map_or(0, Vec::len);
        if emission.len() != k || symbols == 0 || emission.iter().any(|row| row.len() != symbols) {
            return Err(Error::invalid("emission table must be K x symbols"));
        }
        if emission.iter().flatten().any(|&g| !(g > 0.0 && g.is_finite())) {
            return Err(Error::invalid("emission likelihoods must be strictly positive"));
        }
        Ok(Self {
            prior,
            transition,
            emission,
        })
    }

    /// Two states: prior (0.5, 0.5), transition rows (0.9, 0.1) and
    /// (0.2, 0.8), symbol likelihoods (0.8, 0.2) and (0.3, 0.7).
    pub fn two_state_example() -> Self {
        Self::new(
            vec![0.5, 0.5],
            vec![vec![0.9, 0.1], vec![0.2, 0.8]],
            vec![vec![0.8, 0.2], vec![0.3, 0.7]],
        )
        .expect("valid example HMM")
    }

    pub fn num_states(&self) -> usize {
        self.prior.len()
    }

    pub fn num_symbols(&self) -> usize {
        self.emission[0].len()
    }

    pub fn prior(&self) -> &[f64] {
        &self.prior
    }

    pub fn transition(&self) -> &[Vec<f64>] {
        &self.transition
    }

    /// `g(symbol | state)`.
    pub fn emission(&self, state: usize, symbol: usize) -> f64 {
        self.emission[state][symbol]
    }

    fn symbol(&self, y: &[f64]) -> Option<usize> {
        let s = y[0];
        (s >= 0.0 && s.fract() == 0.0 && (s as usize) < self.num_symbols()).then_some(s as usize)
    }
}

impl StateSpaceModel for DiscreteHmm {
    fn dim_x(&self) -> usize {
        1
    }

    fn dim_y(&self) -> usize {
        1
    }

    fn sample_prior<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        out[0] = sample_categorical(&self.prior, rng) as f64;
    }

    fn sample_transition<R: Rng + ?Sized>(&self, prev: &[f64], _t: usize, rng: &mut R, out: &mut [f64]) -> Result<()> {
        out[0] = sample_categorical(&self.transition[prev[0] as usize], rng) as f64;
        Ok(())
    }

    /// Exact `ln g(y | x)`; `NaN` for a symbol outside the alphabet.
    fn log_likelihood(&self, y: &[f64], x: &[f64], _t: usize) -> f64 {
        match self.symbol(y) {
            Some(s) => self.emission[x[0] as usize][s].ln(),
            None => f64::NAN,
        }
    }

    fn sample_observation<R: Rng + ?Sized>(&self, x: &[f64], _t: usize, rng: &mut R, out: &mut [f64]) {
        let row = &self.emission[x[0] as usize];
        let total: f64 = row.iter().sum();
        let p: Vec<f64> = row.iter().map(|g| g / total).collect();
        out[0] = sample_categorical(&p, rng) as f64;
    }

    /// Most likely next state.
    fn transition_point_prediction(&self, prev: &[f64], _t: usize, out: &mut [f64]) -> Result<()> {
        let row = &self.transition[prev[0] as usize];
        let best = (0..row.len()).fold(0, |b, k| if row[k] > row[b] { k } else { b });
        out[0] = best as f64;
        Ok(())
    }

    fn statistics_dim(&self) -> usize {
        self.num_states()
    }

    fn statistics(&self, x: &[f64], out: &mut [f64]) {
        out.fill(0.0);
        out[x[0] as usize] = 1.0;
    }
}

/// One step of the exact forward recursion.
#[derive(Debug, Clone, PartialEq)]
pub struct HmmFilterStep {
    /// One-step predictive distribution `xi_t`.
    pub predictive: Vec<f64>,
    /// Filtering distribution `pi_t`.
    pub filter: Vec<f64>,
    /// Total mass `(1, rho_t)` of the unnormalised filter.
    pub mass: f64,
    /// `ln (1, rho_t)`.
    pub log_mass: f64,
}

/// Exact forward filter for `t = 1..=T`, with compensated sums.
pub fn hmm_exact_filter(model: &DiscreteHmm, observations: &[Vec<f64>]) -> Result<Vec<HmmFilterStep>> {
    let k = model.num_states();
    let mut filter = model.prior.clone();
    let mut log_mass = 0.0;
    let mut out = Vec::with_capacity(observations.len());
    for (t, y) in observations.iter().enumerate() {
        let symbol = (y.len() == 1)
            .then(|| model.symbol(y))
            .flatten()
            .ok_or_else(|| Error::invalid(format!("observation {} is not a valid symbol", t + 1)))?;
        let predictive: Vec<f64> = (0..k)
            .map(|j| compensated_sum((0..k).map(|i| filter[i] * model.transition[i][j])))
            .collect();
        let unnormalised: Vec<f64> = (0..k).map(|j| predictive[j] * model.emission[j][symbol]).collect();
        let step_mass = compensated_sum(unnormalised.iter().copied());
        filter = unnormalised.iter().map(|v| v / step_mass).collect();
        log_mass += step_mass.ln();
        out.push(HmmFilterStep {
            predictive,
            filter: filter.clone(),
            mass: log_mass.exp(),
            log_mass,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn hand_forward_step() {
        let hmm = DiscreteHmm::two_state_example();
        let steps = hmm_exact_filter(&hmm, &[vec![0.0]]).unwrap();
        let s = &steps[0];
        assert_relative_eq!(s.predictive[0], 0.55, max_relative = 1e-15);
        assert_relative_eq!(s.predictive[1], 0.45, max_relative = 1e-15);
        assert_relative_eq!(s.mass, 0.575, max_relative = 1e-15);
        assert_relative_eq!(s.filter[0], 0.44 / 0.575, max_relative = 1e-15);
        assert_relative_eq!(s.filter[1], 0.135 / 0.575, max_relative = 1e-15);
        assert_relative_eq!(s.filter[0], 0.765_217_391_304_347_8, max_relative = 1e-15);
    }

    #[test]
    fn uninformative_emissions_keep_the_predictive() {
        let hmm = DiscreteHmm::new(
            vec![0.3, 0.7],
            vec![vec![0.6, 0.4], vec![0.1, 0.9]],
            vec![vec![0.5, 0.5], vec![0.5, 0.5]],
        )
        .unwrap();
        for s in hmm_exact_filter(&hmm, &[vec![0.0], vec![1.0], vec![1.0]]).unwrap() {
            assert_relative_eq!(s.filter[0], s.predictive[0], max_relative = 1e-14);
        }
    }

    #[test]
    fn near_perfect_observation_is_a_point_mass() {
        let hmm = DiscreteHmm::new(
            vec![0.5, 0.5],
            vec![vec![0.5, 0.5], vec![0.5, 0.5]],
            vec![vec![1.0, 1e-300], vec![1e-300, 1.0]],
        )
        .unwrap();
        let steps = hmm_exact_filter(&hmm, &[vec![1.0]]).unwrap();
        assert_eq!(steps[0].filter[1], 1.0);
        assert!(steps[0].filter[0] < 1e-299);
    }

    #[test]
    fn validation() {
        assert!(DiscreteHmm::new(vec![0.5, 0.6], vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![vec![1.0], vec![1.0]]).is_err());
        assert!(DiscreteHmm::new(vec![0.5, 0.5], vec![vec![0.7, 0.2], vec![0.0, 1.0]], vec![vec![1.0], vec![1.0]]).is_err());
        assert!(DiscreteHmm::new(vec![1.0], vec![vec![1.0]], vec![vec![0.0]]).is_err());
        let hmm = DiscreteHmm::two_state_example();
        assert!(hmm_exact_filter(&hmm, &[vec![2.0]]).is_err());
    }
}
