#![allow(dead_code)]

use ensemble_pf::models::LinearGaussianModel;
use ensemble_pf::{Result, StateSpaceModel};
use rand::Rng;

/// Wraps a model and replaces its likelihood by a constant.
pub struct ConstantLikelihood<M> {
    pub inner: M,
    pub log_g: f64,
}

impl<M: StateSpaceModel> StateSpaceModel for ConstantLikelihood<M> {
    fn dim_x(&self) -> usize {
        self.inner.dim_x()
    }

    fn dim_y(&self) -> usize {
        self.inner.dim_y()
    }

    fn sample_prior<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        self.inner.sample_prior(rng, out)
    }

    fn sample_transition<R: Rng + ?Sized>(&self, prev: &[f64], t: usize, rng: &mut R, out: &mut [f64]) -> Result<()> {
        self.inner.sample_transition(prev, t, rng, out)
    }

    fn log_likelihood(&self, _y: &[f64], _x: &[f64], _t: usize) -> f64 {
        self.log_g
    }

    fn sample_observation<R: Rng + ?Sized>(&self, x: &[f64], t: usize, rng: &mut R, out: &mut [f64]) {
        self.inner.sample_observation(x, t, rng, out)
    }

    fn transition_point_prediction(&self, prev: &[f64], t: usize, out: &mut [f64]) -> Result<()> {
        self.inner.transition_point_prediction(prev, t, out)
    }
}

/// Records the test function `f = 1` instead of the state.
pub struct UnitStatistic<M>(pub M);

impl<M: StateSpaceModel> StateSpaceModel for UnitStatistic<M> {
    fn dim_x(&self) -> usize {
        self.0.dim_x()
    }

    fn dim_y(&self) -> usize {
        self.0.dim_y()
    }

    fn sample_prior<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        self.0.sample_prior(rng, out)
    }

    fn sample_transition<R: Rng + ?Sized>(&self, prev: &[f64], t: usize, rng: &mut R, out: &mut [f64]) -> Result<()> {
        self.0.sample_transition(prev, t, rng, out)
    }

    fn log_likelihood(&self, y: &[f64], x: &[f64], t: usize) -> f64 {
        self.0.log_likelihood(y, x, t)
    }

    fn sample_observation<R: Rng + ?Sized>(&self, x: &[f64], t: usize, rng: &mut R, out: &mut [f64]) {
        self.0.sample_observation(x, t, rng, out)
    }

    fn transition_point_prediction(&self, prev: &[f64], t: usize, out: &mut [f64]) -> Result<()> {
        self.0.transition_point_prediction(prev, t, out)
    }

    fn statistics_dim(&self) -> usize {
        1
    }

    fn statistics(&self, _x: &[f64], out: &mut [f64]) {
        out[0] = 1.0;
    }
}

/// State never moves and every observation is equally likely; the state
/// value labels where a particle came from.
pub struct Frozen;

impl StateSpaceModel for Frozen {
    fn dim_x(&self) -> usize {
        1
    }

    fn dim_y(&self) -> usize {
        1
    }

    fn sample_prior<R: Rng + ?Sized>(&self, _rng: &mut R, out: &mut [f64]) {
        out[0] = 0.0;
    }

    fn sample_transition<R: Rng + ?Sized>(&self, prev: &[f64], _t: usize, _rng: &mut R, out: &mut [f64]) -> Result<()> {
        out[0] = prev[0];
        Ok(())
    }

    fn log_likelihood(&self, _y: &[f64], _x: &[f64], _t: usize) -> f64 {
        0.0
    }

    fn sample_observation<R: Rng + ?Sized>(&self, _x: &[f64], _t: usize, _rng: &mut R, out: &mut [f64]) {
        out[0] = 0.0;
    }
}

pub fn scalar_lg() -> LinearGaussianModel {
    LinearGaussianModel::scalar(0.9, 1.0, 1.0, 1.0, 0.0, 1.0).unwrap()
}

pub fn symbols(s: &[usize]) -> Vec<Vec<f64>> {
    s.iter().map(|&v| vec![v as f64]).collect()
}
