//! Stochastic Lorenz 63 system, Euler-discretised, observed through a noisy
//! first coordinate every `substeps` Euler steps.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::smc::StateSpaceModel;

#[derive(Debug, Clone, PartialEq)]
pub struct Lorenz63Model {
    pub s: f64,
    pub r: f64,
    pub b: f64,
    /// Euler integration step.
    pub dt: f64,
    /// Euler steps between consecutive observations.
    pub substeps: usize,
    /// Multiplier on the `sqrt(dt)` dynamical noise; 0 gives the
    /// deterministic map.
    pub noise_scale: f64,
    pub obs_noise_var: f64,
    pub prior_mean: [f64; 3],
    pub prior_var: f64,
}

impl Default for Lorenz63Model {
    fn default() -> Self {
        Self {
            s: 10.0,
            r: 28.0,
            b: 8.0 / 3.0,
            dt: 1e-3,
            substeps: 100,
            noise_scale: 1.0,
            obs_noise_var: 0.5,
            prior_mean: [-10.2410, -1.3984, -23.6752],
            prior_var: 10.0,
        }
    }
}

impl Lorenz63Model {
    pub fn validate(&self) -> Result<()> {
        if self.substeps == 0 {
            return Err(Error::invalid("substeps must be at least 1"));
        }
        if !(self.dt > 0.0 && self.obs_noise_var > 0.0 && self.prior_var > 0.0 && self.noise_scale >= 0.0) {
            return Err(Error::invalid("Lorenz 63 step and variances must be positive"));
        }
        Ok(())
    }

    /// One Euler step of the drift plus `sqrt(dt) * noise`.
    pub fn euler_substep(&self, x: [f64; 3], noise: [f64; 3]) -> [f64; 3] {
        let dt = self.dt;
        let sq = dt.sqrt() * self.noise_scale;
        [
            x[0] - dt * self.s * (x[0] - x[1]) + sq * noise[0],
            x[1] + dt * (self.r * x[0] - x[1] - x[0] * x[2]) + sq * noise[1],
            x[2] + dt * (x[0] * x[1] - self.b * x[2]) + sq * noise[2],
        ]
    }

    /// Advances one observation interval (`substeps` Euler steps).
    pub fn transition<R: Rng + ?Sized>(&self, x: [f64; 3], rng: &mut R) -> Result<[f64; 3]> {
        let mut x = x;
        for _ in 0..self.substeps {
            let noise = [
                StandardNormal.sample(rng),
                StandardNormal.sample(rng),
                StandardNormal.sample(rng),
            ];
            x = self.euler_substep(x, noise);
        }
        if x.iter().all(|v| v.is_finite()) {
            Ok(x)
        } else {
            Err(Error::NumericalDivergence { step: 0 })
        }
    }

    /// `-(y - x_1)^2 / (2 sigma^2)`, normalising constant dropped.
    pub fn log_likelihood_scalar(&self, y: f64, x: &[f64]) -> f64 {
        let d = y - x[0];
        -d * d / (2.0 * self.obs_noise_var)
    }
}

fn as_array(x: &[f64]) -> [f64; 3] {
    [x[0], x[1], x[2]]
}

impl StateSpaceModel for Lorenz63Model {
    fn dim_x(&self) -> usize {
        3
    }

    fn dim_y(&self) -> usize {
        1
    }

    fn sample_prior<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        let sd = self.prior_var.sqrt();
        for (o, m) in out.iter_mut().zip(self.prior_mean) {
            let z: f64 = StandardNormal.sample(rng);
            *o = m + sd * z;
        }
    }

    fn sample_transition<R: Rng + ?Sized>(&self, prev: &[f64], t: usize, rng: &mut R, out: &mut [f64]) -> Result<()> {
        let x = self
            .transition(as_array(prev), rng)
            .map_err(|_| Error::NumericalDivergence { step: t })?;
        out.copy_from_slice(&x);
        Ok(())
    }

    fn log_likelihood(&self, y: &[f64], x: &[f64], _t: usize) -> f64 {
        self.log_likelihood_scalar(y[0], x)
    }

    fn sample_observation<R: Rng + ?Sized>(&self, x: &[f64], _t: usize, rng: &mut R, out: &mut [f64]) {
        let z: f64 = StandardNormal.sample(rng);
        out[0] = x[0] + self.obs_noise_var.sqrt() * z;
    }

    fn transition_point_prediction(&self, prev: &[f64], t: usize, out: &mut [f64]) -> Result<()> {
        let mut x = as_array(prev);
        for _ in 0..self.substeps {
            x = self.euler_substep(x, [0.0; 3]);
        }
        if !x.iter().all(|v| v.is_finite()) {
            return Err(Error::NumericalDivergence { step: t });
        }
        out.copy_from_slice(&x);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smc::SmcRng;
    use approx::assert_relative_eq;
    use rand::SeedableRng;

    #[test]
    fn paper_parameters() {
        let m = Lorenz63Model::default();
        assert_eq!((m.s, m.r, m.b), (10.0, 28.0, 8.0 / 3.0));
        assert_eq!(m.dt, 1e-3);
        assert_eq!(m.substeps, 100);
        assert_eq!(m.obs_noise_var, 0.5);
        m.validate().unwrap();
    }

    #[test]
    fn origin_is_a_fixed_point_without_noise() {
        let m = Lorenz63Model {
            noise_scale: 0.0,
            ..Default::default()
        };
        let mut rng = SmcRng::seed_from_u64(0);
        assert_eq!(m.transition([0.0; 3], &mut rng).unwrap(), [0.0; 3]);
    }

    #[test]
    fn single_euler_step_by_hand() {
        // x1 = 1 - 0.01 * 0 = 1
        // x2 = 1 + 0.001 * (28 - 1 - 1) = 1.026
        // x3 = 1 + 0.001 * (1 - 8/3) = 0.998333...
        let m = Lorenz63Model::default();
        let x = m.euler_substep([1.0; 3], [0.0; 3]);
        assert_eq!(x[0], 1.0);
        assert_relative_eq!(x[1], 1.026, max_relative = 1e-15);
        assert_relative_eq!(x[2], 1.0 - 1.0 / 600.0, max_relative = 1e-15);
    }

    #[test]
    fn likelihood_quadratic() {
        let m = Lorenz63Model::default();
        assert_eq!(m.log_likelihood_scalar(3.0, &[3.0, 0.0, 0.0]), 0.0);
        assert_eq!(m.log_likelihood_scalar(4.0, &[3.0, 0.0, 0.0]), -1.0);
    }

    #[test]
    fn divergence_is_reported() {
        let m = Lorenz63Model {
            dt: 1.0,
            ..Default::default()
        };
        let mut rng = SmcRng::seed_from_u64(1);
        let mut out = [0.0; 3];
        let err = m.sample_transition(&[1e10, 1e10, 1e10], 4, &mut rng, &mut out).unwrap_err();
        assert!(matches!(err, Error::NumericalDivergence { step: 4 }));
    }

    #[test]
    fn transition_is_reproducible() {
        let m = Lorenz63Model::default();
        let a = m.transition([1.0, 2.0, 3.0], &mut SmcRng::seed_from_u64(9)).unwrap();
        let b = m.transition([1.0, 2.0, 3.0], &mut SmcRng::seed_from_u64(9)).unwrap();
        assert_eq!(a.map(f64::to_bits), b.map(f64::to_bits));
    }
}
