//! Linear-Gaussian state-space model and its exact (Kalman) filter.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::smc::StateSpaceModel;

/// `X_t = A X_{t-1} + N(0, Q)`, `Y_t = H X_t + N(0, R)`, `X_0 ~ N(m0, P0)`.
#[derive(Debug, Clone)]
pub struct LinearGaussianModel {
    transition: DMatrix<f64>,
    transition_cov: DMatrix<f64>,
    observation: DMatrix<f64>,
    observation_cov: DMatrix<f64>,
    prior_mean: DVector<f64>,
    prior_cov: DMatrix<f64>,
    transition_chol: DMatrix<f64>,
    prior_chol: DMatrix<f64>,
    /// `(R^-1, log det(2 pi R))`, when `R` is positive definite.
    obs_precision: Option<(DMatrix<f64>, f64)>,
    obs_chol: DMatrix<f64>,
}

/// Lower Cholesky factor of a positive semi-definite matrix. Zero pivots are
/// allowed; the corresponding column is left at zero.
fn psd_factor(a: &DMatrix<f64>, name: &str) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::invalid(format!("{name} must be square")));
    }
    if (a - a.transpose()).amax() > 1e-12 * (1.0 + a.amax()) {
        return Err(Error::invalid(format!("{name} must be symmetric")));
    }
    let mut l = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if d < -1e-12 * (1.0 + a[(j, j)].abs()) {
            return Err(Error::invalid(format!("{name} is not positive semi-definite")));
        }
        let d = d.max(0.0).sqrt();
        l[(j, j)] = d;
        for i in (j + 1)..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = if d > 0.0 { s / d } else { 0.0 };
        }
    }
    Ok(l)
}

impl LinearGaussianModel {
    /// Builds the model. `Q` and `P0` must be positive semi-definite; `R` may
    /// be singular for exact-filter use, but particle filters need it
    /// positive definite.
    pub fn new(
        transition: DMatrix<f64>,
        transition_cov: DMatrix<f64>,
        observation: DMatrix<f64>,
        observation_cov: DMatrix<f64>,
        prior_mean: DVector<f64>,
        prior_cov: DMatrix<f64>,
    ) -> Result<Self> {
        let dx = prior_mean.len();
        let dy = observation.nrows();
        if dx == 0 || dy == 0 {
            return Err(Error::invalid("dimensions must be positive"));
        }
        if transition.shape() != (dx, dx)
            || transition_cov.shape() != (dx, dx)
            || observation.shape() != (dy, dx)
            || observation_cov.shape() != (dy, dy)
            || prior_cov.shape() != (dx, dx)
        {
            return Err(Error::invalid("matrix shapes are inconsistent"));
        }
        let transition_chol = psd_factor(&transition_cov, "transition covariance")?;
        let prior_chol = psd_factor(&prior_cov, "prior covariance")?;
        let obs_chol = psd_factor(&observation_cov, "observation covariance")?;
        let obs_precision = observation_cov.clone().cholesky().map(|c| {
            let log_det: f64 = c.l().diagonal().iter().map(|d| 2.0 * d.ln()).sum();
            (c.inverse(), log_det + dy as f64 * (2.0 * std::f64::consts::PI).ln())
        });
        Ok(Self {
            transition,
            transition_cov,
            observation,
            observation_cov,
            prior_mean,
            prior_cov,
            transition_chol,
            prior_chol,
            obs_precision,
            obs_chol,
        })
    }

    /// Scalar model `x_t = a x_{t-1} + N(0, q)`, `y_t = h x_t + N(0, r)`.
    pub fn scalar(a: f64, q: f64, h: f64, r: f64, m0: f64, p0: f64) -> Result<Self> {
        let m = |v: f64| DMatrix::from_element(1, 1, v);
        Self::new(m(a), m(q), m(h), m(r), DVector::from_element(1, m0), m(p0))
    }

    pub fn transition(&self) -> &DMatrix<f64> {
        &self.transition
    }

    pub fn observation(&self) -> &DMatrix<f64> {
        &self.observation
    }

    pub fn prior_mean(&self) -> &DVector<f64> {
        &self.prior_mean
    }

    pub fn prior_cov(&self) -> &DMatrix<f64> {
        &self.prior_cov
    }

    fn correlated_normal<R: Rng + ?Sized>(chol: &DMatrix<f64>, rng: &mut R) -> DVector<f64> {
        let z = DVector::from_fn(chol.nrows(), |_, _| StandardNormal.sample(rng));
        chol * z
    }
}

impl StateSpaceModel for LinearGaussianModel {
    fn dim_x(&self) -> usize {
        self.prior_mean.len()
    }

    fn dim_y(&self) -> usize {
        self.observation.nrows()
    }

    fn sample_prior<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        let x = &self.prior_mean + Self::correlated_normal(&self.prior_chol, rng);
        out.copy_from_slice(x.as_slice());
    }

    fn sample_transition<R: Rng + ?Sized>(&self, prev: &[f64], t: usize, rng: &mut R, out: &mut [f64]) -> Result<()> {
        if prev.len() == 1 {
            let z: f64 = StandardNormal.sample(rng);
            out[0] = self.transition[(0, 0)] * prev[0] + self.transition_chol[(0, 0)] * z;
            return if out[0].is_finite() {
                Ok(())
            } else {
                Err(Error::NumericalDivergence { step: t })
            };
        }
        let prev = DVector::from_column_slice(prev);
        let x = &self.transition * prev + Self::correlated_normal(&self.transition_chol, rng);
        if !x.iter().all(|v| v.is_finite()) {
            return Err(Error::NumericalDivergence { step: t });
        }
        out.copy_from_slice(x.as_slice());
        Ok(())
    }

    /// Full Gaussian log-density, constant included. `NaN` when `R` is
    /// singular.
    fn log_likelihood(&self, y: &[f64], x: &[f64], _t: usize) -> f64 {
        let Some((precision, log_norm)) = &self.obs_precision else {
            return f64::NAN;
        };
        if y.len() == 1 && x.len() == 1 {
            let r = y[0] - self.observation[(0, 0)] * x[0];
            return -0.5 * (r * r * precision[(0, 0)] + log_norm);
        }
        let resid = DVector::from_column_slice(y) - &self.observation * DVector::from_column_slice(x);
        -0.5 * (resid.dot(&(precision * &resid)) + log_norm)
    }

    fn sample_observation<R: Rng + ?Sized>(&self, x: &[f64], _t: usize, rng: &mut R, out: &mut [f64]) {
        let y = &self.observation * DVector::from_column_slice(x) + Self::correlated_normal(&self.obs_chol, rng);
        out.copy_from_slice(y.as_slice());
    }

    fn transition_point_prediction(&self, prev: &[f64], _t: usize, out: &mut [f64]) -> Result<()> {
        let x = &self.transition * DVector::from_column_slice(prev);
        out.copy_from_slice(x.as_slice());
        Ok(())
    }
}

/// Exact filtering distributions `N(mean_t, cov_t)` for `t = 0..=T`; entry 0
/// is the prior.
pub fn kalman_filter(
    model: &LinearGaussianModel,
    observations: &[Vec<f64>],
) -> Result<Vec<(DVector<f64>, DMatrix<f64>)>> {
    let a = &model.transition;
    let h = &model.observation;
    let mut mean = model.prior_mean.clone();
    let mut cov = model.prior_cov.clone();
    let mut out = Vec::with_capacity(observations.len() + 1);
    out.push((mean.clone(), cov.clone()));
    for (t, y) in observations.iter().enumerate() {
        if y.len() != h.nrows() {
            return Err(Error::invalid(format!("observation {} has the wrong dimension", t + 1)));
        }
        let pred_mean = a * &mean;
        let pred_cov = a * &cov * a.transpose() + &model.transition_cov;
        let innovation_cov = h * &pred_cov * h.transpose() + &model.observation_cov;
        let inv = innovation_cov
            .clone()
            .cholesky()
            .map(|c| c.inverse())
            .ok_or_else(|| Error::Numerical(format!("singular innovation covariance at step {}", t + 1)))?;
        let gain = &pred_cov * h.transpose() * inv;
        let resid = DVector::from_column_slice(y) - h * &pred_mean;
        mean = &pred_mean + &gain * resid;
        let n = pred_cov.nrows();
        cov = (DMatrix::identity(n, n) - &gain * h) * pred_cov;
        cov = 0.5 * (&cov + cov.transpose());
        out.push((mean.clone(), cov.clone()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn hand_kalman_step() {
        // Predictive N(0, 2), gain 2/3, posterior mean 4/3, variance 2/3.
        let m = LinearGaussianModel::scalar(1.0, 1.0, 1.0, 1.0, 0.0, 1.0).unwrap();
        let post = kalman_filter(&m, &[vec![2.0]]).unwrap();
        assert_relative_eq!(post[1].0[0], 4.0 / 3.0, max_relative = 1e-15);
        assert_relative_eq!(post[1].1[(0, 0)], 2.0 / 3.0, max_relative = 1e-15);
    }

    #[test]
    fn no_observations_returns_prior() {
        let m = LinearGaussianModel::scalar(0.9, 1.0, 1.0, 1.0, 0.3, 2.0).unwrap();
        let post = kalman_filter(&m, &[]).unwrap();
        assert_eq!(post.len(), 1);
        assert_eq!(post[0].0[0], 0.3);
        assert_eq!(post[0].1[(0, 0)], 2.0);
    }

    #[test]
    fn exact_measurement_pins_the_mean() {
        let m = LinearGaussianModel::new(
            DMatrix::identity(2, 2),
            DMatrix::identity(2, 2),
            DMatrix::identity(2, 2),
            DMatrix::zeros(2, 2),
            DVector::zeros(2),
            DMatrix::identity(2, 2),
        )
        .unwrap();
        let post = kalman_filter(&m, &[vec![1.5, -0.5]]).unwrap();
        assert_relative_eq!(post[1].0[0], 1.5, epsilon = 1e-12);
        assert_relative_eq!(post[1].0[1], -0.5, epsilon = 1e-12);
        assert!(m.log_likelihood(&[0.0, 0.0], &[0.0, 0.0], 1).is_nan());
    }

    #[test]
    fn singular_innovation_is_an_error() {
        let m = LinearGaussianModel::scalar(1.0, 0.0, 1.0, 0.0, 0.0, 0.0).unwrap();
        assert!(matches!(kalman_filter(&m, &[vec![1.0]]), Err(Error::Numerical(_))));
    }

    #[test]
    fn rejects_indefinite_covariance() {
        assert!(LinearGaussianModel::scalar(1.0, -1.0, 1.0, 1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn log_likelihood_is_the_normal_density() {
        let m = LinearGaussianModel::scalar(1.0, 1.0, 2.0, 0.25, 0.0, 1.0).unwrap();
        let expected = -0.5 * ((1.0f64 - 2.0 * 0.3).powi(2) / 0.25 + (2.0 * std::f64::consts::PI * 0.25).ln());
        assert_relative_eq!(m.log_likelihood(&[1.0], &[0.3], 1), expected, max_relative = 1e-14);
    }
}
