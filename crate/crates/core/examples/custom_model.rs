//! Plugging a user-defined model into the filters: a stochastic volatility
//! model `x_t = phi x_{t-1} + sigma v_t`, `y_t = beta exp(x_t / 2) w_t`.

use ensemble_pf::models::simulate;
use ensemble_pf::{run_ensemble, FilterVariant, Result, StateSpaceModel};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

struct StochasticVolatility {
    phi: f64,
    sigma: f64,
    beta: f64,
}

impl StateSpaceModel for StochasticVolatility {
    fn dim_x(&self) -> usize {
        1
    }

    fn dim_y(&self) -> usize {
        1
    }

    fn sample_prior<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        let sd = self.sigma / (1.0 - self.phi * self.phi).sqrt();
        let z: f64 = StandardNormal.sample(rng);
        out[0] = sd * z;
    }

    fn sample_transition<R: Rng + ?Sized>(&self, prev: &[f64], _t: usize, rng: &mut R, out: &mut [f64]) -> Result<()> {
        let z: f64 = StandardNormal.sample(rng);
        out[0] = self.phi * prev[0] + self.sigma * z;
        Ok(())
    }

    fn log_likelihood(&self, y: &[f64], x: &[f64], _t: usize) -> f64 {
        let var = self.beta * self.beta * x[0].exp();
        -0.5 * (y[0] * y[0] / var + var.ln())
    }

    fn sample_observation<R: Rng + ?Sized>(&self, x: &[f64], _t: usize, rng: &mut R, out: &mut [f64]) {
        let z: f64 = StandardNormal.sample(rng);
        out[0] = self.beta * (0.5 * x[0]).exp() * z;
    }

    fn transition_point_prediction(&self, prev: &[f64], _t: usize, out: &mut [f64]) -> Result<()> {
        out[0] = self.phi * prev[0];
        Ok(())
    }
}

fn main() -> Result<()> {
    let model = StochasticVolatility {
        phi: 0.91,
        sigma: 1.0,
        beta: 0.5,
    };
    let sim = simulate(&model, 40, 2)?;
    let out = run_ensemble(&model, &sim.observations, FilterVariant::Auxiliary, 4, 500, 1, 1)?;
    for t in (0..40).step_by(4) {
        println!(
            "t = {:2}  y = {:+.3}  true x = {:+.3}  filtered x = {:+.3}",
            t + 1,
            sim.observations[t][0],
            sim.states[t + 1][0],
            out.estimates[t][0]
        );
    }
    Ok(())
}
