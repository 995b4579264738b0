//! Filter steps and drivers: bootstrap, auxiliary and double bootstrap.
//!
//! All filters resample multinomially at every observation step, so the
//! particles they hand back always carry uniform weights.

mod auxiliary;
mod bootstrap;
mod island;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;

pub use auxiliary::apf_step;
pub use bootstrap::{bf_init, bf_step, StepOutcome};
pub use island::{dbf_step, IslandStep, IslandSystem};

use crate::error::{Error, Result};
use crate::smc::{check_observations, SmcRng, StateSpaceModel};

/// Single-filter algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FilterVariant {
    Bootstrap,
    Auxiliary,
}

impl fmt::Display for FilterVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FilterVariant::Bootstrap => "bootstrap",
            FilterVariant::Auxiliary => "auxiliary",
        })
    }
}

impl FromStr for FilterVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bootstrap" | "bf" => Ok(FilterVariant::Bootstrap),
            "auxiliary" | "apf" => Ok(FilterVariant::Auxiliary),
            other => Err(Error::invalid(format!("unknown filter variant `{other}`"))),
        }
    }
}

/// Per-step record of one filter run over an observation sequence.
#[derive(Debug, Clone, Default)]
pub struct FilterOutput {
    /// Posterior expectations of the model's test functions, one vector per
    /// observation.
    pub estimates: Vec<Vec<f64>>,
    /// `log G_t^N` after each observation.
    pub log_norm_const: Vec<f64>,
    /// Steps (1-based) at which the weights collapsed.
    pub collapses: Vec<usize>,
    /// Wall-clock seconds spent on each step.
    pub step_seconds: Vec<f64>,
}

impl FilterOutput {
    pub fn len(&self) -> usize {
        self.estimates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.estimates.is_empty()
    }

    pub fn wall_seconds(&self) -> f64 {
        self.step_seconds.iter().sum()
    }

    /// Bitwise equality of everything except the timings.
    pub fn same_results(&self, other: &FilterOutput) -> bool {
        fn bits(v: &[f64]) -> impl Iterator<Item = u64> + '_ {
            v.iter().map(|x| x.to_bits())
        }
        self.estimates.len() == other.estimates.len()
            && self
                .estimates
                .iter()
                .zip(&other.estimates)
                .all(|(a, b)| a.len() == b.len() && bits(a).eq(bits(b)))
            && bits(&self.log_norm_const).eq(bits(&other.log_norm_const))
            && self.collapses == other.collapses
    }

    fn record(&mut self, estimate: Vec<f64>, log_norm_const: f64, collapsed: bool, seconds: f64) {
        self.estimates.push(estimate);
        self.log_norm_const.push(log_norm_const);
        if collapsed {
            self.collapses.push(self.estimates.len());
        }
        self.step_seconds.push(seconds);
    }
}

fn check_run<M: StateSpaceModel>(model: &M, observations: &[Vec<f64>]) -> Result<()> {
    if observations.is_empty() {
        return Err(Error::invalid("observation sequence is empty"));
    }
    check_observations(model, observations)
}

/// Runs one filter with `n` particles over `observations`.
///
/// Deterministic in `(model, observations, variant, n, seed)`; the rng is
/// `ChaCha8` seeded with `seed`. Prior sampling is charged to the first step's
/// timing.
pub fn run_filter<M: StateSpaceModel>(
    model: &M,
    observations: &[Vec<f64>],
    variant: FilterVariant,
    n: usize,
    seed: u64,
) -> Result<FilterOutput> {
    check_run(model, observations)?;
    let mut rng = SmcRng::seed_from_u64(seed);
    let mut out = FilterOutput::default();
    let mut clock = Instant::now();
    let mut state = bf_init(model, n, &mut rng)?;
    for y in observations {
        let step = match variant {
            FilterVariant::Bootstrap => bf_step(model, &state, y, &mut rng)?,
            FilterVariant::Auxiliary => apf_step(model, &state, y, &mut rng)?,
        };
        state = step.approx;
        let estimate = state.estimate_statistics(model);
        let now = Instant::now();
        out.record(
            estimate,
            state.log_norm_const(),
            step.collapsed,
            now.duration_since(clock).as_secs_f64(),
        );
        clock = now;
    }
    Ok(out)
}

/// Runs the double bootstrap filter with `m` islands of `n` particles,
/// resampling islands every `island_period` steps. Estimates are
/// island-weighted averages.
pub fn run_double_bootstrap<M: StateSpaceModel>(
    model: &M,
    observations: &[Vec<f64>],
    m: usize,
    n: usize,
    island_period: usize,
    seed: u64,
) -> Result<FilterOutput> {
    check_run(model, observations)?;
    let mut rng = SmcRng::seed_from_u64(seed);
    let mut out = FilterOutput::default();
    let mut clock = Instant::now();
    let mut system = IslandSystem::init(model, m, n, &mut rng)?;
    for (k, y) in observations.iter().enumerate() {
        let step = dbf_step(model, &system, y, k + 1, island_period, &mut rng)?;
        system = step.system;
        let estimate = system.estimate_statistics(model);
        let now = Instant::now();
        out.record(
            estimate,
            system.log_norm_const(),
            step.collapsed_islands > 0,
            now.duration_since(clock).as_secs_f64(),
        );
        clock = now;
    }
    Ok(out)
}
