//! Ensembles of independent particle filters.
//!
//! The crate runs `M` fully independent particle filters with `N` particles
//! each and averages their estimates, next to the comparators this scheme is
//! measured against: a centralised bootstrap filter with `K = M N` particles
//! and a double bootstrap (island) filter that also resamples whole islands.
//!
//! Modules, bottom up:
//!
//! - [`smc`]: the [`StateSpaceModel`] trait, particle sets, log-domain weights.
//! - [`resampling`]: multinomial (and opt-in systematic) resampling.
//! - [`filters`]: bootstrap, auxiliary and double-bootstrap steps and drivers.
//! - [`ensemble`]: independent-filter ensembles and the time-error index.
//! - [`models`]: stochastic Lorenz 63, a FitzHugh-Nagumo lattice, and two
//!   models with exact filters (linear-Gaussian, finite HMM).
//! - [`metrics`]: MSE, bias/variance and log-log slope fits.
//! - [`harness`]: configuration, CSV files, benchmark sweeps and the
//!   oracle-backed verification suite behind the command-line tool.

pub mod ensemble;
pub mod error;
pub mod filters;
pub mod harness;
pub mod metrics;
pub mod models;
pub mod resampling;
pub mod smc;

pub use ensemble::{derive_seed, ensemble_estimate, run_ensemble, time_error_index, EnsembleOutput, Scheme};
pub use error::{Error, Result};
pub use filters::{
    apf_step, bf_init, bf_step, dbf_step, run_double_bootstrap, run_filter, FilterOutput, FilterVariant,
    IslandSystem, StepOutcome,
};
pub use smc::{estimate_integral, normalize_log_weights, ParticleApproximation, SmcRng, StateSpaceModel};
