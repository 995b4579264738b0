//! Simulation, single runs and benchmark sweeps.

use std::time::Instant;

use crate::ensemble::{derive_seed, run_ensemble, time_error_index, Scheme};
use crate::error::{Error, Result};
use crate::filters::{run_double_bootstrap, run_filter, FilterVariant};
use crate::harness::config::{ExperimentConfig, ModelKind, Variant};
use crate::harness::records::{read_series_file, write_metrics_file, write_series_file, MetricRecord};
use crate::metrics::{empirical_mse, mean, median, sample_variance};
use crate::models::{simulate, FhnNetworkModel, FhnParams, Lorenz63Model, Simulation};
use crate::smc::StateSpaceModel;

/// Seed of the synthetic data set for a master seed.
pub fn data_seed(seed: u64) -> u64 {
    derive_seed(seed, 0)
}

/// Seed of the Lorenz 63 reference filter.
pub fn reference_seed(seed: u64) -> u64 {
    derive_seed(seed, 1)
}

/// Seed of replicate `r`; shared by every sweep point.
pub fn replicate_seed(seed: u64, r: usize) -> u64 {
    derive_seed(seed, 2 + r as u64)
}

pub fn fhn_model(side: usize) -> Result<FhnNetworkModel> {
    FhnNetworkModel::new(FhnParams::with_side(side))
}

/// Calls `$body` with `$m` bound to the configured model.
macro_rules! with_model {
    ($cfg:expr, $m:ident => $body:expr) => {
        match $cfg.model {
            ModelKind::Lorenz63 => {
                let $m = Lorenz63Model::default();
                $body
            }
            ModelKind::Fhn => {
                let $m = fhn_model($cfg.side)?;
                $body
            }
        }
    };
}

/// Observations with, when known, the states `X_1..X_T` that produced them.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub observations: Vec<Vec<f64>>,
    pub states: Option<Vec<Vec<f64>>>,
}

impl From<Simulation> for Dataset {
    fn from(sim: Simulation) -> Self {
        Self {
            observations: sim.observations,
            states: Some(sim.states.into_iter().skip(1).collect()),
        }
    }
}

/// Reads the configured observation (and trajectory) files, or simulates.
pub fn load_or_simulate<M: StateSpaceModel>(model: &M, cfg: &ExperimentConfig) -> Result<Dataset> {
    let Some(obs_path) = &cfg.observations else {
        return Ok(simulate(model, cfg.horizon(), data_seed(cfg.seed))?.into());
    };
    let observations = read_series_file(obs_path)?;
    if observations.iter().any(|y| y.len() != model.dim_y()) {
        return Err(Error::Config(format!(
            "{} does not hold {}-dimensional observations",
            obs_path.display(),
            model.dim_y()
        )));
    }
    let states = match &cfg.trajectory {
        Some(p) => {
            let s = read_series_file(p)?;
            if s.len() != observations.len() || s.iter().any(|x| x.len() != model.dim_x()) {
                return Err(Error::Config(format!("{} does not match the observations", p.display())));
            }
            Some(s)
        }
        None => None,
    };
    Ok(Dataset { observations, states })
}

/// Writes the ground-truth trajectory (`t = 1..T`) and observations.
pub fn simulate_to_files(cfg: &ExperimentConfig) -> Result<Simulation> {
    cfg.validate()?;
    with_model!(cfg, model => {
        let sim = simulate(&model, cfg.horizon(), data_seed(cfg.seed))?;
        write_series_file(&cfg.trajectory_out, "x", model.dim_x(), 1, &sim.states[1..])?;
        write_series_file(&cfg.observations_out, "y", model.dim_y(), 1, &sim.observations)?;
        Ok(sim)
    })
}

/// Estimates, collapse count and wall time of one run of a scheme.
#[derive(Debug, Clone)]
pub struct VariantRun {
    pub estimates: Vec<Vec<f64>>,
    pub collapses: usize,
    pub wall_seconds: f64,
}

/// Runs one scheme. Centralised variants use `m * n` particles; the
/// ensemble and double bootstrap use `m` filters (islands) of `n`.
#[allow(clippy::too_many_arguments)]
pub fn run_variant<M: StateSpaceModel>(
    model: &M,
    observations: &[Vec<f64>],
    variant: Variant,
    m: usize,
    n: usize,
    island_period: usize,
    seed: u64,
    workers: usize,
) -> Result<VariantRun> {
    let start = Instant::now();
    let (estimates, collapses) = match variant {
        Variant::CentralisedBf | Variant::CentralisedApf => {
            let fv = if variant == Variant::CentralisedBf {
                FilterVariant::Bootstrap
            } else {
                FilterVariant::Auxiliary
            };
            let out = run_filter(model, observations, fv, m * n, seed)?;
            (out.estimates, out.collapses.len())
        }
        Variant::EnsembleBf | Variant::EnsembleApf => {
            let fv = if variant == Variant::EnsembleBf {
                FilterVariant::Bootstrap
            } else {
                FilterVariant::Auxiliary
            };
            let out = run_ensemble(model, observations, fv, m, n, seed, workers)?;
            let c = out.collapse_count();
            (out.estimates, c)
        }
        Variant::DoubleBf => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .map_err(|e| Error::invalid(format!("cannot build worker pool: {e}")))?;
            let out = pool.install(|| run_double_bootstrap(model, observations, m, n, island_period, seed))?;
            (out.estimates, out.collapses.len())
        }
    };
    Ok(VariantRun {
        estimates,
        collapses,
        wall_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Reference posterior means: the true states' statistics for FH-N, a large
/// bootstrap filter for Lorenz 63.
pub fn reference_estimates<M: StateSpaceModel>(
    model: &M,
    kind: ModelKind,
    data: &Dataset,
    cfg: &ExperimentConfig,
) -> Result<Vec<Vec<f64>>> {
    match kind {
        ModelKind::Fhn => {
            let states = data
                .states
                .as_ref()
                .ok_or_else(|| Error::Config("FH-N errors need the ground-truth trajectory file".into()))?;
            Ok(states
                .iter()
                .map(|x| {
                    let mut s = vec![0.0; model.statistics_dim()];
                    model.statistics(x, &mut s);
                    s
                })
                .collect())
        }
        ModelKind::Lorenz63 => Ok(run_filter(
            model,
            &data.observations,
            FilterVariant::Bootstrap,
            cfg.reference_particles,
            reference_seed(cfg.seed),
        )?
        .estimates),
    }
}

pub fn scheme_time_error_index(variant: Variant, m: usize, n: usize) -> f64 {
    match variant {
        Variant::CentralisedBf | Variant::CentralisedApf => time_error_index(Scheme::Centralised, m, n),
        Variant::EnsembleBf | Variant::EnsembleApf => time_error_index(Scheme::Ensemble, m, n),
        Variant::DoubleBf => f64::NAN,
    }
}

/// Aggregates replicate runs of one sweep point against `reference`.
/// Failed replicates count towards `collapse_count` and are left out of
/// the error statistics.
pub fn aggregate(
    variant: Variant,
    m: usize,
    n: usize,
    runs: &[Result<VariantRun>],
    reference: &[Vec<f64>],
) -> Result<MetricRecord> {
    let ok: Vec<&VariantRun> = runs.iter().filter_map(|r| r.as_ref().ok()).collect();
    let failed = runs.len() - ok.len();
    let steps = reference.len().max(1) as f64;
    let (mse_mean, mse_var, bias_sq, wall_per_step_s, wall_total_s) = if ok.is_empty() {
        (f64::NAN, f64::NAN, f64::NAN, f64::NAN, f64::NAN)
    } else {
        let mses = ok
            .iter()
            .map(|r| empirical_mse(&r.estimates, reference))
            .collect::<Result<Vec<_>>>()?;
        let reps = ok.len() as f64;
        let avg: Vec<Vec<f64>> = (0..reference.len())
            .map(|t| {
                let mut acc = vec![0.0; reference[t].len()];
                for r in &ok {
                    for (a, v) in acc.iter_mut().zip(&r.estimates[t]) {
                        *a += v;
                    }
                }
                acc.iter().map(|a| a / reps).collect()
            })
            .collect();
        let walls: Vec<f64> = ok.iter().map(|r| r.wall_seconds).collect();
        let per_step: Vec<f64> = walls.iter().map(|w| w / steps).collect();
        (
            mean(&mses),
            sample_variance(&mses),
            empirical_mse(&avg, reference)?,
            median(&per_step),
            mean(&walls),
        )
    };
    Ok(MetricRecord {
        variant,
        m,
        n,
        k: m * n,
        reps: runs.len(),
        mse_mean,
        mse_var,
        bias_sq,
        wall_per_step_s,
        wall_total_s,
        time_error_index: scheme_time_error_index(variant, m, n),
        collapse_count: ok.iter().map(|r| r.collapses).sum::<usize>() + failed,
    })
}

fn is_divergence(e: &Error) -> bool {
    matches!(e, Error::NumericalDivergence { .. } | Error::WeightCollapse)
}

fn bench_model<M: StateSpaceModel>(model: &M, cfg: &ExperimentConfig) -> Result<Vec<MetricRecord>> {
    let data = load_or_simulate(model, cfg)?;
    let reference = reference_estimates(model, cfg.model, &data, cfg)?;
    let mut rows = Vec::new();
    for &variant in &cfg.variants {
        for &m in &cfg.m_values {
            for &n in &cfg.n_values {
                let mut runs = Vec::with_capacity(cfg.reps);
                for r in 0..cfg.reps {
                    let run = run_variant(
                        model,
                        &data.observations,
                        variant,
                        m,
                        n,
                        cfg.island_period,
                        replicate_seed(cfg.seed, r),
                        cfg.workers,
                    );
                    match run {
                        Err(e) if !is_divergence(&e) => return Err(e),
                        other => runs.push(other),
                    }
                }
                rows.push(aggregate(variant, m, n, &runs, &reference)?);
            }
        }
    }
    Ok(rows)
}

/// One [`MetricRecord`] per `(variant, M, N)`, in config order.
pub fn bench(cfg: &ExperimentConfig) -> Result<Vec<MetricRecord>> {
    cfg.validate()?;
    with_model!(cfg, model => bench_model(&model, cfg))
}

pub fn bench_to_file(cfg: &ExperimentConfig) -> Result<Vec<MetricRecord>> {
    let rows = bench(cfg)?;
    write_metrics_file(&cfg.out, &rows)?;
    Ok(rows)
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub variant: Variant,
    pub m: usize,
    pub n: usize,
    pub steps: usize,
    pub collapses: usize,
    pub wall_seconds: f64,
    /// Error against the reference when one is available.
    pub mse: Option<f64>,
}

/// Runs the first configured variant at the first `(M, N)` and writes its
/// per-step estimates to `cfg.out`.
pub fn run_to_file(cfg: &ExperimentConfig) -> Result<RunSummary> {
    cfg.validate()?;
    let (variant, m, n) = (cfg.variants[0], cfg.m_values[0], cfg.n_values[0]);
    with_model!(cfg, model => {
        let data = load_or_simulate(&model, cfg)?;
        let run = run_variant(
            &model,
            &data.observations,
            variant,
            m,
            n,
            cfg.island_period,
            replicate_seed(cfg.seed, 0),
            cfg.workers,
        )?;
        write_series_file(&cfg.out, "f", model.statistics_dim(), 1, &run.estimates)?;
        let mse = match (cfg.model, &data.states) {
            (ModelKind::Fhn, None) => None,
            _ => Some(empirical_mse(
                &run.estimates,
                &reference_estimates(&model, cfg.model, &data, cfg)?,
            )?),
        };
        Ok(RunSummary {
            variant,
            m,
            n,
            steps: data.observations.len(),
            collapses: run.collapses,
            wall_seconds: run.wall_seconds,
            mse,
        })
    })
}
