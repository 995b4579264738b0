//! Double bootstrap (island) filter: `M` islands of `N` particles, each
//! running the bootstrap filter, plus multinomial resampling of whole islands
//! every `island_period` steps.

use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use super::bootstrap::{bf_init, bf_step};
use crate::error::{Error, Result};
use crate::resampling::multinomial_indices;
use crate::smc::{logsumexp, normalize_log_weights, ParticleApproximation, SmcRng, StateSpaceModel};

/// Islands plus the log-weight each island has accumulated since the last
/// island resampling.
#[derive(Debug, Clone)]
pub struct IslandSystem {
    islands: Vec<ParticleApproximation>,
    log_weights: Vec<f64>,
    /// System `log G` at the last island resampling.
    log_norm_base: f64,
}

/// Result of one double-bootstrap step.
#[derive(Debug, Clone)]
pub struct IslandStep {
    pub system: IslandSystem,
    /// Number of islands whose weights collapsed at this step.
    pub collapsed_islands: usize,
    /// Whether islands were resampled at this step.
    pub resampled: bool,
}

impl IslandSystem {
    /// `m` islands of `n` prior particles each.
    pub fn init<M, R>(model: &M, m: usize, n: usize, rng: &mut R) -> Result<Self>
    where
        M: StateSpaceModel,
        R: Rng + ?Sized,
    {
        if m == 0 {
            return Err(Error::invalid("number of islands must be at least 1"));
        }
        let seeds: Vec<u64> = (0..m).map(|_| rng.random()).collect();
        let islands = seeds
            .into_iter()
            .map(|s| bf_init(model, n, &mut SmcRng::seed_from_u64(s)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_islands(islands)
    }

    pub fn from_islands(islands: Vec<ParticleApproximation>) -> Result<Self> {
        let first = islands
            .first()
            .ok_or_else(|| Error::invalid("number of islands must be at least 1"))?;
        let (n, t) = (first.len(), first.t());
        if islands.iter().any(|i| i.len() != n || i.t() != t) {
            return Err(Error::invalid("all islands must share N and t"));
        }
        let m = islands.len();
        Ok(Self {
            islands,
            log_weights: vec![0.0; m],
            log_norm_base: 0.0,
        })
    }

    pub fn islands(&self) -> &[ParticleApproximation] {
        &self.islands
    }

    pub fn log_weights(&self) -> &[f64] {
        &self.log_weights
    }

    pub fn num_islands(&self) -> usize {
        self.islands.len()
    }

    pub fn particles_per_island(&self) -> usize {
        self.islands[0].len()
    }

    pub fn t(&self) -> usize {
        self.islands[0].t()
    }

    /// Evidence estimate of the whole system: base at the last island
    /// resampling times the mean island weight accumulated since.
    pub fn log_norm_const(&self) -> f64 {
        self.log_norm_base + logsumexp(&self.log_weights) - (self.islands.len() as f64).ln()
    }

    /// Normalised island weights; uniform when every island weight is `-inf`.
    pub fn island_weights(&self) -> Vec<f64> {
        normalize_log_weights(&self.log_weights)
            .map(|(w, _)| w)
            .unwrap_or_else(|_| vec![1.0 / self.islands.len() as f64; self.islands.len()])
    }

    /// Island-weighted average of the per-island test-function estimates.
    pub fn estimate_statistics<M: StateSpaceModel>(&self, model: &M) -> Vec<f64> {
        let weights = self.island_weights();
        let mut acc = vec![0.0; model.statistics_dim()];
        for (island, w) in self.islands.iter().zip(weights) {
            for (a, v) in acc.iter_mut().zip(island.estimate_statistics(model)) {
                *a += w * v;
            }
        }
        acc
    }
}

/// Advances every island by one bootstrap step (concurrently), then
/// resamples islands when `t % island_period == 0`.
///
/// Island `i` draws from its own stream, seeded from the `i`-th value drawn
/// from `rng`, so results do not depend on scheduling.
pub fn dbf_step<M, R>(
    model: &M,
    system: &IslandSystem,
    y: &[f64],
    t: usize,
    island_period: usize,
    rng: &mut R,
) -> Result<IslandStep>
where
    M: StateSpaceModel,
    R: Rng + ?Sized,
{
    if island_period == 0 {
        return Err(Error::invalid("island_period must be at least 1"));
    }
    if t != system.t() + 1 {
        return Err(Error::invalid(format!(
            "islands are at step {}, cannot advance to step {t}",
            system.t()
        )));
    }
    let seeds: Vec<u64> = (0..system.islands.len()).map(|_| rng.random()).collect();
    let stepped = system
        .islands
        .par_iter()
        .zip(seeds.par_iter())
        .map(|(island, &seed)| bf_step(model, island, y, &mut SmcRng::seed_from_u64(seed)))
        .collect::<Result<Vec<_>>>()?;

    let collapsed_islands = stepped.iter().filter(|s| s.collapsed).count();
    let log_weights: Vec<f64> = system
        .log_weights
        .iter()
        .zip(&stepped)
        .map(|(lw, s)| lw + s.log_increment)
        .collect();
    let islands: Vec<ParticleApproximation> = stepped.into_iter().map(|s| s.approx).collect();
    let mut next = IslandSystem {
        islands,
        log_weights,
        log_norm_base: system.log_norm_base,
    };

    let resampled = t.is_multiple_of(island_period);
    if resampled {
        let base = next.log_norm_const();
        let weights = next.island_weights();
        let chosen = multinomial_indices(&weights, weights.len(), rng)?;
        next.islands = chosen.iter().map(|&k| next.islands[k].clone()).collect();
        next.log_weights.iter_mut().for_each(|w| *w = 0.0);
        next.log_norm_base = base;
    }
    Ok(IslandStep {
        system: next,
        collapsed_islands,
        resampled,
    })
}
