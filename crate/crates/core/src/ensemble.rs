//! Ensembles of fully independent particle filters.
//!
//! `M` filters with `N` particles each run on the same observations with no
//! communication at all; their per-step estimates are averaged once every
//! filter has finished. Seeds come from [`derive_seed`], so the output does
//! not depend on the worker count or on scheduling.

use std::time::Instant;

use rand::{RngCore, SeedableRng};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::filters::{run_filter, FilterOutput, FilterVariant};
use crate::smc::{SmcRng, StateSpaceModel};

/// Seed of the `index`-th filter: the `index`-th 64-bit word of the ChaCha8
/// keystream keyed by `master_seed` (counter mode). Stable across versions.
pub fn derive_seed(master_seed: u64, index: u64) -> u64 {
    let mut rng = SmcRng::seed_from_u64(master_seed);
    rng.set_word_pos(2 * index as u128);
    rng.next_u64()
}

#[derive(Debug, Clone)]
pub struct EnsembleOutput {
    pub filters: Vec<FilterOutput>,
    /// Per-step average of the filters' estimates.
    pub estimates: Vec<Vec<f64>>,
    pub wall_seconds: f64,
    pub filter_wall_seconds: Vec<f64>,
    pub m: usize,
    pub n: usize,
    pub seeds: Vec<u64>,
}

impl EnsembleOutput {
    pub fn len(&self) -> usize {
        self.estimates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.estimates.is_empty()
    }

    pub fn collapse_count(&self) -> usize {
        self.filters.iter().map(|f| f.collapses.len()).sum()
    }

    /// Bitwise equality of all filter results and averages; timings ignored.
    pub fn same_results(&self, other: &EnsembleOutput) -> bool {
        self.m == other.m
            && self.n == other.n
            && self.seeds == other.seeds
            && self.filters.len() == other.filters.len()
            && self.filters.iter().zip(&other.filters).all(|(a, b)| a.same_results(b))
            && self.estimates.len() == other.estimates.len()
            && self
                .estimates
                .iter()
                .zip(&other.estimates)
                .all(|(a, b)| a.iter().map(|x| x.to_bits()).eq(b.iter().map(|x| x.to_bits())))
    }
}

/// `(1/M) sum_m v_m`, summed left to right over `m`.
fn average_estimates(filters: &[FilterOutput]) -> Vec<Vec<f64>> {
    let m = filters.len() as f64;
    let steps = filters[0].estimates.len();
    (0..steps)
        .map(|t| {
            let mut acc = filters[0].estimates[t].clone();
            for f in &filters[1..] {
                for (a, v) in acc.iter_mut().zip(&f.estimates[t]) {
                    *a += v;
                }
            }
            acc.iter_mut().for_each(|a| *a /= m);
            acc
        })
        .collect()
}

/// Runs `m` independent filters of `n` particles on up to `workers` threads
/// and averages their estimates.
///
/// Filter `i` uses seed `derive_seed(master_seed, i)`. A filter whose weights
/// collapse stays in the average; its collapse is recorded in its
/// [`FilterOutput`].
pub fn run_ensemble<M: StateSpaceModel>(
    model: &M,
    observations: &[Vec<f64>],
    variant: FilterVariant,
    m: usize,
    n: usize,
    master_seed: u64,
    workers: usize,
) -> Result<EnsembleOutput> {
    if m == 0 || n == 0 {
        return Err(Error::invalid("ensemble needs M >= 1 and N >= 1"));
    }
    if workers == 0 {
        return Err(Error::invalid("workers must be at least 1"));
    }
    let seeds: Vec<u64> = (0..m as u64).map(|i| derive_seed(master_seed, i)).collect();
    let start = Instant::now();
    let filters = if workers == 1 {
        seeds
            .iter()
            .map(|&s| run_filter(model, observations, variant, n, s))
            .collect::<Result<Vec<_>>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::invalid(format!("cannot build worker pool: {e}")))?;
        pool.install(|| {
            seeds
                .par_iter()
                .map(|&s| run_filter(model, observations, variant, n, s))
                .collect::<Result<Vec<_>>>()
        })?
    };
    let wall_seconds = start.elapsed().as_secs_f64();
    let estimates = average_estimates(&filters);
    let filter_wall_seconds = filters.iter().map(FilterOutput::wall_seconds).collect();
    Ok(EnsembleOutput {
        filters,
        estimates,
        wall_seconds,
        filter_wall_seconds,
        m,
        n,
        seeds,
    })
}

/// Ensemble estimate at step `t` (1-based, as in the observation index).
pub fn ensemble_estimate(out: &EnsembleOutput, t: usize) -> Result<&[f64]> {
    if t == 0 || t > out.estimates.len() {
        return Err(Error::invalid(format!(
            "step {t} is outside 1..={}",
            out.estimates.len()
        )));
    }
    Ok(&out.estimates[t - 1])
}

/// Parallelisation scheme compared by the time-error index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// One filter with `K = M N` particles.
    Centralised,
    /// `M` independent filters with `N` particles each.
    Ensemble,
}

/// Running-time order times MSE-rate order.
///
/// Centralised: `K * (1/K) = 1`. Ensemble: `N * (1/(MN) + 1/N^2) = 1/M + 1/N`.
pub fn time_error_index(scheme: Scheme, m: usize, n: usize) -> f64 {
    match scheme {
        Scheme::Centralised => 1.0,
        Scheme::Ensemble => 1.0 / m as f64 + 1.0 / n as f64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn output(values: &[f64]) -> FilterOutput {
        FilterOutput {
            estimates: values.iter().map(|v| vec![*v]).collect(),
            log_norm_const: vec![0.0; values.len()],
            collapses: vec![],
            step_seconds: vec![0.0; values.len()],
        }
    }

    fn ensemble_of(filters: Vec<FilterOutput>) -> EnsembleOutput {
        let m = filters.len();
        EnsembleOutput {
            estimates: average_estimates(&filters),
            filter_wall_seconds: vec![0.0; m],
            filters,
            wall_seconds: 0.0,
            m,
            n: 1,
            seeds: vec![0; m],
        }
    }

    #[test]
    fn constant_estimators_average_to_themselves() {
        let out = ensemble_of(vec![output(&[0.3, 0.7]); 5]);
        assert_eq!(ensemble_estimate(&out, 1).unwrap(), &[0.3]);
        assert_eq!(ensemble_estimate(&out, 2).unwrap(), &[0.7]);
    }

    #[test]
    fn two_filters_average() {
        let out = ensemble_of(vec![output(&[0.0]), output(&[1.0])]);
        assert_eq!(ensemble_estimate(&out, 1).unwrap(), &[0.5]);
    }

    #[test]
    fn out_of_range_step() {
        let out = ensemble_of(vec![output(&[0.0])]);
        assert!(matches!(ensemble_estimate(&out, 0), Err(Error::InvalidArgument(_))));
        assert!(matches!(ensemble_estimate(&out, 2), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn time_error_examples() {
        assert_eq!(time_error_index(Scheme::Centralised, 1, 12_345), 1.0);
        assert_eq!(time_error_index(Scheme::Centralised, 20, 1000), 1.0);
        assert!((time_error_index(Scheme::Ensemble, 20, 1000) - 0.051).abs() < 1e-15);
        let k = 4096;
        assert_eq!(time_error_index(Scheme::Ensemble, 1, k), 1.0 + 1.0 / k as f64);
    }

    #[test]
    fn derived_seeds_are_stable_and_distinct() {
        let seeds: Vec<u64> = (0..64).map(|i| derive_seed(7, i)).collect();
        let mut sorted = seeds.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), seeds.len());
        assert_eq!(derive_seed(7, 3), seeds[3]);
        assert_ne!(derive_seed(8, 0), seeds[0]);
    }
}
