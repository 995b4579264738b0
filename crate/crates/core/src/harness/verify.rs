//! Oracle-backed checks of the filters' statistical behaviour.
//!
//! Each check has a parameter struct whose `Default` is the full-size run
//! and a `quick()` variant for smoke runs. Checks are deterministic in their
//! seed; replicates run on the global rayon pool.

use std::fmt;
use std::time::Instant;

use rand::SeedableRng;
use rayon::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::ensemble::{derive_seed, run_ensemble, time_error_index, Scheme};
use crate::error::{Error, Result};
use crate::filters::{bf_init, bf_step, run_filter, FilterVariant};
use crate::harness::config::{ExperimentConfig, Variant};
use crate::harness::experiment::{bench, data_seed, fhn_model, reference_seed, replicate_seed, run_variant};
use crate::harness::records::write_metrics;
use crate::metrics::{empirical_mse, loglog_slope, mean, pearson, sample_variance, standard_error};
use crate::models::{hmm_exact_filter, kalman_filter, simulate, DiscreteHmm, LinearGaussianModel, Lorenz63Model};
use crate::resampling::multinomial_indices;
use crate::smc::{normalize_log_weights, SmcRng, StateSpaceModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Full,
    Quick,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    /// The check's precondition does not hold on this machine.
    Skipped,
}

#[derive(Debug, Clone)]
pub struct CheckReport {
    pub id: usize,
    pub name: &'static str,
    pub outcome: Outcome,
    pub detail: String,
    pub seconds: f64,
}

impl CheckReport {
    fn new(id: usize, name: &'static str, passed: bool, detail: String) -> Self {
        Self {
            id,
            name,
            outcome: if passed { Outcome::Pass } else { Outcome::Fail },
            detail,
            seconds: 0.0,
        }
    }

    pub fn failed(&self) -> bool {
        self.outcome == Outcome::Fail
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.outcome {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::Skipped => "SKIP",
        };
        write!(
            f,
            "{tag} [{}] {}: {} ({:.1} s)",
            self.id, self.name, self.detail, self.seconds
        )
    }
}

fn timed(f: impl FnOnce() -> Result<CheckReport>) -> Result<CheckReport> {
    let start = Instant::now();
    let mut report = f()?;
    report.seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

fn symbols(s: &[usize]) -> Vec<Vec<f64>> {
    s.iter().map(|&v| vec![v as f64]).collect()
}

fn powers_of_two(from: usize, to: usize) -> Vec<usize> {
    std::iter::successors(Some(from), |&k| Some(k * 2)).take_while(|&k| k <= to).collect()
}

/// `exp(log G_T^N)` of a bootstrap filter is an unbiased estimate of the
/// exact observation likelihood.
#[derive(Debug, Clone)]
pub struct Unbiasedness {
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
}

impl Default for Unbiasedness {
    fn default() -> Self {
        Self {
            n: 50,
            reps: 20_000,
            seed: 11,
        }
    }
}

impl Unbiasedness {
    pub fn quick() -> Self {
        Self {
            reps: 4000,
            ..Self::default()
        }
    }

    pub fn run(&self) -> Result<CheckReport> {
        let hmm = DiscreteHmm::two_state_example();
        let obs = symbols(&[0, 1, 1, 0, 1]);
        let exact = hmm_exact_filter(&hmm, &obs)?.last().expect("non-empty").mass;
        let g = (0..self.reps)
            .into_par_iter()
            .map(|r| {
                let out = run_filter(&hmm, &obs, FilterVariant::Bootstrap, self.n, derive_seed(self.seed, r as u64))?;
                Ok(out.log_norm_const.last().expect("non-empty").exp())
            })
            .collect::<Result<Vec<f64>>>()?;
        let (m, se) = (mean(&g), standard_error(&g));
        let z = (m - exact) / se;
        Ok(CheckReport::new(
            1,
            "unbiased normalising constant",
            z.abs() < 3.0,
            format!(
                "T=5, N={}, R={}: mean G = {m:.6e}, exact = {exact:.6e}, |z| = {:.2} (< 3)",
                self.n,
                self.reps,
                z.abs()
            ),
        ))
    }
}

/// MSE of the bootstrap posterior mean against the Kalman mean decays
/// like `1/K`.
#[derive(Debug, Clone)]
pub struct MseRate {
    pub ks: Vec<usize>,
    pub reps: usize,
    pub steps: usize,
    pub seed: u64,
}

impl Default for MseRate {
    fn default() -> Self {
        Self {
            ks: powers_of_two(128, 8192),
            reps: 500,
            steps: 10,
            seed: 12,
        }
    }
}

impl MseRate {
    pub fn quick() -> Self {
        Self {
            ks: powers_of_two(128, 2048),
            reps: 100,
            ..Self::default()
        }
    }

    pub fn run(&self) -> Result<CheckReport> {
        let model = LinearGaussianModel::scalar(0.9, 1.0, 1.0, 1.0, 0.0, 1.0)?;
        let sim = simulate(&model, self.steps, data_seed(self.seed))?;
        let exact: Vec<Vec<f64>> = kalman_filter(&model, &sim.observations)?
            .into_iter()
            .skip(1)
            .map(|(m, _)| m.as_slice().to_vec())
            .collect();
        let mut mses = Vec::with_capacity(self.ks.len());
        for &k in &self.ks {
            let per_run = (0..self.reps)
                .into_par_iter()
                .map(|r| {
                    let seed = derive_seed(derive_seed(self.seed, k as u64), r as u64);
                    let out = run_filter(&model, &sim.observations, FilterVariant::Bootstrap, k, seed)?;
                    empirical_mse(&out.estimates, &exact)
                })
                .collect::<Result<Vec<f64>>>()?;
            mses.push(mean(&per_run));
        }
        let xs: Vec<f64> = self.ks.iter().map(|&k| k as f64).collect();
        let slope = loglog_slope(&xs, &mses)?;
        Ok(CheckReport::new(
            2,
            "MSE rate vs Kalman",
            (-1.25..=-0.75).contains(&slope),
            format!(
                "K = {}..{}, {} reps: slope {slope:.3} in [-1.25, -0.75]; MSE {:.3e} -> {:.3e}",
                self.ks[0],
                self.ks[self.ks.len() - 1],
                self.reps,
                mses[0],
                mses[mses.len() - 1]
            ),
        ))
    }
}

/// Two-state chain whose second observation contradicts the prediction,
/// which makes the `O(1/N)` bias of the filter large relative to its
/// standard deviation.
pub fn bias_test_hmm() -> DiscreteHmm {
    DiscreteHmm::new(
        vec![0.5, 0.5],
        vec![vec![0.95, 0.05], vec![0.1, 0.9]],
        vec![vec![0.95, 0.05], vec![0.05, 0.95]],
    )
    .expect("valid HMM")
}

/// Bootstrap filter through `obs[..T-1]`, then the weighted (not yet
/// resampled) estimate of `P(X_T = 0)` at the last step.
fn weighted_final_estimate(hmm: &DiscreteHmm, obs: &[Vec<f64>], n: usize, seed: u64) -> Result<f64> {
    let mut rng = SmcRng::seed_from_u64(seed);
    let mut state = bf_init(hmm, n, &mut rng)?;
    let last = obs.len() - 1;
    for y in &obs[..last] {
        state = bf_step(hmm, &state, y, &mut rng)?.approx;
    }
    let mut xs = vec![0.0; n];
    let mut log_w = vec![0.0; n];
    for i in 0..n {
        let mut x = [0.0];
        hmm.sample_transition(state.particle(i), last + 1, &mut rng, &mut x)?;
        xs[i] = x[0];
        log_w[i] = hmm.log_likelihood(&obs[last], &x, last + 1);
    }
    let (w, _) = normalize_log_weights(&log_w)?;
    Ok(xs.iter().zip(&w).filter(|(x, _)| **x == 0.0).map(|(_, w)| w).sum())
}

/// The bias of the particle estimate of a filter expectation decays like
/// `1/N`.
#[derive(Debug, Clone)]
pub struct BiasRate {
    pub ns: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
}

impl Default for BiasRate {
    fn default() -> Self {
        Self {
            ns: powers_of_two(16, 512),
            reps: 100_000,
            seed: 13,
        }
    }
}

impl BiasRate {
    pub fn quick() -> Self {
        Self {
            ns: powers_of_two(16, 128),
            reps: 20_000,
            ..Self::default()
        }
    }

    pub fn run(&self) -> Result<CheckReport> {
        let hmm = bias_test_hmm();
        let obs = symbols(&[0, 1]);
        let exact = hmm_exact_filter(&hmm, &obs)?.last().expect("non-empty").filter[0];
        let mut bias = Vec::new();
        let mut z_last = 0.0;
        for &n in &self.ns {
            let est = (0..self.reps)
                .into_par_iter()
                .map(|r| weighted_final_estimate(&hmm, &obs, n, derive_seed(derive_seed(self.seed, n as u64), r as u64)))
                .collect::<Result<Vec<f64>>>()?;
            let b = mean(&est) - exact;
            z_last = b / standard_error(&est);
            bias.push(b.abs());
        }
        let xs: Vec<f64> = self.ns.iter().map(|&n| n as f64).collect();
        let slope = loglog_slope(&xs, &bias)?;
        Ok(CheckReport::new(
            3,
            "bias rate",
            (-1.35..=-0.65).contains(&slope),
            format!(
                "N = {}..{}, {} reps: slope {slope:.3} in [-1.35, -0.65]; |bias| {:.3e} -> {:.3e} ({:.1} SE)",
                self.ns[0],
                self.ns[self.ns.len() - 1],
                self.reps,
                bias[0],
                bias[bias.len() - 1],
                z_last.abs()
            ),
        ))
    }
}

/// At fixed `N`, the variance of the ensemble estimate decays like `1/M`.
#[derive(Debug, Clone)]
pub struct EnsembleVariance {
    pub n: usize,
    pub ms: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
}

impl Default for EnsembleVariance {
    fn default() -> Self {
        Self {
            n: 64,
            ms: powers_of_two(1, 16),
            reps: 500,
            seed: 14,
        }
    }
}

impl EnsembleVariance {
    pub fn quick() -> Self {
        Self {
            reps: 200,
            ..Self::default()
        }
    }

    pub fn run(&self) -> Result<CheckReport> {
        let hmm = DiscreteHmm::two_state_example();
        let obs = symbols(&[0, 1, 1, 0, 1]);
        let mut vars = Vec::new();
        for &m in &self.ms {
            let est = (0..self.reps)
                .into_par_iter()
                .map(|r| {
                    let seed = derive_seed(derive_seed(self.seed, m as u64), r as u64);
                    let out = run_ensemble(&hmm, &obs, FilterVariant::Bootstrap, m, self.n, seed, 1)?;
                    Ok(out.estimates.last().expect("non-empty")[0])
                })
                .collect::<Result<Vec<f64>>>()?;
            vars.push(sample_variance(&est));
        }
        let xs: Vec<f64> = self.ms.iter().map(|&m| m as f64).collect();
        let slope = loglog_slope(&xs, &vars)?;
        Ok(CheckReport::new(
            4,
            "ensemble variance rate",
            (-1.25..=-0.75).contains(&slope),
            format!(
                "N={}, M = {:?}, {} reps: slope {slope:.3} in [-1.25, -0.75]; variance {:.3e} -> {:.3e}",
                self.n,
                self.ms,
                self.reps,
                vars[0],
                vars[vars.len() - 1]
            ),
        ))
    }
}

#[allow(clippy::too_many_arguments)]
fn mean_mse<M: StateSpaceModel>(
    model: &M,
    obs: &[Vec<f64>],
    reference: &[Vec<f64>],
    variant: Variant,
    m: usize,
    n: usize,
    reps: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    let mses = (0..reps)
        .into_par_iter()
        .map(|r| {
            let run = run_variant(model, obs, variant, m, n, 1, replicate_seed(seed, r), 1)?;
            empirical_mse(&run.estimates, reference)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok((mean(&mses), standard_error(&mses)))
}

/// On Lorenz 63, the ensemble nearly matches the centralised filter with the
/// same total particle count once `N` is moderate, and is worse at small `N`.
#[derive(Debug, Clone)]
pub struct LorenzParity {
    pub steps: usize,
    pub reference_particles: usize,
    pub m: usize,
    pub ns: Vec<usize>,
    /// Sizes at or below this must show the ensemble no better than the
    /// centralised filter.
    pub low_n: usize,
    /// Sizes at or above this must keep the ratio within `max_ratio`.
    pub high_n: usize,
    pub max_ratio: f64,
    pub reps: usize,
    pub seed: u64,
}

impl Default for LorenzParity {
    fn default() -> Self {
        Self {
            steps: 50,
            reference_particles: 10_000,
            m: 8,
            ns: vec![100, 400, 800],
            low_n: 100,
            high_n: 400,
            max_ratio: 1.5,
            reps: 50,
            seed: 15,
        }
    }
}

impl LorenzParity {
    pub fn quick() -> Self {
        Self {
            reference_particles: 4000,
            reps: 8,
            ..Self::default()
        }
    }

    pub fn run(&self) -> Result<CheckReport> {
        let model = Lorenz63Model::default();
        let sim = simulate(&model, self.steps, data_seed(self.seed))?;
        let reference = run_filter(
            &model,
            &sim.observations,
            FilterVariant::Bootstrap,
            self.reference_particles,
            reference_seed(self.seed),
        )?
        .estimates;
        let mut passed = true;
        let mut parts = Vec::new();
        for &n in &self.ns {
            let (ens, _) = mean_mse(&model, &sim.observations, &reference, Variant::EnsembleBf, self.m, n, self.reps, self.seed)?;
            let (cen, _) = mean_mse(&model, &sim.observations, &reference, Variant::CentralisedBf, self.m, n, self.reps, self.seed)?;
            let ratio = ens / cen;
            if n >= self.high_n && ratio > self.max_ratio {
                passed = false;
            }
            if n <= self.low_n && ratio < 1.0 {
                passed = false;
            }
            parts.push(format!("N={n}: {ens:.3e}/{cen:.3e} = {ratio:.2}"));
        }
        Ok(CheckReport::new(
            5,
            "Lorenz ensemble vs centralised MSE",
            passed,
            format!(
                "M={}, {} reps, J={}: {} (need >= 1 for N <= {}, <= {} for N >= {})",
                self.m,
                self.reps,
                self.reference_particles,
                parts.join(", "),
                self.low_n,
                self.max_ratio,
                self.high_n
            ),
        ))
    }
}

/// Wall time of the parallel ensemble against the centralised filter with
/// the same particle count.
#[derive(Debug, Clone)]
pub struct Speedup {
    pub m: usize,
    pub n: usize,
    pub steps: usize,
    pub timing_reps: usize,
    pub workers: usize,
    pub min_cores: usize,
    pub max_ratio: f64,
    pub seed: u64,
}

impl Default for Speedup {
    fn default() -> Self {
        Self {
            m: 4,
            n: 2500,
            steps: 50,
            timing_reps: 3,
            workers: 4,
            min_cores: 4,
            max_ratio: 0.6,
            seed: 16,
        }
    }
}

impl Speedup {
    pub fn quick() -> Self {
        Self {
            steps: 20,
            timing_reps: 1,
            ..Self::default()
        }
    }

    pub fn run(&self) -> Result<CheckReport> {
        let cores = std::thread::available_parallelism().map_or(1, |c| c.get());
        let model = Lorenz63Model::default();
        let obs = simulate(&model, self.steps, data_seed(self.seed))?.observations;
        let time = |variant: Variant, workers: usize| -> Result<f64> {
            let walls = (0..self.timing_reps)
                .map(|r| Ok(run_variant(&model, &obs, variant, self.m, self.n, 1, replicate_seed(self.seed, r), workers)?.wall_seconds))
                .collect::<Result<Vec<f64>>>()?;
            Ok(crate::metrics::median(&walls))
        };
        let central = time(Variant::CentralisedBf, 1)?;
        let ensemble = time(Variant::EnsembleBf, self.workers)?;
        let ratio = ensemble / central;
        let c_ipf = time_error_index(Scheme::Ensemble, self.m, self.n);
        let c_spf = time_error_index(Scheme::Centralised, self.m, self.n);
        let detail = format!(
            "M={}, N={} on {} workers vs K={}: wall {ensemble:.2} s / {central:.2} s = {ratio:.2} (need <= {}); \
             C_ipf = {c_ipf:.4} < C_spf = {c_spf}; {cores} core(s) available, {} required",
            self.m,
            self.n,
            self.workers,
            self.m * self.n,
            self.max_ratio,
            self.min_cores
        );
        let mut report = CheckReport::new(6, "parallel speedup", ratio <= self.max_ratio && c_ipf < c_spf, detail);
        if cores < self.min_cores {
            report.outcome = Outcome::Skipped;
        }
        Ok(report)
    }
}

/// Multinomial offspring counts follow the weights (chi-square) and
/// resampling preserves expectations.
#[derive(Debug, Clone)]
pub struct ResamplingExactness {
    pub weights: Vec<f64>,
    pub draws: usize,
    pub seed: u64,
}

impl Default for ResamplingExactness {
    fn default() -> Self {
        Self {
            weights: vec![0.1, 0.2, 0.3, 0.4],
            draws: 100_000,
            seed: 17,
        }
    }
}

impl ResamplingExactness {
    pub fn quick() -> Self {
        Self::default()
    }

    pub fn run(&self) -> Result<CheckReport> {
        let k = self.weights.len();
        if k < 2 || !self.draws.is_multiple_of(k) {
            return Err(Error::invalid("need at least two weights and draws divisible by their count"));
        }
        let mut rng = SmcRng::seed_from_u64(self.seed);
        let mut counts = vec![0usize; k];
        let mut means = Vec::with_capacity(self.draws / k);
        for _ in 0..self.draws / k {
            let idx = multinomial_indices(&self.weights, k, &mut rng)?;
            for &i in &idx {
                counts[i] += 1;
            }
            means.push(idx.iter().map(|&i| (i + 1) as f64).sum::<f64>() / k as f64);
        }
        let chi2: f64 = counts
            .iter()
            .zip(&self.weights)
            .map(|(&o, &w)| {
                let e = w * self.draws as f64;
                (o as f64 - e).powi(2) / e
            })
            .sum();
        let critical = ChiSquared::new((k - 1) as f64)
            .map_err(|e| Error::Numerical(e.to_string()))?
            .inverse_cdf(0.999);
        let target: f64 = self.weights.iter().enumerate().map(|(i, w)| (i + 1) as f64 * w).sum();
        let z = (mean(&means) - target) / standard_error(&means);
        Ok(CheckReport::new(
            7,
            "multinomial resampling",
            chi2 < critical && z.abs() < 3.0,
            format!(
                "{} draws, counts {counts:?}: chi2 = {chi2:.2} < {critical:.2}; mean offset |z| = {:.2} (< 3)",
                self.draws,
                z.abs()
            ),
        ))
    }
}

/// Ensemble of auxiliary filters on the FH-N lattice against the simulated
/// voltages.
#[derive(Debug, Clone)]
pub struct FhnTracking {
    pub side: usize,
    pub steps: usize,
    pub m: usize,
    pub ns: Vec<usize>,
    pub reps: usize,
    /// Trailing steps over which the field correlation is measured.
    pub window: usize,
    pub min_correlation: f64,
    pub seed: u64,
}

impl Default for FhnTracking {
    fn default() -> Self {
        Self {
            side: 16,
            steps: 100,
            m: 4,
            ns: vec![100, 250, 500],
            reps: 10,
            window: 20,
            min_correlation: 0.8,
            seed: 18,
        }
    }
}

impl FhnTracking {
    pub fn quick() -> Self {
        Self {
            ns: vec![50, 100, 200],
            reps: 3,
            ..Self::default()
        }
    }

    pub fn run(&self) -> Result<CheckReport> {
        let model = fhn_model(self.side)?;
        let sim = simulate(&model, self.steps, data_seed(self.seed))?;
        let truth: Vec<Vec<f64>> = sim.states[1..].iter().map(|x| model.voltage(x).to_vec()).collect();
        let from = self.steps.saturating_sub(self.window);
        let true_window: Vec<f64> = truth[from..].concat();
        let mut mses = Vec::new();
        let mut ses = Vec::new();
        let mut corr = Vec::new();
        for &n in &self.ns {
            let per_rep = (0..self.reps)
                .into_par_iter()
                .map(|r| {
                    let run = run_variant(&model, &sim.observations, Variant::EnsembleApf, self.m, n, 1, replicate_seed(self.seed, r), 1)?;
                    let mse = empirical_mse(&run.estimates, &truth)?;
                    let rho = pearson(&run.estimates[from..].concat(), &true_window)?;
                    Ok((mse, rho))
                })
                .collect::<Result<Vec<(f64, f64)>>>()?;
            let mse: Vec<f64> = per_rep.iter().map(|p| p.0).collect();
            let rho: Vec<f64> = per_rep.iter().map(|p| p.1).collect();
            mses.push(mean(&mse));
            ses.push(standard_error(&mse));
            corr.push(mean(&rho));
        }
        let monotone = (1..mses.len()).all(|i| mses[i] <= mses[i - 1] + 2.0 * ses[i].hypot(ses[i - 1]));
        let final_corr = corr[corr.len() - 1];
        let rows: Vec<String> = self
            .ns
            .iter()
            .zip(mses.iter().zip(&ses))
            .map(|(n, (m, s))| format!("N={n}: {m:.4} +- {s:.4}"))
            .collect();
        Ok(CheckReport::new(
            8,
            "FH-N tracking",
            monotone && final_corr > self.min_correlation,
            format!(
                "J={}, M={}, {} reps, MSE/node {} (non-increasing within 2 SE: {monotone}); \
                 correlation over last {} steps at N={}: {final_corr:.3} (> {})",
                self.side,
                self.m,
                self.reps,
                rows.join(", "),
                self.window,
                self.ns[self.ns.len() - 1],
                self.min_correlation
            ),
        ))
    }
}

/// `bench` with different worker counts writes identical error columns.
#[derive(Debug, Clone)]
pub struct Determinism {
    pub config: ExperimentConfig,
    pub workers: [usize; 2],
}

impl Default for Determinism {
    fn default() -> Self {
        let mut config = ExperimentConfig::default();
        config
            .apply_str(
                "model=lorenz63\nsteps=20\nvariant=centralised-bf,ensemble-bf,ensemble-apf,double-bf\n\
                 M=4\nN=50,100\nreps=3\nreference_particles=2000\nseed=19",
            )
            .expect("valid config");
        Self {
            config,
            workers: [1, 8],
        }
    }
}

/// The `mse_mean`, `mse_var` and `bias_sq` fields of every row, as written.
pub fn mse_columns(csv_bytes: &[u8]) -> Result<Vec<String>> {
    let mut r = csv::Reader::from_reader(csv_bytes);
    r.records()
        .map(|rec| {
            let rec = rec?;
            Ok([5, 6, 7].map(|i| rec.get(i).unwrap_or("")).join(","))
        })
        .collect()
}

impl Determinism {
    pub fn quick() -> Self {
        Self::default()
    }

    pub fn run(&self) -> Result<CheckReport> {
        let mut outputs = Vec::new();
        for &w in &self.workers {
            let mut cfg = self.config.clone();
            cfg.workers = w;
            let mut buf = Vec::new();
            write_metrics(&mut buf, &bench(&cfg)?)?;
            outputs.push(mse_columns(&buf)?);
        }
        let same = outputs[0] == outputs[1];
        Ok(CheckReport::new(
            9,
            "bench determinism",
            same,
            format!(
                "{} rows, workers {} vs {}: mse columns {}",
                outputs[0].len(),
                self.workers[0],
                self.workers[1],
                if same { "byte-identical" } else { "differ" }
            ),
        ))
    }
}

/// Runs check `id` (1 to 9) at the given scale.
pub fn run_check(id: usize, scale: Scale) -> Result<CheckReport> {
    let quick = scale == Scale::Quick;
    macro_rules! pick {
        ($t:ty) => {
            if quick {
                <$t>::quick()
            } else {
                <$t>::default()
            }
        };
    }
    timed(|| match id {
        1 => pick!(Unbiasedness).run(),
        2 => pick!(MseRate).run(),
        3 => pick!(BiasRate).run(),
        4 => pick!(EnsembleVariance).run(),
        5 => pick!(LorenzParity).run(),
        6 => pick!(Speedup).run(),
        7 => pick!(ResamplingExactness).run(),
        8 => pick!(FhnTracking).run(),
        9 => pick!(Determinism).run(),
        other => Err(Error::invalid(format!("no check {other}; checks are numbered 1 to 9"))),
    })
}

pub const CHECK_IDS: std::ops::RangeInclusive<usize> = 1..=9;
