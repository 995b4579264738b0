//! Network of stochastic FitzHugh-Nagumo nodes on a `J x J` lattice with
//! periodic forcing and random stimuli behind the wave tail.
//!
//! State layout (length `(2 + hold) J^2`): the `U` plane, the `V` plane, then
//! `hold` planes of stimulus indicators `Q`, oldest first. Node `(i, j)`
//! (0-based row, column) has index `i * J + j` within each plane.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::smc::StateSpaceModel;

#[derive(Debug, Clone, PartialEq)]
pub struct FhnParams {
    /// Grid side `J`.
    pub side: usize,
    /// Euler step `T_d`; one observation per step.
    pub dt: f64,
    /// Coupling `1/D` applied to the sum of neighbour voltages.
    pub coupling: f64,
    /// Cubic coefficients `(a3, a2, a1, a0)` of `p3(u)`.
    pub cubic: [f64; 4],
    /// Recovery coefficients `(b0, b1, b2)`: `dV = b0 U + b1 V + b2`.
    pub recovery: [f64; 3],
    /// Stimulus band `(u_lower, u_upper)`, exclusive.
    pub lower_threshold: f64,
    pub upper_threshold: f64,
    /// Bernoulli probability of a new stimulus per step.
    pub stimulus_prob: f64,
    pub stimulus_amplitude: f64,
    /// Number of steps a stimulus is held.
    pub stimulus_hold: usize,
    pub forcing_period: f64,
    pub forcing_amplitude: f64,
    /// Pulse width of the forcing train, in time units.
    pub forcing_width: f64,
    /// Nodes driven by the forcing signal.
    pub forcing_mask: Vec<bool>,
    pub dyn_noise_var: f64,
    pub obs_noise_var: f64,
    /// Observed node indices, sorted.
    pub observed: Vec<usize>,
}

impl FhnParams {
    /// Published parameterisation on a `side x side` grid, with 5 x 5
    /// observation zones of 2 x 2 nodes and forcing on the leftmost column.
    ///
    /// The cubic is `-(u (u + sqrt(18/5)) (u - sqrt(18/5)))`, the excitable
    /// orientation; the un-negated product has a repelling outer branch and
    /// diverges under the forcing amplitude.
    pub fn with_side(side: usize) -> Self {
        Self {
            side,
            dt: 5e-3,
            coupling: 4.5e-3,
            cubic: [-1.0, 0.0, 18.0 / 5.0, 0.0],
            recovery: [2.1, -0.6, 0.6],
            lower_threshold: -1.8,
            upper_threshold: -1.6,
            stimulus_prob: 1e-3,
            stimulus_amplitude: 200.0,
            stimulus_hold: 25,
            forcing_period: 20.0,
            forcing_amplitude: 200.0,
            forcing_width: 1.0,
            forcing_mask: left_column(side),
            dyn_noise_var: 0.5,
            obs_noise_var: 0.5,
            observed: observation_zones(side, 5, 2),
        }
    }

    /// The 32 x 32 network.
    pub fn paper() -> Self {
        Self::with_side(32)
    }
}

/// Mask selecting column 0.
pub fn left_column(side: usize) -> Vec<bool> {
    (0..side * side).map(|k| k % side == 0).collect()
}

/// Node indices of `zones x zones` square zones of `zone_size x zone_size`
/// nodes, equally spaced over the grid. Zone `z` starts at row (and column)
/// `floor((2z + 1) side / (2 zones)) - floor(zone_size / 2)`.
pub fn observation_zones(side: usize, zones: usize, zone_size: usize) -> Vec<usize> {
    let starts: Vec<usize> = (0..zones)
        .map(|z| ((2 * z + 1) * side / (2 * zones)).saturating_sub(zone_size / 2))
        .collect();
    let mut nodes = Vec::with_capacity(zones * zones * zone_size * zone_size);
    for &r0 in &starts {
        for &c0 in &starts {
            for r in r0..(r0 + zone_size).min(side) {
                for c in c0..(c0 + zone_size).min(side) {
                    nodes.push(r * side + c);
                }
            }
        }
    }
    nodes.sort_unstable();
    nodes.dedup();
    nodes
}

/// Von Neumann neighbourhoods, truncated at the edges.
pub fn von_neumann_neighbours(side: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(side * side);
    for i in 0..side {
        for j in 0..side {
            let mut nb = Vec::with_capacity(4);
            if i > 0 {
                nb.push((i - 1) * side + j);
            }
            if i + 1 < side {
                nb.push((i + 1) * side + j);
            }
            if j > 0 {
                nb.push(i * side + j - 1);
            }
            if j + 1 < side {
                nb.push(i * side + j + 1);
            }
            out.push(nb);
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct FhnNetworkModel {
    params: FhnParams,
    neighbours: Vec<Vec<usize>>,
}

impl FhnNetworkModel {
    pub fn new(params: FhnParams) -> Result<Self> {
        let nodes = params.side * params.side;
        if params.side == 0 {
            return Err(Error::invalid("grid side must be positive"));
        }
        if params.lower_threshold >= params.upper_threshold {
            return Err(Error::invalid("stimulus band needs u_lower < u_upper"));
        }
        if params.stimulus_hold == 0 {
            return Err(Error::invalid("stimulus hold must be at least 1 step"));
        }
        if !(0.0..1.0).contains(&params.stimulus_prob) {
            return Err(Error::invalid("stimulus probability must lie in [0, 1)"));
        }
        if !(params.dt > 0.0 && params.dyn_noise_var >= 0.0 && params.obs_noise_var > 0.0) {
            return Err(Error::invalid("step and observation variance must be positive"));
        }
        if params.forcing_period <= 0.0 {
            return Err(Error::invalid("forcing period must be positive"));
        }
        if params.forcing_mask.len() != nodes {
            return Err(Error::invalid("forcing mask must have one entry per node"));
        }
        if params.observed.is_empty() || params.observed.iter().any(|&k| k >= nodes) {
            return Err(Error::invalid("observed nodes must be a non-empty subset of the grid"));
        }
        let neighbours = von_neumann_neighbours(params.side);
        Ok(Self { params, neighbours })
    }

    pub fn params(&self) -> &FhnParams {
        &self.params
    }

    pub fn nodes(&self) -> usize {
        self.params.side * self.params.side
    }

    pub fn neighbours(&self, node: usize) -> &[usize] {
        &self.neighbours[node]
    }

    pub fn voltage<'a>(&self, x: &'a [f64]) -> &'a [f64] {
        &x[..self.nodes()]
    }

    pub fn recovery_var<'a>(&self, x: &'a [f64]) -> &'a [f64] {
        &x[self.nodes()..2 * self.nodes()]
    }

    pub fn stimulus_history<'a>(&self, x: &'a [f64]) -> &'a [f64] {
        &x[2 * self.nodes()..]
    }

    pub fn p3(&self, u: f64) -> f64 {
        let [a3, a2, a1, a0] = self.params.cubic;
        ((a3 * u + a2) * u + a1) * u + a0
    }

    /// Forcing signal `F_t = F(t * dt)`: a pulse train of the given period
    /// and width.
    pub fn forcing(&self, t: usize) -> f64 {
        let p = &self.params;
        let phase = (t as f64 * p.dt).rem_euclid(p.forcing_period);
        if phase <= p.forcing_width {
            p.forcing_amplitude
        } else {
            0.0
        }
    }

    /// Nodes that lie in the stimulus band, or have a neighbour in it.
    pub fn stimulus_region(&self, u_prev: &[f64]) -> Vec<usize> {
        let (lo, hi) = (self.params.lower_threshold, self.params.upper_threshold);
        let in_band: Vec<bool> = u_prev.iter().map(|&u| lo < u && u < hi).collect();
        (0..self.nodes())
            .filter(|&k| in_band[k] || self.neighbours[k].iter().any(|&nb| in_band[nb]))
            .collect()
    }

    /// `F~ * min(1, sum of the held indicators)` per node.
    pub fn stimulus(&self, q_history: &[f64]) -> Vec<f64> {
        let n = self.nodes();
        let mut total = vec![0.0; n];
        for plane in q_history.chunks_exact(n) {
            for (s, q) in total.iter_mut().zip(plane) {
                *s += q;
            }
        }
        total
            .into_iter()
            .map(|s| self.params.stimulus_amplitude * s.min(1.0))
            .collect()
    }

    /// Euler update shared by the stochastic transition and the point
    /// prediction. `new_q` is the stimulus plane at step `t`; `noise` supplies
    /// one standard normal per node, or `None` for the noise-free map.
    fn advance(
        &self,
        prev: &[f64],
        t: usize,
        new_q: &[f64],
        mut noise: Option<&mut dyn FnMut() -> f64>,
        out: &mut [f64],
    ) -> Result<()> {
        let p = &self.params;
        let n = self.nodes();
        let hold = p.stimulus_hold;
        let (u, rest) = prev.split_at(n);
        let (v, q_prev) = rest.split_at(n);
        let (u_out, rest_out) = out.split_at_mut(n);
        let (v_out, q_out) = rest_out.split_at_mut(n);

        q_out[..(hold - 1) * n].copy_from_slice(&q_prev[n..]);
        q_out[(hold - 1) * n..].copy_from_slice(new_q);
        let psi = self.stimulus(q_out);

        let f_t = self.forcing(t);
        let noise_sd = (p.dyn_noise_var * p.dt).sqrt();
        let [b0, b1, b2] = p.recovery;
        for k in 0..n {
            let coupled: f64 = self.neighbours[k].iter().map(|&nb| u[nb]).sum();
            let forced = if p.forcing_mask[k] { f_t } else { 0.0 };
            let drift = self.p3(u[k]) - v[k] + p.coupling * coupled + forced + psi[k];
            let z = noise.as_mut().map_or(0.0, |draw| draw());
            u_out[k] = u[k] + p.dt * drift + noise_sd * z;
            v_out[k] = v[k] + p.dt * (b0 * u[k] + b1 * v[k] + b2);
        }
        if u_out.iter().chain(v_out.iter()).all(|x| x.is_finite()) {
            Ok(())
        } else {
            Err(Error::NumericalDivergence { step: t })
        }
    }

    /// Checked Gaussian log-likelihood of the observed voltages.
    pub fn log_likelihood_checked(&self, y: &[f64], x: &[f64]) -> Result<f64> {
        if y.len() != self.params.observed.len() {
            return Err(Error::invalid(format!(
                "observation has {} entries, {} nodes are observed",
                y.len(),
                self.params.observed.len()
            )));
        }
        Ok(self.log_likelihood(y, x, 0))
    }
}

impl StateSpaceModel for FhnNetworkModel {
    fn dim_x(&self) -> usize {
        (2 + self.params.stimulus_hold) * self.nodes()
    }

    fn dim_y(&self) -> usize {
        self.params.observed.len()
    }

    /// All-zero voltages, recovery variables and stimulus history.
    fn sample_prior<R: Rng + ?Sized>(&self, _rng: &mut R, out: &mut [f64]) {
        out.fill(0.0);
    }

    fn sample_transition<R: Rng + ?Sized>(&self, prev: &[f64], t: usize, rng: &mut R, out: &mut [f64]) -> Result<()> {
        let n = self.nodes();
        let mut new_q = vec![0.0; n];
        if rng.random_bool(self.params.stimulus_prob) {
            let region = self.stimulus_region(&prev[..n]);
            if !region.is_empty() {
                let centre = region[rng.random_range(0..region.len())];
                new_q[centre] = 1.0;
                for &nb in &self.neighbours[centre] {
                    new_q[nb] = 1.0;
                }
            }
        }
        let mut draw = || -> f64 { StandardNormal.sample(rng) };
        self.advance(prev, t, &new_q, Some(&mut draw), out)
    }

    fn log_likelihood(&self, y: &[f64], x: &[f64], _t: usize) -> f64 {
        let scale = 1.0 / (2.0 * self.params.obs_noise_var);
        -scale
            * self
                .params
                .observed
                .iter()
                .zip(y)
                .map(|(&k, &yk)| (yk - x[k]) * (yk - x[k]))
                .sum::<f64>()
    }

    fn sample_observation<R: Rng + ?Sized>(&self, x: &[f64], _t: usize, rng: &mut R, out: &mut [f64]) {
        let sd = self.params.obs_noise_var.sqrt();
        for (o, &k) in out.iter_mut().zip(&self.params.observed) {
            let z: f64 = StandardNormal.sample(rng);
            *o = x[k] + sd * z;
        }
    }

    /// No new stimulus and no noise; held stimuli and forcing still act.
    fn transition_point_prediction(&self, prev: &[f64], t: usize, out: &mut [f64]) -> Result<()> {
        let new_q = vec![0.0; self.nodes()];
        self.advance(prev, t, &new_q, None, out)
    }

    fn statistics_dim(&self) -> usize {
        self.nodes()
    }

    /// Voltages `U`.
    fn statistics(&self, x: &[f64], out: &mut [f64]) {
        out.copy_from_slice(&x[..self.nodes()]);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smc::SmcRng;
    use approx::assert_relative_eq;
    use rand::SeedableRng;

    fn quiet(side: usize) -> FhnParams {
        FhnParams {
            stimulus_prob: 0.0,
            forcing_amplitude: 0.0,
            dyn_noise_var: 0.0,
            observed: vec![0],
            ..FhnParams::with_side(side)
        }
    }

    #[test]
    fn published_parameters() {
        let p = FhnParams::paper();
        assert_eq!(p.dt, 5e-3);
        assert_eq!(p.coupling, 4.5e-3);
        assert_eq!(p.recovery, [2.1, -0.6, 0.6]);
        assert_eq!((p.lower_threshold, p.upper_threshold), (-1.8, -1.6));
        assert_eq!(p.stimulus_prob, 1e-3);
        assert_eq!(p.stimulus_amplitude, 200.0);
        assert_eq!(p.stimulus_hold, 25);
        assert_eq!(p.dyn_noise_var, 0.5);
        assert_eq!(p.obs_noise_var, 0.5);
        assert_eq!(p.observed.len(), 100);
        let m = FhnNetworkModel::new(p).unwrap();
        assert_eq!(m.dim_x(), 27 * 1024);
    }

    #[test]
    fn observation_zones_on_small_grids() {
        let nodes = observation_zones(16, 5, 2);
        assert_eq!(nodes.len(), 100);
        let nodes = observation_zones(32, 5, 2);
        // zone rows start at 2, 8, 15, 21, 27
        assert!(nodes.contains(&(2 * 32 + 2)));
        assert!(nodes.contains(&(28 * 32 + 28)));
    }

    #[test]
    fn quiet_band_gives_empty_region() {
        let m = FhnNetworkModel::new(quiet(8)).unwrap();
        assert!(m.stimulus_region(&vec![0.0; 64]).is_empty());
    }

    #[test]
    fn region_around_a_single_node_in_band() {
        // 1-based (2,2) on a 3x3 grid is the centre, index 4.
        let m = FhnNetworkModel::new(quiet(3)).unwrap();
        let mut u = vec![0.0; 9];
        u[4] = -1.7;
        assert_eq!(m.stimulus_region(&u), vec![1, 3, 4, 5, 7]);
    }

    #[test]
    fn band_edges_are_exclusive() {
        let m = FhnNetworkModel::new(quiet(3)).unwrap();
        let mut u = vec![0.0; 9];
        u[0] = -1.8;
        u[8] = -1.6;
        assert!(m.stimulus_region(&u).is_empty());
    }

    #[test]
    fn isolated_node_euler_step_by_hand() {
        // Literal cubic u(u + sqrt(3.6))(u - sqrt(3.6)): p3(1) = -2.6.
        // U' = 1 + 0.005 * (-2.6) = 0.987, V' = 0.005 * (2.1 + 0.6) = 0.0135.
        let params = FhnParams {
            cubic: [1.0, 0.0, -3.6, 0.0],
            coupling: 0.0,
            ..quiet(1)
        };
        let m = FhnNetworkModel::new(params).unwrap();
        let mut x = vec![0.0; m.dim_x()];
        x[0] = 1.0;
        let mut out = vec![0.0; m.dim_x()];
        m.sample_transition(&x, 1, &mut SmcRng::seed_from_u64(0), &mut out).unwrap();
        assert_relative_eq!(out[0], 0.987, max_relative = 1e-14);
        assert_relative_eq!(out[1], 0.0135, max_relative = 1e-14);
    }

    #[test]
    fn no_stimulus_without_indicators() {
        let m = FhnNetworkModel::new(quiet(4)).unwrap();
        let mut rng = SmcRng::seed_from_u64(3);
        let mut x = vec![0.0; m.dim_x()];
        let mut out = vec![0.0; m.dim_x()];
        for t in 1..=200 {
            m.sample_transition(&x, t, &mut rng, &mut out).unwrap();
            assert!(m.stimulus(m.stimulus_history(&out)).iter().all(|&s| s == 0.0));
            std::mem::swap(&mut x, &mut out);
        }
    }

    #[test]
    fn held_stimulus_is_capped_and_expires() {
        let m = FhnNetworkModel::new(quiet(2)).unwrap();
        let n = 4;
        let mut x = vec![0.0; m.dim_x()];
        // Indicator set twice on node 0 within the hold window.
        let hist = 2 * n;
        x[hist + 24 * n] = 1.0;
        x[hist + 23 * n] = 1.0;
        assert_eq!(m.stimulus(m.stimulus_history(&x))[0], 200.0);
        let mut out = vec![0.0; m.dim_x()];
        let mut rng = SmcRng::seed_from_u64(0);
        for t in 1..=25 {
            m.sample_transition(&x, t, &mut rng, &mut out).unwrap();
            std::mem::swap(&mut x, &mut out);
        }
        assert_eq!(m.stimulus(m.stimulus_history(&x))[0], 0.0);
    }

    #[test]
    fn neighbourhoods_are_symmetric_with_expected_sizes() {
        for side in [2, 3, 5, 32] {
            let nb = von_neumann_neighbours(side);
            for (a, list) in nb.iter().enumerate() {
                let (i, j) = (a / side, a % side);
                let edges = [i == 0, i == side - 1, j == 0, j == side - 1].iter().filter(|e| **e).count();
                assert_eq!(list.len(), 4 - edges);
                for &b in list {
                    assert!(nb[b].contains(&a));
                }
            }
        }
        let nb = von_neumann_neighbours(32);
        // corner (1,1) -> {(1,2), (2,1)} in 1-based indices
        let mut corner = nb[0].clone();
        corner.sort_unstable();
        assert_eq!(corner, vec![1, 32]);
    }

    #[test]
    fn forcing_is_a_pulse_train() {
        let m = FhnNetworkModel::new(FhnParams::with_side(4)).unwrap();
        assert_eq!(m.forcing(0), 200.0);
        assert_eq!(m.forcing(200), 200.0);
        assert_eq!(m.forcing(201), 0.0);
        assert_eq!(m.forcing(4000), 200.0);
        assert_eq!(m.forcing(3999), 0.0);
    }

    #[test]
    fn likelihood_dimension_and_values() {
        let params = FhnParams {
            observed: vec![1, 2],
            ..quiet(2)
        };
        let m = FhnNetworkModel::new(params).unwrap();
        let mut x = vec![0.0; m.dim_x()];
        x[1] = 0.5;
        x[2] = -0.25;
        assert_eq!(m.log_likelihood_checked(&[0.5, -0.25], &x).unwrap(), 0.0);
        assert_eq!(m.log_likelihood_checked(&[1.5, -0.25], &x).unwrap(), -1.0);
        assert!(matches!(m.log_likelihood_checked(&[0.0], &x), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn forced_network_stays_finite() {
        let m = FhnNetworkModel::new(FhnParams::with_side(8)).unwrap();
        let mut rng = SmcRng::seed_from_u64(11);
        let mut x = vec![0.0; m.dim_x()];
        let mut out = vec![0.0; m.dim_x()];
        for t in 1..=2000 {
            m.sample_transition(&x, t, &mut rng, &mut out).unwrap();
            std::mem::swap(&mut x, &mut out);
        }
        assert!(m.voltage(&x).iter().all(|u| u.abs() < 10.0));
    }
}
