mod common;

use common::symbols;
use ensemble_pf::models::{hmm_exact_filter, simulate, DiscreteHmm, FhnNetworkModel, FhnParams, Lorenz63Model};
use ensemble_pf::{SmcRng, StateSpaceModel};
use rand::SeedableRng;

/// `p(y_1..y_T)` by summing over every state path.
fn brute_force_likelihood(hmm: &DiscreteHmm, obs: &[usize]) -> f64 {
    let k = hmm.num_states();
    let t_max = obs.len();
    let mut total = 0.0;
    for code in 0..k.pow(t_max as u32 + 1) {
        let path: Vec<usize> = (0..=t_max).map(|i| code / k.pow(i as u32) % k).collect();
        let mut p = hmm.prior()[path[0]];
        for t in 1..=t_max {
            p *= hmm.transition()[path[t - 1]][path[t]] * hmm.emission(path[t], obs[t - 1]);
        }
        total += p;
    }
    total
}

#[test]
fn exact_filter_matches_path_enumeration() {
    let models = [
        DiscreteHmm::two_state_example(),
        DiscreteHmm::new(
            vec![0.2, 0.8],
            vec![vec![0.6, 0.4], vec![0.35, 0.65]],
            vec![vec![0.1, 0.9], vec![0.75, 0.25]],
        )
        .unwrap(),
    ];
    let sequences: [&[usize]; 4] = [&[0], &[1, 0], &[1, 1, 0], &[0, 1, 0, 1]];
    for hmm in &models {
        for seq in sequences {
            let exact = hmm_exact_filter(hmm, &symbols(seq)).unwrap();
            let brute = brute_force_likelihood(hmm, seq);
            let got = exact.last().unwrap().mass;
            assert!(((got - brute) / brute).abs() < 1e-12, "{seq:?}: {got} vs {brute}");
        }
    }
}

#[test]
fn lorenz_prior_mean() {
    let model = Lorenz63Model::default();
    let mut rng = SmcRng::seed_from_u64(4);
    let n = 20_000;
    let mut sum = [0.0; 3];
    let mut x = [0.0; 3];
    for _ in 0..n {
        model.sample_prior(&mut rng, &mut x);
        for (s, v) in sum.iter_mut().zip(x) {
            *s += v;
        }
    }
    for (k, s) in sum.iter().enumerate() {
        let m = s / n as f64;
        assert!((m - model.prior_mean[k]).abs() < 3.0 * (10.0 / n as f64).sqrt(), "coordinate {k}: {m}");
    }
}

#[test]
fn quiet_fhn_network_never_stimulates() {
    let mut p = FhnParams::with_side(6);
    p.stimulus_prob = 0.0;
    p.forcing_amplitude = 0.0;
    p.dyn_noise_var = 0.0;
    let model = FhnNetworkModel::new(p).unwrap();
    let sim = simulate(&model, 50, 3).unwrap();
    for x in &sim.states {
        assert!(model.stimulus_history(x).iter().all(|&q| q == 0.0));
        assert!(model.stimulus(model.stimulus_history(x)).iter().all(|&s| s == 0.0));
    }
}

#[test]
fn fhn_simulation_is_reproducible_and_finite() {
    let model = FhnNetworkModel::new(FhnParams::with_side(8)).unwrap();
    let a = simulate(&model, 40, 10).unwrap();
    let b = simulate(&model, 40, 10).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.observations[0].len(), model.dim_y());
    assert!(a.states.iter().flatten().all(|v| v.is_finite()));
}
