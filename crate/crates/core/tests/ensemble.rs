mod common;

use common::{scalar_lg, UnitStatistic};
use ensemble_pf::models::{simulate, Lorenz63Model};
use ensemble_pf::{derive_seed, ensemble_estimate, run_ensemble, run_filter, FilterVariant};

#[test]
fn single_member_ensemble_is_the_filter() {
    let model = scalar_lg();
    let obs = simulate(&model, 12, 1).unwrap().observations;
    let ens = run_ensemble(&model, &obs, FilterVariant::Bootstrap, 1, 30, 5, 1).unwrap();
    let single = run_filter(&model, &obs, FilterVariant::Bootstrap, 30, derive_seed(5, 0)).unwrap();
    assert!(ens.filters[0].same_results(&single));
    for (a, b) in ens.estimates.iter().zip(&single.estimates) {
        assert_eq!(a[0].to_bits(), b[0].to_bits());
    }
}

#[test]
fn constant_test_function_averages_to_one() {
    let model = UnitStatistic(scalar_lg());
    let obs = simulate(&model, 8, 2).unwrap().observations;
    let ens = run_ensemble(&model, &obs, FilterVariant::Auxiliary, 6, 10, 3, 2).unwrap();
    for t in 1..=8 {
        assert!((ensemble_estimate(&ens, t).unwrap()[0] - 1.0).abs() < 1e-15);
    }
}

#[test]
fn worker_count_does_not_change_results() {
    let model = Lorenz63Model::default();
    let obs = simulate(&model, 10, 3).unwrap().observations;
    for variant in [FilterVariant::Bootstrap, FilterVariant::Auxiliary] {
        let one = run_ensemble(&model, &obs, variant, 5, 40, 9, 1).unwrap();
        let many = run_ensemble(&model, &obs, variant, 5, 40, 9, 5).unwrap();
        assert!(one.same_results(&many), "{variant}");
        let other_seed = run_ensemble(&model, &obs, variant, 5, 40, 10, 5).unwrap();
        assert!(!one.same_results(&other_seed));
    }
}

#[test]
fn ensemble_average_is_the_member_mean() {
    let model = scalar_lg();
    let obs = simulate(&model, 4, 8).unwrap().observations;
    let ens = run_ensemble(&model, &obs, FilterVariant::Bootstrap, 3, 20, 1, 1).unwrap();
    for t in 0..4 {
        let m = ens.filters.iter().map(|f| f.estimates[t][0]).sum::<f64>() / 3.0;
        assert!((ens.estimates[t][0] - m).abs() < 1e-15);
    }
    assert!(run_ensemble(&model, &obs, FilterVariant::Bootstrap, 0, 20, 1, 1).is_err());
    assert!(run_ensemble(&model, &obs, FilterVariant::Bootstrap, 2, 20, 1, 0).is_err());
}
