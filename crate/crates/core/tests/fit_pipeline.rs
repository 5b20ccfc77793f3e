use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use qd_hom::correlations::{g2_hom_single_exponential, michelson_contrast};
use qd_hom::fitting::{
    bootstrap, classify_regime, fit_hom_dip_simple, fit_michelson, Dataset, Regime,
};
use qd_hom::io::{parse_dataset, DatasetKind};

fn noisy(xs: &[f64], f: impl Fn(f64) -> f64, sigma: f64, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = Normal::new(0.0, sigma).unwrap();
    let y = xs.iter().map(|&x| f(x) + n.sample(&mut rng)).collect();
    Dataset::new(xs.to_vec(), y, Some(vec![sigma; xs.len()]), "synthetic").unwrap()
}

#[test]
fn michelson_recovers_coherence_time() {
    let xs: Vec<f64> = (0..40).map(|i| -300.0 + 15.0 * i as f64).collect();
    let d = noisy(&xs, |t| michelson_contrast(t, 0.05, 0.9, 110.0), 0.005, 3);
    let fit = fit_michelson(&d).unwrap();
    assert!(fit.converged);
    assert!((fit.param("t2_ps") / 110.0 - 1.0).abs() < 0.03, "{:?}", fit.params);
}

#[test]
fn simple_dip_recovers_visibility() {
    let xs: Vec<f64> = (0..41).map(|i| -400.0 + 20.0 * i as f64).collect();
    let d = noisy(&xs, |t| g2_hom_single_exponential(t, 0.72, 67.0), 0.01, 5);
    let fit = fit_hom_dip_simple(&d, 67.0).unwrap();
    assert!((fit.param("visibility") - 0.72).abs() < 0.02);
}

#[test]
fn bootstrap_is_reproducible_and_brackets_the_estimate() {
    let xs: Vec<f64> = (0..41).map(|i| -400.0 + 20.0 * i as f64).collect();
    let d = noisy(&xs, |t| g2_hom_single_exponential(t, 0.72, 67.0), 0.01, 6);
    let fit = fit_hom_dip_simple(&d, 67.0).unwrap();
    let refit = |d: &Dataset| fit_hom_dip_simple(d, 67.0);
    let a = bootstrap(&d, &fit, 60, 11, refit).unwrap();
    let b = bootstrap(&d, &fit, 60, 11, refit).unwrap();
    assert_eq!(a, b);
    let (lo, hi) = a["visibility"];
    assert!(lo < fit.param("visibility") && fit.param("visibility") < hi);
    assert!(hi - lo < 0.05);
    let c = bootstrap(&d, &fit, 60, 12, refit).unwrap();
    assert_ne!(a, c);
}

#[test]
fn fits_are_independent_of_row_order() {
    let text = "tau_d_ns,g2hom,g2hom_err\n0.1,0.4,0.02\n-0.1,0.41,0.02\n0.0,0.14,0.02\n0.05,0.3,0.02\n-0.05,0.31,0.02\n";
    let shuffled = "tau_d_ns,g2hom,g2hom_err\n0.0,0.14,0.02\n-0.05,0.31,0.02\n0.1,0.4,0.02\n0.05,0.3,0.02\n-0.1,0.41,0.02\n";
    let a = fit_hom_dip_simple(&parse_dataset(text, DatasetKind::HomDip, "a").unwrap(), 67.0).unwrap();
    let b = fit_hom_dip_simple(&parse_dataset(shuffled, DatasetKind::HomDip, "b").unwrap(), 67.0).unwrap();
    assert_eq!(a.params, b.params);
}

#[test]
fn regime_labels() {
    let gamma_rate = 1.0 / 67.0;
    assert_eq!(classify_regime(gamma_rate, 1.0 / 3.2, 0.0024), Regime::PureDephasing);
    assert_eq!(classify_regime(gamma_rate, 1.0 / 21.5, 0.0), Regime::TimeJitter);
}
