use proptest::prelude::*;

use sawphoton::design::{accuracy_budget, min_divider, AccuracyTarget};
use sawphoton::mc::PumpModel;
use sawphoton::physics::{InjectionSpec, RecombinationModel};

/// Poisson-binomial count distribution of one photon from each earlier
/// packet, truncated at `lags`.
fn single_electron_counts(gt: f64, lags: i32) -> Vec<f64> {
    let q = (-gt).exp();
    let mut dist = vec![1.0];
    for lag in 0..lags {
        let p = (1.0 - q) * q.powi(lag);
        let mut next = vec![0.0; dist.len() + 1];
        for (k, &v) in dist.iter().enumerate() {
            next[k] += v * (1.0 - p);
            next[k + 1] += v * p;
        }
        dist = next;
    }
    dist
}

#[test]
fn single_electron_budget_matches_poisson_binomial() {
    for gt in [0.5, 2.0, 7.0, 14.0] {
        let spec = InjectionSpec::new(1, 1, 1e9).unwrap();
        let pump = PumpModel::ideal(spec);
        let recomb = RecombinationModel::radiative(gt * 1e9).unwrap();
        let report = accuracy_budget(&pump, &recomb, &AccuracyTarget::default()).unwrap();
        let oracle = single_electron_counts(gt, 400);
        assert!((report.p_zero_photon - oracle[0]).abs() < 1e-13, "γT={gt}");
        assert!((report.window_counts[1] - oracle[1]).abs() < 1e-13, "γT={gt}");
        let above: f64 = oracle[2..].iter().sum();
        assert!((report.p_multi_photon - above).abs() < 1e-13, "γT={gt}");
    }
}

#[test]
fn reference_design_passes_at_divider_five() {
    let recomb = RecombinationModel::radiative(1e10).unwrap();
    let eps = AccuracyTarget::new(1e-6).unwrap();
    let pass = |m| {
        let pump = PumpModel::ideal(InjectionSpec::new(1, m, 3e9).unwrap());
        accuracy_budget(&pump, &recomb, &eps).unwrap().late_emission_pass
    };
    assert!(!pass(4));
    assert!(pass(5));
    assert_eq!(min_divider(3e9, 1e10, 1e-6).unwrap(), 5);
}

proptest! {
    #[test]
    fn min_divider_matches_search(f in 1e8f64..1e10, rate in 1e8f64..1e11, log_eps in -12.0f64..-1.0) {
        let eps = 10f64.powf(log_eps);
        let m = min_divider(f, rate, eps).unwrap();
        prop_assume!(m < 10_000);
        let ok = |m: u32| rate * (m as f64 / f) >= -eps.ln();
        let searched = (1..).find(|&m| ok(m)).unwrap();
        prop_assert_eq!(m, searched);
    }

    #[test]
    fn window_counts_are_a_distribution(
        n in 1u32..6, m in 1u32..8, gr in 1e8f64..5e10, gnr in 0.0f64..1e9,
        p_miss in 0.0f64..0.2, p_extra in 0.0f64..0.2,
    ) {
        let pump = PumpModel::new(InjectionSpec::new(n, m, 3e9).unwrap(), p_miss, p_extra, 0.0).unwrap();
        let recomb = RecombinationModel::new(gr, gnr).unwrap();
        let r = accuracy_budget(&pump, &recomb, &AccuracyTarget::default()).unwrap();
        let total: f64 = r.window_counts.iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        prop_assert!(r.window_counts.iter().all(|&p| p >= -1e-15));
        let below: f64 = r.window_counts[..n as usize].iter().sum();
        prop_assert!((r.p_zero_photon - below).abs() < 1e-12);
        prop_assert!((r.p_multi_photon - r.window_counts[n as usize + 1]).abs() < 1e-15);
    }
}
