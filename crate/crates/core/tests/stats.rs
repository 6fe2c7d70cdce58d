use proptest::prelude::*;

use sawphoton::stats::{
    count_in_windows, fano_factor, g2_histogram, mandel_q, phase_correlation, pulse_peak_areas, CountMoments,
};

fn sorted_times() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..100.0, 0..200).prop_map(|mut v| {
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    })
}

proptest! {
    #[test]
    fn window_counts_match_direct_count(times in sorted_times(), window in 0.5f64..10.0) {
        let h = count_in_windows(times.iter().copied(), 100.0, window).unwrap();
        for (k, &c) in h.counts_per_window.iter().enumerate() {
            let (lo, hi) = (k as f64 * window, (k + 1) as f64 * window);
            let direct = times.iter().filter(|&&t| t >= lo && t < hi).count() as u64;
            prop_assert_eq!(c, direct);
        }
    }

    #[test]
    fn mandel_q_matches_two_pass(counts in prop::collection::vec(0u64..50, 2..300)) {
        prop_assume!(counts.iter().any(|&c| c > 0));
        let times: Vec<f64> = counts
            .iter()
            .enumerate()
            .flat_map(|(k, &c)| std::iter::repeat_n(k as f64 + 0.5, c as usize))
            .collect();
        let h = count_in_windows(times, counts.len() as f64, 1.0).unwrap();
        let n = counts.len() as f64;
        let mean = counts.iter().sum::<u64>() as f64 / n;
        let var = counts.iter().map(|&c| (c as f64 - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let q = mandel_q(&h).unwrap();
        prop_assert!((q - (var - mean) / mean).abs() < 1e-9 * (1.0 + q.abs()));
        prop_assert_eq!(fano_factor(&h).unwrap(), q + 1.0);
    }

    #[test]
    fn moments_merge_like_concatenation(a in prop::collection::vec(0u64..1000, 0..50), b in prop::collection::vec(0u64..1000, 0..50)) {
        let mut left: CountMoments = a.iter().copied().collect();
        left.merge(&b.iter().copied().collect());
        let whole: CountMoments = a.iter().chain(&b).copied().collect();
        prop_assert_eq!(left, whole);
    }

    #[test]
    fn g2_matches_all_pairs(times in sorted_times(), max_delay in 1.0f64..30.0) {
        let h = g2_histogram(&times, 0.25, max_delay).unwrap();
        let mut pairs = 0u64;
        for i in 0..times.len() {
            for j in i + 1..times.len() {
                if times[j] - times[i] < max_delay {
                    pairs += 1;
                }
            }
        }
        prop_assert_eq!(h.total_pairs(), pairs);
        prop_assert_eq!(h.total_events, times.len() as u64);
    }

    #[test]
    fn phase_histogram_keeps_every_event(times in prop::collection::vec(-50.0f64..50.0, 1..200), bins in 2usize..40) {
        let h = phase_correlation(times.iter().copied(), 1.7, bins).unwrap();
        prop_assert_eq!(h.total(), times.len() as u64);
        prop_assert!((0.0..=1.0).contains(&h.visibility));
        prop_assert!((h.fractions().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn regular_pulses_of_two_photons_give_half() {
    // Two photons per pulse at the pulse time: every same-pulse pair is at τ=0.
    let times: Vec<f64> = (0..2000).flat_map(|k| [k as f64, k as f64]).collect();
    let h = g2_histogram(&times, 0.05, 6.0).unwrap();
    let peaks = pulse_peak_areas(&h, 1.0).unwrap();
    assert_eq!(peaks.zero_peak_area, 4000.0);
    assert!((peaks.ratio - 0.5).abs() < 0.01);
}

#[test]
fn empty_phase_stream_is_undefined() {
    assert!(phase_correlation(std::iter::empty(), 1.0, 10).is_err());
}
