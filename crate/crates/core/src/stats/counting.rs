use serde::Serialize;

use crate::{Error, Result};

/// Number of whole windows of length `window` in `span`, tolerant of the
/// rounding in `span = n·window` products.
pub(crate) fn whole_windows(span: f64, window: f64) -> u64 {
    let ratio = span / window;
    let nearest = ratio.round();
    if (ratio - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        nearest as u64
    } else {
        ratio.floor() as u64
    }
}

/// Event counts in consecutive, disjoint counting windows.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountHistogram {
    pub window_length: f64,
    pub counts_per_window: Vec<u64>,
}

impl CountHistogram {
    pub fn n_windows(&self) -> usize {
        self.counts_per_window.len()
    }

    pub fn moments(&self) -> CountMoments {
        self.counts_per_window.iter().copied().collect()
    }

    /// Appends the windows of a later, adjacent histogram.
    pub fn extend(&mut self, later: &CountHistogram) {
        debug_assert_eq!(self.window_length, later.window_length);
        self.counts_per_window.extend_from_slice(&later.counts_per_window);
    }
}

/// Counts events of a time-sorted or unsorted stream in the
/// `floor(span / window)` windows `[k·w, (k+1)·w)` covering `[0, span)`. A
/// trailing partial window is discarded, as are events outside the windows.
pub fn count_in_windows<I>(times: I, span: f64, window: f64) -> Result<CountHistogram>
where
    I: IntoIterator<Item = f64>,
{
    if !(window.is_finite() && window > 0.0) {
        return Err(Error::invalid("window", format!("must be finite and > 0, got {window}")));
    }
    if !(span.is_finite() && span >= window) {
        return Err(Error::invalid(
            "window",
            format!("window {window} exceeds the trace duration {span}"),
        ));
    }
    let n = whole_windows(span, window);
    let mut counts = vec![0u64; n as usize];
    for t in times {
        if t < 0.0 {
            continue;
        }
        let k = (t / window).floor();
        if k < n as f64 {
            counts[k as usize] += 1;
        }
    }
    Ok(CountHistogram {
        window_length: window,
        counts_per_window: counts,
    })
}

/// Exact integer power sums of a set of window counts. Merging is plain
/// addition, so partial results from shards combine without rounding.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CountMoments {
    pub n: u64,
    pub sum: u128,
    pub sum_sq: u128,
}

impl CountMoments {
    pub fn push(&mut self, count: u64) {
        self.n += 1;
        self.sum += count as u128;
        self.sum_sq += (count as u128) * (count as u128);
    }

    pub fn merge(&mut self, other: &CountMoments) {
        self.n += other.n;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
    }

    pub fn mean(&self) -> Option<f64> {
        (self.n > 0).then(|| self.sum as f64 / self.n as f64)
    }

    /// Unbiased sample variance, `Σ(x − x̄)² / (n − 1)`.
    pub fn variance(&self) -> Option<f64> {
        if self.n < 2 {
            return None;
        }
        // n·Σx² − (Σx)² is an exact non-negative integer.
        let n = self.n as u128;
        let numerator = n * self.sum_sq - self.sum * self.sum;
        Some(numerator as f64 / (n as f64 * (n - 1) as f64))
    }
}

impl FromIterator<u64> for CountMoments {
    fn from_iter<I: IntoIterator<Item = u64>>(iter: I) -> Self {
        let mut m = CountMoments::default();
        for c in iter {
            m.push(c);
        }
        m
    }
}

fn mandel_q_of(m: &CountMoments) -> Result<f64> {
    let mean = m.mean().ok_or(Error::Undefined("Mandel Q"))?;
    if mean <= 0.0 {
        return Err(Error::Undefined("Mandel Q"));
    }
    let var = m.variance().ok_or(Error::Undefined("Mandel Q"))?;
    Ok((var - mean) / mean)
}

/// Mandel `Q = (Var − mean) / mean` of the window counts, using the unbiased
/// variance. Negative values mean sub-Poissonian light.
pub fn mandel_q(hist: &CountHistogram) -> Result<f64> {
    mandel_q_of(&hist.moments())
}

/// Fano factor `Var / mean`, computed as `Q + 1`.
pub fn fano_factor(hist: &CountHistogram) -> Result<f64> {
    Ok(mandel_q(hist)? + 1.0)
}

/// Mandel Q from merged moments.
pub fn mandel_q_from_moments(moments: &CountMoments) -> Result<f64> {
    mandel_q_of(moments)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::{poisson_process, RngSpec};
    use proptest::prelude::*;

    #[test]
    fn one_event_per_window() {
        let h = count_in_windows([0.5, 1.5, 2.5], 3.0, 1.0).unwrap();
        assert_eq!(h.counts_per_window, vec![1, 1, 1]);
    }

    #[test]
    fn empty_trace_and_partial_window() {
        let h = count_in_windows(std::iter::empty(), 3.5, 1.0).unwrap();
        assert_eq!(h.counts_per_window, vec![0, 0, 0]);
        let h = count_in_windows([3.2], 3.5, 1.0).unwrap();
        assert_eq!(h.counts_per_window, vec![0, 0, 0]);
    }

    #[test]
    fn window_longer_than_trace() {
        assert!(count_in_windows([0.1], 1.0, 2.0).is_err());
        assert!(count_in_windows([0.1], 1.0, 0.0).is_err());
    }

    #[test]
    fn span_rounding_does_not_lose_a_window() {
        let t = 1.0 / 3e9;
        let h = count_in_windows(std::iter::empty(), 1_000_000.0 * t, 100.0 * t).unwrap();
        assert_eq!(h.n_windows(), 10_000);
    }

    #[test]
    fn poisson_window_mean() {
        let rate = 50.0;
        let times = poisson_process(rate, 1e4, &RngSpec::from_seed(7)).unwrap();
        let h = count_in_windows(times, 1e4, 1.0).unwrap();
        let mean = h.moments().mean().unwrap();
        assert!((mean - rate).abs() <= 3.0 * (rate / 1e4).sqrt());
    }

    #[test]
    fn constant_counts_are_maximally_sub_poissonian() {
        let h = CountHistogram {
            window_length: 1.0,
            counts_per_window: vec![4; 100],
        };
        assert_eq!(mandel_q(&h).unwrap(), -1.0);
        assert_eq!(fano_factor(&h).unwrap(), 0.0);
    }

    #[test]
    fn all_zero_counts_undefined() {
        let h = CountHistogram {
            window_length: 1.0,
            counts_per_window: vec![0; 10],
        };
        assert_eq!(mandel_q(&h), Err(Error::Undefined("Mandel Q")));
        let h = CountHistogram {
            window_length: 1.0,
            counts_per_window: vec![3],
        };
        assert!(mandel_q(&h).is_err());
    }

    #[test]
    fn poisson_sample_is_shot_noise_limited() {
        let times = poisson_process(5.0, 1e5, &RngSpec::from_seed(3)).unwrap();
        let h = count_in_windows(times, 1e5, 1.0).unwrap();
        assert!(mandel_q(&h).unwrap().abs() < 0.02);
        assert!((fano_factor(&h).unwrap() - 1.0).abs() < 0.02);
    }

    #[test]
    fn unbiased_variance() {
        let m: CountMoments = [1u64, 2, 3, 4].into_iter().collect();
        assert_eq!(m.variance().unwrap(), 5.0 / 3.0);
    }

    proptest! {
        #[test]
        fn fano_is_q_plus_one(counts in prop::collection::vec(0u64..50, 2..200)) {
            let h = CountHistogram { window_length: 1.0, counts_per_window: counts };
            if let Ok(q) = mandel_q(&h) {
                prop_assert_eq!(fano_factor(&h).unwrap(), q + 1.0);
                prop_assert!((fano_factor(&h).unwrap() - q - 1.0).abs() <= 4.0 * f64::EPSILON * q.abs().max(1.0));
            }
        }

        #[test]
        fn merged_moments_equal_concatenation(
            a in prop::collection::vec(0u64..1000, 0..100),
            b in prop::collection::vec(0u64..1000, 0..100),
        ) {
            let mut ma: CountMoments = a.iter().copied().collect();
            let mb: CountMoments = b.iter().copied().collect();
            ma.merge(&mb);
            let all: CountMoments = a.iter().chain(&b).copied().collect();
            prop_assert_eq!(ma, all);
            prop_assert_eq!(mandel_q_from_moments(&ma).ok(), mandel_q_from_moments(&all).ok());
        }
    }
}
