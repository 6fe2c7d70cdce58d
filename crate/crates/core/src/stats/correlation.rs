use serde::Serialize;

use crate::{Error, Result};

/// Multi-stop coincidence histogram over delays `τ ∈ [0, max_delay)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationHistogram {
    pub bin_width: f64,
    pub max_delay: f64,
    /// `bins[b]` counts pairs with delay in `[b·w, (b+1)·w)`; the last bin
    /// is cut at `max_delay`.
    pub bins: Vec<u64>,
    pub total_events: u64,
}

impl CorrelationHistogram {
    pub fn n_bins(&self) -> usize {
        self.bins.len()
    }

    pub fn total_pairs(&self) -> u64 {
        self.bins.iter().sum()
    }

    /// Lower edge of each bin.
    pub fn bin_starts(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.bins.len()).map(|b| b as f64 * self.bin_width)
    }

    /// Adds the bins of a histogram built with the same binning from an
    /// independent event stream.
    pub fn merge(&mut self, other: &CorrelationHistogram) -> Result<()> {
        if self.bins.len() != other.bins.len() || self.bin_width != other.bin_width {
            return Err(Error::SupportMismatch {
                expected: self.bins.len(),
                found: other.bins.len(),
            });
        }
        for (a, b) in self.bins.iter_mut().zip(&other.bins) {
            *a += b;
        }
        self.total_events += other.total_events;
        Ok(())
    }
}

/// Counts every ordered pair `i < j` of a sorted timestamp stream with
/// `t_j − t_i < max_delay` into delay bins of width `bin_width`.
pub fn g2_histogram(times: &[f64], bin_width: f64, max_delay: f64) -> Result<CorrelationHistogram> {
    if !(bin_width.is_finite() && bin_width > 0.0) {
        return Err(Error::invalid("bin_width", format!("must be > 0, got {bin_width}")));
    }
    if !(max_delay.is_finite() && max_delay > 0.0) {
        return Err(Error::invalid("max_delay", format!("must be > 0, got {max_delay}")));
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::invalid("times", "must be sorted ascending"));
    }
    let n_bins = (max_delay / bin_width).ceil() as usize;
    let mut bins = vec![0u64; n_bins];
    for (i, &start) in times.iter().enumerate() {
        for &stop in &times[i + 1..] {
            let tau = stop - start;
            if tau >= max_delay {
                break;
            }
            let b = ((tau / bin_width) as usize).min(n_bins - 1);
            bins[b] += 1;
        }
    }
    Ok(CorrelationHistogram {
        bin_width,
        max_delay,
        bins,
        total_events: times.len() as u64,
    })
}

/// Peak areas of a pulsed correlation histogram.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeakAreas {
    /// Coincidences at zero delay, counted over `[−T/2, T/2)`. The histogram
    /// holds only `τ ≥ 0`, so this is twice the `[0, T/2)` area.
    pub zero_peak_area: f64,
    /// Mean area of the complete side peaks `[kT − T/2, kT + T/2)`, `k ≥ 1`.
    pub mean_side_peak_area: f64,
    pub side_peaks: usize,
    /// `zero / side`: 0 for a perfect single-photon source, `(n−1)/n` for
    /// exactly `n` photons per pulse, 1 for Poissonian light.
    pub ratio: f64,
}

/// Integrates the zero-delay and side peaks of a pulsed g² histogram. Bins
/// are assigned to a peak by their centre.
pub fn pulse_peak_areas(g2: &CorrelationHistogram, period: f64) -> Result<PeakAreas> {
    if !(period.is_finite() && period > 2.0 * g2.bin_width) {
        return Err(Error::invalid(
            "period",
            format!("must exceed two bin widths ({}), got {period}", 2.0 * g2.bin_width),
        ));
    }
    let side_peaks = ((g2.max_delay - 0.5 * period) / period + 1e-9).floor().max(0.0) as usize;
    if side_peaks == 0 {
        return Err(Error::Undefined("side-peak area (no complete side peak within max_delay)"));
    }
    let mut areas = vec![0u64; side_peaks + 1];
    for (b, &count) in g2.bins.iter().enumerate() {
        let centre = (b as f64 + 0.5) * g2.bin_width;
        let k = (centre / period + 0.5).floor() as usize;
        if k <= side_peaks {
            areas[k] += count;
        }
    }
    let zero = 2.0 * areas[0] as f64;
    let side = areas[1..].iter().sum::<u64>() as f64 / side_peaks as f64;
    if side <= 0.0 {
        return Err(Error::Undefined("peak-area ratio (empty side peaks)"));
    }
    Ok(PeakAreas {
        zero_peak_area: zero,
        mean_side_peak_area: side,
        side_peaks,
        ratio: zero / side,
    })
}
