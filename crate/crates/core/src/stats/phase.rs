use serde::Serialize;

use crate::{Error, Result};

/// Histogram of event times folded modulo the SAW (or injection) period.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseHistogram {
    pub period: f64,
    pub bins: Vec<u64>,
    /// `(max − min) / (max + min)` of the bin counts.
    pub visibility: f64,
}

impl PhaseHistogram {
    pub fn bin_width(&self) -> f64 {
        self.period / self.bins.len() as f64
    }

    pub fn bin_starts(&self) -> impl Iterator<Item = f64> + '_ {
        let w = self.bin_width();
        (0..self.bins.len()).map(move |b| b as f64 * w)
    }

    pub fn total(&self) -> u64 {
        self.bins.iter().sum()
    }

    /// Bin counts normalized to unit mass.
    pub fn fractions(&self) -> Vec<f64> {
        let total = self.total() as f64;
        self.bins.iter().map(|&c| c as f64 / total).collect()
    }

    /// Adds the counts of another histogram with the same binning.
    pub fn merge(&mut self, other: &PhaseHistogram) -> Result<()> {
        if self.bins.len() != other.bins.len() || self.period != other.period {
            return Err(Error::SupportMismatch {
                expected: self.bins.len(),
                found: other.bins.len(),
            });
        }
        for (a, b) in self.bins.iter_mut().zip(&other.bins) {
            *a += b;
        }
        self.visibility = visibility(&self.bins);
        Ok(())
    }
}

fn visibility(bins: &[u64]) -> f64 {
    let max = bins.iter().copied().max().unwrap_or(0) as f64;
    let min = bins.iter().copied().min().unwrap_or(0) as f64;
    if max + min == 0.0 {
        0.0
    } else {
        (max - min) / (max + min)
    }
}

/// Folds `times` modulo `period` into `n_bins` equal phase bins.
pub fn phase_correlation<I>(times: I, period: f64, n_bins: usize) -> Result<PhaseHistogram>
where
    I: IntoIterator<Item = f64>,
{
    if !(period.is_finite() && period > 0.0) {
        return Err(Error::invalid("period", format!("must be > 0, got {period}")));
    }
    if n_bins < 2 {
        return Err(Error::invalid("n_bins", "must be >= 2"));
    }
    let mut bins = vec![0u64; n_bins];
    let mut seen = false;
    for t in times {
        seen = true;
        let phase = t.rem_euclid(period) / period;
        let b = ((phase * n_bins as f64) as usize).min(n_bins - 1);
        bins[b] += 1;
    }
    if !seen {
        return Err(Error::Undefined("phase histogram of an empty stream"));
    }
    let visibility = visibility(&bins);
    Ok(PhaseHistogram {
        period,
        bins,
        visibility,
    })
}
