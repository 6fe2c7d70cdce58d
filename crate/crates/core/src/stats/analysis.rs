use serde::Serialize;

use super::{
    count_in_windows, g2_histogram, mandel_q, phase_correlation, pulse_peak_areas, CorrelationHistogram,
    CountHistogram, PeakAreas, PhaseHistogram,
};
use crate::{Error, Result};

/// Binning used when summarizing a detection stream.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnalysisOptions {
    /// Counting window length in injection periods.
    pub window_cycles: u64,
    /// g² bins per injection period; even, so peak edges at `T/2` fall on bin
    /// edges.
    pub bins_per_period: u32,
    /// Number of complete side peaks kept in the g² histogram.
    pub side_peaks: u32,
    pub phase_bins: u32,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            window_cycles: 100,
            bins_per_period: 20,
            side_peaks: 5,
            phase_bins: 20,
        }
    }
}

impl AnalysisOptions {
    pub fn validate(&self) -> Result<()> {
        if self.window_cycles == 0 {
            return Err(Error::invalid("analysis.window_cycles", "must be >= 1"));
        }
        if self.bins_per_period < 4 || self.bins_per_period % 2 != 0 {
            return Err(Error::invalid("analysis.bins_per_period", "must be even and >= 4"));
        }
        if self.side_peaks == 0 {
            return Err(Error::invalid("analysis.side_peaks", "must be >= 1"));
        }
        if self.phase_bins < 2 {
            return Err(Error::invalid("analysis.phase_bins", "must be >= 2"));
        }
        Ok(())
    }
}

/// Photon statistics of one detection stream.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Analysis {
    pub counts: CountHistogram,
    pub mandel_q: Option<f64>,
    pub fano_factor: Option<f64>,
    pub g2: CorrelationHistogram,
    pub peaks: Option<PeakAreas>,
    pub phase: Option<PhaseHistogram>,
}

/// Summarizes sorted detection `times` from `n_cycles` injections at period
/// `period`. Counting windows cover the injection span only, so every window
/// is a whole number of cycles.
pub fn analyze(times: &[f64], period: f64, n_cycles: u64, options: &AnalysisOptions) -> Result<Analysis> {
    options.validate()?;
    let window_cycles = options.window_cycles.min(n_cycles.max(1));
    let counts = count_in_windows(
        times.iter().copied(),
        n_cycles as f64 * period,
        window_cycles as f64 * period,
    )?;
    let mandel_q = mandel_q(&counts).ok();
    let bin_width = period / options.bins_per_period as f64;
    let max_delay = (options.side_peaks as f64 + 0.5) * period;
    let g2 = g2_histogram(times, bin_width, max_delay)?;
    Ok(Analysis {
        fano_factor: mandel_q.map(|q| q + 1.0),
        mandel_q,
        peaks: pulse_peak_areas(&g2, period).ok(),
        phase: phase_correlation(times.iter().copied(), period, options.phase_bins as usize).ok(),
        counts,
        g2,
    })
}
