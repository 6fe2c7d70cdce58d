//! Photon-statistics estimators over event streams.
//!
//! All estimators are folds over the input: partial histograms from disjoint
//! pieces of a stream merge exactly.

mod analysis;
mod correlation;
mod counting;
mod distance;
mod phase;

pub use analysis::{analyze, Analysis, AnalysisOptions};
pub use correlation::{g2_histogram, pulse_peak_areas, CorrelationHistogram, PeakAreas};
pub use counting::{
    count_in_windows, fano_factor, mandel_q, mandel_q_from_moments, CountHistogram, CountMoments,
};
pub use distance::{distribution_distance, emitted_by_horizon};
pub use phase::{phase_correlation, PhaseHistogram};
