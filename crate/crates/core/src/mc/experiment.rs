use rayon::prelude::*;
use serde::Serialize;

use super::generate::{apply_detector_sharded, block_count, emit_sharded, inject_blocks};
use super::models::{DetectorModel, PumpModel};
use super::rng::{shard_ranges, RngSpec};
use super::trace::{DetectionTrace, EmissionTrace, InjectionTrace};
use crate::physics::params::require_non_negative;
use crate::physics::RecombinationModel;
use crate::{Error, Result};

/// Default simulation tail after the last injection, in units of `1/γ`.
pub const DEFAULT_HORIZON_MULTIPLE: f64 = 50.0;

/// Everything needed to simulate a run of the source.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub pump: PumpModel<f64>,
    pub recombination: RecombinationModel<f64>,
    pub detector: DetectorModel,
    pub n_cycles: u64,
    pub horizon_multiple: f64,
}

impl ExperimentConfig {
    pub fn new(
        pump: PumpModel<f64>,
        recombination: RecombinationModel<f64>,
        detector: DetectorModel,
        n_cycles: u64,
    ) -> Result<Self> {
        let config = Self {
            pump,
            recombination,
            detector,
            n_cycles,
            horizon_multiple: DEFAULT_HORIZON_MULTIPLE,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_cycles == 0 {
            return Err(Error::invalid("run.n_cycles", "must be >= 1"));
        }
        require_non_negative("run.horizon_multiple", self.horizon_multiple)?;
        Ok(())
    }

    pub fn injection_period(&self) -> f64 {
        self.pump.spec().injection_period()
    }

    /// End of the injection span, `n_cycles · T`.
    pub fn injection_span(&self) -> f64 {
        self.n_cycles as f64 * self.injection_period()
    }

    /// Simulated duration: the injection span plus `horizon_multiple / γ`.
    pub fn horizon(&self) -> f64 {
        self.injection_span() + self.horizon_multiple / self.recombination.total_rate()
    }

    /// Expected emitted photon rate `N·f/M·β`, ignoring pump errors.
    pub fn nominal_photon_rate(&self) -> f64 {
        let spec = self.pump.spec();
        spec.electrons_per_packet() as f64 * spec.injection_rate() * self.recombination.branching_ratio()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RunCounts {
    pub cycles: u64,
    pub electrons: u64,
    pub photons: u64,
    /// Photons emitted after the horizon and therefore not in the trace.
    pub photons_beyond_horizon: u64,
    pub detections: u64,
    pub dark_detections: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunResult {
    pub injections: InjectionTrace,
    pub emissions: EmissionTrace,
    pub detections: DetectionTrace,
    pub counts: RunCounts,
    pub duration: f64,
}

/// Simulates injection, recombination and detection for `config`.
///
/// Cycles are split into `shards` contiguous groups of keyed blocks that run
/// in parallel; the merged traces are identical for every shard count.
pub fn run_experiment(config: &ExperimentConfig, rng: &RngSpec, shards: usize) -> Result<RunResult> {
    config.validate()?;
    let n = config.n_cycles;
    let parts: Vec<InjectionTrace> = shard_ranges(block_count(n), shards)
        .into_par_iter()
        .map(|blocks| inject_blocks(&config.pump, n, blocks, rng))
        .collect();
    let injections = InjectionTrace::concat(parts, config.injection_period());

    let duration = config.horizon();
    let mut emissions = EmissionTrace::from_sorted(
        emit_sharded(&injections, &config.recombination, rng, shards),
        duration,
    );
    let photons = emissions.len() as u64;
    let photons_beyond_horizon = emissions.truncate_to(duration);

    let detections = apply_detector_sharded(&emissions, &config.detector, duration, rng, shards)?;
    let counts = RunCounts {
        cycles: n,
        electrons: injections.total_electrons(),
        photons: photons - photons_beyond_horizon,
        photons_beyond_horizon,
        detections: detections.len() as u64,
        dark_detections: detections.dark_count() as u64,
    };
    Ok(RunResult {
        injections,
        emissions,
        detections,
        counts,
        duration,
    })
}
