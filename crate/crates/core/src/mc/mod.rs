//! Monte Carlo generation of injection, emission and detection streams.

mod experiment;
mod generate;
mod models;
mod occupancy;
mod reference;
mod rng;
mod trace;

pub use experiment::{run_experiment, ExperimentConfig, RunCounts, RunResult, DEFAULT_HORIZON_MULTIPLE};
pub use generate::{apply_detector, apply_detector_sharded, generate_emissions, generate_injections};
pub use models::{DetectorModel, PumpModel, DEFAULT_PLATEAU_ACCURACY};
pub use occupancy::{window_photon_counts, WindowOccupancy, DEFAULT_WARMUP_WINDOWS};
pub use reference::{coherent_pulse_train, poisson_process};
pub use rng::{RngSpec, CYCLES_PER_BLOCK};
pub use trace::{Detection, DetectionTrace, Emission, EmissionTrace, InjectionTrace};
