//! Simulation and design toolkit for a single-photon source driven by a
//! surface-acoustic-wave (SAW) electron pump.
//!
//! The crate is split into four layers:
//!
//! * [`physics`]: device parameters and the closed-form formulas (photon-number
//!   distribution after injection, quantized current, screening, junction length,
//!   maximum injection rate). Generic over the scalar type.
//! * [`mc`]: seeded, shard-independent Monte Carlo generation of injection,
//!   emission and detection event streams.
//! * [`stats`]: photon-statistics estimators (counting histograms, Mandel Q,
//!   multi-stop g² histograms, pulsed peak areas, SAW-phase histograms).
//! * [`design`]: accuracy budgets, minimum rate divider and parameter sweeps.
//!
//! Formulas are written once against [`Real`]; the aliases below fix the
//! scalar to `f64` for the common case.

pub mod design;
pub mod error;
pub mod mc;
pub mod physics;
pub mod real;
pub mod stats;

pub use error::{Error, Result};
pub use real::Real;

pub type SawParamsF64 = physics::SawParams<f64>;
pub type SawParamsF32 = physics::SawParams<f32>;
pub type JunctionParamsF64 = physics::JunctionParams<f64>;
pub type JunctionParamsF32 = physics::JunctionParams<f32>;
pub type InjectionSpecF64 = physics::InjectionSpec<f64>;
pub type InjectionSpecF32 = physics::InjectionSpec<f32>;
pub type RecombinationModelF64 = physics::RecombinationModel<f64>;
pub type RecombinationModelF32 = physics::RecombinationModel<f32>;
pub type NumberStateDistributionF64 = physics::NumberStateDistribution<f64>;
pub type NumberStateDistributionF32 = physics::NumberStateDistribution<f32>;
pub type PumpModelF64 = mc::PumpModel<f64>;
pub type AccuracyTargetF64 = design::AccuracyTarget<f64>;
pub type BudgetReportF64 = design::BudgetReport<f64>;
