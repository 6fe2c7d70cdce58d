//! Choosing operating points: how often to inject, and how often a window
//! will hold the wrong number of photons.

mod budget;
mod divider;
mod sweep;

pub use budget::{accuracy_budget, AccuracyTarget, BudgetContributions, BudgetReport, DEFAULT_EPSILON};
pub use divider::{late_emission_ok, min_divider};
pub use sweep::{
    sweep, McCheck, McMetrics, SweepBase, SweepGrid, SweepPoint, SweepRow, DEFAULT_SWEEP_CAP, SWEEP_PARAMETERS,
};
