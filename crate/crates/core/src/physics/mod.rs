//! Device parameters and closed-form formulas. All quantities are SI.

mod constants;
mod device;
pub(crate) mod emission;
pub(crate) mod params;

pub use constants::{
    elementary_charge, vacuum_permittivity, PhysicalConstants, ELEMENTARY_CHARGE,
    VACUUM_PERMITTIVITY,
};
pub use device::{
    emission_completeness, max_injection_frequency, min_iregion_length, quantized_current,
    screening_charge, screening_hole_density, screening_potential, DEFAULT_IREGION_SAFETY,
};
pub use emission::{emitted_count_pmf, field_state_diagonal, NumberStateDistribution};
pub use params::{InjectionSpec, JunctionParams, RecombinationModel, SawParams};
