use crate::Real;

/// Elementary charge in coulombs (exact in the 2019 SI).
pub const ELEMENTARY_CHARGE: f64 = 1.602176634e-19;

/// Vacuum permittivity in farads per meter (CODATA 2018).
pub const VACUUM_PERMITTIVITY: f64 = 8.8541878128e-12;

pub fn elementary_charge<T: Real>() -> T {
    T::lit(ELEMENTARY_CHARGE)
}

pub fn vacuum_permittivity<T: Real>() -> T {
    T::lit(VACUUM_PERMITTIVITY)
}

/// The fixed constants used by every formula in this crate.
///
/// There is deliberately no constructor taking values: the constants are not
/// configurable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants<T> {
    pub elementary_charge: T,
    pub vacuum_permittivity: T,
}

impl<T: Real> PhysicalConstants<T> {
    pub fn codata() -> Self {
        Self {
            elementary_charge: elementary_charge(),
            vacuum_permittivity: vacuum_permittivity(),
        }
    }
}
