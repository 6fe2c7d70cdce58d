use super::constants::{elementary_charge, vacuum_permittivity};
use super::params::SawParams;
use crate::{Error, Real, Result};

/// Default ratio of junction field to peak SAW field tolerated in the
/// intrinsic region.
pub const DEFAULT_IREGION_SAFETY: f64 = 0.25;

/// Current on the `N`-th plateau, `I = N·e·f`, in amperes.
pub fn quantized_current<T: Real>(electrons_per_packet: u32, frequency: T) -> T {
    T::from_u32(electrons_per_packet).unwrap() * (elementary_charge::<T>() * frequency)
}

/// Probability that an electron has recombined within `period`: `1 − e^{−γT}`.
pub fn emission_completeness<T: Real>(rate: T, period: T) -> T {
    -(-(rate * period)).exp_m1()
}

/// Highest single-electron injection rate for which the chance that the
/// previous electron has not yet recombined stays at or below `accuracy`:
/// solves `e^{−γ/f} = ε`, giving `f = γ / ln(1/ε)`.
pub fn max_injection_frequency<T: Real>(rate: T, accuracy: T) -> Result<T> {
    const OP: &str = "max_injection_frequency";
    if !(rate.is_finite() && rate > T::zero()) {
        return Err(Error::domain(OP, format!("rate must be finite and > 0, got {rate}")));
    }
    if !(accuracy > T::zero() && accuracy < T::one()) {
        return Err(Error::domain(OP, format!("accuracy must lie in (0, 1), got {accuracy}")));
    }
    Ok(rate / -accuracy.ln())
}

fn check_screening_args<T: Real>(op: &'static str, k: T, dielectric_constant: T) -> Result<()> {
    if !(k.is_finite() && k > T::zero()) {
        return Err(Error::domain(op, format!("wavevector must be > 0, got {k}")));
    }
    if !(dielectric_constant.is_finite() && dielectric_constant >= T::one()) {
        return Err(Error::domain(
            op,
            format!("dielectric constant must be >= 1, got {dielectric_constant}"),
        ));
    }
    Ok(())
}

/// In-plane potential of a sheet charge `ρ·e^{−ikx}` sitting on the
/// interface between the semiconductor and vacuum:
/// `ψ = ρ / (ε₀·k·(ε+1))`. `charge_amplitude` in C/m², result in V.
pub fn screening_potential<T: Real>(charge_amplitude: T, k: T, dielectric_constant: T) -> Result<T> {
    check_screening_args("screening_potential", k, dielectric_constant)?;
    if !(charge_amplitude.is_finite() && charge_amplitude >= T::zero()) {
        return Err(Error::domain(
            "screening_potential",
            format!("charge amplitude must be >= 0, got {charge_amplitude}"),
        ));
    }
    Ok(charge_amplitude / (vacuum_permittivity::<T>() * k * (dielectric_constant + T::one())))
}

/// Sheet charge amplitude (C/m²) that produces `potential` in the plane.
/// Inverse of [`screening_potential`].
pub fn screening_charge<T: Real>(potential: T, k: T, dielectric_constant: T) -> Result<T> {
    check_screening_args("screening_charge", k, dielectric_constant)?;
    if !(potential.is_finite() && potential >= T::zero()) {
        return Err(Error::domain(
            "screening_charge",
            format!("potential must be >= 0, got {potential}"),
        ));
    }
    Ok(vacuum_permittivity::<T>() * k * (dielectric_constant + T::one()) * potential)
}

/// Carrier number density (m⁻²) able to completely screen a SAW of the given
/// amplitude: the screening charge divided by `e`.
pub fn screening_hole_density<T: Real>(saw_amplitude: T, k: T, dielectric_constant: T) -> Result<T> {
    Ok(screening_charge(saw_amplitude, k, dielectric_constant)? / elementary_charge::<T>())
}

/// Shortest intrinsic region over which a linear band drop keeps the
/// junction field below `safety` times the peak SAW field:
/// `L = ΔV / (safety · k · A)`.
pub fn min_iregion_length<T: Real>(band_drop: T, saw: &SawParams<T>, safety: T) -> Result<T> {
    const OP: &str = "min_iregion_length";
    if !(band_drop.is_finite() && band_drop >= T::zero()) {
        return Err(Error::domain(OP, format!("band drop must be >= 0, got {band_drop}")));
    }
    if !(safety > T::zero() && safety <= T::one()) {
        return Err(Error::domain(OP, format!("safety must lie in (0, 1], got {safety}")));
    }
    let field = saw.peak_field();
    if !(field > T::zero()) {
        return Err(Error::domain(OP, "SAW amplitude is zero, no confinement possible"));
    }
    Ok(band_drop / (safety * field))
}
