use crate::{Error, Real, Result};

fn check_args<T: Real>(saw_frequency: T, rate: T, epsilon: T) -> Result<()> {
    const OP: &str = "min_divider";
    if !(saw_frequency.is_finite() && saw_frequency > T::zero()) {
        return Err(Error::domain(OP, format!("SAW frequency must be > 0, got {saw_frequency}")));
    }
    if !(rate.is_finite() && rate > T::zero()) {
        return Err(Error::domain(OP, format!("rate must be > 0, got {rate}")));
    }
    if !(epsilon > T::zero() && epsilon < T::one()) {
        return Err(Error::domain(OP, format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    Ok(())
}

/// True when an electron injected at the start of a window of length
/// `period` has recombined by its end with probability at least `1 − ε`,
/// i.e. `γT ≥ ln(1/ε)`.
pub fn late_emission_ok<T: Real>(rate: T, period: T, epsilon: T) -> bool {
    rate * period >= -epsilon.ln()
}

/// Smallest divider `M` such that packets every `M` SAW cycles satisfy
/// [`late_emission_ok`]: `M = ceil(f·ln(1/ε)/γ)`, at least 1.
///
/// The closed form is corrected by a step either way so that the returned
/// value is minimal under the same floating-point test used by the budget.
pub fn min_divider<T: Real>(saw_frequency: T, rate: T, epsilon: T) -> Result<u32> {
    check_args(saw_frequency, rate, epsilon)?;
    let estimate = (saw_frequency * -epsilon.ln() / rate).ceil();
    let estimate = estimate.to_f64().unwrap_or(f64::INFINITY);
    if estimate >= u32::MAX as f64 {
        return Err(Error::domain(
            "min_divider",
            format!("required divider {estimate} does not fit in 32 bits"),
        ));
    }
    let passes = |m: u32| late_emission_ok(rate, T::from_u32(m).unwrap() / saw_frequency, epsilon);
    let mut m = (estimate as u32).max(1);
    while m > 1 && passes(m - 1) {
        m -= 1;
    }
    while !passes(m) {
        m += 1;
    }
    Ok(m)
}
