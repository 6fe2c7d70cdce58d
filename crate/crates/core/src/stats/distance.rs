use crate::mc::{EmissionTrace, InjectionTrace};
use crate::physics::NumberStateDistribution;
use crate::{Error, Result};

/// Total-variation distance `½·Σ|p̂_m − p_m|` between an empirical count
/// histogram (`empirical[m]` = trials with outcome `m`) and an analytic
/// distribution on the same support.
pub fn distribution_distance(empirical: &[u64], analytic: &NumberStateDistribution<f64>) -> Result<f64> {
    let p = analytic.probabilities();
    if empirical.len() != p.len() {
        return Err(Error::SupportMismatch {
            expected: p.len(),
            found: empirical.len(),
        });
    }
    let total: u64 = empirical.iter().sum();
    if total == 0 {
        return Err(Error::Undefined("empirical distribution of zero trials"));
    }
    let total = total as f64;
    Ok(0.5
        * empirical
            .iter()
            .zip(p)
            .map(|(&c, &q)| (c as f64 / total - q).abs())
            .sum::<f64>())
}

/// Histogram over cycles of how many photons each cycle's electrons had
/// emitted within `horizon` of injection. `histogram[m]` counts cycles with
/// `m` photons; the support is `0..=max_photons`, larger counts are clamped
/// into the last slot.
pub fn emitted_by_horizon(
    em: &EmissionTrace,
    inj: &InjectionTrace,
    horizon: f64,
    max_photons: usize,
) -> Vec<u64> {
    let mut per_cycle = vec![0usize; inj.len()];
    let first = inj.first_cycle();
    for e in em.events() {
        if let Some(t0) = inj.cycle_time(e.cycle) {
            if e.time - t0 <= horizon {
                per_cycle[(e.cycle - first) as usize] += 1;
            }
        }
    }
    let mut histogram = vec![0u64; max_photons + 1];
    for c in per_cycle {
        histogram[c.min(max_photons)] += 1;
    }
    histogram
}
