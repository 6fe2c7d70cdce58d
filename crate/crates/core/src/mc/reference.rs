//! Classical light used as a benchmark for the antibunching estimators.

use rand::Rng;
use rand_distr::{Distribution, Exp, Poisson};

use super::rng::{Purpose, RngSpec, CYCLES_PER_BLOCK};
use super::trace::{Emission, EmissionTrace};
use crate::physics::params::{require_non_negative, require_positive};
use crate::Result;

/// Attenuated laser pulses: each of `n_pulses` pulses at `k·period` carries a
/// Poisson number of photons with mean `mean_photons`, each delayed by an
/// exponential time at `rate` (same pulse shape as the electron source).
pub fn coherent_pulse_train(
    mean_photons: f64,
    period: f64,
    rate: f64,
    n_pulses: u64,
    rng: &RngSpec,
) -> Result<EmissionTrace> {
    let mean = require_positive("mean_photons", mean_photons)?;
    let period = require_positive("period", period)?;
    let delay = Exp::new(require_positive("rate", rate)?).expect("validated rate");
    let counts = Poisson::new(mean).expect("validated mean");
    let mut events = Vec::new();
    let n_blocks = n_pulses.div_ceil(CYCLES_PER_BLOCK);
    for block in 0..n_blocks {
        let mut r = rng.block_rng(Purpose::Reference, block);
        let end = ((block + 1) * CYCLES_PER_BLOCK).min(n_pulses);
        for cycle in block * CYCLES_PER_BLOCK..end {
            let t0 = cycle as f64 * period;
            let k = counts.sample(&mut r) as u64;
            for _ in 0..k {
                events.push(Emission {
                    time: t0 + delay.sample(&mut r),
                    cycle,
                });
            }
        }
    }
    Ok(EmissionTrace::from_events(events, n_pulses as f64 * period))
}

/// Sorted arrival times of a homogeneous Poisson process on `[0, duration)`.
pub fn poisson_process(rate: f64, duration: f64, rng: &RngSpec) -> Result<Vec<f64>> {
    let rate = require_non_negative("rate", rate)?;
    let duration = require_non_negative("duration", duration)?;
    if rate == 0.0 || duration == 0.0 {
        return Ok(Vec::new());
    }
    let mut r = rng.block_rng(Purpose::Reference, u64::MAX);
    let n = Poisson::new(rate * duration).expect("positive mean").sample(&mut r) as usize;
    let mut times: Vec<f64> = (0..n).map(|_| duration * r.random::<f64>()).collect();
    times.sort_unstable_by(f64::total_cmp);
    Ok(times)
}
