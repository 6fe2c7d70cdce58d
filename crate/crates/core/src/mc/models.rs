use serde::Serialize;

use crate::physics::params::{require_non_negative, require_probability};
use crate::physics::InjectionSpec;
use crate::{Error, Real, Result};

/// Relative plateau accuracy of a SAW pump, used to set default error
/// probabilities.
pub const DEFAULT_PLATEAU_ACCURACY: f64 = 1e-4;

/// Quantized pump with i.i.d. per-packet errors: a packet carries `N − 1`
/// electrons with probability `p_miss`, `N + 1` with `p_extra`, `N` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PumpModel<T> {
    spec: InjectionSpec<T>,
    p_miss: T,
    p_extra: T,
    cycle_jitter: T,
}

impl<T: Real> PumpModel<T> {
    pub fn new(spec: InjectionSpec<T>, p_miss: T, p_extra: T, cycle_jitter: T) -> Result<Self> {
        let p_miss = require_probability("pump.p_miss", p_miss)?;
        let p_extra = require_probability("pump.p_extra", p_extra)?;
        if p_miss + p_extra > T::one() {
            return Err(Error::invalid(
                "pump.p_extra",
                format!("p_miss + p_extra must not exceed 1, got {}", p_miss + p_extra),
            ));
        }
        Ok(Self {
            spec,
            p_miss,
            p_extra,
            cycle_jitter: require_non_negative("pump.cycle_jitter", cycle_jitter)?,
        })
    }

    /// Error-free pump with a perfect clock.
    pub fn ideal(spec: InjectionSpec<T>) -> Self {
        Self {
            spec,
            p_miss: T::zero(),
            p_extra: T::zero(),
            cycle_jitter: T::zero(),
        }
    }

    /// Pump whose total error probability equals `accuracy`, split evenly
    /// between missing and extra electrons.
    pub fn with_plateau_accuracy(spec: InjectionSpec<T>, accuracy: T) -> Result<Self> {
        let half = accuracy / T::lit(2.0);
        Self::new(spec, half, half, T::zero())
    }

    pub fn spec(&self) -> &InjectionSpec<T> {
        &self.spec
    }

    pub fn p_miss(&self) -> T {
        self.p_miss
    }

    pub fn p_extra(&self) -> T {
        self.p_extra
    }

    pub fn cycle_jitter(&self) -> T {
        self.cycle_jitter
    }

    /// Probability that a packet carries exactly `N` electrons.
    pub fn p_nominal(&self) -> T {
        T::one() - self.p_miss - self.p_extra
    }

    /// `(electron count, probability)` for the three packet outcomes, with
    /// zero-probability outcomes dropped.
    pub fn packet_outcomes(&self) -> Vec<(u32, T)> {
        let n = self.spec.electrons_per_packet();
        [(n - 1, self.p_miss), (n, self.p_nominal()), (n + 1, self.p_extra)]
            .into_iter()
            .filter(|&(_, p)| p > T::zero())
            .collect()
    }
}

/// Photon counter in front of the source.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DetectorModel {
    efficiency: f64,
    dark_rate: f64,
    dead_time: f64,
    jitter: f64,
}

impl DetectorModel {
    /// `efficiency` in [0, 1]; `dark_rate` in counts/s; `dead_time` and
    /// Gaussian timing `jitter` (standard deviation) in seconds.
    pub fn new(efficiency: f64, dark_rate: f64, dead_time: f64, jitter: f64) -> Result<Self> {
        Ok(Self {
            efficiency: require_probability("detector.efficiency", efficiency)?,
            dark_rate: require_non_negative("detector.dark_rate", dark_rate)?,
            dead_time: require_non_negative("detector.dead_time", dead_time)?,
            jitter: require_non_negative("detector.jitter", jitter)?,
        })
    }

    /// Unit efficiency, no dark counts, no dead time, no jitter.
    pub fn ideal() -> Self {
        Self {
            efficiency: 1.0,
            dark_rate: 0.0,
            dead_time: 0.0,
            jitter: 0.0,
        }
    }

    pub fn with_efficiency(efficiency: f64) -> Result<Self> {
        Self::new(efficiency, 0.0, 0.0, 0.0)
    }

    pub fn efficiency(&self) -> f64 {
        self.efficiency
    }

    pub fn dark_rate(&self) -> f64 {
        self.dark_rate
    }

    pub fn dead_time(&self) -> f64 {
        self.dead_time
    }

    pub fn jitter(&self) -> f64 {
        self.jitter
    }
}

impl Default for DetectorModel {
    fn default() -> Self {
        Self::ideal()
    }
}
