use serde::Serialize;

use crate::{Error, Real, Result};

pub(crate) fn require_positive<T: Real>(name: &'static str, x: T) -> Result<T> {
    if x.is_finite() && x > T::zero() {
        Ok(x)
    } else {
        Err(Error::invalid(name, format!("must be finite and > 0, got {x}")))
    }
}

pub(crate) fn require_non_negative<T: Real>(name: &'static str, x: T) -> Result<T> {
    if x.is_finite() && x >= T::zero() {
        Ok(x)
    } else {
        Err(Error::invalid(name, format!("must be finite and >= 0, got {x}")))
    }
}

pub(crate) fn require_probability<T: Real>(name: &'static str, x: T) -> Result<T> {
    if x >= T::zero() && x <= T::one() {
        Ok(x)
    } else {
        Err(Error::invalid(name, format!("must lie in [0, 1], got {x}")))
    }
}

/// Surface acoustic wave drive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SawParams<T> {
    frequency: T,
    sound_velocity: T,
    amplitude: T,
}

impl<T: Real> SawParams<T> {
    /// `frequency` in Hz, `sound_velocity` in m/s, `amplitude` (peak SAW
    /// potential) in V.
    pub fn new(frequency: T, sound_velocity: T, amplitude: T) -> Result<Self> {
        Ok(Self {
            frequency: require_positive("saw.frequency", frequency)?,
            sound_velocity: require_positive("saw.sound_velocity", sound_velocity)?,
            amplitude: require_positive("saw.amplitude", amplitude)?,
        })
    }

    pub fn frequency(&self) -> T {
        self.frequency
    }

    pub fn sound_velocity(&self) -> T {
        self.sound_velocity
    }

    pub fn amplitude(&self) -> T {
        self.amplitude
    }

    pub fn wavelength(&self) -> T {
        self.sound_velocity / self.frequency
    }

    pub fn wavevector(&self) -> T {
        T::TAU() / self.wavelength()
    }

    /// Peak longitudinal electric field of the SAW potential, `k·A`, in V/m.
    pub fn peak_field(&self) -> T {
        self.wavevector() * self.amplitude
    }
}

/// Lateral n-i-p junction the electron packets are driven through.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JunctionParams<T> {
    band_drop: T,
    dielectric_constant: T,
    hole_density: T,
    iregion_length: T,
}

impl<T: Real> JunctionParams<T> {
    /// `band_drop` in V, `hole_density` in m⁻², `iregion_length` in m.
    pub fn new(band_drop: T, dielectric_constant: T, hole_density: T, iregion_length: T) -> Result<Self> {
        if !(dielectric_constant.is_finite() && dielectric_constant >= T::one()) {
            return Err(Error::invalid(
                "junction.dielectric_constant",
                format!("must be finite and >= 1, got {dielectric_constant}"),
            ));
        }
        Ok(Self {
            band_drop: require_positive("junction.band_drop", band_drop)?,
            dielectric_constant,
            hole_density: require_positive("junction.hole_density", hole_density)?,
            iregion_length: require_positive("junction.iregion_length", iregion_length)?,
        })
    }

    pub fn band_drop(&self) -> T {
        self.band_drop
    }

    pub fn dielectric_constant(&self) -> T {
        self.dielectric_constant
    }

    pub fn hole_density(&self) -> T {
        self.hole_density
    }

    pub fn iregion_length(&self) -> T {
        self.iregion_length
    }

    /// Ratio of the hole density to the density needed to fully screen the
    /// SAW. Values ≫ 1 justify neglecting the SAW potential in the p-region.
    pub fn screening_margin(&self, saw: &SawParams<T>) -> Result<T> {
        let needed =
            super::screening_hole_density(saw.amplitude(), saw.wavevector(), self.dielectric_constant)?;
        Ok(self.hole_density / needed)
    }

    /// Whether the intrinsic region is long enough for the SAW to keep the
    /// electrons confined across the junction at the given safety factor.
    pub fn is_adiabatic(&self, saw: &SawParams<T>, safety: T) -> Result<bool> {
        Ok(self.iregion_length >= super::min_iregion_length(self.band_drop, saw, safety)?)
    }
}

/// Quantized injection: `N` electrons per packet, one packet every `M` SAW
/// cycles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InjectionSpec<T> {
    electrons_per_packet: u32,
    divider: u32,
    saw_frequency: T,
    injection_period: T,
}

impl<T: Real> InjectionSpec<T> {
    pub fn new(electrons_per_packet: u32, divider: u32, saw_frequency: T) -> Result<Self> {
        if electrons_per_packet == 0 {
            return Err(Error::invalid("pump.electrons_per_packet", "must be >= 1"));
        }
        if divider == 0 {
            return Err(Error::invalid("pump.divider", "must be >= 1"));
        }
        let saw_frequency = require_positive("saw.frequency", saw_frequency)?;
        Ok(Self {
            electrons_per_packet,
            divider,
            saw_frequency,
            injection_period: T::from_u32(divider).unwrap() / saw_frequency,
        })
    }

    pub fn electrons_per_packet(&self) -> u32 {
        self.electrons_per_packet
    }

    pub fn divider(&self) -> u32 {
        self.divider
    }

    pub fn saw_frequency(&self) -> T {
        self.saw_frequency
    }

    /// `T = M / f`.
    pub fn injection_period(&self) -> T {
        self.injection_period
    }

    /// Packet rate `f / M`.
    pub fn injection_rate(&self) -> T {
        self.saw_frequency / T::from_u32(self.divider).unwrap()
    }

    /// Average current delivered to the p-region, `N·e·f/M`.
    pub fn mean_current(&self) -> T {
        super::quantized_current(self.electrons_per_packet, self.injection_rate())
    }
}

/// Radiative and non-radiative recombination rates of an injected electron.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RecombinationModel<T> {
    radiative_rate: T,
    nonradiative_rate: T,
}

impl<T: Real> RecombinationModel<T> {
    pub fn new(radiative_rate: T, nonradiative_rate: T) -> Result<Self> {
        Ok(Self {
            radiative_rate: require_positive("recombination.radiative_rate", radiative_rate)?,
            nonradiative_rate: require_non_negative(
                "recombination.nonradiative_rate",
                nonradiative_rate,
            )?,
        })
    }

    /// Purely radiative recombination.
    pub fn radiative(rate: T) -> Result<Self> {
        Self::new(rate, T::zero())
    }

    pub fn radiative_rate(&self) -> T {
        self.radiative_rate
    }

    pub fn nonradiative_rate(&self) -> T {
        self.nonradiative_rate
    }

    /// `γ = γ_r + γ_nr`.
    pub fn total_rate(&self) -> T {
        self.radiative_rate + self.nonradiative_rate
    }

    /// Fraction of recombinations that emit a photon, `γ_r / γ`.
    pub fn branching_ratio(&self) -> T {
        self.radiative_rate / self.total_rate()
    }
}
