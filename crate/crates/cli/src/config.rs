//! JSON run configuration. All quantities are SI.

use std::path::Path;

use serde::{Deserialize, Serialize};

use sawphoton::design::{AccuracyTarget, DEFAULT_EPSILON};
use sawphoton::mc::{DetectorModel, ExperimentConfig, PumpModel, DEFAULT_HORIZON_MULTIPLE};
use sawphoton::physics::{
    InjectionSpec, JunctionParams, RecombinationModel, SawParams, DEFAULT_IREGION_SAFETY,
};
use sawphoton::stats::AnalysisOptions;

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SawConfig {
    /// Hz.
    pub frequency: f64,
    /// m/s. The default gives a 1 µm wavelength at 3 GHz.
    #[serde(default = "default_sound_velocity")]
    pub sound_velocity: f64,
    /// V.
    pub amplitude: f64,
}

fn default_sound_velocity() -> f64 {
    3000.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct JunctionConfig {
    /// V.
    pub band_drop: f64,
    pub dielectric_constant: f64,
    /// m⁻².
    pub hole_density: f64,
    /// m.
    pub iregion_length: f64,
}

impl Default for JunctionConfig {
    fn default() -> Self {
        Self {
            band_drop: 1.5,
            dielectric_constant: 12.0,
            hole_density: 1e16,
            iregion_length: 5e-5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PumpConfig {
    pub electrons_per_packet: u32,
    #[serde(default = "one")]
    pub divider: u32,
    #[serde(default = "default_pump_error")]
    pub p_miss: f64,
    #[serde(default = "default_pump_error")]
    pub p_extra: f64,
    /// s, standard deviation.
    #[serde(default)]
    pub cycle_jitter: f64,
}

fn one() -> u32 {
    1
}

fn default_pump_error() -> f64 {
    sawphoton::mc::DEFAULT_PLATEAU_ACCURACY / 2.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecombinationConfig {
    /// s⁻¹.
    pub radiative_rate: f64,
    /// s⁻¹.
    #[serde(default)]
    pub nonradiative_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DetectorConfig {
    pub efficiency: f64,
    /// counts/s.
    pub dark_rate: f64,
    /// s.
    pub dead_time: f64,
    /// s, standard deviation.
    pub jitter: f64,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self {
            efficiency: 1.0,
            dark_rate: 0.0,
            dead_time: 0.0,
            jitter: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSettings {
    pub n_cycles: u64,
    pub seed: u64,
    #[serde(default = "one_usize")]
    pub shards: usize,
    #[serde(default = "default_horizon_multiple")]
    pub horizon_multiple: f64,
}

fn one_usize() -> usize {
    1
}

fn default_horizon_multiple() -> f64 {
    DEFAULT_HORIZON_MULTIPLE
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnalysisConfig {
    pub window_cycles: u64,
    pub bins_per_period: u32,
    pub side_peaks: u32,
    pub phase_bins: u32,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        let d = AnalysisOptions::default();
        Self {
            window_cycles: d.window_cycles,
            bins_per_period: d.bins_per_period,
            side_peaks: d.side_peaks,
            phase_bins: d.phase_bins,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DesignConfig {
    pub epsilon: f64,
    pub iregion_safety: f64,
}

impl Default for DesignConfig {
    fn default() -> Self {
        Self {
            epsilon: DEFAULT_EPSILON,
            iregion_safety: DEFAULT_IREGION_SAFETY,
        }
    }
}

/// Complete description of a run, as read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub saw: SawConfig,
    #[serde(default)]
    pub junction: JunctionConfig,
    pub pump: PumpConfig,
    pub recombination: RecombinationConfig,
    #[serde(default)]
    pub detector: DetectorConfig,
    pub run: RunSettings,
    #[serde(default)]
    pub analysis: AnalysisConfig,
    #[serde(default)]
    pub design: DesignConfig,
}

/// Validated models built from a [`RunConfig`].
#[derive(Debug, Clone, Copy)]
pub struct Models {
    pub saw: SawParams<f64>,
    pub junction: JunctionParams<f64>,
    pub pump: PumpModel<f64>,
    pub recombination: RecombinationModel<f64>,
    pub detector: DetectorModel,
    pub experiment: ExperimentConfig,
    pub analysis: AnalysisOptions,
    pub target: AccuracyTarget<f64>,
    pub iregion_safety: f64,
    pub seed: u64,
    pub shards: usize,
}

fn config_error(e: sawphoton::Error) -> CliError {
    CliError::Config(e.to_string())
}

impl RunConfig {
    /// Builds and validates every model. Errors name the offending key.
    pub fn models(&self) -> Result<Models, CliError> {
        let saw = SawParams::new(self.saw.frequency, self.saw.sound_velocity, self.saw.amplitude)
            .map_err(config_error)?;
        let j = &self.junction;
        let junction = JunctionParams::new(j.band_drop, j.dielectric_constant, j.hole_density, j.iregion_length)
            .map_err(config_error)?;
        let p = &self.pump;
        let spec = InjectionSpec::new(p.electrons_per_packet, p.divider, self.saw.frequency).map_err(config_error)?;
        let pump = PumpModel::new(spec, p.p_miss, p.p_extra, p.cycle_jitter).map_err(config_error)?;
        let recombination =
            RecombinationModel::new(self.recombination.radiative_rate, self.recombination.nonradiative_rate)
                .map_err(config_error)?;
        let d = &self.detector;
        let detector = DetectorModel::new(d.efficiency, d.dark_rate, d.dead_time, d.jitter).map_err(config_error)?;
        let mut experiment =
            ExperimentConfig::new(pump, recombination, detector, self.run.n_cycles).map_err(config_error)?;
        experiment.horizon_multiple = self.run.horizon_multiple;
        experiment.validate().map_err(config_error)?;
        if self.run.shards == 0 {
            return Err(CliError::Config("invalid run.shards: must be >= 1".into()));
        }
        let a = &self.analysis;
        let analysis = AnalysisOptions {
            window_cycles: a.window_cycles,
            bins_per_period: a.bins_per_period,
            side_peaks: a.side_peaks,
            phase_bins: a.phase_bins,
        };
        analysis.validate().map_err(config_error)?;
        let target = AccuracyTarget::new(self.design.epsilon).map_err(config_error)?;
        let safety = self.design.iregion_safety;
        if !(safety > 0.0 && safety <= 1.0) {
            return Err(CliError::Config(format!(
                "invalid design.iregion_safety: must lie in (0, 1], got {safety}"
            )));
        }
        Ok(Models {
            saw,
            junction,
            pump,
            recombination,
            detector,
            experiment,
            analysis,
            target,
            iregion_safety: safety,
            seed: self.run.seed,
            shards: self.run.shards,
        })
    }
}

/// Parses and validates a JSON configuration.
pub fn parse_config(text: &str) -> Result<(RunConfig, Models), CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let config: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        CliError::Config(format!("at {path}: {}", e.inner()))
    })?;
    let models = config.models()?;
    Ok((config, models))
}

pub fn load_config(path: &Path) -> Result<(RunConfig, Models), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "saw": {"frequency": 3e9, "amplitude": 0.03},
        "pump": {"electrons_per_packet": 1, "divider": 1},
        "recombination": {"radiative_rate": 1e10},
        "run": {"n_cycles": 1000, "seed": 7}
    }"#;

    #[test]
    fn minimal_config_gets_defaults() {
        let (c, m) = parse_config(MINIMAL).unwrap();
        assert_eq!(c.detector, DetectorConfig::default());
        assert_eq!(c.pump.p_miss, 5e-5);
        assert_eq!(c.pump.cycle_jitter, 0.0);
        assert_eq!(m.shards, 1);
        assert!((m.saw.wavelength() - 1e-6).abs() < 1e-18);
    }

    #[test]
    fn errors_name_the_path() {
        let bad = MINIMAL.replace(r#""divider": 1"#, r#""divider": 1, "p_miss": -0.1"#);
        let err = parse_config(&bad).unwrap_err().to_string();
        assert!(err.contains("pump.p_miss"), "{err}");
        let unknown = MINIMAL.replace(r#""seed": 7"#, r#""seed": 7, "colour": 1"#);
        let err = parse_config(&unknown).unwrap_err().to_string();
        assert!(err.contains("run") && err.contains("colour"), "{err}");
        let typed = MINIMAL.replace(r#""amplitude": 0.03"#, r#""amplitude": "big""#);
        let err = parse_config(&typed).unwrap_err().to_string();
        assert!(err.contains("saw.amplitude"), "{err}");
        let empty = MINIMAL.replace(r#""n_cycles": 1000"#, r#""n_cycles": 0"#);
        assert!(parse_config(&empty).unwrap_err().to_string().contains("run.n_cycles"));
    }

    #[test]
    fn round_trip() {
        let (c, _) = parse_config(MINIMAL).unwrap();
        let text = serde_json::to_string(&c).unwrap();
        let (again, _) = parse_config(&text).unwrap();
        assert_eq!(c, again);
    }
}
