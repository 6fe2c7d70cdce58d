use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::budget::{accuracy_budget, AccuracyTarget};
use super::divider::min_divider;
use crate::mc::{run_experiment, DetectorModel, ExperimentConfig, PumpModel, RngSpec};
use crate::physics::{InjectionSpec, RecombinationModel};
use crate::stats::{analyze, AnalysisOptions};
use crate::{Error, Result};

/// Default limit on the number of grid points in one sweep.
pub const DEFAULT_SWEEP_CAP: u64 = 100_000;

/// Values to sweep for each parameter. A missing axis keeps the base value.
/// Points are enumerated lexicographically in field order, last field
/// fastest.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepGrid {
    pub saw_frequency: Option<Vec<f64>>,
    pub radiative_rate: Option<Vec<f64>>,
    pub nonradiative_rate: Option<Vec<f64>>,
    pub divider: Option<Vec<u32>>,
    pub electrons_per_packet: Option<Vec<u32>>,
    pub p_miss: Option<Vec<f64>>,
    pub p_extra: Option<Vec<f64>>,
    pub efficiency: Option<Vec<f64>>,
}

/// Column names of a sweep point, in grid order.
pub const SWEEP_PARAMETERS: [&str; 8] = [
    "saw_frequency",
    "radiative_rate",
    "nonradiative_rate",
    "divider",
    "electrons_per_packet",
    "p_miss",
    "p_extra",
    "efficiency",
];

fn axis_len<V>(axis: &Option<Vec<V>>) -> Result<u128> {
    match axis {
        None => Ok(1),
        Some(v) if v.is_empty() => Err(Error::EmptyGrid),
        Some(v) => Ok(v.len() as u128),
    }
}

impl SweepGrid {
    fn lens(&self) -> Result<[u128; 8]> {
        Ok([
            axis_len(&self.saw_frequency)?,
            axis_len(&self.radiative_rate)?,
            axis_len(&self.nonradiative_rate)?,
            axis_len(&self.divider)?,
            axis_len(&self.electrons_per_packet)?,
            axis_len(&self.p_miss)?,
            axis_len(&self.p_extra)?,
            axis_len(&self.efficiency)?,
        ])
    }

    /// Number of grid points; an axis given with no values is an error.
    pub fn point_count(&self) -> Result<u128> {
        Ok(self.lens()?.iter().product())
    }

    fn point(&self, base: &SweepPoint, mut index: u128, lens: &[u128; 8]) -> SweepPoint {
        let mut digits = [0usize; 8];
        for axis in (0..8).rev() {
            digits[axis] = (index % lens[axis]) as usize;
            index /= lens[axis];
        }
        fn pick<V: Copy>(axis: &Option<Vec<V>>, digit: usize, default: V) -> V {
            axis.as_ref().map_or(default, |v| v[digit])
        }
        SweepPoint {
            saw_frequency: pick(&self.saw_frequency, digits[0], base.saw_frequency),
            radiative_rate: pick(&self.radiative_rate, digits[1], base.radiative_rate),
            nonradiative_rate: pick(&self.nonradiative_rate, digits[2], base.nonradiative_rate),
            divider: pick(&self.divider, digits[3], base.divider),
            electrons_per_packet: pick(&self.electrons_per_packet, digits[4], base.electrons_per_packet),
            p_miss: pick(&self.p_miss, digits[5], base.p_miss),
            p_extra: pick(&self.p_extra, digits[6], base.p_extra),
            efficiency: pick(&self.efficiency, digits[7], base.efficiency),
        }
    }
}

/// Parameter values at one grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub saw_frequency: f64,
    pub radiative_rate: f64,
    pub nonradiative_rate: f64,
    pub divider: u32,
    pub electrons_per_packet: u32,
    pub p_miss: f64,
    pub p_extra: f64,
    pub efficiency: f64,
}

impl SweepPoint {
    /// Values in [`SWEEP_PARAMETERS`] order.
    pub fn values(&self) -> [f64; 8] {
        [
            self.saw_frequency,
            self.radiative_rate,
            self.nonradiative_rate,
            self.divider as f64,
            self.electrons_per_packet as f64,
            self.p_miss,
            self.p_extra,
            self.efficiency,
        ]
    }
}

/// Fixed part of a sweep: the models every grid point starts from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepBase {
    pub pump: PumpModel<f64>,
    pub recombination: RecombinationModel<f64>,
    pub detector: DetectorModel,
    pub target: AccuracyTarget<f64>,
}

impl SweepBase {
    fn point(&self) -> SweepPoint {
        let spec = self.pump.spec();
        SweepPoint {
            saw_frequency: spec.saw_frequency(),
            radiative_rate: self.recombination.radiative_rate(),
            nonradiative_rate: self.recombination.nonradiative_rate(),
            divider: spec.divider(),
            electrons_per_packet: spec.electrons_per_packet(),
            p_miss: self.pump.p_miss(),
            p_extra: self.pump.p_extra(),
            efficiency: self.detector.efficiency(),
        }
    }

    fn models(&self, p: &SweepPoint) -> Result<(PumpModel<f64>, RecombinationModel<f64>, DetectorModel)> {
        let spec = InjectionSpec::new(p.electrons_per_packet, p.divider, p.saw_frequency)?;
        let pump = PumpModel::new(spec, p.p_miss, p.p_extra, self.pump.cycle_jitter())?;
        let recomb = RecombinationModel::new(p.radiative_rate, p.nonradiative_rate)?;
        let d = &self.detector;
        let detector = DetectorModel::new(p.efficiency, d.dark_rate(), d.dead_time(), d.jitter())?;
        Ok((pump, recomb, detector))
    }
}

/// Monte Carlo cross-check run at every grid point. Point `i` uses stream
/// `i` of `seed`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McCheck {
    pub n_cycles: u64,
    pub seed: u64,
    pub shards: usize,
    pub analysis: AnalysisOptions,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McMetrics {
    pub mandel_q: Option<f64>,
    pub g2_ratio: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub point: SweepPoint,
    pub p_zero_photon: f64,
    pub p_multi_photon: f64,
    pub zero_photon_pass: bool,
    pub multi_photon_pass: bool,
    pub late_emission_pass: bool,
    pub min_divider: u32,
    /// Detected photon rate `N·f/M·β·η`, in photons/s.
    pub predicted_rate: f64,
    pub mc: Option<McMetrics>,
}

fn evaluate(
    base: &SweepBase,
    point: SweepPoint,
    models: (PumpModel<f64>, RecombinationModel<f64>, DetectorModel),
    index: u64,
    mc: Option<&McCheck>,
) -> Result<SweepRow> {
    let (pump, recomb, detector) = models;
    let budget = accuracy_budget(&pump, &recomb, &base.target)?;
    let spec = pump.spec();
    let mc = match mc {
        None => None,
        Some(check) => {
            let config = ExperimentConfig::new(pump, recomb, detector, check.n_cycles)?;
            let run = run_experiment(&config, &RngSpec::new(check.seed, index), check.shards)?;
            let times: Vec<f64> = run.detections.times().collect();
            let a = analyze(&times, spec.injection_period(), check.n_cycles, &check.analysis)?;
            Some(McMetrics {
                mandel_q: a.mandel_q,
                g2_ratio: a.peaks.map(|p| p.ratio),
            })
        }
    };
    Ok(SweepRow {
        point,
        p_zero_photon: budget.p_zero_photon,
        p_multi_photon: budget.p_multi_photon,
        zero_photon_pass: budget.zero_photon_pass,
        multi_photon_pass: budget.multi_photon_pass,
        late_emission_pass: budget.late_emission_pass,
        min_divider: min_divider(spec.saw_frequency(), recomb.total_rate(), base.target.epsilon())?,
        predicted_rate: spec.electrons_per_packet() as f64
            * spec.injection_rate()
            * recomb.branching_ratio()
            * detector.efficiency(),
        mc,
    })
}

/// Evaluates the budget (and optionally a Monte Carlo check) at every point
/// of `grid`. The point count is checked against `cap` before anything is
/// computed. Rows come back in grid order.
pub fn sweep(base: &SweepBase, grid: &SweepGrid, cap: u64, mc: Option<&McCheck>) -> Result<Vec<SweepRow>> {
    let lens = grid.lens()?;
    let points = grid.point_count()?;
    if points > cap as u128 {
        return Err(Error::GridTooLarge { points, cap });
    }
    let origin = base.point();
    let jobs = (0..points)
        .map(|i| {
            let p = grid.point(&origin, i, &lens);
            Ok((p, base.models(&p)?))
        })
        .collect::<Result<Vec<_>>>()?;
    jobs.into_par_iter()
        .enumerate()
        .map(|(i, (point, models))| evaluate(base, point, models, i as u64, mc))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_base() -> SweepBase {
        SweepBase {
            pump: PumpModel::ideal(InjectionSpec::new(1, 1, 3e9).unwrap()),
            recombination: RecombinationModel::radiative(1e10).unwrap(),
            detector: DetectorModel::ideal(),
            target: AccuracyTarget::default(),
        }
    }

    #[test]
    fn single_point_matches_direct_calls() {
        let base = reference_base();
        let grid = SweepGrid {
            divider: Some(vec![5]),
            ..Default::default()
        };
        let rows = sweep(&base, &grid, 10, None).unwrap();
        assert_eq!(rows.len(), 1);
        let pump = PumpModel::ideal(InjectionSpec::new(1, 5, 3e9).unwrap());
        let b = accuracy_budget(&pump, &base.recombination, &base.target).unwrap();
        assert_eq!(rows[0].p_zero_photon, b.p_zero_photon);
        assert_eq!(rows[0].p_multi_photon, b.p_multi_photon);
        assert_eq!(rows[0].min_divider, 5);
        assert_eq!(rows[0].predicted_rate, 6e8);
        assert_eq!(rows[0].mc, None);
    }

    #[test]
    fn divider_sweep_flips_at_five() {
        let grid = SweepGrid {
            divider: Some((1..=10).collect()),
            ..Default::default()
        };
        let rows = sweep(&reference_base(), &grid, 10, None).unwrap();
        for r in &rows {
            let ok = r.point.divider >= 5;
            assert_eq!(r.late_emission_pass, ok, "M = {}", r.point.divider);
            assert_eq!(r.zero_photon_pass, ok, "M = {}", r.point.divider);
            assert_eq!(r.multi_photon_pass, ok, "M = {}", r.point.divider);
        }
    }

    #[test]
    fn rows_are_lexicographic() {
        let grid = SweepGrid {
            saw_frequency: Some(vec![1e9, 2e9]),
            electrons_per_packet: Some(vec![1, 2, 3]),
            efficiency: Some(vec![0.5, 1.0]),
            ..Default::default()
        };
        let rows = sweep(&reference_base(), &grid, 12, None).unwrap();
        let keys: Vec<(f64, u32, f64)> = rows
            .iter()
            .map(|r| (r.point.saw_frequency, r.point.electrons_per_packet, r.point.efficiency))
            .collect();
        let mut sorted = keys.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(keys, sorted);
        assert_eq!(keys.len(), 12);
        assert_eq!(rows[11].predicted_rate, 3.0 * 2e9);
    }

    #[test]
    fn cap_and_empty_axes_rejected() {
        let grid = SweepGrid {
            p_miss: Some(vec![0.0; 10]),
            p_extra: Some(vec![0.0; 10]),
            ..Default::default()
        };
        assert_eq!(
            sweep(&reference_base(), &grid, 99, None),
            Err(Error::GridTooLarge { points: 100, cap: 99 })
        );
        let empty = SweepGrid {
            divider: Some(vec![]),
            ..Default::default()
        };
        assert_eq!(sweep(&reference_base(), &empty, 99, None), Err(Error::EmptyGrid));
    }

    #[test]
    fn invalid_point_rejected() {
        let grid = SweepGrid {
            p_miss: Some(vec![0.1, 1.5]),
            ..Default::default()
        };
        assert!(sweep(&reference_base(), &grid, 10, None).is_err());
    }

    #[test]
    fn monte_carlo_check_is_deterministic() {
        let mut base = reference_base();
        base.recombination = RecombinationModel::radiative(6e10).unwrap();
        let grid = SweepGrid {
            p_miss: Some(vec![0.0, 0.1]),
            ..Default::default()
        };
        let check = McCheck {
            n_cycles: 20_000,
            seed: 9,
            shards: 2,
            analysis: AnalysisOptions::default(),
        };
        let a = sweep(&base, &grid, 10, Some(&check)).unwrap();
        let b = sweep(&base, &grid, 10, Some(&check)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a[0].mc.unwrap().mandel_q, Some(-1.0));
        let q = a[1].mc.unwrap().mandel_q.unwrap();
        assert!((q + 0.9).abs() < 0.1, "{q}");
    }
}
