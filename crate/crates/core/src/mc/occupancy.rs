use rayon::prelude::*;
use serde::Serialize;

use super::generate::{block_count, emit_unsorted, inject_blocks, Recombiner};
use super::models::PumpModel;
use super::rng::{shard_ranges, RngSpec, CYCLES_PER_BLOCK};
use crate::physics::RecombinationModel;
use crate::{Error, Result};

/// Windows skipped at the start of a run, before photons from earlier cycles
/// can spill into a window.
pub const DEFAULT_WARMUP_WINDOWS: u64 = 16;

/// Distribution of the number of photons emitted inside each injection
/// window `[iT, (i+1)T)`, regardless of which cycle they came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WindowOccupancy {
    /// `histogram[k]` = number of windows holding exactly `k` photons.
    pub histogram: Vec<u64>,
    pub windows: u64,
}

impl WindowOccupancy {
    pub fn windows_with(&self, photons: usize) -> u64 {
        self.histogram.get(photons).copied().unwrap_or(0)
    }

    pub fn windows_below(&self, photons: usize) -> u64 {
        self.histogram.iter().take(photons).sum()
    }

    pub fn windows_above(&self, photons: usize) -> u64 {
        self.histogram.iter().skip(photons + 1).sum()
    }

    pub fn fraction(&self, windows: u64) -> f64 {
        windows as f64 / self.windows as f64
    }
}

/// Streams `n_windows` injection cycles through the pump and recombination
/// models and histograms per-window photon counts without materializing the
/// traces. Uses the same keyed streams as [`super::run_experiment`], so the
/// emitted photons are the ones a full run with the same seed would produce.
pub fn window_photon_counts(
    pump: &PumpModel<f64>,
    recomb: &RecombinationModel<f64>,
    n_windows: u64,
    warmup: u64,
    rng: &RngSpec,
    shards: usize,
) -> Result<WindowOccupancy> {
    if n_windows <= warmup {
        return Err(Error::invalid("n_windows", format!("must exceed warmup ({warmup})")));
    }
    let period = pump.spec().injection_period();
    let recombiner = Recombiner::new(recomb);
    let partials: Vec<(u64, Vec<u32>)> = shard_ranges(block_count(n_windows), shards)
        .into_par_iter()
        .map(|blocks| {
            let first = blocks.start * CYCLES_PER_BLOCK;
            let mut local: Vec<u32> = Vec::new();
            for b in blocks {
                let inj = inject_blocks(pump, n_windows, b..b + 1, rng);
                for e in emit_unsorted(&inj, &recombiner, rng) {
                    let w = (e.time / period).floor() as u64;
                    if w >= n_windows {
                        continue;
                    }
                    let i = (w - first) as usize;
                    if i >= local.len() {
                        local.resize(i + 1, 0);
                    }
                    local[i] += 1;
                }
            }
            (first, local)
        })
        .collect();

    let mut per_window = vec![0u32; n_windows as usize];
    for (first, local) in partials {
        for (i, c) in local.into_iter().enumerate() {
            per_window[first as usize + i] += c;
        }
    }
    let mut histogram = Vec::new();
    for &c in &per_window[warmup as usize..] {
        let c = c as usize;
        if c >= histogram.len() {
            histogram.resize(c + 1, 0);
        }
        histogram[c] += 1;
    }
    Ok(WindowOccupancy {
        histogram,
        windows: n_windows - warmup,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::{run_experiment, DetectorModel, ExperimentConfig};
    use crate::physics::InjectionSpec;

    #[test]
    fn matches_full_run_and_is_shard_independent() {
        let spec = InjectionSpec::new(1, 1, 3e9).unwrap();
        let pump = PumpModel::new(spec, 0.05, 0.05, 0.0).unwrap();
        let recomb = RecombinationModel::new(5e9, 5e8).unwrap();
        let rng = RngSpec::new(11, 0);
        let n = 20_000;
        let occ = window_photon_counts(&pump, &recomb, n, 4, &rng, 1).unwrap();
        assert_eq!(occ, window_photon_counts(&pump, &recomb, n, 4, &rng, 7).unwrap());

        let config = ExperimentConfig::new(pump, recomb, DetectorModel::ideal(), n).unwrap();
        let run = run_experiment(&config, &rng, 1).unwrap();
        let mut per_window = vec![0usize; n as usize];
        for e in run.emissions.events() {
            let w = (e.time / spec.injection_period()).floor() as u64;
            if w < n {
                per_window[w as usize] += 1;
            }
        }
        let mut hist = vec![0u64; occ.histogram.len()];
        for &c in &per_window[4..] {
            hist[c] += 1;
        }
        assert_eq!(hist, occ.histogram);
        assert_eq!(occ.windows, n - 4);
    }

    #[test]
    fn warmup_must_leave_windows() {
        let spec = InjectionSpec::new(1, 1, 3e9).unwrap();
        let recomb = RecombinationModel::radiative(1e10).unwrap();
        assert!(window_photon_counts(&PumpModel::ideal(spec), &recomb, 10, 10, &RngSpec::from_seed(0), 1).is_err());
    }
}
