//! Event-stream generators. Every cycle block draws from its own keyed stream,
//! so output depends on `(seed, stream_index)` alone and not on sharding.

use std::ops::Range;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Normal, Poisson};
use rayon::prelude::*;

use super::models::{DetectorModel, PumpModel};
use super::rng::{shard_ranges, Purpose, RngSpec, CYCLES_PER_BLOCK};
use super::trace::{sort_emissions, Detection, DetectionTrace, Emission, EmissionTrace, InjectionTrace};
use crate::physics::RecombinationModel;
use crate::{Error, Result};

/// Expected dark counts per keyed dark-count stream.
const DARK_COUNTS_PER_BLOCK: f64 = 4096.0;

pub(crate) fn block_count(n_cycles: u64) -> u64 {
    n_cycles.div_ceil(CYCLES_PER_BLOCK)
}

fn block_cycles(block: u64, n_cycles: u64) -> Range<u64> {
    (block * CYCLES_PER_BLOCK)..((block + 1) * CYCLES_PER_BLOCK).min(n_cycles)
}

/// Injections for cycle blocks `blocks` of an `n_cycles` run.
pub(crate) fn inject_blocks(
    pump: &PumpModel<f64>,
    n_cycles: u64,
    blocks: Range<u64>,
    rng: &RngSpec,
) -> InjectionTrace {
    let period = pump.spec().injection_period();
    let first = blocks.start * CYCLES_PER_BLOCK;
    let last = (blocks.end * CYCLES_PER_BLOCK).min(n_cycles);
    let mut trace = InjectionTrace::with_capacity(first, period, last.saturating_sub(first) as usize);
    let n = pump.spec().electrons_per_packet();
    let (p_miss, p_err) = (pump.p_miss(), pump.p_miss() + pump.p_extra());
    let jitter = (pump.cycle_jitter() > 0.0)
        .then(|| Normal::new(0.0, pump.cycle_jitter()).expect("validated jitter"));
    let max_offset = 0.49 * period;
    for block in blocks {
        let mut r = rng.block_rng(Purpose::Injection, block);
        for cycle in block_cycles(block, n_cycles) {
            let u: f64 = r.random();
            let electrons = if u < p_miss {
                n - 1
            } else if u < p_err {
                n + 1
            } else {
                n
            };
            let mut t = cycle as f64 * period;
            if let Some(j) = &jitter {
                // Offsets are clamped just inside half a period so cycle order is kept.
                t = (t + j.sample(&mut r).clamp(-max_offset, max_offset)).max(0.0);
            }
            trace.push(t, electrons);
        }
    }
    trace
}

/// Per-electron recombination: one exponential lifetime at the total rate,
/// then a radiative/non-radiative branch.
pub(crate) struct Recombiner {
    lifetime: Exp<f64>,
    branching: f64,
}

impl Recombiner {
    pub(crate) fn new(recomb: &RecombinationModel<f64>) -> Self {
        Self {
            lifetime: Exp::new(recomb.total_rate()).expect("validated rate"),
            branching: recomb.branching_ratio(),
        }
    }

    /// Photon delay after injection, or `None` if the electron recombined
    /// non-radiatively.
    #[inline]
    pub(crate) fn sample(&self, r: &mut ChaCha8Rng) -> Option<f64> {
        let delay = self.lifetime.sample(r);
        if self.branching < 1.0 && r.random::<f64>() >= self.branching {
            None
        } else {
            Some(delay)
        }
    }
}

/// Unsorted emissions for every cycle of `inj`.
pub(crate) fn emit_unsorted(inj: &InjectionTrace, recomb: &Recombiner, rng: &RngSpec) -> Vec<Emission> {
    emit_range(inj, 0..inj.len(), recomb, rng)
}

/// Unsorted emissions for trace entries `range`.
pub(crate) fn emit_range(
    inj: &InjectionTrace,
    range: Range<usize>,
    recomb: &Recombiner,
    rng: &RngSpec,
) -> Vec<Emission> {
    let times = &inj.cycle_times()[range.clone()];
    let counts = &inj.electron_counts()[range.clone()];
    let mut out = Vec::with_capacity(counts.iter().map(|&c| c as usize).sum());
    let first = inj.first_cycle() + range.start as u64;
    let mut current: Option<(u64, ChaCha8Rng)> = None;
    for (i, (&t0, &count)) in times.iter().zip(counts).enumerate() {
        let cycle = first + i as u64;
        let block = cycle / CYCLES_PER_BLOCK;
        if current.as_ref().is_none_or(|(b, _)| *b != block) {
            current = Some((block, rng.block_rng(Purpose::Emission, block)));
        }
        let r = &mut current.as_mut().unwrap().1;
        for _ in 0..count {
            if let Some(delay) = recomb.sample(r) {
                out.push(Emission { time: t0 + delay, cycle });
            }
        }
    }
    out
}

/// Draws `n_cycles` packet injections.
pub fn generate_injections(pump: &PumpModel<f64>, n_cycles: u64, rng: &RngSpec) -> Result<InjectionTrace> {
    if n_cycles == 0 {
        return Err(Error::invalid("n_cycles", "must be >= 1"));
    }
    Ok(inject_blocks(pump, n_cycles, 0..block_count(n_cycles), rng))
}

/// Lets every injected electron recombine. The trace duration is the end of
/// the injection span, or the last photon if that is later.
pub fn generate_emissions(
    inj: &InjectionTrace,
    recomb: &RecombinationModel<f64>,
    rng: &RngSpec,
) -> EmissionTrace {
    let events = emit_unsorted(inj, &Recombiner::new(recomb), rng);
    EmissionTrace::from_events(events, inj.span_end())
}

/// Passes an emission stream through a detector: efficiency thinning, timing
/// jitter, dark counts, then a non-paralyzable dead-time filter.
pub fn apply_detector(
    em: &EmissionTrace,
    det: &DetectorModel,
    duration: f64,
    rng: &RngSpec,
) -> Result<DetectionTrace> {
    apply_detector_sharded(em, det, duration, rng, 1)
}

/// [`apply_detector`] with the per-block work spread over `shards` tasks.
/// The output does not depend on `shards`.
pub fn apply_detector_sharded(
    em: &EmissionTrace,
    det: &DetectorModel,
    duration: f64,
    rng: &RngSpec,
    shards: usize,
) -> Result<DetectionTrace> {
    if !(duration.is_finite() && duration >= em.duration()) {
        return Err(Error::invalid(
            "duration",
            format!("must be finite and >= emission trace duration {}", em.duration()),
        ));
    }

    // Group photons by the cycle block of their electron, keeping trace order.
    let mut order: Vec<(u64, u32)> = em
        .events()
        .iter()
        .enumerate()
        .map(|(i, e)| (e.cycle / CYCLES_PER_BLOCK, i as u32))
        .collect();
    order.sort_unstable();
    let groups: Vec<&[(u64, u32)]> = order.chunk_by(|a, b| a.0 == b.0).collect();

    let jitter = (det.jitter() > 0.0).then(|| Normal::new(0.0, det.jitter()).expect("validated jitter"));
    let eta = det.efficiency();
    let events = em.events();
    let thin_group = |group: &[(u64, u32)]| -> Vec<Detection> {
        let mut r = rng.block_rng(Purpose::Detection, group[0].0);
        let mut out = Vec::with_capacity(group.len());
        for &(_, i) in group {
            if eta < 1.0 && r.random::<f64>() >= eta {
                continue;
            }
            let mut t = events[i as usize].time;
            if let Some(j) = &jitter {
                t += j.sample(&mut r);
            }
            out.push(Detection { time: t, dark: false });
        }
        out
    };
    let group_ranges = shard_ranges(groups.len() as u64, shards);
    let mut clicks: Vec<Detection> = group_ranges
        .into_par_iter()
        .flat_map_iter(|range| {
            groups[range.start as usize..range.end as usize]
                .iter()
                .flat_map(|g| thin_group(g))
                .collect::<Vec<_>>()
        })
        .collect();

    if det.dark_rate() > 0.0 {
        let block_len = DARK_COUNTS_PER_BLOCK / det.dark_rate();
        let n_blocks = (duration / block_len).ceil().max(1.0) as u64;
        let dark: Vec<Detection> = shard_ranges(n_blocks, shards)
            .into_par_iter()
            .flat_map_iter(|range| {
                let mut out = Vec::new();
                for b in range {
                    let start = b as f64 * block_len;
                    let end = ((b + 1) as f64 * block_len).min(duration);
                    if end <= start {
                        continue;
                    }
                    let mut r = rng.block_rng(Purpose::DarkCounts, b);
                    let mean = det.dark_rate() * (end - start);
                    let count = Poisson::new(mean).expect("positive mean").sample(&mut r) as u64;
                    for _ in 0..count {
                        let t = start + (end - start) * r.random::<f64>();
                        out.push(Detection { time: t, dark: true });
                    }
                }
                out
            })
            .collect();
        clicks.extend(dark);
    }

    clicks.retain(|d| d.time >= 0.0 && d.time <= duration);
    clicks.sort_unstable_by(|a, b| a.time.total_cmp(&b.time).then(a.dark.cmp(&b.dark)));
    Ok(DetectionTrace::new(dead_time_filter(clicks, det.dead_time()), duration))
}

/// Non-paralyzable dead time: a click within `dead_time` of the last kept
/// click is dropped and does not extend the dead interval.
fn dead_time_filter(sorted: Vec<Detection>, dead_time: f64) -> Vec<Detection> {
    if dead_time <= 0.0 {
        return sorted;
    }
    let mut out: Vec<Detection> = Vec::with_capacity(sorted.len());
    for d in sorted {
        match out.last() {
            Some(last) if d.time - last.time < dead_time => {}
            _ => out.push(d),
        }
    }
    out
}

/// Emissions for an already-merged injection trace, with the per-block work
/// spread over `shards` tasks.
pub(crate) fn emit_sharded(
    inj: &InjectionTrace,
    recomb: &RecombinationModel<f64>,
    rng: &RngSpec,
    shards: usize,
) -> Vec<Emission> {
    let recombiner = Recombiner::new(recomb);
    let n_cycles = inj.len() as u64;
    let mut events: Vec<Emission> = shard_ranges(block_count(n_cycles), shards)
        .into_par_iter()
        .flat_map_iter(|blocks| {
            let lo = (blocks.start * CYCLES_PER_BLOCK) as usize;
            let hi = ((blocks.end * CYCLES_PER_BLOCK).min(n_cycles)) as usize;
            emit_range(inj, lo..hi, &recombiner, rng)
        })
        .collect();
    sort_emissions(&mut events);
    events
}
