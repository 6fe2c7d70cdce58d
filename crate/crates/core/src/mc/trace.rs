use serde::Serialize;

/// Packet injection times and electron counts for a run of consecutive cycles.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InjectionTrace {
    first_cycle: u64,
    period: f64,
    cycle_times: Vec<f64>,
    electron_counts: Vec<u32>,
}

impl InjectionTrace {
    pub(crate) fn with_capacity(first_cycle: u64, period: f64, capacity: usize) -> Self {
        Self {
            first_cycle,
            period,
            cycle_times: Vec::with_capacity(capacity),
            electron_counts: Vec::with_capacity(capacity),
        }
    }

    pub(crate) fn push(&mut self, time: f64, electrons: u32) {
        self.cycle_times.push(time);
        self.electron_counts.push(electrons);
    }

    /// Joins traces covering adjacent cycle ranges, in order.
    pub(crate) fn concat(parts: Vec<InjectionTrace>, period: f64) -> Self {
        let first_cycle = parts.first().map_or(0, |p| p.first_cycle);
        let len = parts.iter().map(|p| p.len()).sum();
        let mut out = Self::with_capacity(first_cycle, period, len);
        for p in parts {
            debug_assert_eq!(p.first_cycle, first_cycle + out.len() as u64);
            out.cycle_times.extend(p.cycle_times);
            out.electron_counts.extend(p.electron_counts);
        }
        out
    }

    pub fn first_cycle(&self) -> u64 {
        self.first_cycle
    }

    /// Injection period `T`.
    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn cycle_times(&self) -> &[f64] {
        &self.cycle_times
    }

    pub fn electron_counts(&self) -> &[u32] {
        &self.electron_counts
    }

    pub fn len(&self) -> usize {
        self.cycle_times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycle_times.is_empty()
    }

    pub fn total_electrons(&self) -> u64 {
        self.electron_counts.iter().map(|&c| c as u64).sum()
    }

    /// Injection time of absolute cycle `cycle`, if it lies in this trace.
    pub fn cycle_time(&self, cycle: u64) -> Option<f64> {
        let i = cycle.checked_sub(self.first_cycle)?;
        self.cycle_times.get(i as usize).copied()
    }

    /// End of the nominal injection span, `(first + len)·T`.
    pub fn span_end(&self) -> f64 {
        (self.first_cycle + self.len() as u64) as f64 * self.period
    }
}

/// A photon leaving the p-region, tagged with the cycle of its electron.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Emission {
    pub time: f64,
    pub cycle: u64,
}

/// Emitted photons sorted by time.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmissionTrace {
    events: Vec<Emission>,
    duration: f64,
}

pub(crate) fn sort_emissions(events: &mut [Emission]) {
    events.sort_unstable_by(|a, b| a.time.total_cmp(&b.time).then(a.cycle.cmp(&b.cycle)));
}

impl EmissionTrace {
    /// Builds a trace from events in any order. The duration is extended to
    /// cover the last event if needed.
    pub fn from_events(mut events: Vec<Emission>, duration: f64) -> Self {
        sort_emissions(&mut events);
        let last = events.last().map_or(0.0, |e| e.time);
        Self {
            events,
            duration: duration.max(last),
        }
    }

    pub(crate) fn from_sorted(events: Vec<Emission>, duration: f64) -> Self {
        debug_assert!(events.windows(2).all(|w| w[0].time <= w[1].time));
        Self { events, duration }
    }

    pub fn events(&self) -> &[Emission] {
        &self.events
    }

    pub fn times(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        self.events.iter().map(|e| e.time)
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    /// Drops photons emitted after `horizon` and sets the duration to it.
    /// Returns the number of photons dropped.
    pub fn truncate_to(&mut self, horizon: f64) -> u64 {
        let keep = self.events.partition_point(|e| e.time <= horizon);
        let dropped = (self.events.len() - keep) as u64;
        self.events.truncate(keep);
        self.duration = horizon;
        dropped
    }
}

/// A detector click. `dark` marks clicks not caused by a source photon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Detection {
    pub time: f64,
    pub dark: bool,
}

/// Detector clicks sorted by time, all within `[0, duration]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectionTrace {
    events: Vec<Detection>,
    duration: f64,
}

impl DetectionTrace {
    pub(crate) fn new(events: Vec<Detection>, duration: f64) -> Self {
        Self { events, duration }
    }

    pub fn events(&self) -> &[Detection] {
        &self.events
    }

    pub fn times(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        self.events.iter().map(|e| e.time)
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn dark_count(&self) -> usize {
        self.events.iter().filter(|e| e.dark).count()
    }

    /// Smallest gap between consecutive clicks, `None` for fewer than two.
    pub fn min_gap(&self) -> Option<f64> {
        self.events
            .windows(2)
            .map(|w| w[1].time - w[0].time)
            .min_by(f64::total_cmp)
    }
}
