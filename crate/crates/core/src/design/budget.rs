use serde::Serialize;

use super::divider::late_emission_ok;
use crate::mc::PumpModel;
use crate::physics::emission::binomial_probability;
use crate::physics::RecombinationModel;
use crate::{Error, Real, Result};

/// Default tolerated probability of a bad injection window.
pub const DEFAULT_EPSILON: f64 = 1e-6;

/// Lags beyond this are not summed; reached only for `γT` below about 5e-4.
const MAX_LAGS: usize = 100_000;

/// Largest acceptable probability of a bad window, applied separately to
/// windows with missing photons and windows with extra photons.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AccuracyTarget<T> {
    epsilon: T,
}

impl<T: Real> AccuracyTarget<T> {
    pub fn new(epsilon: T) -> Result<Self> {
        if !(epsilon > T::zero() && epsilon < T::one()) {
            return Err(Error::invalid("design.epsilon", format!("must lie in (0, 1), got {epsilon}")));
        }
        Ok(Self { epsilon })
    }

    pub fn epsilon(&self) -> T {
        self.epsilon
    }
}

impl<T: Real> Default for AccuracyTarget<T> {
    fn default() -> Self {
        Self {
            epsilon: T::lit(DEFAULT_EPSILON),
        }
    }
}

/// Single-mechanism probabilities behind the budget. They overlap, so they
/// do not add up to the window probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BudgetContributions<T> {
    /// Packet carries `N − 1` electrons.
    pub pump_miss: T,
    /// Packet carries `N + 1` electrons.
    pub pump_extra: T,
    /// At least one of `N` electrons recombines without a photon, `1 − β^N`.
    pub nonradiative_loss: T,
    /// At least one of `N` electrons recombines after its window,
    /// `1 − (1 − e^{−γT})^N`.
    pub late_emission: T,
    /// At least one photon from an earlier packet lands in the window.
    pub spillover: T,
}

/// Per-window photon-count budget of a pumped source in steady state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BudgetReport<T> {
    pub epsilon: T,
    pub electrons_per_packet: u32,
    /// `window_counts[k]` is the probability of `k` photons in a window for
    /// `k ≤ N`; the last entry is the probability of more than `N`.
    pub window_counts: Vec<T>,
    /// Probability of fewer than `N` photons in a window.
    pub p_zero_photon: T,
    /// Probability of more than `N` photons in a window.
    pub p_multi_photon: T,
    pub zero_photon_pass: bool,
    pub multi_photon_pass: bool,
    /// `e^{−γT} ≤ ε`, the condition that sets the minimum divider.
    pub late_emission_pass: bool,
    pub contributions: BudgetContributions<T>,
    /// Number of earlier packets whose photons were counted.
    pub lags: usize,
}

impl<T: Real> BudgetReport<T> {
    pub fn pass(&self) -> bool {
        self.zero_photon_pass && self.multi_photon_pass
    }
}

/// Count distribution with every count of `len − 1` or more lumped into the
/// last entry. Lumping commutes with convolution, so the lumped entry stays
/// exact.
fn convolve_lumped<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    let len = a.len();
    let mut out = vec![T::zero(); len];
    for (i, &x) in a.iter().enumerate() {
        if x == T::zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let k = (i + j).min(len - 1);
            out[k] = out[k] + x * y;
        }
    }
    out
}

/// Photons one packet puts into a given window when each of its electrons
/// lands there independently with probability `hit` (`miss = 1 − hit`).
fn packet_contribution<T: Real>(outcomes: &[(u32, T)], hit: T, miss: T, len: usize) -> Vec<T> {
    let mut out = vec![T::zero(); len];
    for &(electrons, weight) in outcomes {
        let n = electrons as usize;
        for k in 0..=n {
            let slot = k.min(len - 1);
            out[slot] = out[slot] + weight * binomial_probability(k, n, hit, miss);
        }
    }
    out
}

/// Probabilities of missing and extra photons in an injection window
/// `[iT, (i+1)T)` once the source has run long enough to reach steady state.
///
/// Each packet contributes independently: an electron injected `k` windows
/// earlier emits into the current window with probability
/// `β·(1 − e^{−γT})·e^{−kγT}`, and the window count is the convolution of the
/// per-packet binomial mixtures over all lags whose contribution is above
/// rounding. Injections are taken at the window starts; clock jitter is not
/// included.
pub fn accuracy_budget<T: Real>(
    pump: &PumpModel<T>,
    recomb: &RecombinationModel<T>,
    target: &AccuracyTarget<T>,
) -> Result<BudgetReport<T>> {
    let n = pump.spec().electrons_per_packet();
    let period = pump.spec().injection_period();
    let rate = recomb.total_rate();
    let beta = recomb.branching_ratio();
    let loss = recomb.nonradiative_rate() / rate;
    let gt = rate * period;
    let q = (-gt).exp();
    let in_window = -(-gt).exp_m1();
    let outcomes = pump.packet_outcomes();
    let len = n as usize + 2;
    let max_electrons = T::from_u32(n + 1).unwrap();
    let cutoff = T::epsilon() * T::lit(1e-4);

    let mut earlier = vec![T::zero(); len];
    earlier[0] = T::one();
    let mut lags = 0;
    let mut hit = beta * in_window * q;
    while hit > T::zero() && max_electrons * hit >= cutoff {
        if lags == MAX_LAGS {
            return Err(Error::domain(
                "accuracy_budget",
                format!("γT = {gt} is too small for a per-window budget"),
            ));
        }
        let contribution = packet_contribution(&outcomes, hit, T::one() - hit, len);
        earlier = convolve_lumped(&earlier, &contribution);
        lags += 1;
        hit = hit * q;
    }
    let current = packet_contribution(&outcomes, beta * in_window, loss + beta * q, len);
    let window_counts: Vec<T> = convolve_lumped(&earlier, &current)
        .into_iter()
        .map(|p| p.max(T::zero()).min(T::one()))
        .collect();

    let clamp = |p: T| p.max(T::zero()).min(T::one());
    let p_zero_photon = clamp(window_counts[..n as usize].iter().fold(T::zero(), |a, &p| a + p));
    let p_multi_photon = window_counts[len - 1];
    let nf = T::from_u32(n).unwrap();
    let epsilon = target.epsilon();
    Ok(BudgetReport {
        epsilon,
        electrons_per_packet: n,
        p_zero_photon,
        p_multi_photon,
        zero_photon_pass: p_zero_photon <= epsilon,
        multi_photon_pass: p_multi_photon <= epsilon,
        late_emission_pass: late_emission_ok(rate, period, epsilon),
        contributions: BudgetContributions {
            pump_miss: pump.p_miss(),
            pump_extra: pump.p_extra(),
            nonradiative_loss: clamp(-(nf * beta.ln()).exp_m1()),
            late_emission: clamp(-(nf * (-q).ln_1p()).exp_m1()),
            spillover: clamp(T::one() - earlier[0]),
        },
        window_counts,
        lags,
    })
}
