//! Photon-number statistics of a packet of `N` electrons recombining at a
//! single rate `γ`.
//!
//! Each electron recombines independently as a Poisson process, so after a
//! time `t` the number of photons in the output mode is binomial with success
//! probability `1 − e^{−γt}`. Probabilities are evaluated in log space so
//! packets of a thousand electrons neither overflow nor lose normalization.

use serde::Serialize;

use crate::{Error, Real, Result};

/// Diagonal of the optical field state: `probabilities[m]` is the weight of
/// the `m`-photon number state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumberStateDistribution<T> {
    probabilities: Vec<T>,
    eval_time: T,
}

impl<T: Real> NumberStateDistribution<T> {
    /// Largest photon number in the support (`N`).
    pub fn max_photons(&self) -> usize {
        self.probabilities.len() - 1
    }

    pub fn probabilities(&self) -> &[T] {
        &self.probabilities
    }

    pub fn probability(&self, photons: usize) -> T {
        self.probabilities.get(photons).copied().unwrap_or_else(T::zero)
    }

    pub fn eval_time(&self) -> T {
        self.eval_time
    }

    pub fn total(&self) -> T {
        self.probabilities.iter().fold(T::zero(), |acc, &p| acc + p)
    }

    pub fn mean(&self) -> T {
        self.probabilities
            .iter()
            .enumerate()
            .fold(T::zero(), |acc, (m, &p)| acc + T::from_usize(m).unwrap() * p)
    }
}

/// `ln n! − ln(√(2πn)·(n/e)^n)`, tabulated for small `n`.
const STIRLING_ERROR: [f64; 16] = [
    0.0,
    0.08106146679532725821967026,
    0.04134069595540929409382208,
    0.02767792568499833914878929,
    0.02079067210376509311152277,
    0.01664469118982119216319487,
    0.01387612882307074799874573,
    0.01189670994589177009505572,
    0.01041126526197209649747857,
    0.009255462182712732917728637,
    0.008330563433362871256469319,
    0.007573675487951840794972024,
    0.006942840107209529865664153,
    0.006408994188004207068439631,
    0.005951370112758847735624416,
    0.00555473355196280137103869,
];

fn stirling_error<T: Real>(n: usize) -> T {
    if n < STIRLING_ERROR.len() {
        return T::lit(STIRLING_ERROR[n]);
    }
    let x = T::from_usize(n).unwrap();
    let x2 = x * x;
    let s0 = T::lit(1.0 / 12.0);
    let s1 = T::lit(1.0 / 360.0);
    let s2 = T::lit(1.0 / 1260.0);
    let s3 = T::lit(1.0 / 1680.0);
    let s4 = T::lit(1.0 / 1188.0);
    (s0 - (s1 - (s2 - (s3 - s4 / x2) / x2) / x2) / x2) / x
}

/// Deviance term `x·ln(x/μ) + μ − x`, evaluated without cancellation when
/// `x ≈ μ`.
fn deviance<T: Real>(x: T, mu: T) -> T {
    let diff = x - mu;
    if diff.abs() < T::lit(0.1) * (x + mu) {
        let v = diff / (x + mu);
        let v2 = v * v;
        let mut sum = diff * v;
        let mut term = T::lit(2.0) * x * v;
        let mut j = 1u32;
        loop {
            term = term * v2;
            let next = sum + term / T::from_u32(2 * j + 1).unwrap();
            if next == sum || j > 1000 {
                return next;
            }
            sum = next;
            j += 1;
        }
    }
    x * (x / mu).ln() + mu - x
}

/// Binomial probability of `k` successes in `n` trials with success
/// probability `p` (`q = 1 − p` passed separately to keep its precision).
///
/// Saddle-point form: all logarithms stay O(1) in size, so the result is
/// accurate to a few ulps even for `n` in the thousands, where summing
/// `ln k!` tables loses about 1e-11.
pub(crate) fn binomial_probability<T: Real>(k: usize, n: usize, p: T, q: T) -> T {
    if p == T::zero() || n == 0 {
        return if k == 0 { T::one() } else { T::zero() };
    }
    if q == T::zero() {
        return if k == n { T::one() } else { T::zero() };
    }
    let nf = T::from_usize(n).unwrap();
    if k == 0 {
        let lc = if p < T::lit(0.1) {
            -deviance(nf, nf * q) - nf * p
        } else {
            nf * q.ln()
        };
        return lc.exp();
    }
    if k == n {
        let lc = if q < T::lit(0.1) {
            -deviance(nf, nf * p) - nf * q
        } else {
            nf * p.ln()
        };
        return lc.exp();
    }
    let kf = T::from_usize(k).unwrap();
    let rest = T::from_usize(n - k).unwrap();
    let lc = stirling_error::<T>(n)
        - stirling_error::<T>(k)
        - stirling_error::<T>(n - k)
        - deviance(kf, nf * p)
        - deviance(rest, nf * q);
    let lf = T::TAU().ln() + kf.ln() + (-kf / nf).ln_1p();
    (lc - T::lit(0.5) * lf).exp()
}

/// Validated `(1 − e^{−γt}, e^{−γt})`.
fn emission_probabilities<T: Real>(electrons: u32, rate: T, time: T) -> Result<(T, T)> {
    const OP: &str = "photon-number distribution";
    if electrons == 0 {
        return Err(Error::domain(OP, "packet must hold at least one electron"));
    }
    if !(rate.is_finite() && rate > T::zero()) {
        return Err(Error::domain(OP, format!("rate must be finite and > 0, got {rate}")));
    }
    if !(time.is_finite() && time >= T::zero()) {
        return Err(Error::domain(OP, format!("time must be finite and >= 0, got {time}")));
    }
    let gt = rate * time;
    if !gt.is_finite() {
        return Err(Error::domain(OP, "γ·t is not finite"));
    }
    // expm1 keeps 1 − e^{−x} precise for small x.
    Ok((-(-gt).exp_m1(), (-gt).exp()))
}

/// Probability that `m` of `N` injected electrons have emitted by time `t`:
/// `C(N,m)·e^{−(N−m)γt}·(1−e^{−γt})^m`.
pub fn emitted_count_pmf<T: Real>(
    electrons: u32,
    rate: T,
    time: T,
) -> Result<NumberStateDistribution<T>> {
    let (emitted, remaining) = emission_probabilities(electrons, rate, time)?;
    let n = electrons as usize;
    let probabilities = (0..=n)
        .map(|m| binomial_probability(m, n, emitted, remaining))
        .collect();
    Ok(NumberStateDistribution {
        probabilities,
        eval_time: time,
    })
}

/// Diagonal of the output-mode density matrix, built term by term from the
/// sum over `n` undecayed electrons: weight `C(N,n)·e^{−nγt}·(1−e^{−γt})^{N−n}`
/// on the number state `|N−n⟩`.
pub fn field_state_diagonal<T: Real>(
    electrons: u32,
    rate: T,
    time: T,
) -> Result<NumberStateDistribution<T>> {
    let (emitted, remaining) = emission_probabilities(electrons, rate, time)?;
    let n_total = electrons as usize;
    let mut probabilities = vec![T::zero(); n_total + 1];
    for undecayed in 0..=n_total {
        probabilities[n_total - undecayed] =
            binomial_probability(undecayed, n_total, remaining, emitted);
    }
    Ok(NumberStateDistribution {
        probabilities,
        eval_time: time,
    })
}
