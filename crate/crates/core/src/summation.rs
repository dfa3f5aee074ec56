//! Deterministic series summation with certified tail bounds, plus the
//! partial-sum tracing instrument used to classify divergent blocks.
//!
//! The only truncation policy in the crate lives here. Both series are cut
//! after M explicit terms and corrected by the integral of the term envelope
//! over [M + 1/2, inf) (midpoint rule); the remaining error is bounded by the
//! first derivative of the envelope at the cut, which the midpoint offset
//! makes O(1/M^3) rather than the O(1/M) of raw truncation.

use crate::{CompensatedSum, Error, Result};

/// Window length for the divergence classification rule.
const GROWTH_WINDOW: usize = 5;

/// Truncation and guard configuration for every series in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummationConfig {
    /// Target absolute tail bound.
    pub abs_tol: f64,
    /// Target relative tail bound.
    pub rel_tol: f64,
    /// Hard cap on explicit terms.
    pub max_terms: u64,
    /// Distance threshold for near-singularity handling.
    pub pole_guard: f64,
}

impl Default for SummationConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_terms: 1_000_000,
            pole_guard: 0.05,
        }
    }
}

impl SummationConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "tolerances must be positive (abs_tol={}, rel_tol={})",
                self.abs_tol, self.rel_tol
            )));
        }
        if self.max_terms == 0 || self.max_terms > 1_000_000_000 {
            return Err(Error::InvalidConfig(format!(
                "max_terms must lie in [1, 1e9], got {}",
                self.max_terms
            )));
        }
        if !(self.pole_guard > 0.0 && self.pole_guard < 0.5) {
            return Err(Error::InvalidConfig(format!(
                "pole_guard must lie in (0, 0.5), got {}",
                self.pole_guard
            )));
        }
        Ok(())
    }
}

/// Value of a truncated series together with its truncation certificate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesEval {
    pub value: f64,
    pub terms_used: u64,
    /// Signed analytic tail correction already folded into `value`.
    pub tail_estimate: f64,
    /// Certified absolute bound on the error that remains after correction.
    pub tail_bound: f64,
    pub converged: bool,
}

impl SeriesEval {
    fn zero() -> Self {
        SeriesEval {
            value: 0.0,
            terms_used: 0,
            tail_estimate: 0.0,
            tail_bound: 0.0,
            converged: true,
        }
    }
}

/// Ordered record of the terms and running sums of a series, with an
/// empirical divergence classification.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PartialSumTrace {
    pub terms: Vec<f64>,
    pub partial_sums: Vec<f64>,
    /// `ratio_flags[k]` is true when |t_{k+1} / t_k| > 1.
    pub ratio_flags: Vec<bool>,
    pub diverged: bool,
    pub first_growth_index: Option<usize>,
    /// Index at which a term left the representable range, if any.
    pub overflowed_at: Option<usize>,
}

impl PartialSumTrace {
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn last_partial_sum(&self) -> Option<f64> {
        self.partial_sums.last().copied()
    }
}

/// Returns the nearest pole location if `x` is within `guard` of an integer <= -1.
pub fn nearest_pole(x: f64, guard: f64) -> Option<f64> {
    let k = (-x).round();
    if k >= 1.0 && (x + k).abs() < guard {
        Some(-k)
    } else {
        None
    }
}

// Smallest cut M with bound(M) <= tol, starting from a floor that keeps the
// envelope monotone (M > 2|x|). `bound` must be decreasing in M.
fn choose_cut(x: f64, tol: f64, cap: u64, bound: impl Fn(u64) -> f64) -> Result<u64> {
    let floor = (2.0 * x.abs()).ceil() as u64 + 2;
    let mut lo = floor.max(8);
    if bound(lo) <= tol {
        return Ok(lo);
    }
    let mut hi = lo;
    while bound(hi) > tol {
        if hi >= cap {
            return Err(Error::CapExceeded { cap, needed: hi, tol });
        }
        hi = (hi.saturating_mul(2)).min(cap);
    }
    // bisect to the smallest admissible M for a deterministic, minimal cut
    while lo + 1 < hi {
        let mid = lo + (hi - lo) / 2;
        if bound(mid) <= tol {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// S(x) = sum_{m>=1} x / (m (x + m)), the digamma series.
///
/// Terms are summed ascending in m with compensated accumulation; the tail is
/// corrected by log(1 + x/(M + 1/2)), the envelope integral from M + 1/2.
pub fn sum_rational_tail(x: f64, cfg: &SummationConfig) -> Result<SeriesEval> {
    cfg.validate()?;
    if !x.is_finite() {
        return Err(Error::Domain(format!("x must be finite, got {x}")));
    }
    if let Some(pole) = nearest_pole(x, cfg.pole_guard) {
        return Err(Error::NearPole { arg: x, pole, guard: cfg.pole_guard });
    }
    if x == 0.0 {
        return Ok(SeriesEval::zero());
    }

    // midpoint-rule error of the tail: |f'(T)|/24 summed, doubled for safety
    let bound = |m: u64| {
        let t = m as f64 + 0.5;
        (x * (2.0 * t + x) / (t * t * (t + x) * (t + x))).abs() / 12.0
    };
    let m_cut = choose_cut(x, cfg.abs_tol, cfg.max_terms, bound)?;

    let mut acc = CompensatedSum::new();
    for m in 1..=m_cut {
        let m = m as f64;
        acc.add(x / (m * (x + m)));
    }
    let t_mid = m_cut as f64 + 0.5;
    let tail_estimate = (x / t_mid).ln_1p();
    let value = acc.value() + tail_estimate;
    let tail_bound = bound(m_cut);

    Ok(SeriesEval {
        value,
        terms_used: m_cut,
        tail_estimate,
        tail_bound,
        converged: tail_bound <= cfg.abs_tol.max(cfg.rel_tol * value.abs()),
    })
}

/// L(x) = sum_{m>=1} [log(1 + x/m) - x/m], the log of the Weierstrass
/// canonical product without the e^{gamma x} prefactor.
///
/// Requires every retained factor (1 + x/m) to be strictly positive, i.e.
/// x > -1.
pub fn log_weierstrass_sum(x: f64, cfg: &SummationConfig) -> Result<SeriesEval> {
    if x <= -1.0 {
        return Err(Error::NonPositiveFactor { x, m: 1 });
    }
    log_weierstrass_signed(x, cfg).map(|(eval, _)| eval)
}

/// Signed-product variant: sums log|1 + x/m| - x/m and reports the parity of
/// negative factors, so the reciprocal-Gamma product stays defined for
/// non-integer x < -1. Exact zero factors (integer x <= -1) are the caller's
/// responsibility.
pub fn log_weierstrass_signed(x: f64, cfg: &SummationConfig) -> Result<(SeriesEval, i8)> {
    cfg.validate()?;
    if !x.is_finite() {
        return Err(Error::Domain(format!("x must be finite, got {x}")));
    }
    if x == 0.0 {
        return Ok((SeriesEval::zero(), 1));
    }
    if x < 0.0 && x.fract() == 0.0 {
        return Err(Error::NonPositiveFactor { x, m: (-x) as u64 });
    }

    let bound = |m: u64| {
        let t = m as f64 + 0.5;
        (x * x / (t * t * (t + x))).abs() / 12.0
    };
    let m_cut = choose_cut(x, cfg.abs_tol, cfg.max_terms, bound)?;

    // factors are negative exactly for m < -x
    let negative_factors = if x < -1.0 { (-x).floor() as u64 } else { 0 };
    let sign: i8 = if negative_factors % 2 == 0 { 1 } else { -1 };

    let mut acc = CompensatedSum::new();
    for m in 1..=m_cut {
        let mf = m as f64;
        let term = if m <= negative_factors {
            ((mf + x).abs() / mf).ln() - x / mf
        } else {
            (x / mf).ln_1p() - x / mf
        };
        acc.add(term);
    }
    let t_mid = m_cut as f64 + 0.5;
    let tail_estimate = x - (t_mid + x) * (x / t_mid).ln_1p();
    let value = acc.value() + tail_estimate;
    let tail_bound = bound(m_cut);

    Ok((
        SeriesEval {
            value,
            terms_used: m_cut,
            tail_estimate,
            tail_bound,
            converged: tail_bound <= cfg.abs_tol.max(cfg.rel_tol * value.abs()),
        },
        sign,
    ))
}

/// Builds a [`PartialSumTrace`] from a term sequence.
///
/// Partial sums are plain cumulative additions in index order, so the trace
/// invariant partial_sums[k] = partial_sums[k-1] + terms[k] holds exactly.
/// A non-finite term truncates the trace and marks it diverged.
pub fn trace_partial_sums(terms_in: impl IntoIterator<Item = f64>) -> PartialSumTrace {
    let mut terms = Vec::new();
    let mut partial_sums = Vec::new();
    let mut overflowed_at = None;
    let mut running = 0.0f64;
    for (i, t) in terms_in.into_iter().enumerate() {
        if !t.is_finite() {
            overflowed_at = Some(i);
            break;
        }
        running = if i == 0 { t } else { running + t };
        terms.push(t);
        partial_sums.push(running);
    }

    let ratio_flags: Vec<bool> = terms
        .windows(2)
        .map(|w| w[1].abs() > w[0].abs())
        .collect();

    let first_growth_index = ratio_flags
        .windows(GROWTH_WINDOW)
        .position(|w| w.iter().all(|&f| f));

    let grown = match (first_growth_index, terms.last()) {
        (Some(i), Some(last)) => last.abs() > terms[i].abs(),
        _ => false,
    };
    let diverged = grown || overflowed_at.is_some();

    PartialSumTrace {
        terms,
        partial_sums,
        ratio_flags,
        diverged,
        first_growth_index,
        overflowed_at,
    }
}
