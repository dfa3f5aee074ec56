//! The η/α term functions, the gating factor, both blocks of the claimed
//! identity and its residual against 1/Γ(s+1).
//!
//! With x = s - j, the terms decompose as
//!
//!   α_s(j) = (1/Γ(x+1)) · (ψ(s+1) - ψ(x+1))
//!   η_s(j) = (1/Γ(x+1)) · (2 + log s - j/s + ψ(s+1) - ψ(x+1))
//!
//! Near x = -k both factors blow up in opposite directions; the reflection
//! formulas collapse the pair into Γ(-x)·[-sin(πx)(C - ψ(-x))/π - cos(πx)],
//! which is what gets evaluated inside the pole guard. At x = -k exactly that
//! expression reduces to the residue value (-1)^{k-1}(k-1)!.

use std::f64::consts::PI;

use crate::special::{
    digamma_eval, gamma_reference, recip_gamma_product_eval, sin_cos_pi,
};
use crate::summation::{
    nearest_pole, trace_partial_sums, PartialSumTrace, SeriesEval, SummationConfig,
};
use crate::{CompensatedSum, Error, Result};

/// Snap tolerance for integer detection; ⌊s⌋ and the gate are discontinuous,
/// so inputs within this distance of an integer are treated as that integer.
pub const INTEGER_SNAP: f64 = 1e-12;

/// One evaluated (s, j) pair of the identity's term functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TermPair {
    pub s: f64,
    pub j: u64,
    pub eta: f64,
    pub alpha: f64,
    /// x = s - j.
    pub x: f64,
    pub near_pole: bool,
    /// Truncation metadata of the canonical-product series behind 1/Γ(x+1)
    /// (absent on the reflection path, which goes through Γ(-x) instead).
    pub eta_eval: Option<SeriesEval>,
    /// Truncation metadata of the digamma series at x.
    pub alpha_eval: Option<SeriesEval>,
}

/// One row of the identity measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityReport {
    pub s: f64,
    /// 0 for integer s, 1 otherwise (principal-branch reading of the claimed
    /// gating expression).
    pub gate: f64,
    pub finite_block: f64,
    /// Partial sum of the gated tail at j_max; None when the gate is 0.
    pub tail_partial: Option<f64>,
    pub tail_diverged: bool,
    pub lhs: f64,
    /// 1/Γ(s+1) from the quadrature reference.
    pub rhs: f64,
    pub residual: f64,
    pub j_max: u64,
    /// 1/(e^{s-1} s^s).
    pub prefactor: f64,
}

/// Outcome of the integer-s triangle-inequality check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityReport {
    pub s: u64,
    /// |Σ (-1)^j η/s^j| - (1/(e^{s-1}s^s))|Σ (-1)^j α|.
    pub left_expr: f64,
    /// 1/Γ(s+1).
    pub middle: f64,
    /// Σ (|η| + |α|)/s^j, exactly as printed (no prefactor on this side).
    pub right_expr: f64,
    pub left_holds: bool,
    pub right_holds: bool,
}

/// Which j-indexed term family to trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermFamily {
    /// t_j = (-1)^j η_s(j) / s^j
    Eta,
    /// t_j = (-1)^{j+1} α_s(j)
    Alpha,
}

/// Snaps s to the nearest integer when within [`INTEGER_SNAP`].
pub fn snap_integer(s: f64) -> f64 {
    let r = s.round();
    if (s - r).abs() <= INTEGER_SNAP {
        r
    } else {
        s
    }
}

/// The gating factor (1 - ((-1)^w)^{1/w})/2 with w = s - ⌊s⌋ + 2, read on
/// the principal branch: 0 for integer s, 1 otherwise.
pub fn gate(s: f64) -> f64 {
    if snap_integer(s).fract() == 0.0 {
        0.0
    } else {
        1.0
    }
}

/// 1/(e^{s-1} s^s), the scale on the α block.
pub fn prefactor(s: f64) -> f64 {
    (1.0 - s - s * s.ln()).exp()
}

fn check_s(s: f64) -> Result<f64> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(Error::Domain(format!("identity requires s > 1, got {s}")));
    }
    Ok(snap_integer(s))
}

/// Evaluates η_s(j) and α_s(j) jointly.
pub fn term_pair(s: f64, j: u64, cfg: &SummationConfig) -> Result<TermPair> {
    let s = check_s(s)?;
    cfg.validate()?;
    let x = s - j as f64;
    let eta_extra = 2.0 + s.ln() - j as f64 / s;
    let (psi_s1, _) = digamma_eval(s, cfg)?; // ψ(s+1)

    if nearest_pole(x, cfg.pole_guard).is_some() {
        // reflection path: joint evaluation of (1/Γ(x+1))·(C - ψ(x+1))
        let g = gamma_reference(-x)?.value;
        let (psi_negx, _) = digamma_eval(-x - 1.0, cfg)?; // ψ(-x)
        let (sin_px, cos_px) = sin_cos_pi(x);
        let joint = |c: f64| g * (-sin_px * (c + psi_s1 - psi_negx) / PI - cos_px);
        Ok(TermPair {
            s,
            j,
            eta: joint(eta_extra),
            alpha: joint(0.0),
            x,
            near_pole: true,
            eta_eval: None,
            alpha_eval: None,
        })
    } else {
        let (recip, product_eval, _) = recip_gamma_product_eval(x, cfg)?;
        let (psi_x1, digamma_x_eval) = digamma_eval(x, cfg)?;
        let d = psi_s1 - psi_x1;
        Ok(TermPair {
            s,
            j,
            eta: recip.value * (eta_extra + d),
            alpha: recip.value * d,
            x,
            near_pole: false,
            eta_eval: Some(product_eval),
            alpha_eval: Some(digamma_x_eval),
        })
    }
}

pub fn eta(s: f64, j: u64, cfg: &SummationConfig) -> Result<f64> {
    Ok(term_pair(s, j, cfg)?.eta)
}

pub fn alpha(s: f64, j: u64, cfg: &SummationConfig) -> Result<f64> {
    Ok(term_pair(s, j, cfg)?.alpha)
}

/// The two finite sums over j = 0..⌊s⌋, the α sum scaled by the prefactor.
pub fn lhs_finite_block(s: f64, cfg: &SummationConfig) -> Result<f64> {
    let s = check_s(s)?;
    let floor = s.floor() as u64;
    let mut eta_sum = CompensatedSum::new();
    let mut alpha_sum = CompensatedSum::new();
    for j in 0..=floor {
        let pair = term_pair(s, j, cfg)?;
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        eta_sum.add(sign * pair.eta / s.powi(j as i32));
        alpha_sum.add(-sign * pair.alpha);
    }
    Ok(eta_sum.value() + prefactor(s) * alpha_sum.value())
}

/// Partial sums of the combined gated tail (η tail plus prefactor-scaled α
/// tail) for j = ⌊s⌋+1 ..= j_max. Integer s yields an empty trace.
pub fn lhs_tail(s: f64, j_max: u64, cfg: &SummationConfig) -> Result<PartialSumTrace> {
    let s = check_s(s)?;
    if gate(s) == 0.0 {
        return Ok(PartialSumTrace::default());
    }
    let floor = s.floor() as u64;
    let pref = prefactor(s);
    let mut terms = Vec::new();
    for j in (floor + 1)..=j_max {
        let pair = term_pair(s, j, cfg)?;
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        terms.push(sign * pair.eta / s.powi(j as i32) - sign * pref * pair.alpha);
    }
    Ok(trace_partial_sums(terms))
}

/// Assembles the full measurement at one s: finite block, gated tail partial
/// sum, reference 1/Γ(s+1) and the residual. A diverged tail is reported,
/// not raised.
pub fn identity_residual(s: f64, j_max: u64, cfg: &SummationConfig) -> Result<IdentityReport> {
    let s = check_s(s)?;
    let finite_block = lhs_finite_block(s, cfg)?;
    let g = gate(s);
    let (tail_partial, tail_diverged) = if g == 0.0 {
        (None, false)
    } else {
        let trace = lhs_tail(s, j_max, cfg)?;
        (trace.last_partial_sum(), trace.diverged)
    };
    let lhs = match tail_partial {
        Some(t) if g != 0.0 => finite_block + t,
        _ => finite_block,
    };
    let rhs = 1.0 / gamma_reference(s + 1.0)?.value;
    Ok(IdentityReport {
        s,
        gate: g,
        finite_block,
        tail_partial,
        tail_diverged,
        lhs,
        rhs,
        residual: lhs - rhs,
        j_max,
        prefactor: prefactor(s),
    })
}

/// The integer-s inequality, evaluated exactly as printed: the α magnitude
/// is prefactor-scaled on the left side but not in the right-hand sum.
pub fn integer_inequality_check(s: u64, cfg: &SummationConfig) -> Result<InequalityReport> {
    if s < 2 {
        return Err(Error::Domain(format!("inequality requires integer s >= 2, got {s}")));
    }
    let sf = s as f64;
    let mut eta_sum = CompensatedSum::new();
    let mut alpha_sum = CompensatedSum::new();
    let mut abs_sum = CompensatedSum::new();
    for j in 0..=s {
        let pair = term_pair(sf, j, cfg)?;
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let pw = sf.powi(j as i32);
        eta_sum.add(sign * pair.eta / pw);
        alpha_sum.add(sign * pair.alpha);
        abs_sum.add((pair.eta.abs() + pair.alpha.abs()) / pw);
    }
    let left_expr = eta_sum.value().abs() - prefactor(sf) * alpha_sum.value().abs();
    let middle = 1.0 / gamma_reference(sf + 1.0)?.value;
    let right_expr = abs_sum.value();
    Ok(InequalityReport {
        s,
        left_expr,
        middle,
        right_expr,
        left_holds: left_expr <= middle,
        right_holds: middle < right_expr,
    })
}

/// Traces one term family for j = 0..=j_max.
pub fn trace_alternating(
    family: TermFamily,
    s: f64,
    j_max: u64,
    cfg: &SummationConfig,
) -> Result<PartialSumTrace> {
    let s = check_s(s)?;
    let mut terms = Vec::with_capacity(j_max as usize + 1);
    for j in 0..=j_max {
        let pair = term_pair(s, j, cfg)?;
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let t = match family {
            TermFamily::Eta => sign * pair.eta / s.powi(j as i32),
            TermFamily::Alpha => -sign * pair.alpha,
        };
        terms.push(t);
        if !t.is_finite() {
            break;
        }
    }
    Ok(trace_partial_sums(terms))
}

/// Combined-series trace from j = 0, used by the corollary reproductions:
/// v_j = (-1)^j η/s^j + prefactor·(-1)^{j+1} α.
pub fn trace_combined(s: f64, j_max: u64, cfg: &SummationConfig) -> Result<PartialSumTrace> {
    let s = check_s(s)?;
    let pref = prefactor(s);
    let mut terms = Vec::with_capacity(j_max as usize + 1);
    for j in 0..=j_max {
        let pair = term_pair(s, j, cfg)?;
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        terms.push(sign * pair.eta / s.powi(j as i32) - sign * pref * pair.alpha);
    }
    Ok(trace_partial_sums(terms))
}

#[cfg(test)]
mod tests {
    use super::*;

    const LN_2: f64 = std::f64::consts::LN_2;

    fn cfg() -> SummationConfig {
        SummationConfig::default()
    }

    #[test]
    fn gate_dichotomy() {
        assert_eq!(gate(2.0), 0.0);
        assert_eq!(gate(1.5), 1.0);
        assert_eq!(gate(5.0 - 1e-15), 0.0); // snaps to 5
        assert_eq!(gate(2.5), 1.0);
        assert_eq!(gate(std::f64::consts::E), 1.0);
    }

    #[test]
    fn eta_small_integer_values() {
        let c = cfg();
        // s=2, j=0: (1/Γ(3))(2 + log 2)
        let e0 = eta(2.0, 0, &c).unwrap();
        assert!((e0 - (2.0 + LN_2) / 2.0).abs() < 1e-9, "{e0}");
        // s=2, j=2: 1/Γ(1) = 1, ψ(3)-ψ(1) = 3/2
        let e2 = eta(2.0, 2, &c).unwrap();
        assert!((e2 - (2.5 + LN_2)).abs() < 1e-9, "{e2}");
    }

    #[test]
    fn alpha_zero_law() {
        let c = cfg();
        for &s in &[1.5, 2.0, 3.25, 7.7] {
            assert!(alpha(s, 0, &c).unwrap().abs() <= 1e-12);
        }
    }

    #[test]
    fn alpha_small_integer_value() {
        // s=2, j=1: 1/Γ(2) = 1, ψ(3)-ψ(2) = 1/2
        let a = alpha(2.0, 1, &cfg()).unwrap();
        assert!((a - 0.5).abs() < 1e-9, "{a}");
    }

    #[test]
    fn decomposition_identity() {
        let c = cfg();
        for &s in &[1.5, 2.0, 2.5, std::f64::consts::E, 4.2] {
            for j in 0..=10u64 {
                let x = s - j as f64;
                if nearest_pole(x, c.pole_guard).is_some() {
                    continue;
                }
                let pair = term_pair(s, j, &c).unwrap();
                let recip = crate::special::recip_gamma_product(x, &c).unwrap().value;
                let want = recip * (2.0 + s.ln() - j as f64 / s);
                assert!(
                    (pair.eta - pair.alpha - want).abs() < 1e-9,
                    "s={s} j={j}: {}",
                    pair.eta - pair.alpha - want
                );
            }
        }
    }

    #[test]
    fn residue_limits_bracket() {
        // α at x = -k ± ε approaches (-1)^{k-1}(k-1)!, first order in ε
        let c = cfg();
        for k in 1..=3u64 {
            let limit = if k % 2 == 1 { 1.0 } else { -1.0 }
                * (1..k).map(|i| i as f64).product::<f64>().max(1.0);
            for &eps in &[1e-2, 1e-3] {
                let j = k + 2;
                let dev_plus = (alpha(2.0 + eps, j, &c).unwrap() - limit).abs();
                let dev_minus = (alpha(2.0 - eps, j, &c).unwrap() - limit).abs();
                let dev = dev_plus.max(dev_minus);
                assert!(dev < 10.0 * eps * limit.abs().max(1.0), "k={k} eps={eps} dev={dev}");
                // halving eps roughly halves the deviation
                let dev_half = (alpha(2.0 + eps / 2.0, j, &c).unwrap() - limit).abs();
                assert!(dev_half <= dev_plus / 2.0 * 1.5 + 1e-12, "k={k} eps={eps}");
            }
        }
    }

    #[test]
    fn finite_block_s2_hand_value() {
        // independent hand oracle: block = (2.5 + ln 2)/4 - 1/(4e)
        let want = (2.5 + LN_2) / 4.0 - 1.0 / (4.0 * std::f64::consts::E);
        let got = lhs_finite_block(2.0, &cfg()).unwrap();
        assert!((got - want).abs() < 1e-9, "got {got} want {want}");
    }

    #[test]
    fn finite_block_s3_hand_value() {
        // ψ(4)-ψ(4-j) closed forms: 0, 1/3, 5/6, 11/6
        let ln3 = 3f64.ln();
        // η block: j=0 and j=1 cancel, leaving the j=2 and j=3 terms
        let eta_block = (2.0 + ln3 + 1.0 / 6.0) / 9.0 - (2.0 + ln3 + 5.0 / 6.0) / 27.0;
        let alpha_block = 1.0 / 6.0 - 5.0 / 6.0 + 11.0 / 6.0; // Σ (-1)^{j+1} α_j = 7/6
        let want = eta_block + alpha_block * (1.0 - 3.0 - 3.0 * ln3).exp();
        let got = lhs_finite_block(3.0, &cfg()).unwrap();
        assert!((got - want).abs() < 1e-9, "got {got} want {want}");
    }

    #[test]
    fn finite_block_alpha_j0_contributes_nothing() {
        // removing the j=0 α term changes nothing: α_s(0) = 0
        let c = cfg();
        let a = alpha(4.2, 0, &c).unwrap();
        assert_eq!(a, 0.0);
    }

    #[test]
    fn tail_divergence_non_integer() {
        let c = cfg();
        for &s in &[1.5, 5.0 / 3.0] {
            let tr = lhs_tail(s, 30, &c).unwrap();
            assert!(tr.diverged, "s={s}");
            assert!(tr.first_growth_index.is_some(), "s={s}");
        }
        let tr = lhs_tail(2.0, 30, &c).unwrap();
        assert!(tr.is_empty());
        assert!(!tr.diverged);
    }

    #[test]
    fn residual_s2() {
        let rep = identity_residual(2.0, 30, &cfg()).unwrap();
        assert_eq!(rep.gate, 0.0);
        assert!((rep.rhs - 0.5).abs() < 1e-12);
        assert_eq!(rep.lhs, rep.finite_block);
        // residual = (0.5 + ln 2)/4 - 1/(4e), re-derived from small-integer ψ values
        let want = (0.5 + LN_2) / 4.0 - 1.0 / (4.0 * std::f64::consts::E);
        assert!((rep.residual - want).abs() < 1e-9, "{} vs {}", rep.residual, want);
    }

    #[test]
    fn residual_corollary_references() {
        let c = cfg();
        let r32 = identity_residual(1.5, 30, &c).unwrap();
        assert!((r32.rhs - 0.752_252_778_063_675_0).abs() < 1e-11);
        assert!(r32.tail_diverged);
        let r53 = identity_residual(5.0 / 3.0, 30, &c).unwrap();
        assert!((r53.rhs - 0.664_639_300_459_483_5).abs() < 1e-11);
    }

    #[test]
    fn inequality_s2() {
        let rep = integer_inequality_check(2, &cfg()).unwrap();
        assert!((rep.middle - 0.5).abs() < 1e-12);
        assert!(rep.right_holds);
        assert!(rep.right_expr > rep.middle);
    }

    #[test]
    fn trace_families() {
        let c = cfg();
        let tr = trace_alternating(TermFamily::Eta, 1.5, 30, &c).unwrap();
        assert!(tr.diverged);
        assert!(tr.first_growth_index.is_some());
        let tr = trace_alternating(TermFamily::Eta, 2.0, 2, &c).unwrap();
        assert_eq!(tr.terms.len(), 3);
        assert!(!tr.diverged);
        let tr = trace_alternating(TermFamily::Alpha, 3.0, 0, &c).unwrap();
        assert_eq!(tr.terms.len(), 1);
        assert!(!tr.diverged);
    }

    #[test]
    fn finite_block_continuity_within_interval() {
        let c = cfg();
        let a = lhs_finite_block(2.5 - 1e-7, &c).unwrap();
        let b = lhs_finite_block(2.5 + 1e-7, &c).unwrap();
        assert!((a - b).abs() < 1e-4, "jump inside (2,3): {}", (a - b).abs());
        // and a genuine jump across the integer where ⌊s⌋ increments
        let lo = lhs_finite_block(3.0 - 1e-9, &c).unwrap();
        let hi = lhs_finite_block(3.0 + 1e-9, &c).unwrap();
        assert!((lo - hi).abs() > 1e-3, "expected jump at s=3, got {}", (lo - hi).abs());
    }
}
