//! Replay of the F(s) construction behind the identity.
//!
//! F(s) = ∫₁ˢ eᵗ tˢ dt. Differentiating under the integral gives
//! F'(s) = eˢ sˢ + ∫₁ˢ eᵗ tˢ log t dt; the second (Leibniz) term is what the
//! closed-form derivation drops, and `leibniz_report` measures it.

use crate::identity::{gate, snap_integer};
use crate::quadrature::adaptive_quad;
use crate::special::{log_gamma_reference, recip_gamma_product};
use crate::summation::{trace_partial_sums, PartialSumTrace, SummationConfig};
use crate::{CompensatedSum, Error, Result};

/// One row of the derivation measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivationReport {
    pub s: f64,
    pub f_quad: f64,
    pub f_closed: f64,
    pub closed_minus_quad: f64,
    pub df_numeric: f64,
    /// The claimed derivative eˢ sˢ (boundary term only, no Leibniz integral).
    pub claimed_df: f64,
    /// ∫₁ˢ eᵗ tˢ log t dt, the dropped Leibniz term.
    pub g_correction: f64,
    /// df_numeric - claimed_df - g_correction.
    pub leibniz_residual: f64,
    /// Divergence flag of the gated closed-form tail, when active.
    pub closed_tail_diverged: bool,
}

/// Closed-form evaluation with its gated-tail status.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormEval {
    pub value: f64,
    pub finite_block: f64,
    pub tail_partial: Option<f64>,
    pub tail_diverged: bool,
    pub trace: Option<PartialSumTrace>,
}

fn check_s(s: f64, lo: f64) -> Result<()> {
    if !(s > lo) || !s.is_finite() {
        return Err(Error::Domain(format!("requires s > {lo}, got {s}")));
    }
    Ok(())
}

fn exp_power_integral(s: f64, log_weight: bool) -> f64 {
    // integrand e^t t^s (log t), increasing on [1, s]; budget its tolerance
    // off the right-endpoint magnitude
    let rough = (s - 1.0).max(f64::MIN_POSITIVE) * (s + s * s.ln()).exp();
    let f = |t: f64| {
        let base = (t + s * t.ln()).exp();
        if log_weight {
            base * t.ln()
        } else {
            base
        }
    };
    adaptive_quad(&f, 1.0, s, 1e-12 * rough).value
}

/// F(s) = ∫₁ˢ eᵗ tˢ dt by adaptive quadrature.
pub fn f_quadrature(s: f64) -> Result<f64> {
    check_s(s, 1.0)?;
    Ok(exp_power_integral(s, false))
}

/// G(s) = ∫₁ˢ eᵗ tˢ log t dt, the Leibniz term.
pub fn g_logweight_quadrature(s: f64) -> Result<f64> {
    check_s(s, 1.0)?;
    Ok(exp_power_integral(s, true))
}

// Γ(s+1)/Γ(s+1-j) in the regime-appropriate form.
fn gamma_ratio(s: f64, j: u64, floor: u64, cfg: &SummationConfig) -> Result<f64> {
    if j <= floor {
        // falling product s(s-1)...(s-j+1), exact for the finite block
        let mut p = 1.0f64;
        for i in 0..j {
            p *= s - i as f64;
        }
        Ok(p)
    } else if s + 1.0 - j as f64 > 0.0 {
        Ok((log_gamma_reference(s + 1.0)? - log_gamma_reference(s + 1.0 - j as f64)?).exp())
    } else {
        let g_s1 = log_gamma_reference(s + 1.0)?;
        let recip = recip_gamma_product(s - j as f64, cfg)?;
        Ok(recip.sign as f64 * (g_s1 + recip.log_value).exp())
    }
}

/// The closed form the derivation asserts for F(s): two finite sums over
/// j = 0..⌊s⌋ plus the gated tail blocks truncated at j_max.
pub fn f_closed_form(s: f64, j_max: u64, cfg: &SummationConfig) -> Result<ClosedFormEval> {
    check_s(s, 1.0)?;
    cfg.validate()?;
    let s = snap_integer(s);
    let floor = s.floor() as u64;
    let e = std::f64::consts::E;

    let term = |j: u64, ratio: f64| {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        // e^s s^{s-j} ratio - e ratio, with the alternating signs attached
        sign * (s + (s - j as f64) * s.ln()).exp() * ratio - sign * e * ratio
    };

    let mut block = CompensatedSum::new();
    for j in 0..=floor {
        block.add(term(j, gamma_ratio(s, j, floor, cfg)?));
    }
    let finite_block = block.value();

    if gate(s) == 0.0 {
        return Ok(ClosedFormEval {
            value: finite_block,
            finite_block,
            tail_partial: None,
            tail_diverged: false,
            trace: None,
        });
    }

    let mut tail_terms = Vec::new();
    for j in (floor + 1)..=j_max {
        tail_terms.push(term(j, gamma_ratio(s, j, floor, cfg)?));
    }
    let trace = trace_partial_sums(tail_terms);
    let tail_partial = trace.last_partial_sum();
    let tail_diverged = trace.diverged;
    Ok(ClosedFormEval {
        value: finite_block + tail_partial.unwrap_or(0.0),
        finite_block,
        tail_partial,
        tail_diverged,
        trace: Some(trace),
    })
}

/// Central difference (F(s+h) - F(s-h)) / (2h).
pub fn f_derivative_numeric(s: f64, h: f64) -> Result<f64> {
    if !(h >= 1e-6 && h <= 1e-2) {
        return Err(Error::Domain(format!("step h must lie in [1e-6, 1e-2], got {h}")));
    }
    if !(s - h > 1.0) {
        return Err(Error::Domain(format!("requires s - h > 1, got s={s}, h={h}")));
    }
    Ok((f_quadrature(s + h)? - f_quadrature(s - h)?) / (2.0 * h))
}

/// Assembles the full derivation row at one s, with a Richardson pairing
/// (h, h/2) for the numeric derivative.
pub fn leibniz_report(s: f64, j_max: u64, cfg: &SummationConfig) -> Result<DerivationReport> {
    check_s(s, 1.0 + 1e-3)?;
    let h = (1e-4 * s.max(1.0)).clamp(2e-6, 1e-2);
    let d_h = f_derivative_numeric(s, h)?;
    let d_h2 = f_derivative_numeric(s, h / 2.0)?;
    let df_numeric = (4.0 * d_h2 - d_h) / 3.0;

    let f_quad = f_quadrature(s)?;
    let closed = f_closed_form(s, j_max, cfg)?;
    let claimed_df = (s + s * s.ln()).exp();
    let g_correction = g_logweight_quadrature(s)?;
    Ok(DerivationReport {
        s,
        f_quad,
        f_closed: closed.value,
        closed_minus_quad: closed.value - f_quad,
        df_numeric,
        claimed_df,
        g_correction,
        leibniz_residual: df_numeric - claimed_df - g_correction,
        closed_tail_diverged: closed.tail_diverged,
    })
}
