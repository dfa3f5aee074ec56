use serde_json::{json, Value};

use gammascope_core::identity::{
    self, IdentityReport, TermFamily,
};
use gammascope_core::special::{
    digamma, euler_gamma, gamma_reference, log_gamma_reference, recip_gamma_product,
    reflection_residual,
};
use gammascope_core::summation::{PartialSumTrace, SummationConfig};
use gammascope_core::{derivation, Error as CoreError};

use crate::output::{fmt_f64, fmt_opt, Emitter};
use crate::{Cli, CliError, Cmd, Corollary, Family};

const EULER_GAMMA_REFERENCE: f64 = 0.577_215_664_901_532_9;
const MAX_ROWS: f64 = 1e6;

fn summation_config(cli: &Cli) -> Result<SummationConfig, CliError> {
    let cfg = SummationConfig {
        abs_tol: cli.abs_tol,
        rel_tol: cli.abs_tol,
        max_terms: cli.max_terms,
        pole_guard: cli.pole_guard,
    };
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(cfg)
}

fn numerical(e: CoreError) -> CliError {
    match e {
        CoreError::Domain(_) | CoreError::InvalidConfig(_) => CliError::Usage(e.to_string()),
        _ => CliError::Numerical(e.to_string()),
    }
}

fn config_echo(cli: &Cli, cmd: Value) -> Value {
    json!({
        "abs_tol": cli.abs_tol,
        "max_terms": cli.max_terms,
        "j_max": cli.j_max,
        "format": match cli.format { crate::output::Format::Csv => "csv", crate::output::Format::Json => "json" },
        "pole_guard": cli.pole_guard,
        "seedless": cli.seedless,
        "command": cmd,
    })
}

fn grid(start: f64, end: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if !(start > 1.0) {
        return Err(CliError::Usage(format!("s_start must be > 1, got {start}")));
    }
    if !(end >= start) {
        return Err(CliError::Usage(format!("s_end {end} must be >= s_start {start}")));
    }
    if !(step > 0.0) {
        return Err(CliError::Usage(format!("s_step must be > 0, got {step}")));
    }
    if (end - start) / step > MAX_ROWS {
        return Err(CliError::Usage("grid exceeds 1e6 rows".into()));
    }
    let mut out = Vec::new();
    let mut k = 0u64;
    loop {
        let s = start + k as f64 * step;
        if s > end + step * 1e-9 {
            break;
        }
        out.push(s);
        k += 1;
    }
    Ok(out)
}

pub fn run(cli: &Cli, emitter: &Emitter) -> Result<(), CliError> {
    let cfg = summation_config(cli)?;
    match &cli.cmd {
        Cmd::Selftest => selftest(cli, emitter, &cfg),
        Cmd::Gamma { s } => gamma_cmd(cli, emitter, *s),
        Cmd::Digamma { x } => digamma_cmd(cli, emitter, &cfg, *x),
        Cmd::Eta { s, j } => term_cmd(cli, emitter, &cfg, *s, *j, true),
        Cmd::Alpha { s, j } => term_cmd(cli, emitter, &cfg, *s, *j, false),
        Cmd::Residual { s_start, s_end, s_step } => {
            residual_cmd(cli, emitter, &cfg, *s_start, *s_end, *s_step)
        }
        Cmd::Trace { s, family } => trace_cmd(cli, emitter, &cfg, *s, *family),
        Cmd::Corollary { which } => corollary_cmd(cli, emitter, &cfg, *which),
        Cmd::Inequality { s_max } => inequality_cmd(cli, emitter, &cfg, *s_max),
        Cmd::Leibniz { s_start, s_end, s_step } => {
            leibniz_cmd(cli, emitter, &cfg, *s_start, *s_end, *s_step)
        }
    }
}

struct Check {
    name: &'static str,
    pass: bool,
    max_err: f64,
}

fn selftest(cli: &Cli, emitter: &Emitter, cfg: &SummationConfig) -> Result<(), CliError> {
    let mut checks: Vec<Check> = Vec::new();
    let mut findings: Vec<String> = Vec::new();

    // gamma digits at the requested tolerance
    match euler_gamma(cli.abs_tol) {
        Ok(g) => {
            let err = (g.value - EULER_GAMMA_REFERENCE).abs();
            checks.push(Check {
                name: "euler-gamma-digits",
                pass: err <= cli.abs_tol.max(1e-12),
                max_err: err,
            });
        }
        Err(e) => {
            findings.push(format!("euler-gamma: {e}"));
            checks.push(Check { name: "euler-gamma-digits", pass: false, max_err: f64::NAN });
        }
    }

    // functional equation
    let mut max_err = 0.0f64;
    let mut ok = true;
    for &s in &[0.5, 1.3, 2.7, 6.1] {
        match (gamma_reference(s + 1.0), gamma_reference(s)) {
            (Ok(a), Ok(b)) => {
                let err = ((a.value - s * b.value) / a.value).abs();
                max_err = max_err.max(err);
                ok &= err < 1e-11 && err.is_finite();
            }
            _ => ok = false,
        }
    }
    checks.push(Check { name: "functional-equation", pass: ok, max_err });

    // reflection formula
    let mut max_err = 0.0f64;
    let mut ok = true;
    for i in 1..=20 {
        let x = i as f64 / 21.0;
        match reflection_residual(x) {
            Ok(r) => {
                max_err = max_err.max(r.abs());
                ok &= r.abs() <= 1e-10 && r.is_finite();
            }
            Err(e) => {
                ok = false;
                findings.push(format!("reflection x={x}: {e}"));
            }
        }
    }
    checks.push(Check { name: "reflection", pass: ok, max_err });

    // product vs quadrature oracle
    let mut max_err = 0.0f64;
    let mut ok = true;
    for i in 0..50 {
        let x = -0.9 + i as f64 * 10.9 / 49.0;
        match (recip_gamma_product(x, cfg), gamma_reference(x + 1.0)) {
            (Ok(p), Ok(g)) => {
                let err = (p.value * g.value - 1.0).abs();
                max_err = max_err.max(err);
                ok &= err <= 1e-8 && err.is_finite();
            }
            (Err(e), _) | (_, Err(e)) => {
                ok = false;
                findings.push(format!("product x={x}: {e}"));
            }
        }
    }
    checks.push(Check { name: "product-oracle", pass: ok, max_err });

    // digamma vs central difference of log gamma
    let mut max_err = 0.0f64;
    let mut ok = true;
    let h = 1e-5;
    for &x in &[0.5, 1.0, 2.0, 5.0] {
        let res = (|| -> Result<f64, CoreError> {
            let psi = digamma(x, cfg)?;
            let d = (log_gamma_reference(x + 1.0 + h)? - log_gamma_reference(x + 1.0 - h)?)
                / (2.0 * h);
            Ok((psi - d).abs())
        })();
        match res {
            Ok(err) => {
                max_err = max_err.max(err);
                ok &= err <= 1e-6 && err.is_finite();
            }
            Err(e) => {
                ok = false;
                findings.push(format!("digamma x={x}: {e}"));
            }
        }
    }
    checks.push(Check { name: "digamma-derivative", pass: ok, max_err });

    let all_pass = checks.iter().all(|c| c.pass);
    let rows: Vec<Vec<String>> = checks
        .iter()
        .map(|c| vec![c.name.into(), if c.pass { "pass" } else { "fail" }.into(), fmt_f64(c.max_err)])
        .collect();
    let json_rows: Vec<Value> = checks
        .iter()
        .map(|c| json!({"check": c.name, "pass": c.pass, "max_err": c.max_err}))
        .collect();
    emitter
        .emit(
            config_echo(cli, json!({"name": "selftest"})),
            &["check", "pass", "max_err"],
            &rows,
            json_rows,
            &findings,
        )
        .map_err(|e| CliError::Usage(e.to_string()))?;
    if all_pass {
        Ok(())
    } else {
        Err(CliError::Numerical("selftest failed".into()))
    }
}

fn gamma_cmd(cli: &Cli, emitter: &Emitter, s: f64) -> Result<(), CliError> {
    let g = gamma_reference(s).map_err(numerical)?;
    if !g.value.is_finite() {
        return Err(CliError::Numerical(format!("non-finite Gamma({s})")));
    }
    emitter
        .emit(
            config_echo(cli, json!({"name": "gamma", "s": s})),
            &["s", "value", "log_value", "sign", "method"],
            &[vec![
                fmt_f64(s),
                fmt_f64(g.value),
                fmt_f64(g.log_value),
                g.sign.to_string(),
                g.method.as_str().into(),
            ]],
            vec![json!({
                "s": s, "value": g.value, "log_value": g.log_value,
                "sign": g.sign, "method": g.method.as_str(),
            })],
            &[],
        )
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn digamma_cmd(cli: &Cli, emitter: &Emitter, cfg: &SummationConfig, x: f64) -> Result<(), CliError> {
    let v = digamma(x, cfg).map_err(numerical)?;
    if !v.is_finite() {
        return Err(CliError::Numerical(format!("non-finite psi({})", x + 1.0)));
    }
    emitter
        .emit(
            config_echo(cli, json!({"name": "digamma", "x": x})),
            &["x", "value"],
            &[vec![fmt_f64(x), fmt_f64(v)]],
            vec![json!({"x": x, "value": v})],
            &[],
        )
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn term_cmd(
    cli: &Cli,
    emitter: &Emitter,
    cfg: &SummationConfig,
    s: f64,
    j: u64,
    want_eta: bool,
) -> Result<(), CliError> {
    let pair = identity::term_pair(s, j, cfg).map_err(numerical)?;
    let value = if want_eta { pair.eta } else { pair.alpha };
    if !value.is_finite() {
        return Err(CliError::Numerical(format!("non-finite term at s={s}, j={j}")));
    }
    let name = if want_eta { "eta" } else { "alpha" };
    emitter
        .emit(
            config_echo(cli, json!({"name": name, "s": s, "j": j})),
            &["s", "j", "x", "value", "near_pole"],
            &[vec![
                fmt_f64(s),
                j.to_string(),
                fmt_f64(pair.x),
                fmt_f64(value),
                pair.near_pole.to_string(),
            ]],
            vec![json!({
                "s": s, "j": j, "x": pair.x, "value": value, "near_pole": pair.near_pole,
            })],
            &[],
        )
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn residual_row_csv(r: &IdentityReport, terms_capped: bool) -> Vec<String> {
    vec![
        fmt_f64(r.s),
        fmt_f64(r.gate),
        fmt_f64(r.finite_block),
        fmt_opt(r.tail_partial),
        r.tail_diverged.to_string(),
        fmt_f64(r.lhs),
        fmt_f64(r.rhs),
        fmt_f64(r.residual),
        r.j_max.to_string(),
        terms_capped.to_string(),
    ]
}

fn residual_cmd(
    cli: &Cli,
    emitter: &Emitter,
    cfg: &SummationConfig,
    s_start: f64,
    s_end: f64,
    s_step: f64,
) -> Result<(), CliError> {
    let header = [
        "s",
        "gate",
        "finite_block",
        "tail_partial",
        "tail_diverged",
        "lhs",
        "rhs",
        "residual",
        "j_max",
        "terms_capped",
    ];
    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    let mut findings = Vec::new();
    for s in grid(s_start, s_end, s_step)? {
        match identity::identity_residual(s, cli.j_max, cfg) {
            Ok(r) => {
                if r.tail_diverged {
                    findings.push(format!("s={s}: tail diverged at j_max={}", r.j_max));
                }
                rows.push(residual_row_csv(&r, false));
                json_rows.push(json!({
                    "s": r.s, "gate": r.gate, "finite_block": r.finite_block,
                    "tail_partial": r.tail_partial, "tail_diverged": r.tail_diverged,
                    "lhs": r.lhs, "rhs": r.rhs, "residual": r.residual,
                    "j_max": r.j_max, "terms_capped": false,
                }));
            }
            Err(e @ CoreError::CapExceeded { .. }) => {
                findings.push(format!("s={s}: {e}"));
                rows.push(vec![
                    fmt_f64(s),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    cli.j_max.to_string(),
                    "true".into(),
                ]);
                json_rows.push(json!({"s": s, "j_max": cli.j_max, "terms_capped": true}));
            }
            Err(e) => findings.push(format!("s={s}: {e}")),
        }
    }
    emitter
        .emit(
            config_echo(
                cli,
                json!({"name": "residual", "s_start": s_start, "s_end": s_end, "s_step": s_step}),
            ),
            &header,
            &rows,
            json_rows,
            &findings,
        )
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn trace_rows(trace: &PartialSumTrace, j_offset: u64) -> (Vec<Vec<String>>, Vec<Value>) {
    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    for (i, (&t, &p)) in trace.terms.iter().zip(&trace.partial_sums).enumerate() {
        // printed flag: did this term grow relative to its predecessor
        let grew = i > 0 && trace.ratio_flags[i - 1];
        let j = j_offset + i as u64;
        rows.push(vec![j.to_string(), fmt_f64(t), fmt_f64(p), grew.to_string()]);
        json_rows.push(json!({"j": j, "term": t, "partial_sum": p, "ratio_flag": grew}));
    }
    (rows, json_rows)
}

fn trace_findings(trace: &PartialSumTrace, label: &str, findings: &mut Vec<String>) {
    if trace.diverged {
        findings.push(format!(
            "{label}: diverged=true, first_growth_index={}",
            trace
                .first_growth_index
                .map(|i| i.to_string())
                .unwrap_or_else(|| "none".into())
        ));
    } else {
        findings.push(format!("{label}: diverged=false"));
    }
    if let Some(i) = trace.overflowed_at {
        findings.push(format!("{label}: term overflowed at index {i}"));
    }
}

fn trace_cmd(
    cli: &Cli,
    emitter: &Emitter,
    cfg: &SummationConfig,
    s: f64,
    family: Family,
) -> Result<(), CliError> {
    let fam = match family {
        Family::Eta => TermFamily::Eta,
        Family::Alpha => TermFamily::Alpha,
    };
    let trace = identity::trace_alternating(fam, s, cli.j_max, cfg).map_err(numerical)?;
    let (rows, json_rows) = trace_rows(&trace, 0);
    let mut findings = Vec::new();
    trace_findings(&trace, &format!("s={s}"), &mut findings);
    emitter
        .emit(
            config_echo(cli, json!({"name": "trace", "s": s, "family": format!("{fam:?}").to_lowercase()})),
            &["j", "term", "partial_sum", "ratio_flag"],
            &rows,
            json_rows,
            &findings,
        )
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn corollary_cmd(
    cli: &Cli,
    emitter: &Emitter,
    cfg: &SummationConfig,
    which: Corollary,
) -> Result<(), CliError> {
    let (name, s) = match which {
        Corollary::ThreeHalves => ("three_halves", 1.5),
        Corollary::FiveThirds => ("five_thirds", 5.0 / 3.0),
    };
    let reference = 1.0 / gamma_reference(s + 1.0).map_err(numerical)?.value;
    let trace = identity::trace_combined(s, cli.j_max, cfg).map_err(numerical)?;
    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    for (i, (&t, &p)) in trace.terms.iter().zip(&trace.partial_sums).enumerate() {
        rows.push(vec![
            i.to_string(),
            fmt_f64(t),
            fmt_f64(p),
            fmt_f64(p - reference),
        ]);
        json_rows.push(json!({"j": i, "term": t, "partial_sum": p, "gap": p - reference}));
    }
    let mut findings = vec![format!("reference 1/Gamma(s+1) = {}", fmt_f64(reference))];
    trace_findings(&trace, name, &mut findings);
    emitter
        .emit(
            config_echo(cli, json!({"name": "corollary", "which": name, "reference": reference})),
            &["j", "term", "partial_sum", "gap"],
            &rows,
            json_rows,
            &findings,
        )
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn inequality_cmd(
    cli: &Cli,
    emitter: &Emitter,
    cfg: &SummationConfig,
    s_max: u64,
) -> Result<(), CliError> {
    if s_max < 2 {
        return Err(CliError::Usage(format!("s_max must be >= 2, got {s_max}")));
    }
    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    let mut findings =
        vec!["right-hand sum carries no 1/(e^{s-1}s^s) prefactor, as printed".to_string()];
    for s in 2..=s_max {
        let r = identity::integer_inequality_check(s, cfg).map_err(numerical)?;
        if !r.left_holds {
            findings.push(format!("s={s}: left inequality fails numerically"));
        }
        if !r.right_holds {
            findings.push(format!("s={s}: right inequality fails numerically"));
        }
        rows.push(vec![
            s.to_string(),
            fmt_f64(r.left_expr),
            fmt_f64(r.middle),
            fmt_f64(r.right_expr),
            r.left_holds.to_string(),
            r.right_holds.to_string(),
        ]);
        json_rows.push(json!({
            "s": s, "left_expr": r.left_expr, "middle": r.middle,
            "right_expr": r.right_expr, "left_holds": r.left_holds,
            "right_holds": r.right_holds,
        }));
    }
    emitter
        .emit(
            config_echo(cli, json!({"name": "inequality", "s_max": s_max})),
            &["s", "left_expr", "middle", "right_expr", "left_holds", "right_holds"],
            &rows,
            json_rows,
            &findings,
        )
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn leibniz_cmd(
    cli: &Cli,
    emitter: &Emitter,
    cfg: &SummationConfig,
    s_start: f64,
    s_end: f64,
    s_step: f64,
) -> Result<(), CliError> {
    if !(s_start > 1.001) {
        return Err(CliError::Usage(format!("leibniz requires s_start > 1.001, got {s_start}")));
    }
    let header = [
        "s",
        "F_quad",
        "F_closed",
        "closed_minus_quad",
        "dF_numeric",
        "claimed_dF",
        "G_correction",
        "leibniz_residual",
    ];
    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    let mut findings = Vec::new();
    for s in grid(s_start, s_end, s_step)? {
        match derivation::leibniz_report(s, cli.j_max, cfg) {
            Ok(r) => {
                if r.closed_tail_diverged {
                    findings.push(format!("s={s}: gated closed-form tail diverged"));
                }
                rows.push(vec![
                    fmt_f64(r.s),
                    fmt_f64(r.f_quad),
                    fmt_f64(r.f_closed),
                    fmt_f64(r.closed_minus_quad),
                    fmt_f64(r.df_numeric),
                    fmt_f64(r.claimed_df),
                    fmt_f64(r.g_correction),
                    fmt_f64(r.leibniz_residual),
                ]);
                json_rows.push(json!({
                    "s": r.s, "F_quad": r.f_quad, "F_closed": r.f_closed,
                    "closed_minus_quad": r.closed_minus_quad,
                    "dF_numeric": r.df_numeric, "claimed_dF": r.claimed_df,
                    "G_correction": r.g_correction, "leibniz_residual": r.leibniz_residual,
                }));
            }
            Err(e) => findings.push(format!("s={s}: {e}")),
        }
    }
    emitter
        .emit(
            config_echo(
                cli,
                json!({"name": "leibniz", "s_start": s_start, "s_end": s_end, "s_step": s_step}),
            ),
            &header,
            &rows,
            json_rows,
            &findings,
        )
        .map_err(|e| CliError::Usage(e.to_string()))
}
