//! One function per subcommand. Each returns a JSON value plus a plain-text
//! rendering; the caller picks one.

use std::time::Instant;

use ciani_core::ciani::{classify_matrix, x_invariant};
use ciani_core::klein::{eighteen_from_table, verify_klein_corollary, verify_main_identity, MainIdentityReport};
use ciani_core::numeric::{BigComplex, Ctx};
use ciani_core::rational::to_fraction_string;
use ciani_core::resultant::discriminant_quartic;
use ciani_core::symplectic::{enumerate_max_isotropic, Subgroup, ThetaCharacteristic};
use ciani_core::theta::{chi_k, igusa_classify, sigma140, theta_null, theta_table, IgusaLabel, IgusaReport};
use serde_json::{json, Value};

use crate::config::{OutputFormat, RunConfig};
use crate::error::CliError;
use crate::formats::{
    ciani_to_json, complex_to_json, log2_string, parse_ciani, parse_complex_list, parse_form_input, parse_symplectic, read_input, TauSpec,
};

/// What a command produced.
pub struct Outcome {
    pub json: Value,
    pub text: String,
    /// Format used when none was requested.
    pub default_format: OutputFormat,
    /// 0 or 3 (Indeterminate).
    pub exit: u8,
}

impl Outcome {
    fn json(json: Value, text: String) -> Self {
        Self { json, text, default_format: OutputFormat::Json, exit: 0 }
    }
}

fn elapsed_ms(start: Instant) -> String {
    format!("{:.1}", start.elapsed().as_secs_f64() * 1e3)
}

pub fn disc(form: &str) -> Result<Outcome, CliError> {
    let q = parse_form_input(&read_input(form)?)?;
    let d = discriminant_quartic(&q)?;
    Ok(Outcome {
        json: json!({ "disc": to_fraction_string(&d) }),
        // Integers print bare, anything else as num/den.
        text: d.to_string(),
        default_format: OutputFormat::Text,
        exit: 0,
    })
}

pub fn classify(matrix: &str) -> Result<Outcome, CliError> {
    let m = parse_ciani(&read_input(matrix)?)?;
    let c = classify_matrix(&m)?;
    let twist_d = c.twist.as_ref().map(|t| to_fraction_string(&t.d));
    let mut json = json!({
        "T": to_fraction_string(&c.t),
        "square": c.square,
        "label": c.label.as_str(),
        "twist_d": twist_d,
    });
    if let Some(t) = &c.twist {
        json["twist_matrix"] = ciani_to_json(&t.matrix);
    }
    let text = format!(
        "label: {}\nT: {}\nsquare: {}{}",
        c.label.as_str(),
        c.t,
        c.square,
        c.twist.as_ref().map(|t| format!("\ntwist d: {}", t.d)).unwrap_or_default()
    );
    Ok(Outcome::json(json, text))
}

struct TauInput {
    spec: TauSpec,
    cfg: RunConfig,
}

fn tau_input(tau: &str, args: &crate::config::GlobalArgs) -> Result<TauInput, CliError> {
    let spec = TauSpec::parse(&read_input(tau)?)?;
    let cfg = RunConfig::resolve(args, spec.prec());
    cfg.require_theta_precision()?;
    Ok(TauInput { spec, cfg })
}

/// Accepts `"101,010"`, `"101;010"` or `"[101;010]"`.
fn parse_char(s: &str) -> Result<ThetaCharacteristic, CliError> {
    ThetaCharacteristic::parse(&s.replace(',', ";"))
        .ok_or_else(|| CliError::input("bad_characteristic", format!("cannot parse characteristic {s:?}")))
}

pub fn theta_null_cmd(ch: &str, tau: &str, args: &crate::config::GlobalArgs) -> Result<Outcome, CliError> {
    let input = tau_input(tau, args)?;
    let ctx = Ctx::new(input.cfg.prec);
    let eps = parse_char(ch)?;
    let t = input.spec.riemann(&ctx)?;
    let v = theta_null(&eps, &t, &ctx)?;
    let (re, im) = v.format(&ctx);
    let json = json!({
        "char": eps.to_string(),
        "even": eps.is_even(),
        "prec": input.cfg.prec.to_string(),
        "value": complex_to_json(&v, &ctx),
    });
    Ok(Outcome::json(json, format!("theta{eps} = {re} + {im}i")))
}

pub fn chi18(tau: &str, args: &crate::config::GlobalArgs) -> Result<Outcome, CliError> {
    let input = tau_input(tau, args)?;
    let ctx = Ctx::new(input.cfg.prec);
    let t = input.spec.riemann(&ctx)?;
    let v = chi_k(&t, &ctx)?;
    let g = t.genus();
    // The product of the 2^{g−1}(2^g+1) even constants has weight half that count.
    let weight = (1usize << (g - 1)) * ((1 << g) + 1) / 2;
    let (re, im) = v.format(&ctx);
    let json = json!({
        "g": g.to_string(),
        "weight": weight.to_string(),
        "prec": input.cfg.prec.to_string(),
        "value": complex_to_json(&v, &ctx),
        "log2_abs": log2_string(v.log2_abs(&ctx)),
    });
    Ok(Outcome::json(json, format!("chi{weight} = {re} + {im}i")))
}

pub fn sigma140_cmd(tau: &str, args: &crate::config::GlobalArgs) -> Result<Outcome, CliError> {
    let input = tau_input(tau, args)?;
    let ctx = Ctx::new(input.cfg.prec);
    let t = input.spec.riemann(&ctx)?;
    let v = sigma140(&t, &ctx)?;
    let (re, im) = v.format(&ctx);
    let json = json!({
        "prec": input.cfg.prec.to_string(),
        "value": complex_to_json(&v, &ctx),
        "log2_abs": log2_string(v.log2_abs(&ctx)),
    });
    Ok(Outcome::json(json, format!("sigma140 = {re} + {im}i")))
}

fn igusa_json(r: &IgusaReport) -> Value {
    json!({
        "label": r.label.as_str(),
        "chi18_relative_log2": log2_string(r.chi18_relative()),
        "sigma140_relative_log2": log2_string(r.sigma140_relative()),
        "zero_below_log2": log2_string(r.thresholds.zero_log2),
        "nonzero_above_log2": log2_string(r.thresholds.nonzero_log2),
    })
}

fn igusa_exit(label: IgusaLabel) -> u8 {
    if label == IgusaLabel::Indeterminate {
        3
    } else {
        0
    }
}

pub fn igusa(tau: &str, args: &crate::config::GlobalArgs) -> Result<Outcome, CliError> {
    let input = tau_input(tau, args)?;
    let ctx = Ctx::new(input.cfg.prec);
    let t = input.spec.riemann(&ctx)?;
    if t.genus() != 3 {
        return Err(ciani_core::theta::ThetaError::UnsupportedGenus(t.genus()).into());
    }
    let table = theta_table(&t, &ctx)?;
    let r = igusa_classify(&table, input.cfg.thresholds(), &ctx);
    let mut json = igusa_json(&r);
    json["prec"] = json!(input.cfg.prec.to_string());
    let text = format!(
        "{}\nchi18 relative: 2^{}\nsigma140 relative: 2^{}",
        r.label.as_str(),
        log2_string(r.chi18_relative()),
        log2_string(r.sigma140_relative())
    );
    Ok(Outcome { exit: igusa_exit(r.label), ..Outcome::json(json, text) })
}

pub fn isotropic_enumerate(g: usize) -> Result<Outcome, CliError> {
    let spaces = enumerate_max_isotropic(g)?;
    // Basis rows as bit strings, one list per subspace.
    let bases: Vec<Vec<String>> =
        spaces.iter().map(|s| s.basis_rows().iter().map(|r| r.iter().map(|x| char::from(b'0' + x)).collect()).collect()).collect();
    let text = bases.iter().map(|b| b.join(" ")).collect::<Vec<_>>().join("\n");
    let json = json!({ "g": g.to_string(), "count": spaces.len().to_string(), "bases": bases });
    Ok(Outcome::json(json, format!("{} maximal isotropic subspaces\n{text}", spaces.len())))
}

pub fn symplectic_check(matrix: &str) -> Result<Outcome, CliError> {
    let m = parse_symplectic(&read_input(matrix)?)?;
    let member: Vec<(String, bool)> = Subgroup::TRACKED.iter().map(|&s| (s.name(), m.is_in(s))).collect();
    let json = json!({
        "g": m.genus().to_string(),
        "symplectic": true,
        "membership": member.iter().map(|(n, b)| json!({ "subgroup": n, "member": b })).collect::<Vec<_>>(),
    });
    let text = member.iter().map(|(n, b)| format!("{n}: {}", if *b { "yes" } else { "no" })).collect::<Vec<_>>().join("\n");
    Ok(Outcome::json(json, text))
}

fn main_report_json(r: &MainIdentityReport, ctx: &Ctx) -> Value {
    json!({
        "residual_main": log2_string(r.residual_log2),
        "lhs": complex_to_json(&r.lhs, ctx),
        "rhs": complex_to_json(&r.rhs, ctx),
        "det_m": complex_to_json(&r.det_m, ctx),
        "degenerate": r.degenerate,
    })
}

pub fn verify_klein(
    tau: Option<&str>,
    matrix: Option<&str>,
    corollary: bool,
    args: &crate::config::GlobalArgs,
) -> Result<Outcome, CliError> {
    let cfg = RunConfig::resolve(args, None);
    cfg.require_theta_precision()?;
    let ctx = Ctx::new(cfg.prec);
    let start = Instant::now();
    let m = matrix.map(|s| read_input(s).and_then(|t| parse_ciani(&t))).transpose()?;

    if corollary {
        let m = m.ok_or_else(|| CliError::usage("missing_matrix", "--corollary needs --matrix"))?;
        let r = verify_klein_corollary(&m, &ctx)?;
        let igusa = igusa_classify(&r.main.table, cfg.thresholds(), &ctx);
        let passed = r.passed(&ctx);
        let mut json = json!({
            "prec": cfg.prec.to_string(),
            "cofactor": ciani_to_json(&r.cofactor),
            "D": to_fraction_string(&r.d),
            "X_cofactor": to_fraction_string(&r.x),
            "x_equals_d_squared": r.x_equals_d_squared,
            "disc_equals_closed": r.disc_equals_closed,
            "shifted": r.shifted,
            "coefficient_residual": log2_string(r.coefficient_log2),
            "residual_main": log2_string(r.residual_log2),
            "classification": igusa.label.as_str(),
            "passed": passed,
        });
        if cfg.timings {
            json["timings"] = json!({ "total_ms": elapsed_ms(start) });
        }
        let text = format!(
            "X(Cof m) = D(m)^2: {}\nDisc = 2^54 D(m): {}\nnumeric residual: 2^{}\npassed: {passed}",
            r.x_equals_d_squared,
            r.disc_equals_closed,
            log2_string(r.residual_log2)
        );
        return Ok(Outcome::json(json, text));
    }

    let tau = tau.ok_or_else(|| CliError::usage("missing_tau", "verify-klein needs --tau (or --corollary --matrix)"))?;
    let list = parse_complex_list(&read_input(tau)?, &ctx)?;
    let tau: [BigComplex; 3] = list.try_into().map_err(|_| CliError::input("bad_tau", "--tau takes exactly three elliptic periods"))?;
    let main = verify_main_identity(&tau, &ctx)?;
    let t_main = elapsed_ms(start);
    let eighteen = eighteen_from_table(&main.triple, &main.quotient, &main.table, &ctx)?;
    let t_eighteen = elapsed_ms(start);
    let igusa = igusa_classify(&main.table, cfg.thresholds(), &ctx);

    let mut json = main_report_json(&main, &ctx);
    json["prec"] = json!(cfg.prec.to_string());
    json["residuals_18"] = json!(eighteen.residuals.iter().map(|&r| log2_string(r)).collect::<Vec<_>>());
    json["c"] = complex_to_json(&eighteen.c, &ctx);
    json["c_fitted_from"] = json!(eighteen.fitted_from.to_string());
    json["abs_c_residual"] = json!(log2_string(eighteen.abs_c_log2));
    json["classification"] = igusa_json(&igusa);
    if let Some(m) = &m {
        // An exact matrix supplied alongside τ is classified on its own terms.
        let c = classify_matrix(m)?;
        json["matrix"] = json!({
            "label": c.label.as_str(),
            "T": to_fraction_string(&c.t),
            "X": to_fraction_string(&x_invariant(m)),
        });
    }
    if cfg.timings {
        json["timings"] = json!({ "main_ms": t_main, "eighteen_ms": t_eighteen, "total_ms": elapsed_ms(start) });
    }
    let text = format!(
        "main identity residual: 2^{}\nworst of 18 identities: 2^{}\nclassification: {}",
        log2_string(main.residual_log2),
        log2_string(eighteen.worst()),
        igusa.label.as_str()
    );
    Ok(Outcome { exit: igusa_exit(igusa.label), ..Outcome::json(json, text) })
}
