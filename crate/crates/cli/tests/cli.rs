use std::collections::HashSet;
use std::io::Write;
use std::process::Command;

use ciani_cli::error::CliError;
use ciani_cli::formats::{form_to_json, parse_complex, parse_form_input};
use ciani_cli::run;
use ciani_core::ciani::CianiError;
use ciani_core::klein::KleinError;
use ciani_core::numeric::{to_f64, Ctx};
use ciani_core::poly::{parse_form, FormParseError};
use ciani_core::resultant::ResultantError;
use ciani_core::symplectic::{Subgroup, SymplecticError};
use ciani_core::theta::ThetaError;
use serde_json::Value;

const GENERIC_TAU: &str = r#"{"g":3,
 "re":[["0.1","0.2","-0.3"],["0.2","-0.4","0.15"],["-0.3","0.15","0.25"]],
 "im":[["1.1","0.2","0.1"],["0.2","0.9","-0.15"],["0.1","-0.15","1.3"]],
 "prec":128}"#;

fn ok_json(args: &[&str]) -> Value {
    let r = run(std::iter::once("ciani").chain(args.iter().copied()));
    assert_eq!(r.code, 0, "{args:?}: {}", r.stderr);
    serde_json::from_str(&r.stdout).unwrap()
}

fn error_code(args: &[&str]) -> (u8, String) {
    let r = run(std::iter::once("ciani").chain(args.iter().copied()));
    let code = serde_json::from_str::<Value>(&r.stderr).map(|v| v["error"]["code"].as_str().unwrap().to_string()).unwrap_or_default();
    (r.code, code)
}

fn temp_file(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

#[test]
fn fermat_discriminant_prints_two_to_the_54() {
    let r = run(["ciani", "disc", "--form", "x^4+y^4+z^4"]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "18014398509481984\n"));
    let j = ok_json(&["disc", "--form", "x^4+y^4+z^4", "--format", "json"]);
    assert_eq!(j["disc"], "18014398509481984/1");
}

#[test]
fn forms_read_from_files_in_both_encodings() {
    let text = temp_file("x^4 + y^4 + z^4\n");
    let json = temp_file(&form_to_json(&parse_form("x^4+y^4+z^4").unwrap()).to_string());
    for f in [&text, &json] {
        let r = run(["ciani", "disc", "--form", f.path().to_str().unwrap()]);
        assert_eq!(r.stdout, "18014398509481984\n");
    }
    let f = parse_form("1/2*x^3*y - 3*y^2*z^2 + z^4").unwrap();
    assert_eq!(parse_form_input(&form_to_json(&f).to_string()).unwrap(), f);
}

#[test]
fn classification_of_the_worked_instances() {
    let file = temp_file(r#"{"a":["1","1","1"],"b":["0","0","0"]}"#);
    let j = ok_json(&["classify", "--matrix", file.path().to_str().unwrap()]);
    assert_eq!(j["label"], "NonHyperellipticJacobian");
    assert_eq!(j["T"], "1/1");
    assert_eq!(j["square"], true);
    assert!(j["twist_d"].is_null());

    let j = ok_json(&["classify", "--matrix", r#"{"a":["1","1","1"],"b":["2","2","2"]}"#]);
    assert_eq!(j["label"], "QuadraticTwistObstruction");
    assert_eq!(j["twist_d"], "5/1");

    let j = ok_json(&["classify", "--matrix", r#"{"a":["1","1","2"],"b":["1","1","0"]}"#]);
    assert_eq!(j["label"], "HyperellipticJacobian");
    assert_eq!(j["T"], "0/1");
}

#[test]
fn exit_code_contract() {
    assert_eq!(error_code(&["disc", "--form", "x^4+"]), (2, "input.form.syntax".into()));
    assert_eq!(error_code(&["disc", "--form", "x^3"]), (1, "resultant.not_quartic".into()));
    assert_eq!(error_code(&["classify", "--matrix", r#"{"a":["0","1","1"],"b":["0","0","0"]}"#]), (1, "ciani.not_in_s".into()));
    assert_eq!(error_code(&["chi18", "--tau", "i", "--prec", "32"]), (2, "usage.precision_too_low".into()));
    assert_eq!(error_code(&["chi18", "--tau", "1-i,i"]), (1, "theta.not_positive_definite".into()));
    assert_eq!(error_code(&["isotropic", "enumerate", "--g", "4"]), (1, "symplectic.genus_out_of_range".into()));
    assert_eq!(error_code(&["symplectic", "check", "--matrix", "[[1,1],[1,1]]"]), (1, "symplectic.not_symplectic".into()));
    assert_eq!(error_code(&["verify-klein", "--corollary"]), (2, "usage.missing_matrix".into()));
    assert_eq!(run(["ciani", "no-such-command"]).code, 2);
    assert_eq!(run(["ciani", "chi18"]).code, 2);
    let help = run(["ciani", "disc", "--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("--form"));
}

#[test]
fn indeterminate_classification_exits_with_three() {
    let j = ok_json(&["igusa", "--tau", GENERIC_TAU]);
    assert_eq!(j["label"], "NonHyperellipticJacobian");
    // A vanishing threshold straddling the actual size of χ18.
    let r = run(["ciani", "igusa", "--tau", GENERIC_TAU, "--vanish-threshold", "-5"]);
    assert_eq!(r.code, 3);
    let j: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(j["label"], "Indeterminate");
    let j = ok_json(&["igusa", "--tau", "0.8i,1.1i,1.3i", "--prec", "128"]);
    assert_eq!(j["label"], "Decomposable");
}

#[test]
fn theta_constants_accept_both_separators() {
    let a = ok_json(&["theta", "null", "--char", "101,010", "--tau", GENERIC_TAU]);
    let b = ok_json(&["theta", "null", "--char", "101;010", "--tau", GENERIC_TAU]);
    assert_eq!(a, b);
    assert_eq!(a["even"], true);
    assert_eq!(a["prec"], "128");
    let odd = ok_json(&["theta", "null", "--char", "100,100", "--tau", GENERIC_TAU]);
    assert_eq!(odd["even"], false);
    let re: f64 = odd["value"]["re"].as_str().unwrap().parse().unwrap();
    assert!(re.abs() < 1e-30, "{re}");
}

#[test]
fn chi18_weight_and_sigma140_genus() {
    let j = ok_json(&["chi18", "--tau", GENERIC_TAU]);
    assert_eq!((j["g"].as_str(), j["weight"].as_str()), (Some("3"), Some("18")));
    let j = ok_json(&["chi18", "--tau", "i,1.5i"]);
    assert_eq!(j["weight"], "5");
    assert_eq!(error_code(&["sigma140", "--tau", "i,i"]), (1, "theta.unsupported_genus".into()));
}

#[test]
fn isotropic_and_symplectic_reports() {
    let j = ok_json(&["isotropic", "enumerate", "--g", "3"]);
    assert_eq!(j["count"], "135");
    assert_eq!(j["bases"].as_array().unwrap().len(), 135);
    let j = ok_json(&["isotropic", "enumerate", "--g", "1"]);
    assert_eq!(j["count"], "3");

    let j = ok_json(&["symplectic", "check", "--matrix", r#"{"rows":[[1,0],[0,1]]}"#]);
    let all = j["membership"].as_array().unwrap();
    assert_eq!(all.len(), Subgroup::TRACKED.len());
    assert!(all.iter().all(|m| m["member"] == true));
    let j = ok_json(&["symplectic", "check", "--matrix", "[[1,1],[0,1]]"]);
    let member = |name: &str| j["membership"].as_array().unwrap().iter().find(|m| m["subgroup"] == name).unwrap()["member"].clone();
    assert_eq!(member("U(Z)"), true);
    assert_eq!(member("Gamma(2)"), false);
}

#[test]
fn verify_klein_reports_small_residuals() {
    let j = ok_json(&["verify-klein", "--tau", "0.8i,1.1i,1.3i", "--prec", "128"]);
    let r: f64 = j["residual_main"].as_str().unwrap().parse().unwrap();
    assert!(r < -64.0, "{r}");
    let worst = j["residuals_18"].as_array().unwrap().iter().map(|v| v.as_str().unwrap().parse::<f64>().unwrap()).fold(f64::MIN, f64::max);
    assert_eq!(j["residuals_18"].as_array().unwrap().len(), 18);
    assert!(worst < -64.0);
    assert_eq!(j["classification"]["label"], "NonHyperellipticJacobian");
    assert!(j.get("timings").is_none());

    let j = ok_json(&["verify-klein", "--corollary", "--matrix", "identity", "--prec", "128"]);
    assert_eq!(j["passed"], true);
    assert_eq!(j["D"], "1/1");
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["ciani", "verify-klein", "--tau", "0.8i,1.1i,1.3i", "--prec", "96"],
        vec!["ciani", "selftest", "--suite", "theta", "--prec", "96", "--workers", "3"],
        vec!["ciani", "igusa", "--tau", GENERIC_TAU],
    ] {
        assert_eq!(run(args.clone()), run(args));
    }
    // The worker count does not change the report.
    let one = run(["ciani", "selftest", "--suite", "algebra", "--workers", "1"]);
    let four = run(["ciani", "selftest", "--suite", "algebra", "--workers", "4"]);
    assert_eq!(one, four);
}

#[test]
fn selftest_all_passes_at_128_bits() {
    let r = run(["ciani", "selftest", "--suite", "all", "--prec", "128"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let j: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(j["failures"], "0");
    assert!(j["checks"].as_array().unwrap().len() >= 10);
}

#[test]
fn environment_overrides_yield_to_flags() {
    let bin = env!("CARGO_BIN_EXE_ciani");
    let out = |extra: &[&str]| {
        let o = Command::new(bin)
            .args(["sigma140", "--tau", GENERIC_TAU])
            .args(extra)
            .env("CIANI_PREC", "96")
            .env("CIANI_FORMAT", "json")
            .output()
            .unwrap();
        assert!(o.status.success());
        serde_json::from_slice::<Value>(&o.stdout).unwrap()["prec"].as_str().unwrap().to_string()
    };
    assert_eq!(out(&[]), "96");
    assert_eq!(out(&["--prec", "80"]), "80");
    // Without either, the precision in the τ file applies.
    let o = Command::new(bin).args(["sigma140", "--tau", GENERIC_TAU]).env_remove("CIANI_PREC").output().unwrap();
    assert_eq!(serde_json::from_slice::<Value>(&o.stdout).unwrap()["prec"], "128");
}

#[test]
fn binary_exit_codes_match_the_library() {
    let bin = env!("CARGO_BIN_EXE_ciani");
    let o = Command::new(bin).args(["disc", "--form", "x^4+y^4+z^4"]).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "18014398509481984\n");
    let o = Command::new(bin).args(["igusa", "--tau", GENERIC_TAU, "--vanish-threshold", "-5"]).output().unwrap();
    assert_eq!(o.status.code(), Some(3));
    let o = Command::new(bin).args(["disc"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn complex_literals() {
    let ctx = Ctx::new(64);
    let parts = |s: &str| {
        let z = parse_complex(s, &ctx).unwrap();
        (to_f64(&z.re), to_f64(&z.im))
    };
    assert_eq!(parts("0.5+1.5i"), (0.5, 1.5));
    assert_eq!(parts("-2e-1-i"), (-0.2, -1.0));
    assert_eq!(parts("i"), (0.0, 1.0));
    assert_eq!(parts(" 3 "), (3.0, 0.0));
    assert_eq!(parts("1e+1i"), (0.0, 10.0));
    assert!(parse_complex("1+", &ctx).is_err());
    assert!(parse_complex("abc", &ctx).is_err());
    assert!(parse_complex(".e3i", &ctx).is_err());
    assert!(parse_complex("--1", &ctx).is_err());
}

#[test]
fn every_module_error_has_its_own_code() {
    let errors: Vec<CliError> = vec![
        FormParseError::Syntax { pos: 0, msg: String::new() }.into(),
        FormParseError::DivisionByZero { pos: 0 }.into(),
        FormParseError::NonConstantDivisor { pos: 0 }.into(),
        FormParseError::ExponentTooLarge { pos: 0, exp: String::new() }.into(),
        FormParseError::Inhomogeneous { degrees: vec![] }.into(),
        ResultantError::NotCubic(2).into(),
        ResultantError::NotQuartic(2).into(),
        CianiError::NotInS.into(),
        CianiError::Singular.into(),
        CianiError::NotSymmetric.into(),
        CianiError::SingularCurve(0).into(),
        CianiError::RhoMismatch.into(),
        CianiError::RootProductMismatch.into(),
        CianiError::NotCiani.into(),
        SymplecticError::BadShape { rows: 1, cols: 2 }.into(),
        SymplecticError::NotSymplectic.into(),
        SymplecticError::NotInSubgroup(Subgroup::TRACKED[0]).into(),
        SymplecticError::GenusOutOfRange(9).into(),
        SymplecticError::NotMaximalIsotropic.into(),
        SymplecticError::Overflow.into(),
        ThetaError::NotPositiveDefinite.into(),
        ThetaError::NotSymmetric(0.0).into(),
        ThetaError::NotSquare.into(),
        ThetaError::PrecisionTooLow(8).into(),
        ThetaError::UnsupportedGenus(5).into(),
        ThetaError::GenusMismatch { expected: 1, got: 2 }.into(),
        ThetaError::Singular.into(),
        ThetaError::RiemannConditions.into(),
        ThetaError::NotInSubgroup(Subgroup::TRACKED[0]).into(),
        KleinError::NotInUpperHalfPlane(0).into(),
        KleinError::DegenerateLattice(0).into(),
        KleinError::Inconsistent { what: "x", log2: 0.0 }.into(),
        KleinError::RiemannConditions.into(),
        KleinError::DegenerateIdentities.into(),
        KleinError::AgmNoConvergence.into(),
        KleinError::Unsupported("x").into(),
        KleinError::NotInSTimes.into(),
        KleinError::NoBracket.into(),
    ];
    let codes: HashSet<&str> = errors.iter().map(|e| e.code.as_str()).collect();
    assert_eq!(codes.len(), errors.len());
    // Wrapped theta errors keep the theta code.
    let wrapped: CliError = KleinError::Theta(ThetaError::Singular).into();
    assert_eq!(wrapped.code, "theta.singular");
}
