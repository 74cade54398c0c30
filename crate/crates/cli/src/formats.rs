//! JSON and text formats for the objects the commands consume and emit.
//!
//! Every number crosses the boundary as a string: rationals as `"num/den"`,
//! reals as decimals accompanied by the precision they were computed at.

use std::path::Path;

use ciani_core::ciani::CianiMatrix;
use ciani_core::numeric::{BigComplex, CMatrix, Ctx};
use ciani_core::poly::{parse_form, Monomial, TernaryForm};
use ciani_core::rational::{parse_rational, to_fraction_string};
use ciani_core::symplectic::SymplecticMatrix;
use ciani_core::theta::RiemannMatrix;
use ciani_core::Rational;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::CliError;

/// Reads `arg` as a file when such a file exists, otherwise returns it verbatim.
pub fn read_input(arg: &str) -> Result<String, CliError> {
    let path = Path::new(arg);
    if arg.len() < 4096 && path.is_file() {
        return std::fs::read_to_string(path).map_err(|e| CliError::input("unreadable_file", format!("{arg}: {e}")));
    }
    Ok(arg.to_string())
}

fn rational(s: &str, what: &str) -> Result<Rational, CliError> {
    parse_rational(s).map_err(|_| CliError::input("bad_rational", format!("{what}: cannot parse {s:?} as a rational")))
}

fn from_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::input("bad_json", format!("{what}: {e}")))
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: [u32; 3],
    num: String,
    den: String,
}

#[derive(Serialize, Deserialize)]
struct FormJson {
    degree: u32,
    terms: Vec<TermJson>,
}

pub fn form_to_json(f: &TernaryForm) -> Value {
    let terms = f.terms().map(|(m, c)| TermJson { exp: m.exps(), num: c.numer().to_string(), den: c.denom().to_string() }).collect();
    serde_json::to_value(FormJson { degree: f.degree(), terms }).expect("form serializes")
}

/// A form given as polynomial text or as the JSON term list.
pub fn parse_form_input(text: &str) -> Result<TernaryForm, CliError> {
    let t = text.trim();
    if !t.starts_with('{') {
        return Ok(parse_form(t)?);
    }
    let j: FormJson = from_json(t, "form")?;
    let mut terms = Vec::with_capacity(j.terms.len());
    for term in j.terms {
        let [a, b, c] = term.exp;
        if a + b + c != j.degree {
            return Err(CliError::input("form.inhomogeneous", format!("term {:?} does not have degree {}", term.exp, j.degree)));
        }
        let q = rational(&format!("{}/{}", term.num, term.den), "form coefficient")?;
        terms.push((Monomial::new(a, b, c), q));
    }
    Ok(TernaryForm::from_terms(j.degree, terms))
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    a: [String; 3],
    b: [String; 3],
}

pub fn ciani_to_json(m: &CianiMatrix) -> Value {
    json!({ "a": m.a.iter().map(to_fraction_string).collect::<Vec<_>>(), "b": m.b.iter().map(to_fraction_string).collect::<Vec<_>>() })
}

/// `{"a": [...], "b": [...]}`, or the shorthand `identity`.
pub fn parse_ciani(text: &str) -> Result<CianiMatrix, CliError> {
    let t = text.trim();
    if t.eq_ignore_ascii_case("identity") {
        return Ok(CianiMatrix::identity());
    }
    let j: MatrixJson = from_json(t, "matrix")?;
    let conv = |v: &[String; 3]| -> Result<[Rational; 3], CliError> {
        Ok([rational(&v[0], "matrix")?, rational(&v[1], "matrix")?, rational(&v[2], "matrix")?])
    };
    Ok(CianiMatrix::new(conv(&j.a)?, conv(&j.b)?))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum IntRows {
    Wrapped { rows: Vec<Vec<i64>> },
    Bare(Vec<Vec<i64>>),
}

/// `{"rows": [[...], ...]}` or a bare array of rows.
pub fn parse_symplectic(text: &str) -> Result<SymplecticMatrix, CliError> {
    let rows = match from_json::<IntRows>(text.trim(), "symplectic matrix")? {
        IntRows::Wrapped { rows } | IntRows::Bare(rows) => rows,
    };
    if rows.is_empty() || rows.iter().any(|r| r.len() != rows.len()) {
        return Err(CliError::input("bad_shape", "symplectic matrix must be square and non-empty"));
    }
    Ok(SymplecticMatrix::from_rows(&rows)?)
}

/// Parses `a`, `bi`, `a+bi`, `a-bi` (spaces ignored, `i` alone is `1i`).
pub fn parse_complex(s: &str, ctx: &Ctx) -> Result<BigComplex, CliError> {
    let bad = || CliError::input("bad_complex", format!("cannot parse {s:?} as a complex number"));
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(bad());
    }
    let real = |x: &str| if is_decimal(x) { ctx.parse(x).ok_or_else(bad) } else { Err(bad()) };
    let Some(body) = t.strip_suffix('i') else {
        return Ok(BigComplex::new(real(&t)?, ctx.zero()));
    };
    // Split at the last sign that is neither leading nor an exponent sign.
    let bytes = body.as_bytes();
    let split = (1..bytes.len()).rev().find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        other => other,
    };
    Ok(BigComplex::new(real(re)?, real(im)?))
}

/// `[+-]digits[.digits][e[+-]digits]`, with digits required on at least one side of the point.
fn is_decimal(s: &str) -> bool {
    let s = s.strip_prefix(['+', '-']).unwrap_or(s);
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(k) => (&s[..k], Some(&s[k + 1..])),
        None => (s, None),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits = |t: &str| t.bytes().all(|b| b.is_ascii_digit());
    let mantissa_ok = digits(int) && digits(frac) && !(int.is_empty() && frac.is_empty());
    let exponent_ok = exponent.is_none_or(|e| {
        let e = e.strip_prefix(['+', '-']).unwrap_or(e);
        !e.is_empty() && digits(e)
    });
    mantissa_ok && exponent_ok
}

/// A comma-separated list of complex numbers.
pub fn parse_complex_list(s: &str, ctx: &Ctx) -> Result<Vec<BigComplex>, CliError> {
    s.split(',').map(|x| parse_complex(x, ctx)).collect()
}

#[derive(Deserialize)]
struct TauJson {
    g: usize,
    re: Vec<Vec<String>>,
    im: Vec<Vec<String>>,
    #[serde(default)]
    prec: Option<usize>,
}

/// A τ argument before it is evaluated at a precision.
pub enum TauSpec {
    Full {
        g: usize,
        re: Vec<Vec<String>>,
        im: Vec<Vec<String>>,
        prec: Option<usize>,
    },
    /// Diagonal entries written as complex literals.
    Diagonal(String),
}

impl TauSpec {
    /// The τ JSON format, or a comma-separated list of diagonal entries.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let t = text.trim();
        if !t.starts_with('{') {
            return Ok(TauSpec::Diagonal(t.to_string()));
        }
        let j: TauJson = from_json(t, "tau")?;
        let shape_ok = |m: &Vec<Vec<String>>| m.len() == j.g && m.iter().all(|r| r.len() == j.g);
        if j.g == 0 || !shape_ok(&j.re) || !shape_ok(&j.im) {
            return Err(CliError::input("bad_shape", format!("tau must have {0}×{0} re and im parts", j.g)));
        }
        Ok(TauSpec::Full { g: j.g, re: j.re, im: j.im, prec: j.prec })
    }

    /// Precision recorded in the file, if any.
    pub fn prec(&self) -> Option<usize> {
        match self {
            TauSpec::Full { prec, .. } => *prec,
            TauSpec::Diagonal(_) => None,
        }
    }

    pub fn entries(&self, ctx: &Ctx) -> Result<Vec<Vec<BigComplex>>, CliError> {
        match self {
            TauSpec::Diagonal(s) => {
                let d = parse_complex_list(s, ctx)?;
                let g = d.len();
                Ok((0..g).map(|i| (0..g).map(|j| if i == j { d[i].clone() } else { BigComplex::zero(ctx) }).collect()).collect())
            }
            TauSpec::Full { g, re, im, .. } => {
                let real = |x: &str| {
                    is_decimal(x.trim())
                        .then(|| ctx.parse(x))
                        .flatten()
                        .ok_or_else(|| CliError::input("bad_decimal", format!("tau entry {x:?}")))
                };
                let mut rows = Vec::with_capacity(*g);
                for i in 0..*g {
                    let mut row = Vec::with_capacity(*g);
                    for j in 0..*g {
                        row.push(BigComplex::new(real(&re[i][j])?, real(&im[i][j])?));
                    }
                    rows.push(row);
                }
                Ok(rows)
            }
        }
    }

    pub fn riemann(&self, ctx: &Ctx) -> Result<RiemannMatrix, CliError> {
        let e = self.entries(ctx)?;
        let g = e.len();
        Ok(RiemannMatrix::new(CMatrix::from_fn(g, g, |i, j| e[i][j].clone()), ctx)?)
    }
}

pub fn complex_to_json(z: &BigComplex, ctx: &Ctx) -> Value {
    let (re, im) = z.format(ctx);
    json!({ "re": re, "im": im })
}

/// `log₂` residuals as strings with one decimal; `-inf` for exact agreement.
pub fn log2_string(x: f64) -> String {
    if x == f64::NEG_INFINITY {
        "-inf".into()
    } else if x == f64::INFINITY {
        "inf".into()
    } else {
        format!("{x:.1}")
    }
}
