//! Quick invariant suites run on a worker pool. Results are reported in a
//! fixed order regardless of scheduling.

use ciani_core::ciani::{
    ab_of, ciani_form, classify_matrix, closed_discriminant, hlp_coefficients, hlp_t0, mat_of, random_matrix, random_rational_matrix,
    t_invariant, x_invariant, CianiMatrix, JacobianLabel,
};
use ciani_core::klein::{coefficients_from_tau, eighteen_identities, verify_klein_corollary, verify_main_identity};
use ciani_core::linalg::QMatrix;
use ciani_core::numeric::{BigComplex, Ctx};
use ciani_core::poly::parse_form;
use ciani_core::rational::{int, pow};
use ciani_core::resultant::{discriminant_quartic, resultant3};
use ciani_core::symplectic::{
    enumerate_chars, enumerate_max_isotropic, is_symplectic, klein_transporter, random_symplectic, SymplecticMatrix,
};
use ciani_core::theta::{chi_modularity, jacobi_residual, theta_table, RiemannMatrix, Thresholds};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    All,
    Algebra,
    Symplectic,
    Theta,
    Klein,
}

#[derive(Debug, Clone, Copy)]
pub struct Params {
    pub prec: usize,
    pub seed: u64,
}

impl Params {
    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ salt)
    }

    /// Relative tolerance for numeric checks.
    fn tol(&self) -> f64 {
        -(self.prec as f64) / 2.0
    }
}

type Check = fn(&Params) -> Result<String, String>;

const CHECKS: &[(Suite, &str, Check)] = &[
    (Suite::Algebra, "resultant_normalization", resultant_normalization),
    (Suite::Algebra, "fermat_discriminant", fermat_discriminant),
    (Suite::Algebra, "gl3_invariance", gl3_invariance),
    (Suite::Algebra, "ciani_algebra", ciani_algebra),
    (Suite::Algebra, "classification", classification),
    (Suite::Symplectic, "counts", counts),
    (Suite::Symplectic, "random_words", random_words),
    (Suite::Theta, "theta_at_i", theta_at_i),
    (Suite::Theta, "jacobi", jacobi),
    (Suite::Theta, "odd_vanish", odd_vanish),
    (Suite::Theta, "chi18_modularity", modularity),
    (Suite::Klein, "eighteen_identities", eighteen),
    (Suite::Klein, "main_identity", main_identity),
    (Suite::Klein, "corollary_identity", corollary),
];

pub struct SelftestResult {
    pub json: Value,
    pub text: String,
    pub failures: usize,
}

pub fn run(suite: Suite, params: Params, workers: usize) -> Result<SelftestResult, CliError> {
    let chosen: Vec<&(Suite, &str, Check)> = CHECKS.iter().filter(|(s, _, _)| suite == Suite::All || *s == suite).collect();
    let pool =
        rayon::ThreadPoolBuilder::new().num_threads(workers).build().map_err(|e| CliError::domain("selftest.pool", e.to_string()))?;
    // `collect` on an indexed parallel iterator keeps input order.
    let outcomes: Vec<Result<String, String>> = pool.install(|| {
        chosen.par_iter().map(|(_, _, f)| std::panic::catch_unwind(|| f(&params)).unwrap_or_else(|_| Err("panicked".into()))).collect()
    });
    let mut failures = 0;
    let mut rows = Vec::new();
    let mut lines = Vec::new();
    for ((s, name, _), outcome) in chosen.iter().zip(outcomes) {
        let suite_name = format!("{s:?}").to_lowercase();
        let (status, detail) = match outcome {
            Ok(d) => ("pass", d),
            Err(d) => {
                failures += 1;
                ("fail", d)
            }
        };
        lines.push(format!("{} {suite_name}/{name}: {detail}", status.to_uppercase()));
        rows.push(json!({ "suite": suite_name, "check": name, "status": status, "detail": detail }));
    }
    let json = json!({
        "prec": params.prec.to_string(),
        "seed": params.seed.to_string(),
        "checks": rows,
        "failures": failures.to_string(),
    });
    Ok(SelftestResult { json, text: lines.join("\n"), failures })
}

fn ensure(ok: bool, detail: String) -> Result<String, String> {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn resultant_normalization(_: &Params) -> Result<String, String> {
    let p = |s: &str| parse_form(s).unwrap();
    let r = resultant3(&p("x^3"), &p("y^3"), &p("z^3")).map_err(|e| e.to_string())?;
    ensure(r == int(1), format!("Res(x^3, y^3, z^3) = {r}"))
}

fn fermat_discriminant(_: &Params) -> Result<String, String> {
    let d = discriminant_quartic(&parse_form("x^4+y^4+z^4").unwrap()).map_err(|e| e.to_string())?;
    let two54 = pow(&int(2), 54);
    ensure(d == two54 && d == &two54 * closed_discriminant(&CianiMatrix::identity()), format!("Disc = {d}"))
}

fn gl3_invariance(p: &Params) -> Result<String, String> {
    let mut rng = p.rng(3);
    for k in 0..3 {
        let m = random_matrix(&mut rng, 3, false);
        let g = loop {
            let e: Vec<i64> = (0..9).map(|_| rng.gen_range(-2..=2)).collect();
            let g = QMatrix::from_i64(3, 3, &e);
            if !g.det().is_zero() {
                break g;
            }
        };
        let q = ciani_form(&m);
        let lhs = discriminant_quartic(&q.substitute_linear(&g)).unwrap();
        if lhs != pow(&g.det(), 36) * discriminant_quartic(&q).unwrap() {
            return Err(format!("instance {k} differs"));
        }
    }
    Ok("3 instances exact".into())
}

fn ciani_algebra(p: &Params) -> Result<String, String> {
    let mut rng = p.rng(4);
    for k in 0..20 {
        let m = random_rational_matrix(&mut rng, 6, false);
        let cof = m.cofactor();
        let d = closed_discriminant(&m);
        let back = ab_of(&m).map(|t| mat_of(&t)).map_err(|e| e.to_string())?;
        if x_invariant(&cof) != &d * &d || cof.cofactor() != m.scale(&m.det()) || back != m {
            return Err(format!("instance {k}"));
        }
    }
    Ok("20 instances exact".into())
}

fn classification(p: &Params) -> Result<String, String> {
    let cases = [
        (CianiMatrix::identity(), JacobianLabel::NonHyperellipticJacobian, 1),
        (CianiMatrix::from_i64([1, 1, 1], [2, 2, 2]), JacobianLabel::QuadraticTwistObstruction, 5),
        (CianiMatrix::from_i64([1, 1, 2], [1, 1, 0]), JacobianLabel::HyperellipticJacobian, 0),
    ];
    for (m, label, t) in cases {
        let c = classify_matrix(&m).map_err(|e| e.to_string())?;
        if c.label != label || c.t != int(t) {
            return Err(format!("{:?} with T = {}", c.label, c.t));
        }
    }
    let mut rng = p.rng(5);
    for _ in 0..20 {
        let t = ab_of(&random_rational_matrix(&mut rng, 7, false)).map_err(|e| e.to_string())?;
        if hlp_t0(&hlp_coefficients(t.base()), t.rho()) != int(64) * t_invariant(&t) {
            return Err("T0 differs from 64 T".into());
        }
    }
    Ok("3 worked instances, T0 = 64 T on 20".into())
}

fn counts(_: &Params) -> Result<String, String> {
    let chars = enumerate_chars(3);
    let even = chars.iter().filter(|e| e.is_even()).count();
    let lagrangians = enumerate_max_isotropic(3).map_err(|e| e.to_string())?.len();
    ensure(
        even == 36 && chars.len() - even == 28 && lagrangians == 135,
        format!("{even} even, {} odd, {lagrangians} Lagrangians", chars.len() - even),
    )
}

fn random_words(p: &Params) -> Result<String, String> {
    let mut rng = p.rng(6);
    for g in 1..=3 {
        for _ in 0..5 {
            let m = random_symplectic(&mut rng, g, 6);
            let ok = is_symplectic(m.matrix()).unwrap_or(false) && m.mul(&m.inverse()) == SymplecticMatrix::identity(g);
            if !ok {
                return Err(format!("genus {g} word failed"));
            }
        }
    }
    Ok("15 words symplectic and invertible".into())
}

fn theta_at_i(p: &Params) -> Result<String, String> {
    let ctx = Ctx::new(p.prec);
    let t = theta_table(&RiemannMatrix::diagonal(&[BigComplex::i(&ctx)], &ctx).unwrap(), &ctx).map_err(|e| e.to_string())?;
    // θ(i) = π^{1/4}/Γ(3/4) with Γ(3/4) = π√2/Γ(1/4) and Γ(1/4)² = 2ϖ√(2π).
    let pi = ctx.pi();
    let (mut a, mut b) = (ctx.int(1), ctx.sqrt(&ctx.int(2)));
    for _ in 0..(p.prec.ilog2() + 4) {
        let m = ctx.div(&ctx.add(&a, &b), &ctx.int(2));
        b = ctx.sqrt(&ctx.mul(&a, &b));
        a = m;
    }
    let lemniscate = ctx.div(&pi, &a);
    let g14 = ctx.sqrt(&ctx.mul(&ctx.mul(&ctx.int(2), &lemniscate), &ctx.sqrt(&ctx.mul(&ctx.int(2), &pi))));
    let g34 = ctx.div(&ctx.mul(&pi, &ctx.sqrt(&ctx.int(2))), &g14);
    let expected = BigComplex::real(&ctx, ctx.div(&ctx.sqrt(&ctx.sqrt(&pi)), &g34));
    let err = t.get_bits(0).sub(&expected, &ctx).log2_abs(&ctx);
    ensure(err < 16.0 - p.prec as f64, format!("error 2^{err:.0}"))
}

fn jacobi(p: &Params) -> Result<String, String> {
    let ctx = Ctx::new(p.prec);
    let mut rng = p.rng(7);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..5 {
        let tau = BigComplex::from_f64(&ctx, rng.gen_range(-0.5..0.5), rng.gen_range(0.6..1.5));
        worst = worst.max(jacobi_residual(&RiemannMatrix::diagonal(&[tau], &ctx).unwrap(), &ctx).map_err(|e| e.to_string())?);
    }
    ensure(worst < p.tol(), format!("worst 2^{worst:.0} at 5 points"))
}

fn generic_tau(ctx: &Ctx) -> RiemannMatrix {
    let re: [&[f64]; 3] = [&[0.1, 0.2, -0.3], &[0.2, -0.4, 0.15], &[-0.3, 0.15, 0.25]];
    let im: [&[f64]; 3] = [&[1.1, 0.2, 0.1], &[0.2, 0.9, -0.15], &[0.1, -0.15, 1.3]];
    RiemannMatrix::from_f64(&re, &im, ctx).unwrap()
}

fn odd_vanish(p: &Params) -> Result<String, String> {
    let ctx = Ctx::new(p.prec);
    let table = theta_table(&generic_tau(&ctx), &ctx).map_err(|e| e.to_string())?;
    let scale = table.log2_max_even(&ctx);
    let worst =
        enumerate_chars(3).iter().filter(|e| !e.is_even()).map(|e| table.get(e).log2_abs(&ctx) - scale).fold(f64::NEG_INFINITY, f64::max);
    ensure(worst < Thresholds::for_precision(p.prec).zero_log2, format!("odd constants at most 2^{worst:.0}"))
}

fn modularity(p: &Params) -> Result<String, String> {
    let ctx = Ctx::new(p.prec);
    let mut rng = p.rng(8);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..2 {
        let m = random_symplectic(&mut rng, 3, 4);
        worst = worst.max(chi_modularity(&m, &generic_tau(&ctx), &ctx).map_err(|e| e.to_string())?);
    }
    ensure(worst < p.tol(), format!("worst 2^{worst:.0} over 2 elements"))
}

fn imag(ctx: &Ctx, ys: [f64; 3]) -> [BigComplex; 3] {
    ys.map(|y| BigComplex::from_f64(ctx, 0.0, y))
}

fn eighteen(p: &Params) -> Result<String, String> {
    let ctx = Ctx::new(p.prec);
    let u = coefficients_from_tau(&imag(&ctx, [0.8, 1.1, 1.3]), &ctx).map_err(|e| e.to_string())?;
    let r = eighteen_identities(&u, &klein_transporter(), &ctx).map_err(|e| e.to_string())?;
    ensure(r.worst() < p.tol() && r.abs_c_log2 < p.tol(), format!("worst 2^{:.0}, |c| 2^{:.0}", r.worst(), r.abs_c_log2))
}

fn main_identity(p: &Params) -> Result<String, String> {
    let ctx = Ctx::new(p.prec);
    let mut rng = p.rng(10);
    let mut points = vec![imag(&ctx, [0.8, 1.1, 1.3]), imag(&ctx, [1.0, 1.0, 1.0])];
    points.push(core::array::from_fn(|_| BigComplex::from_f64(&ctx, rng.gen_range(-0.5..0.5), rng.gen_range(0.75..1.4))));
    let mut worst = f64::NEG_INFINITY;
    for tau in &points {
        worst = worst.max(verify_main_identity(tau, &ctx).map_err(|e| e.to_string())?.residual_log2);
    }
    ensure(worst < p.tol(), format!("worst 2^{worst:.0} at 3 points"))
}

fn corollary(p: &Params) -> Result<String, String> {
    let ctx = Ctx::new(p.prec);
    let r = verify_klein_corollary(&CianiMatrix::identity(), &ctx).map_err(|e| e.to_string())?;
    ensure(r.passed(&ctx), format!("residual 2^{:.0}", r.residual_log2))
}
