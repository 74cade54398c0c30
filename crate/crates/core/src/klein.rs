//! From three elliptic period lattices to the quotient threefold and back.
//!
//! Three elliptic curves with lattices `ω₁ᵢℤ + ω₂ᵢℤ` give a block-diagonal
//! period matrix `Ω = [diag(ω₁ᵢ) diag(ω₂ᵢ)]`. Genus-1 theta constants at
//! `τᵢ = ω₁ᵢ/ω₂ᵢ` give the coefficients of a Ciani matrix `m(Ω)`. The
//! quotient by the 2-torsion subgroup `W` has period matrix `Ω′ = Ω·N·H`,
//! and `(π/2)^54·det(Ω₂′)^{−18}·χ18(τ(Ω′))` must equal `X(m(Ω))`.

use alloc::vec::Vec;

use crate::ciani::{ciani_form, closed_discriminant, x_invariant, CianiMatrix};
use crate::numeric::{log2_rel_diff, BigComplex, CMatrix, Ctx, Real};
use crate::rational::Rational;
use crate::resultant::discriminant_quartic;
use crate::symplectic::{klein_transporter, IsotropicSubspace, SymplecticMatrix, ThetaCharacteristic};
use crate::theta::{act, igusa_classify, theta_table, IgusaReport, PeriodMatrix, RiemannMatrix, ThetaError, ThetaTable, Thresholds};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum KleinError {
    #[error(transparent)]
    Theta(#[from] ThetaError),
    #[error("τ{0} is not in the upper half plane")]
    NotInUpperHalfPlane(usize),
    #[error("θ[1;0](τ{0}) vanishes to working precision: degenerate lattice")]
    DegenerateLattice(usize),
    #[error("internal consistency check failed: {what} off by 2^{log2:.1}")]
    Inconsistent { what: &'static str, log2: f64 },
    #[error("Ω·N·H violates the Riemann conditions; N is not a transporter")]
    RiemannConditions,
    #[error("all 18 left-hand sides vanish; cannot fit the constant")]
    DegenerateIdentities,
    #[error("AGM iteration did not converge")]
    AgmNoConvergence,
    #[error("unsupported period configuration: {0}")]
    Unsupported(&'static str),
    #[error("the matrix is not in S× (some aᵢ, cᵢ or det m vanishes)")]
    NotInSTimes,
    #[error("no sign change of det m(Ω) found on the search interval")]
    NoBracket,
}

fn cyclic(i: usize) -> (usize, usize) {
    ((i + 1) % 3, (i + 2) % 3)
}

/// Three elliptic factors with their theta constants and the Ciani
/// coefficients they determine.
#[derive(Debug, Clone)]
pub struct UniformizedTriple {
    pub tau: [BigComplex; 3],
    pub omega2: [BigComplex; 3],
    /// `θ[0;0](τᵢ)`.
    pub theta0: [BigComplex; 3],
    /// `θ[1;0](τᵢ)`.
    pub theta1: [BigComplex; 3],
    /// `θ[0;1](τᵢ)`.
    pub theta2: [BigComplex; 3],
    pub a: [BigComplex; 3],
    pub b: [BigComplex; 3],
    pub c: [BigComplex; 3],
    /// `a₁a₂a₃`, which squares to `δ₁δ₂δ₃`.
    pub rho: BigComplex,
}

/// Builds the triple with `ω₂ᵢ = 1`.
pub fn coefficients_from_tau(tau: &[BigComplex; 3], ctx: &Ctx) -> Result<UniformizedTriple, KleinError> {
    let one = BigComplex::one(ctx);
    coefficients_with_periods(tau, &[one.clone(), one.clone(), one], ctx)
}

/// Genus-1 theta constants `(θ[0;0], θ[1;0], θ[0;1])` at `τ`.
fn elliptic_thetas(tau: &BigComplex, ctx: &Ctx) -> Result<[BigComplex; 3], ThetaError> {
    let t = theta_table(&RiemannMatrix::diagonal(core::slice::from_ref(tau), ctx)?, ctx)?;
    Ok([t.get_bits(0b00).clone(), t.get_bits(0b01).clone(), t.get_bits(0b10).clone()])
}

/// `(b, c)` of `y² = x(x² − 4bx − 4c)` for the lattice with `ω₁ = τω₂`.
fn curve_coefficients(theta0: &BigComplex, theta2: &BigComplex, omega2: &BigComplex, ctx: &Ctx) -> (BigComplex, BigComplex) {
    let pi = ctx.pi();
    let pi2 = BigComplex::real(ctx, ctx.mul(&pi, &pi));
    let w2 = omega2.square(ctx);
    let (t0, t2) = (theta0.powu(4, ctx), theta2.powu(4, ctx));
    let quarter = ctx.f64(-0.25);
    let b = pi2.mul(&t0.add(&t2, ctx), ctx).div(&w2, ctx).scale(&quarter, ctx);
    let c = pi2.square(ctx).mul(&t0.mul(&t2, ctx), ctx).div(&w2.square(ctx), ctx).scale(&quarter, ctx);
    (b, c)
}

pub fn coefficients_with_periods(tau: &[BigComplex; 3], omega2: &[BigComplex; 3], ctx: &Ctx) -> Result<UniformizedTriple, KleinError> {
    let mut th = Vec::with_capacity(3);
    for (i, t) in tau.iter().enumerate() {
        if !t.im.is_positive() || t.im.is_zero() {
            return Err(KleinError::NotInUpperHalfPlane(i + 1));
        }
        th.push(elliptic_thetas(t, ctx)?);
    }
    let theta0: [BigComplex; 3] = core::array::from_fn(|i| th[i][0].clone());
    let theta1: [BigComplex; 3] = core::array::from_fn(|i| th[i][1].clone());
    let theta2: [BigComplex; 3] = core::array::from_fn(|i| th[i][2].clone());
    let zero_log2 = Thresholds::for_precision(ctx.bits()).zero_log2;
    for i in 0..3 {
        if theta1[i].log2_abs(ctx) - theta0[i].log2_abs(ctx) < zero_log2 {
            return Err(KleinError::DegenerateLattice(i + 1));
        }
    }
    let pi = ctx.pi();
    let neg_quarter_pi2 = BigComplex::real(ctx, ctx.div(&ctx.mul(&pi, &pi), &ctx.int(-4)));
    let fourth: [BigComplex; 3] = core::array::from_fn(|i| theta1[i].powu(4, ctx));
    let a: [BigComplex; 3] = core::array::from_fn(|i| {
        let (j, k) = cyclic(i);
        let ratio = omega2[i].square(ctx).div(&omega2[j].mul(&omega2[k], ctx).square(ctx), ctx);
        neg_quarter_pi2.mul(&ratio, ctx).mul(&fourth[j].mul(&fourth[k], ctx).div(&fourth[i], ctx), ctx)
    });
    let mut b: [BigComplex; 3] = core::array::from_fn(|_| BigComplex::zero(ctx));
    let mut c = b.clone();
    for i in 0..3 {
        (b[i], c[i]) = curve_coefficients(&theta0[i], &theta2[i], &omega2[i], ctx);
    }
    let rho = a[0].mul(&a[1], ctx).mul(&a[2], ctx);
    let u = UniformizedTriple { tau: tau.clone(), omega2: omega2.clone(), theta0, theta1, theta2, a, b, c, rho };
    let tol = -(ctx.bits() as f64) / 2.0;
    for i in 0..3 {
        let (j, k) = cyclic(i);
        let delta = u.b[i].square(ctx).add(&u.c[i], ctx);
        let r = log2_rel_diff(&delta, &u.a[j].mul(&u.a[k], ctx), ctx);
        if r > tol {
            return Err(KleinError::Inconsistent { what: "δᵢ = aⱼaₖ", log2: r });
        }
    }
    Ok(u)
}

impl UniformizedTriple {
    pub fn delta(&self, i: usize, ctx: &Ctx) -> BigComplex {
        self.b[i].square(ctx).add(&self.c[i], ctx)
    }

    /// `m(Ω)` in the Ciani layout.
    pub fn matrix(&self) -> CMatrix {
        let [a1, a2, a3] = &self.a;
        let [b1, b2, b3] = &self.b;
        let rows = [[a1, b3, b2], [b3, a2, b1], [b2, b1, a3]];
        CMatrix::from_fn(3, 3, |i, j| rows[i][j].clone())
    }

    pub fn det_m(&self, ctx: &Ctx) -> BigComplex {
        self.matrix().det(ctx)
    }

    /// `X(m) = (a₁a₂a₃)⁴·(c₁c₂c₃)²·det m` from the coefficients.
    pub fn x_direct(&self, ctx: &Ctx) -> BigComplex {
        let cs = self.c[0].mul(&self.c[1], ctx).mul(&self.c[2], ctx);
        self.rho.powu(4, ctx).mul(&cs.square(ctx), ctx).mul(&self.det_m(ctx), ctx)
    }

    /// The products `(𝖺, 𝖻, 𝖼, 𝖽)` of squared `θ[0;0]`, `θ[0;1]` values.
    pub fn abcd(&self, ctx: &Ctx) -> [BigComplex; 4] {
        let s0: [BigComplex; 3] = core::array::from_fn(|i| self.theta0[i].square(ctx));
        let s2: [BigComplex; 3] = core::array::from_fn(|i| self.theta2[i].square(ctx));
        let p = |x: &BigComplex, y: &BigComplex, z: &BigComplex| x.mul(y, ctx).mul(z, ctx);
        [p(&s0[0], &s0[1], &s2[2]), p(&s0[0], &s2[1], &s0[2]), p(&s2[0], &s0[1], &s0[2]), p(&s2[0], &s2[1], &s2[2])]
    }

    /// `∏ ω₂ᵢ`.
    pub fn det_omega2(&self, ctx: &Ctx) -> BigComplex {
        self.omega2[0].mul(&self.omega2[1], ctx).mul(&self.omega2[2], ctx)
    }

    /// `∏ (θ₀ᵢ⁴ − θ₂ᵢ⁴)`.
    fn jacobi_product(&self, ctx: &Ctx) -> BigComplex {
        (0..3).fold(BigComplex::one(ctx), |acc, i| acc.mul(&self.theta0[i].powu(4, ctx).sub(&self.theta2[i].powu(4, ctx), ctx), ctx))
    }

    /// `det m = π⁶/(2⁴·∏ω₂ᵢ²(θ₀ᵢ⁴ − θ₂ᵢ⁴))·R₁`.
    pub fn det_m_closed(&self, ctx: &Ctx) -> BigComplex {
        let pi6 = BigComplex::real(ctx, ctx.powi(&ctx.pi(), 6));
        let den = self.det_omega2(ctx).square(ctx).mul(&self.jacobi_product(ctx), ctx).scale_i64(16, ctx);
        pi6.mul(&r1_product(self, ctx), ctx).div(&den, ctx)
    }

    /// `X(m) = π⁵⁴/2⁴⁰·det(Ω₂)⁻¹⁸·∏θ₀ᵢ⁸θ₂ᵢ⁸(θ₀ᵢ⁴ − θ₂ᵢ⁴)³·R₁`.
    pub fn x_closed(&self, ctx: &Ctx) -> BigComplex {
        let lead = ctx.div(&ctx.powi(&ctx.pi(), 54), &ctx.pow2(40));
        let mut prod = self.jacobi_product(ctx).powu(3, ctx);
        for i in 0..3 {
            prod = prod.mul(&self.theta0[i].mul(&self.theta2[i], ctx).powu(8, ctx), ctx);
        }
        prod.mul(&r1_product(self, ctx), ctx).mul(&self.det_omega2(ctx).powi(-18, ctx), ctx).scale(&lead, ctx)
    }

    /// `Ω = [diag(τᵢω₂ᵢ) diag(ω₂ᵢ)]`.
    pub fn period_matrix(&self, ctx: &Ctx) -> PeriodMatrix {
        let w1: Vec<BigComplex> = (0..3).map(|i| self.tau[i].mul(&self.omega2[i], ctx)).collect();
        PeriodMatrix::new(CMatrix::diagonal(&w1, ctx), CMatrix::diagonal(&self.omega2, ctx))
    }
}

/// `R₁ = (𝖺+𝖻+𝖼+𝖽)(𝖺+𝖻−𝖼−𝖽)(𝖺−𝖻−𝖼+𝖽)(𝖺−𝖻+𝖼−𝖽)`.
pub fn r1_product(u: &UniformizedTriple, ctx: &Ctx) -> BigComplex {
    r1_factors(u, ctx).iter().fold(BigComplex::one(ctx), |acc, f| acc.mul(f, ctx))
}

fn r1_factors(u: &UniformizedTriple, ctx: &Ctx) -> [BigComplex; 4] {
    let [a, b, c, d] = u.abcd(ctx);
    let signed = |s: [i64; 3]| {
        let mut acc = a.clone();
        for (v, sign) in [&b, &c, &d].into_iter().zip(s) {
            acc = if sign > 0 { acc.add(v, ctx) } else { acc.sub(v, ctx) };
        }
        acc
    };
    [signed([1, 1, 1]), signed([1, -1, -1]), signed([-1, -1, 1]), signed([-1, 1, -1])]
}

/// The quotient period matrix and its Riemann matrix.
#[derive(Debug, Clone)]
pub struct QuotientPeriods {
    pub omega_prime: PeriodMatrix,
    /// `τ(Ω′) = Ω₂′⁻¹·Ω₁′`.
    pub tau_prime: RiemannMatrix,
    /// `log₂` of the largest difference between `τ(Ω′)` and `½·ᵗN.τ`.
    pub cross_check_log2: f64,
}

impl QuotientPeriods {
    pub fn det_omega2(&self, ctx: &Ctx) -> BigComplex {
        self.omega_prime.omega2.det(ctx)
    }
}

/// `Ω′ = Ω·N·H` with `H = diag(½·1, 1)`.
pub fn omega_prime(u: &UniformizedTriple, n: &SymplecticMatrix, ctx: &Ctx) -> Result<QuotientPeriods, KleinError> {
    let omega = u.period_matrix(ctx);
    let omega_prime = omega.mul_int(n.matrix(), ctx).halve_first(ctx);
    if !omega_prime.satisfies_riemann(ctx) {
        return Err(KleinError::RiemannConditions);
    }
    let tau_prime = omega_prime.tau(ctx)?;
    let via_action = act(&n.transpose(), &omega.tau(ctx)?, ctx)?.half(ctx);
    let cross_check_log2 = tau_prime.matrix().log2_max_diff(via_action.matrix(), ctx);
    if cross_check_log2 > tau_prime.matrix().max_log2_abs(ctx) - ctx.bits() as f64 / 2.0 {
        return Err(KleinError::Inconsistent { what: "τ(Ω′) = ½·ᵗN.τ", log2: cross_check_log2 });
    }
    Ok(QuotientPeriods { omega_prime, tau_prime, cross_check_log2 })
}

/// Right-hand sides of the 18 identities, as polynomials in the genus-1
/// constants. `T0(i), T1(i), T2(i)` stand for `θ[0;0], θ[1;0], θ[0;1]` at `τᵢ`.
#[derive(Debug, Clone, Copy)]
enum Rhs {
    /// `𝖺 ± 𝖻 ± 𝖼 ± 𝖽` with the signs of `𝖻, 𝖼, 𝖽`.
    Abcd([i8; 3]),
    /// `T0(i)T2(i)·T0(j)T2(j)·(T0(k)² ± T2(k)²)`, `k` the factor with the sum.
    Mixed { sum: usize, sign: i8 },
    /// `∏ᵢ T_{pᵢ}(i)·T_{qᵢ}(i)`.
    Monomial([(u8, u8); 3]),
}

/// Pairs of characteristics at `τ′/2`, the constant multiplying `c`, and the right side.
const IDENTITIES: [(&str, &str, i64, Rhs); 18] = [
    ("000;000", "000;001", 1, Rhs::Abcd([1, 1, 1])),
    ("000;010", "000;011", 1, Rhs::Abcd([1, -1, -1])),
    ("000;100", "000;101", -1, Rhs::Abcd([-1, -1, 1])),
    ("000;110", "000;111", -1, Rhs::Abcd([-1, 1, -1])),
    ("010;000", "010;001", 2, Rhs::Mixed { sum: 2, sign: 1 }),
    ("100;000", "100;001", 2, Rhs::Mixed { sum: 0, sign: 1 }),
    ("110;000", "110;001", 2, Rhs::Mixed { sum: 1, sign: 1 }),
    ("010;100", "010;101", 2, Rhs::Mixed { sum: 2, sign: -1 }),
    ("100;010", "100;011", 2, Rhs::Mixed { sum: 0, sign: -1 }),
    ("110;110", "110;111", -2, Rhs::Mixed { sum: 1, sign: -1 }),
    ("001;000", "001;010", 2, Rhs::Monomial([(0, 1), (0, 1), (0, 1)])),
    ("001;100", "001;110", 2, Rhs::Monomial([(0, 1), (0, 1), (0, 1)])),
    ("011;000", "011;100", 2, Rhs::Monomial([(1, 2), (1, 2), (0, 1)])),
    ("101;000", "101;010", 2, Rhs::Monomial([(0, 1), (1, 2), (1, 2)])),
    ("111;000", "111;110", 2, Rhs::Monomial([(1, 2), (0, 1), (1, 2)])),
    ("011;011", "011;111", -2, Rhs::Monomial([(1, 2), (1, 2), (0, 1)])),
    ("111;011", "111;101", -2, Rhs::Monomial([(1, 2), (0, 1), (1, 2)])),
    ("101;101", "101;111", -2, Rhs::Monomial([(0, 1), (1, 2), (1, 2)])),
];

/// The 36 even characteristics used by the 18 pairs, as listed.
pub fn identity_pairs() -> Vec<(ThetaCharacteristic, ThetaCharacteristic)> {
    IDENTITIES
        .iter()
        .map(|(p, q, _, _)| (ThetaCharacteristic::parse(p).expect("constant"), ThetaCharacteristic::parse(q).expect("constant")))
        .collect()
}

fn rhs_value(u: &UniformizedTriple, rhs: Rhs, ctx: &Ctx) -> BigComplex {
    let t = |which: u8, i: usize| match which {
        0 => &u.theta0[i],
        1 => &u.theta1[i],
        _ => &u.theta2[i],
    };
    match rhs {
        Rhs::Abcd(signs) => {
            let [a, b, c, d] = u.abcd(ctx);
            let mut acc = a;
            for (v, s) in [b, c, d].iter().zip(signs) {
                acc = if s > 0 { acc.add(v, ctx) } else { acc.sub(v, ctx) };
            }
            acc
        }
        Rhs::Mixed { sum, sign } => {
            let mut acc = BigComplex::one(ctx);
            for i in (0..3).filter(|&i| i != sum) {
                acc = acc.mul(&u.theta0[i].mul(&u.theta2[i], ctx), ctx);
            }
            let (x, y) = (u.theta0[sum].square(ctx), u.theta2[sum].square(ctx));
            acc.mul(&if sign > 0 { x.add(&y, ctx) } else { x.sub(&y, ctx) }, ctx)
        }
        Rhs::Monomial(parts) => {
            parts.iter().enumerate().fold(BigComplex::one(ctx), |acc, (i, &(p, q))| acc.mul(&t(p, i).mul(t(q, i), ctx), ctx))
        }
    }
}

#[derive(Debug, Clone)]
pub struct EighteenReport {
    /// The constant fitted from one identity.
    pub c: BigComplex,
    /// Which identity (0-based) `c` was fitted from.
    pub fitted_from: usize,
    /// `log₂` relative residuals, one per identity.
    pub residuals: Vec<f64>,
    /// `log₂` relative difference of `|c|` and `|det Ω₂′/det Ω₂|`.
    pub abs_c_log2: f64,
    /// Residual of `c = −det Ω₂′/det Ω₂`, the sign observed for the default `N`.
    pub signed_c_log2: f64,
    /// Residual of `∏_{first four} (k·rhs·c) = c⁴·R₁`.
    pub r1_log2: f64,
    /// Residual of `∏_{last 14} (k·rhs·c) = 2¹⁴c¹⁴·∏θ₀ᵢ⁸θ₂ᵢ⁸(θ₀ᵢ⁴ − θ₂ᵢ⁴)³`.
    pub r2_log2: f64,
}

impl EighteenReport {
    pub fn worst(&self) -> f64 {
        self.residuals.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Checks the 18 product identities at `τ(Ω′)`. The left sides are products of
/// two theta constants at `τ(Ω′)`; the right sides are polynomials in the
/// genus-1 constants times one common constant `c`.
pub fn eighteen_identities(u: &UniformizedTriple, n: &SymplecticMatrix, ctx: &Ctx) -> Result<EighteenReport, KleinError> {
    let q = omega_prime(u, n, ctx)?;
    let table = theta_table(&q.tau_prime, ctx)?;
    eighteen_from_table(u, &q, &table, ctx)
}

pub fn eighteen_from_table(
    u: &UniformizedTriple,
    q: &QuotientPeriods,
    table: &ThetaTable,
    ctx: &Ctx,
) -> Result<EighteenReport, KleinError> {
    let pairs = identity_pairs();
    let lhs: Vec<BigComplex> = pairs.iter().map(|(p, q)| table.get(p).mul(&table.get(q), ctx)).collect();
    let rhs: Vec<BigComplex> = IDENTITIES.iter().map(|&(_, _, k, r)| rhs_value(u, r, ctx).scale_i64(k, ctx)).collect();
    let sizes: Vec<f64> = lhs.iter().map(|v| v.log2_abs(ctx)).collect();
    let top = sizes.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return Err(KleinError::DegenerateIdentities);
    }
    let floor = top + Thresholds::for_precision(ctx.bits()).zero_log2;
    let fitted_from = if sizes[0] > floor { 0 } else { (0..18).max_by(|&i, &j| sizes[i].total_cmp(&sizes[j])).expect("18 entries") };
    let c = lhs[fitted_from].div(&rhs[fitted_from], ctx);
    let fitted: Vec<BigComplex> = rhs.iter().map(|r| r.mul(&c, ctx)).collect();
    let residuals = lhs.iter().zip(&fitted).map(|(l, r)| log2_rel_diff(l, r, ctx)).collect();

    let ratio = q.det_omega2(ctx).div(&u.det_omega2(ctx), ctx);
    let abs_c_log2 = log2_rel_diff(&BigComplex::real(ctx, c.abs(ctx)), &BigComplex::real(ctx, ratio.abs(ctx)), ctx);
    let signed_c_log2 = log2_rel_diff(&c, &ratio.neg(), ctx);

    let product = |r: core::ops::Range<usize>| r.fold(BigComplex::one(ctx), |acc, i| acc.mul(&fitted[i], ctx));
    let r1_log2 = log2_rel_diff(&product(0..4), &c.powu(4, ctx).mul(&r1_product(u, ctx), ctx), ctx);
    let mut r2 = u.jacobi_product(ctx).powu(3, ctx).mul(&c.powu(14, ctx), ctx).scale(&ctx.pow2(14), ctx);
    for i in 0..3 {
        r2 = r2.mul(&u.theta0[i].mul(&u.theta2[i], ctx).powu(8, ctx), ctx);
    }
    let r2_log2 = log2_rel_diff(&product(4..18), &r2, ctx);
    Ok(EighteenReport { c, fitted_from, residuals, abs_c_log2, signed_c_log2, r1_log2, r2_log2 })
}

#[derive(Debug, Clone)]
pub struct MainIdentityReport {
    pub triple: UniformizedTriple,
    pub quotient: QuotientPeriods,
    pub table: ThetaTable,
    pub chi18: BigComplex,
    /// `(π/2)^54·det(Ω₂′)^{−18}·χ18(τ(Ω′))`.
    pub lhs: BigComplex,
    /// `X(m(Ω))`.
    pub rhs: BigComplex,
    pub det_m: BigComplex,
    /// `log₂` relative residual; for degenerate inputs this is the larger of
    /// the two sides' `log₂` size relative to their generic scale.
    pub residual_log2: f64,
    /// `det m(Ω)` is negligible at this precision.
    pub degenerate: bool,
}

pub fn verify_main_identity(tau: &[BigComplex; 3], ctx: &Ctx) -> Result<MainIdentityReport, KleinError> {
    let u = coefficients_from_tau(tau, ctx)?;
    verify_main_identity_for(u, &klein_transporter(), ctx)
}

pub fn verify_main_identity_for(u: UniformizedTriple, n: &SymplecticMatrix, ctx: &Ctx) -> Result<MainIdentityReport, KleinError> {
    let quotient = omega_prime(&u, n, ctx)?;
    let table = theta_table(&quotient.tau_prime, ctx)?;
    let chi18 = table.chi(ctx);
    let lhs = main_lhs(&chi18, &quotient, ctx);
    let rhs = u.x_direct(ctx);
    let det_m = u.det_m(ctx);
    // det m relative to the size of its terms.
    let det_scale = u.a.iter().chain(&u.b).map(|v| v.log2_abs(ctx)).fold(f64::NEG_INFINITY, f64::max) * 3.0;
    let degenerate = det_m.log2_abs(ctx) - det_scale < Thresholds::for_precision(ctx.bits()).zero_log2;
    let residual_log2 = if degenerate {
        // Both sides are tiny; compare against the generic magnitude.
        let generic = rhs.log2_abs(ctx) - det_m.log2_abs(ctx) + det_scale;
        lhs.sub(&rhs, ctx).log2_abs(ctx) - generic
    } else {
        log2_rel_diff(&lhs, &rhs, ctx)
    };
    Ok(MainIdentityReport { triple: u, quotient, table, chi18, lhs, rhs, det_m, residual_log2, degenerate })
}

fn main_lhs(chi18: &BigComplex, q: &QuotientPeriods, ctx: &Ctx) -> BigComplex {
    let half_pi = ctx.div(&ctx.pi(), &ctx.int(2));
    chi18.mul(&q.det_omega2(ctx).powi(-18, ctx), ctx).scale(&ctx.powi(&half_pi, 54), ctx)
}

/// `(π/2)^54·det(Ω₂′)^{−18}·χ18(τ(Ω′))` for a given transporter lift.
pub fn quotient_chi18(u: &UniformizedTriple, n: &SymplecticMatrix, ctx: &Ctx) -> Result<BigComplex, KleinError> {
    let q = omega_prime(u, n, ctx)?;
    let chi = theta_table(&q.tau_prime, ctx)?.chi(ctx);
    Ok(main_lhs(&chi, &q, ctx))
}

/// The 8 characteristics of the points of `W` and the basis `α₁, α₂, α₃`.
#[derive(Debug, Clone)]
pub struct WCharacteristics {
    pub points: Vec<ThetaCharacteristic>,
    pub basis: [ThetaCharacteristic; 3],
    pub subspace: IsotropicSubspace,
}

pub fn w_characteristics() -> WCharacteristics {
    let basis = ["000;011", "000;110", "111;000"].map(|s| ThetaCharacteristic::parse(s).expect("constant"));
    let bits: Vec<u64> = basis.iter().map(ThetaCharacteristic::to_bits).collect();
    let subspace = IsotropicSubspace::new(3, &bits).expect("the α basis is isotropic");
    let points = (0..8u64)
        .map(|mask| {
            let v = (0..3).filter(|k| mask >> k & 1 == 1).fold(0, |acc, k| acc ^ bits[k]);
            ThetaCharacteristic::from_bits(3, v)
        })
        .collect();
    WCharacteristics { points, basis, subspace }
}

/// A period basis of `y² = x(x² − 4bx − 4c)`.
#[derive(Debug, Clone)]
pub struct EllipticPeriods {
    pub omega1: BigComplex,
    pub omega2: BigComplex,
    pub tau: BigComplex,
    /// `log₂` relative error of `(b, c)` recomputed from the theta constants.
    pub round_trip_log2: f64,
}

fn agm(a: BigComplex, b: BigComplex, ctx: &Ctx) -> Result<BigComplex, KleinError> {
    let (mut a, mut b) = (a, b);
    let half = ctx.f64(0.5);
    let limit = 2 * (usize::BITS - ctx.work().leading_zeros()) as usize + 60;
    for _ in 0..limit {
        let mean = a.add(&b, ctx).scale(&half, ctx);
        let mut geo = a.mul(&b, ctx).sqrt(ctx);
        // The right choice of square root keeps the iterates close.
        if mean.sub(&geo, ctx).abs_f64() > mean.add(&geo, ctx).abs_f64() {
            geo = geo.neg();
        }
        let gap = mean.sub(&geo, ctx).log2_abs(ctx) - mean.log2_abs(ctx);
        a = mean;
        b = geo;
        if gap < -(ctx.bits() as f64 + 16.0) {
            return Ok(a);
        }
    }
    Err(KleinError::AgmNoConvergence)
}

/// Periods by the AGM on the root differences. The result is gated by
/// recomputing `b` and `c` from the theta constants at `τ = ω₁/ω₂` with the
/// formulas used by [`coefficients_with_periods`]; when no branch passes the
/// gate, the configuration is reported as unsupported.
pub fn elliptic_periods(b: &Rational, c: &Rational, ctx: &Ctx) -> Result<EllipticPeriods, KleinError> {
    use num_traits::Zero;
    let delta = b * b + c;
    if c.is_zero() || delta.is_zero() {
        return Err(KleinError::Unsupported("singular curve (c = 0 or b² + c = 0)"));
    }
    let (bb, cc) = (BigComplex::real(ctx, ctx.rational(b)), BigComplex::real(ctx, ctx.rational(c)));
    let s = BigComplex::real(ctx, ctx.rational(&delta)).sqrt(ctx).scale_i64(2, ctx);
    let twice_b = bb.scale_i64(2, ctx);
    let roots = [twice_b.add(&s, ctx), twice_b.sub(&s, ctx)];
    let one = BigComplex::one(ctx);
    let pi = BigComplex::real(ctx, ctx.pi());
    let tol = -(ctx.bits() as f64) / 2.0;
    let mut last = Err(KleinError::Unsupported("no AGM branch reproduces (b, c)"));
    for (r1, r2) in [(&roots[0], &roots[1]), (&roots[1], &roots[0])] {
        let lambda = r2.div(r1, ctx);
        let k_prime = lambda.sqrt(ctx);
        let k = one.sub(&lambda, ctx).sqrt(ctx);
        let (m1, m2) = match (agm(one.clone(), k_prime, ctx), agm(one.clone(), k, ctx)) {
            (Ok(x), Ok(y)) => (x, y),
            (Err(e), _) | (_, Err(e)) => {
                last = Err(e);
                continue;
            }
        };
        let tau = m1.div(&m2, ctx).mul_i();
        if !tau.im.is_positive() || tau.im.is_zero() {
            continue;
        }
        let omega2 = pi.div(&m1, ctx).div(&r1.neg().sqrt(ctx), ctx);
        let [t0, _, t2] = elliptic_thetas(&tau, ctx)?;
        let (b2, c2) = curve_coefficients(&t0, &t2, &omega2, ctx);
        // b is measured against √|c|, which has the same weight and is never zero.
        let b_err = b2.sub(&bb, ctx).log2_abs(ctx) - (bb.log2_abs(ctx).max(cc.log2_abs(ctx) / 2.0));
        let err = b_err.max(log2_rel_diff(&c2, &cc, ctx));
        if err < tol {
            let omega1 = tau.mul(&omega2, ctx);
            return Ok(EllipticPeriods { omega1, omega2, tau, round_trip_log2: err });
        }
    }
    last
}

#[derive(Debug, Clone)]
pub struct CorollaryReport {
    /// `Cof m`, the matrix whose elliptic factors are uniformized.
    pub cofactor: CianiMatrix,
    /// `D(m)`.
    pub d: Rational,
    /// `X(Cof m)`.
    pub x: Rational,
    /// `X(Cof m) = D(m)²`, checked exactly.
    pub x_equals_d_squared: bool,
    /// `Disc Q_m = 2⁵⁴·D(m)`, checked exactly.
    pub disc_equals_closed: bool,
    /// One `τᵢ` was moved to `τᵢ + 1` to match the signs of the `aᵢ`.
    pub shifted: bool,
    /// `log₂` relative residual between the numerical `aᵢ` and those of `Cof m`.
    pub coefficient_log2: f64,
    pub main: MainIdentityReport,
    /// `log₂` relative residual of `(π/2)^54·det(Ω₂′)^{−18}·χ18(τ(Ω′))` against the exact `X(Cof m)`.
    pub residual_log2: f64,
}

impl CorollaryReport {
    pub fn passed(&self, ctx: &Ctx) -> bool {
        let tol = -(ctx.bits() as f64) / 2.0;
        self.x_equals_d_squared && self.disc_equals_closed && self.residual_log2 < tol && self.coefficient_log2 < tol
    }
}

/// Runs the pipeline on the elliptic factors of `Cof m` and compares with the
/// exact values `X(Cof m) = D(m)² = (2⁻⁵⁴·Disc Q_m)²`.
pub fn verify_klein_corollary(m: &CianiMatrix, ctx: &Ctx) -> Result<CorollaryReport, KleinError> {
    if !m.in_s_times() {
        return Err(KleinError::NotInSTimes);
    }
    let cof = m.cofactor();
    let d = closed_discriminant(m);
    let x = x_invariant(&cof);
    let x_equals_d_squared = x == &d * &d;
    let disc = discriminant_quartic(&ciani_form(m)).expect("Ciani forms are quartics");
    let disc_equals_closed = disc == crate::rational::pow(&crate::rational::int(2), 54) * &d;

    let mut tau: [BigComplex; 3] = core::array::from_fn(|_| BigComplex::zero(ctx));
    let mut omega2 = tau.clone();
    for i in 0..3 {
        let p = elliptic_periods(&cof.b[i], &cof.c(i), ctx)?;
        tau[i] = p.tau;
        omega2[i] = p.omega2;
    }
    let mut u = coefficients_with_periods(&tau, &omega2, ctx)?;
    let target: [BigComplex; 3] = core::array::from_fn(|i| BigComplex::real(ctx, ctx.rational(&cof.a[i])));
    let diff = |u: &UniformizedTriple| (0..3).map(|i| log2_rel_diff(&u.a[i], &target[i], ctx)).fold(f64::NEG_INFINITY, f64::max);
    let mut coefficient_log2 = diff(&u);
    let mut shifted = false;
    if coefficient_log2 > -(ctx.bits() as f64) / 2.0 {
        // τ₁ → τ₁ + 1 swaps θ[0;0] and θ[0;1] and negates θ[1;0]⁴, which
        // flips every aᵢ and keeps b, c.
        tau[0] = tau[0].add(&BigComplex::one(ctx), ctx);
        u = coefficients_with_periods(&tau, &omega2, ctx)?;
        coefficient_log2 = diff(&u);
        shifted = true;
    }
    let main = verify_main_identity_for(u, &klein_transporter(), ctx)?;
    let exact = BigComplex::real(ctx, ctx.rational(&x));
    let residual_log2 = log2_rel_diff(&main.lhs, &exact, ctx);
    Ok(CorollaryReport { cofactor: cof, d, x, x_equals_d_squared, disc_equals_closed, shifted, coefficient_log2, main, residual_log2 })
}

/// A point on the hyperelliptic locus found by root finding.
#[derive(Debug, Clone)]
pub struct HyperellipticPoint {
    /// `Im τ₃`.
    pub t: Real,
    pub det_m: BigComplex,
    pub main: MainIdentityReport,
    pub igusa: IgusaReport,
}

/// Real `det m(Ω)` along `τ₃ = it`, with `τ₁, τ₂` purely imaginary.
fn det_m_along(y1: &Real, y2: &Real, t: &Real, ctx: &Ctx) -> Result<Real, KleinError> {
    let tau = [y1, y2, t].map(|y| BigComplex::new(ctx.zero(), y.clone()));
    Ok(coefficients_from_tau(&tau, ctx)?.det_m(ctx).re)
}

/// Finds `t` with `det m(Ω(iy₁, iy₂, it)) = 0` by bisection and classifies
/// the quotient.
pub fn hyperelliptic_point(y1: f64, y2: f64, ctx: &Ctx) -> Result<HyperellipticPoint, KleinError> {
    let (y1, y2) = (ctx.f64(y1), ctx.f64(y2));
    let mut lo = ctx.f64(0.25);
    let mut f_lo = det_m_along(&y1, &y2, &lo, ctx)?;
    let mut hi = None;
    let mut t = 0.25f64;
    while t < 8.0 {
        t *= 1.25;
        let x = ctx.f64(t);
        let f = det_m_along(&y1, &y2, &x, ctx)?;
        if f.is_negative() != f_lo.is_negative() {
            hi = Some(x);
            break;
        }
        lo = x;
        f_lo = f;
    }
    let mut hi = hi.ok_or(KleinError::NoBracket)?;
    let half = ctx.f64(0.5);
    for _ in 0..ctx.bits() {
        let mid = ctx.mul(&ctx.add(&lo, &hi), &half);
        let f = det_m_along(&y1, &y2, &mid, ctx)?;
        if f.is_zero() {
            lo = mid.clone();
            hi = mid;
            break;
        }
        if f.is_negative() == f_lo.is_negative() {
            lo = mid;
            f_lo = f;
        } else {
            hi = mid;
        }
    }
    let t = ctx.mul(&ctx.add(&lo, &hi), &half);
    let tau = [&y1, &y2, &t].map(|y| BigComplex::new(ctx.zero(), y.clone()));
    let u = coefficients_from_tau(&tau, ctx)?;
    let det_m = u.det_m(ctx);
    let main = verify_main_identity_for(u, &klein_transporter(), ctx)?;
    let igusa = igusa_classify(&main.table, Thresholds::for_precision(ctx.bits()), ctx);
    Ok(HyperellipticPoint { t, det_m, main, igusa })
}
