//! Ciani quartics, symmetric 3×3 matrices and products of elliptic curves.
//!
//! A symmetric matrix
//!
//! ```text
//!     ⎡ a₁ b₃ b₂ ⎤
//! m = ⎢ b₃ a₂ b₁ ⎥
//!     ⎣ b₂ b₁ a₃ ⎦
//! ```
//!
//! gives the quartic `Q_m = ᵗv·m·v` with `v = (x², y², z²)` and the three
//! elliptic curves `Eᵢ: y² = x(x² − 4bᵢx − 4cᵢ)` where `cᵢ = aⱼaₖ − bᵢ²` is
//! the cofactor of `aᵢ` (indices cyclic). The sign of `T = det m` in ℚ*/ℚ*²
//! decides whether the associated quotient threefold is a Jacobian over ℚ.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_traits::{One, Zero};
use rand_core::RngCore;

use crate::linalg::QMatrix;
use crate::poly::{Monomial, TernaryForm};
use crate::rational::{self, int, pow, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CianiError {
    #[error("matrix is not in S: some aᵢ or cᵢ vanishes")]
    NotInS,
    #[error("matrix is singular (det m = 0)")]
    Singular,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("curve {0} is singular: c = 0 or b² + c = 0")]
    SingularCurve(usize),
    #[error("ρ² does not equal δ₁δ₂δ₃")]
    RhoMismatch,
    #[error("the chosen roots multiply to −ρ instead of ρ")]
    RootProductMismatch,
    #[error("form is not a Ciani quartic (only x⁴, y⁴, z⁴, y²z², x²z², x²y² may occur)")]
    NotCiani,
}

/// Cyclic successors `(j, k)` of `i`.
fn others(i: usize) -> (usize, usize) {
    ((i + 1) % 3, (i + 2) % 3)
}

/// A symmetric 3×3 rational matrix in the `(a, b)` layout shown above.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CianiMatrix {
    pub a: [Rational; 3],
    pub b: [Rational; 3],
}

impl CianiMatrix {
    pub fn new(a: [Rational; 3], b: [Rational; 3]) -> Self {
        Self { a, b }
    }

    pub fn from_i64(a: [i64; 3], b: [i64; 3]) -> Self {
        Self { a: a.map(int), b: b.map(int) }
    }

    pub fn identity() -> Self {
        Self::from_i64([1, 1, 1], [0, 0, 0])
    }

    pub fn from_matrix(m: &QMatrix) -> Result<Self, CianiError> {
        if m.rows() != 3 || m.cols() != 3 || !m.is_symmetric() {
            return Err(CianiError::NotSymmetric);
        }
        Ok(Self {
            a: [m[(0, 0)].clone(), m[(1, 1)].clone(), m[(2, 2)].clone()],
            b: [m[(1, 2)].clone(), m[(0, 2)].clone(), m[(0, 1)].clone()],
        })
    }

    pub fn to_matrix(&self) -> QMatrix {
        let [a1, a2, a3] = &self.a;
        let [b1, b2, b3] = &self.b;
        QMatrix::from_rows(&[
            &[a1.clone(), b3.clone(), b2.clone()],
            &[b3.clone(), a2.clone(), b1.clone()],
            &[b2.clone(), b1.clone(), a3.clone()],
        ])
    }

    /// `cᵢ = aⱼaₖ − bᵢ²`, the cofactor of `aᵢ`.
    pub fn c(&self, i: usize) -> Rational {
        let (j, k) = others(i);
        &self.a[j] * &self.a[k] - &self.b[i] * &self.b[i]
    }

    pub fn cs(&self) -> [Rational; 3] {
        [self.c(0), self.c(1), self.c(2)]
    }

    /// `δᵢ = bᵢ² + cᵢ = aⱼaₖ`.
    pub fn delta(&self, i: usize) -> Rational {
        let (j, k) = others(i);
        &self.a[j] * &self.a[k]
    }

    pub fn a_product(&self) -> Rational {
        &self.a[0] * &self.a[1] * &self.a[2]
    }

    pub fn c_product(&self) -> Rational {
        self.c(0) * self.c(1) * self.c(2)
    }

    pub fn det(&self) -> Rational {
        let [a1, a2, a3] = &self.a;
        let [b1, b2, b3] = &self.b;
        a1 * a2 * a3 + int(2) * b1 * b2 * b3 - a1 * b1 * b1 - a2 * b2 * b2 - a3 * b3 * b3
    }

    pub fn in_s(&self) -> bool {
        !self.a_product().is_zero() && !self.c_product().is_zero()
    }

    pub fn in_s_times(&self) -> bool {
        self.in_s() && !self.det().is_zero()
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self { a: self.a.clone().map(|x| x * s), b: self.b.clone().map(|x| x * s) }
    }

    pub fn cofactor(&self) -> Self {
        Self::from_matrix(&cofactor(&self.to_matrix())).expect("cofactor of a symmetric matrix is symmetric")
    }
}

/// The cofactor matrix, `m · ᵗ(Cof m) = det(m)·I`.
pub fn cofactor(m: &QMatrix) -> QMatrix {
    m.cofactor()
}

/// `Q_m = a₁x⁴ + a₂y⁴ + a₃z⁴ + 2(b₁y²z² + b₂x²z² + b₃x²y²)`.
pub fn ciani_form(m: &CianiMatrix) -> TernaryForm {
    let two = int(2);
    TernaryForm::from_terms(
        4,
        [
            (Monomial::new(4, 0, 0), m.a[0].clone()),
            (Monomial::new(0, 4, 0), m.a[1].clone()),
            (Monomial::new(0, 0, 4), m.a[2].clone()),
            (Monomial::new(0, 2, 2), &two * &m.b[0]),
            (Monomial::new(2, 0, 2), &two * &m.b[1]),
            (Monomial::new(2, 2, 0), &two * &m.b[2]),
        ],
    )
}

/// Reads `m` back from a Ciani form.
pub fn matrix_of_form(q: &TernaryForm) -> Result<CianiMatrix, CianiError> {
    if q.degree() != 4 {
        return Err(CianiError::NotCiani);
    }
    let allowed = [
        Monomial::new(4, 0, 0),
        Monomial::new(0, 4, 0),
        Monomial::new(0, 0, 4),
        Monomial::new(0, 2, 2),
        Monomial::new(2, 0, 2),
        Monomial::new(2, 2, 0),
    ];
    if q.terms().any(|(m, _)| !allowed.contains(m)) {
        return Err(CianiError::NotCiani);
    }
    let half = rational::frac(1, 2);
    let c = |k: usize| q.coefficient(&allowed[k]);
    Ok(CianiMatrix::new([c(0), c(1), c(2)], [c(3) * &half, c(4) * &half, c(5) * &half]))
}

/// `D(m) = a₁a₂a₃ (c₁c₂c₃)² det(m)⁴`, so that `Disc Q_m = 2⁵⁴ D(m)`.
pub fn closed_discriminant(m: &CianiMatrix) -> Rational {
    m.a_product() * pow(&m.c_product(), 2) * pow(&m.det(), 4)
}

/// `X(m) = (a₁a₂a₃)⁴ (c₁c₂c₃)² det m`.
pub fn x_invariant(m: &CianiMatrix) -> Rational {
    pow(&m.a_product(), 4) * pow(&m.c_product(), 2) * m.det()
}

pub fn is_square_rational(q: &Rational) -> bool {
    rational::is_square_rational(q)
}

/// `E₁ × E₂ × E₃` with `Eᵢ: y² = x(x² − 4bᵢx − 4cᵢ)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EllipticTriple {
    b: [Rational; 3],
    c: [Rational; 3],
}

impl EllipticTriple {
    pub fn new(b: [Rational; 3], c: [Rational; 3]) -> Result<Self, CianiError> {
        for i in 0..3 {
            if c[i].is_zero() || (&b[i] * &b[i] + &c[i]).is_zero() {
                return Err(CianiError::SingularCurve(i + 1));
            }
        }
        Ok(Self { b, c })
    }

    pub fn b(&self) -> &[Rational; 3] {
        &self.b
    }

    pub fn c(&self) -> &[Rational; 3] {
        &self.c
    }

    /// `δᵢ = bᵢ² + cᵢ`.
    pub fn delta(&self, i: usize) -> Rational {
        &self.b[i] * &self.b[i] + &self.c[i]
    }

    pub fn delta_product(&self) -> Rational {
        self.delta(0) * self.delta(1) * self.delta(2)
    }

    /// `Δᵢ = 2¹² cᵢ² δᵢ`.
    pub fn discriminant(&self, i: usize) -> Rational {
        int(4096) * &self.c[i] * &self.c[i] * self.delta(i)
    }
}

/// A product of elliptic curves with a chosen `ρ`, `ρ² = δ₁δ₂δ₃`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MarkedTriple {
    base: EllipticTriple,
    rho: Rational,
}

impl MarkedTriple {
    pub fn new(base: EllipticTriple, rho: Rational) -> Result<Self, CianiError> {
        if &rho * &rho != base.delta_product() {
            return Err(CianiError::RhoMismatch);
        }
        Ok(Self { base, rho })
    }

    pub fn base(&self) -> &EllipticTriple {
        &self.base
    }

    pub fn rho(&self) -> &Rational {
        &self.rho
    }
}

/// `Mat(Ã)`: diagonal `ρ/δᵢ`, off-diagonal `bᵢ`. The result always lies in S.
pub fn mat_of(t: &MarkedTriple) -> CianiMatrix {
    let e = &t.base;
    let a = [0, 1, 2].map(|i| &t.rho / e.delta(i));
    CianiMatrix::new(a, e.b.clone())
}

/// `Ab(m)`: the curves `Eᵢ` read off `m`, marked with `ρ = a₁a₂a₃`.
pub fn ab_of(m: &CianiMatrix) -> Result<MarkedTriple, CianiError> {
    if !m.in_s() {
        return Err(CianiError::NotInS);
    }
    let base = EllipticTriple::new(m.b.clone(), m.cs()).expect("m ∈ S gives nonsingular curves");
    for i in 0..3 {
        debug_assert_eq!(base.delta(i), m.delta(i));
    }
    let rho = m.a_product();
    Ok(MarkedTriple::new(base, rho).expect("δ(A) = (a₁a₂a₃)² on S"))
}

/// `T(Ã) = det Mat(Ã)`. The closed expansion
/// `2b₁b₂b₃ − ρ(Σ bᵢ²/δᵢ − 1)` is evaluated as well and must agree.
pub fn t_invariant(t: &MarkedTriple) -> Rational {
    let det = mat_of(t).det();
    let e = &t.base;
    let sum: Rational = (0..3).map(|i| &e.b[i] * &e.b[i] / e.delta(i)).sum();
    let expanded = int(2) * &e.b[0] * &e.b[1] * &e.b[2] - &t.rho * (sum - Rational::one());
    assert_eq!(det, expanded, "closed form of T disagrees with det Mat(Ã)");
    det
}

/// The expression `T₀` in the `y² = x(x² + Aᵢx + Bᵢ)` normalization, given
/// the `(Aᵢ, Bᵢ)` and `ρ`. The products `dᵢ = −4ρᵢ` enter only through
/// `d₁d₂d₃ = −64ρ`. It equals `64·T`.
pub fn hlp_t0(coeffs: &[(Rational, Rational); 3], rho: &Rational) -> Rational {
    let d_product = int(-64) * rho;
    let mut sum = -Rational::one();
    for (a, b) in coeffs {
        let disc = a * a - int(4) * b;
        sum += a * a / disc;
    }
    let a_product = &coeffs[0].0 * &coeffs[1].0 * &coeffs[2].0;
    d_product * sum - int(2) * a_product
}

/// `(Aᵢ, Bᵢ) = (−4bᵢ, −4cᵢ)`.
pub fn hlp_coefficients(e: &EllipticTriple) -> [(Rational, Rational); 3] {
    [0, 1, 2].map(|i| (int(-4) * &e.b[i], int(-4) * &e.c[i]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum JacobianLabel {
    HyperellipticJacobian,
    NonHyperellipticJacobian,
    QuadraticTwistObstruction,
}

impl JacobianLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            JacobianLabel::HyperellipticJacobian => "HyperellipticJacobian",
            JacobianLabel::NonHyperellipticJacobian => "NonHyperellipticJacobian",
            JacobianLabel::QuadraticTwistObstruction => "QuadraticTwistObstruction",
        }
    }
}

/// The twist by `d = det m` that removes the obstruction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Twist {
    pub d: Rational,
    pub matrix: CianiMatrix,
    /// `Eᵢ: y² = x(x² − 4bᵢd·x − 4cᵢd²)`.
    pub curves: EllipticTriple,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub label: JacobianLabel,
    pub t: Rational,
    pub square: bool,
    pub twist: Option<Twist>,
}

pub fn classify(t: &MarkedTriple) -> Classification {
    let m = mat_of(t);
    debug_assert!(m.in_s());
    let tv = t_invariant(t);
    let square = is_square_rational(&tv);
    if tv.is_zero() {
        return Classification { label: JacobianLabel::HyperellipticJacobian, t: tv, square, twist: None };
    }
    if square {
        return Classification { label: JacobianLabel::NonHyperellipticJacobian, t: tv, square, twist: None };
    }
    let md = m.scale(&tv);
    let e = &t.base;
    let curves = EllipticTriple::new(e.b.clone().map(|b| b * &tv), e.c.clone().map(|c| c * &tv * &tv))
        .expect("twisting by d ≠ 0 keeps the curves nonsingular");
    debug_assert_eq!(ab_of(&md).map(|x| x.base), Ok(curves.clone()));
    Classification {
        label: JacobianLabel::QuadraticTwistObstruction,
        t: tv.clone(),
        square,
        twist: Some(Twist { d: tv, matrix: md, curves }),
    }
}

pub fn classify_matrix(m: &CianiMatrix) -> Result<Classification, CianiError> {
    Ok(classify(&ab_of(m)?))
}

/// The quotient curves `Fᵢ: y² = x(x² − 4dᵢx − 4aᵢ det m)`, returned as
/// `(dᵢ, aᵢ det m)`, where `dᵢ` is the off-diagonal entry of `Cof m` in the
/// `bᵢ` position. Checked against `Ab(Cof m) = (B_m, c₁c₂c₃)`.
pub fn quotient_curves(m: &CianiMatrix) -> Result<[(Rational, Rational); 3], CianiError> {
    if !m.in_s() {
        return Err(CianiError::NotInS);
    }
    let det = m.det();
    if det.is_zero() {
        return Err(CianiError::Singular);
    }
    let cof = m.cofactor();
    let out = [0, 1, 2].map(|i| (cof.b[i].clone(), &m.a[i] * &det));
    let via_ab = ab_of(&cof).expect("Cof m ∈ S for m ∈ S×");
    for (i, (d, e)) in out.iter().enumerate() {
        assert_eq!(&via_ab.base.b[i], d);
        assert_eq!(&via_ab.base.c[i], e);
    }
    assert_eq!(via_ab.rho, m.c_product());
    Ok(out)
}

/// A square root of `δᵢ`, written `2bᵢ ± 2·rᵢ` style: `sign·rᵢ` where `rᵢ` is
/// a fixed reference root. The references satisfy `r₁r₂r₃ = ρ`; when `δᵢ` is
/// a rational square `rᵢ` is its non-negative root for `i = 1, 2` and `r₃`
/// is then forced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RootSign {
    Plus,
    Minus,
}

impl RootSign {
    fn flip(self) -> Self {
        match self {
            RootSign::Plus => RootSign::Minus,
            RootSign::Minus => RootSign::Plus,
        }
    }

    fn is_minus(self) -> bool {
        self == RootSign::Minus
    }
}

/// The x-coordinate of a 2-torsion point on `Eᵢ`: `base + sign·2rᵢ`,
/// or the point at infinity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TorsionPoint {
    Infinity,
    /// `(x, 0)` with `x = base + sign·2·rᵢ` (`Q` has no root part).
    Finite {
        base: Rational,
        root: Option<RootSign>,
    },
}

impl TorsionPoint {
    /// Numeric x-coordinate when `rᵢ` is rational.
    pub fn x(&self, reference_root: Option<&Rational>) -> Option<Rational> {
        match self {
            TorsionPoint::Infinity => None,
            TorsionPoint::Finite { base, root: None } => Some(base.clone()),
            TorsionPoint::Finite { base, root: Some(s) } => {
                let r = reference_root?;
                let two_r = int(2) * r;
                Some(if s.is_minus() { base - two_r } else { base + two_r })
            }
        }
    }
}

/// Labels of the points in `W` in their listed order:
/// `O, Q, P, R` per factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PointLabel {
    O,
    Q,
    P,
    R,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WSubgroup {
    pub labels: [[PointLabel; 3]; 8],
    pub points: BTreeSet<[TorsionPoint; 3]>,
    /// Reference roots `rᵢ` when they are rational.
    pub reference_roots: [Option<Rational>; 3],
}

/// Reference roots with `r₁r₂r₃ = ρ`, when every `δᵢ` is a rational square.
pub fn rational_reference_roots(t: &MarkedTriple) -> Option<[Rational; 3]> {
    let r1 = rational::sqrt_rational(&t.base.delta(0))?;
    let r2 = rational::sqrt_rational(&t.base.delta(1))?;
    let r3 = &t.rho / (&r1 * &r2);
    debug_assert_eq!(&r3 * &r3, t.base.delta(2));
    Some([r1, r2, r3])
}

/// Converts explicit rational roots `ρᵢ` (`ρᵢ² = δᵢ`) into signs relative to
/// [`rational_reference_roots`].
pub fn signs_from_roots(t: &MarkedTriple, roots: &[Rational; 3]) -> Result<[RootSign; 3], CianiError> {
    let refs = rational_reference_roots(t).ok_or(CianiError::RhoMismatch)?;
    let mut signs = [RootSign::Plus; 3];
    for i in 0..3 {
        signs[i] = if roots[i] == refs[i] {
            RootSign::Plus
        } else if roots[i] == -refs[i].clone() {
            RootSign::Minus
        } else {
            return Err(CianiError::RhoMismatch);
        };
    }
    Ok(signs)
}

/// The subgroup `W ⊂ A[2]` of order 8 attached to `ρ₁ρ₂ρ₃ = ρ`:
/// `Qᵢ = (0, 0)`, `Pᵢ = (2bᵢ + 2ρᵢ, 0)`, `Rᵢ = (2bᵢ − 2ρᵢ, 0)`.
/// The roots are given as signs against reference roots whose product is `ρ`.
pub fn w_subgroup(t: &MarkedTriple, signs: [RootSign; 3]) -> Result<WSubgroup, CianiError> {
    if signs.iter().filter(|s| s.is_minus()).count() % 2 == 1 {
        return Err(CianiError::RootProductMismatch);
    }
    use PointLabel::*;
    let labels = [[O, O, O], [O, Q, Q], [Q, O, Q], [Q, Q, O], [P, P, P], [P, R, R], [R, P, R], [R, R, P]];
    let point = |i: usize, l: PointLabel| {
        let base = int(2) * &t.base.b[i];
        match l {
            O => TorsionPoint::Infinity,
            Q => TorsionPoint::Finite { base: Rational::zero(), root: None },
            P => TorsionPoint::Finite { base, root: Some(signs[i]) },
            R => TorsionPoint::Finite { base, root: Some(signs[i].flip()) },
        }
    };
    let points = labels.iter().map(|row| [0, 1, 2].map(|i| point(i, row[i]))).collect();
    let reference_roots = match rational_reference_roots(t) {
        Some([a, b, c]) => [Some(a), Some(b), Some(c)],
        None => [None, None, None],
    };
    Ok(WSubgroup { labels, points, reference_roots })
}

/// A random matrix with small integer entries in `[-bound, bound]` that lies
/// in S (and in S× when `invertible`).
pub fn random_matrix(rng: &mut impl RngCore, bound: i64, invertible: bool) -> CianiMatrix {
    let span = (2 * bound + 1) as u64;
    let mut draw = || int((rng.next_u64() % span) as i64 - bound);
    loop {
        let m = CianiMatrix::new([draw(), draw(), draw()], [draw(), draw(), draw()]);
        if m.in_s() && (!invertible || !m.det().is_zero()) {
            return m;
        }
    }
}

/// A random rational matrix: entries `n/d` with `|n| ≤ bound`, `1 ≤ d ≤ bound`.
pub fn random_rational_matrix(rng: &mut impl RngCore, bound: i64, invertible: bool) -> CianiMatrix {
    let span = (2 * bound + 1) as u64;
    let mut draw = || {
        let n = (rng.next_u64() % span) as i64 - bound;
        let d = (rng.next_u64() % bound as u64) as i64 + 1;
        rational::frac(n, d)
    };
    loop {
        let m = CianiMatrix::new([draw(), draw(), draw()], [draw(), draw(), draw()]);
        if m.in_s() && (!invertible || !m.det().is_zero()) {
            return m;
        }
    }
}

/// The eight labelled rows as short strings such as `"P1,R2,R3"`.
pub fn label_rows(w: &WSubgroup) -> Vec<[&'static str; 3]> {
    const NAMES: [[&str; 4]; 3] = [["O", "Q1", "P1", "R1"], ["O", "Q2", "P2", "R2"], ["O", "Q3", "P3", "R3"]];
    w.labels.iter().map(|row| [0, 1, 2].map(|i| NAMES[i][row[i] as usize])).collect()
}
