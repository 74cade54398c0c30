//! Sylvester's determinantal resultant of three ternary cubics, and the
//! discriminant of a ternary quartic as the resultant of its gradient.
//!
//! For each degree-2 monomial `x^ν` every cubic is split as
//! `fᵢ = x^(ν₁+1)·fᵢ₁ + y^(ν₂+1)·fᵢ₂ + z^(ν₃+1)·fᵢ₃` with `deg fᵢⱼ = 2 − νⱼ`.
//! The 3×3 determinant of the split parts defines `S(x^ν) ∈ V₄`. The
//! resultant is the determinant of
//! `T(l₁, l₂, l₃, g) = l₁f₁ + l₂f₂ + l₃f₃ + S(g)` from `V₁³ × V₂` to `V₄`.

use alloc::vec::Vec;

use crate::linalg::QMatrix;
use crate::poly::{basis, basis_index, Monomial, TernaryForm};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum ResultantError {
    #[error("expected a ternary cubic, got degree {0}")]
    NotCubic(u32),
    #[error("expected a ternary quartic, got degree {0}")]
    NotQuartic(u32),
}

/// Which slot a monomial goes to when several of the three variable powers
/// divide it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SplitRule {
    /// Try `x`, then `y`, then `z`.
    #[default]
    Greedy,
    /// Try `z`, then `y`, then `x`.
    Reverse,
}

impl SplitRule {
    fn order(self) -> [usize; 3] {
        match self {
            SplitRule::Greedy => [0, 1, 2],
            SplitRule::Reverse => [2, 1, 0],
        }
    }
}

/// Splits a cubic along `x^ν` (`ν` of degree 2). Returns the three parts
/// `(f₁, f₂, f₃)` with `f = Σ x_j^(ν_j+1)·f_j`.
pub fn split_monomial(f: &TernaryForm, nu: &Monomial, rule: SplitRule) -> [TernaryForm; 3] {
    assert_eq!(f.degree(), 3, "split_monomial needs a cubic");
    assert_eq!(nu.degree(), 2, "split_monomial needs a degree-2 monomial");
    let e = nu.exps();
    let powers: [Monomial; 3] = core::array::from_fn(|j| {
        let mut p = [0; 3];
        p[j] = e[j] + 1;
        Monomial::new(p[0], p[1], p[2])
    });
    let mut parts: [Vec<(Monomial, Rational)>; 3] = Default::default();
    for (m, c) in f.terms() {
        let slot = rule
            .order()
            .into_iter()
            .find(|&j| powers[j].divides(m))
            .unwrap_or_else(|| panic!("no slot for {m} under {nu}; a cubic monomial always has one"));
        parts[slot].push((m.div(&powers[slot]).expect("slot divides"), c.clone()));
    }
    let [p0, p1, p2] = parts;
    [TernaryForm::from_terms(2 - e[0], p0), TernaryForm::from_terms(2 - e[1], p1), TernaryForm::from_terms(2 - e[2], p2)]
}

/// Three cubics together with their splittings along every `x^ν ∈ V₂`.
#[derive(Debug, Clone)]
pub struct SylvesterSystem {
    cubics: [TernaryForm; 3],
    /// `splits[n][i]` is the split of `cubics[i]` along `basis(2)[n]`.
    splits: Vec<[[TernaryForm; 3]; 3]>,
}

impl SylvesterSystem {
    pub fn new(f1: &TernaryForm, f2: &TernaryForm, f3: &TernaryForm, rule: SplitRule) -> Result<Self, ResultantError> {
        for f in [f1, f2, f3] {
            if f.degree() != 3 {
                return Err(ResultantError::NotCubic(f.degree()));
            }
        }
        let cubics = [f1.clone(), f2.clone(), f3.clone()];
        let splits = basis(2).iter().map(|nu| core::array::from_fn(|i| split_monomial(&cubics[i], nu, rule))).collect();
        let sys = Self { cubics, splits };
        sys.check_splitting();
        Ok(sys)
    }

    pub fn cubics(&self) -> &[TernaryForm; 3] {
        &self.cubics
    }

    pub fn split(&self, nu: &Monomial, i: usize) -> &[TernaryForm; 3] {
        &self.splits[basis_index(nu)][i]
    }

    /// Re-expands every split and compares with the original cubic.
    fn check_splitting(&self) {
        for (nu, rows) in basis(2).iter().zip(&self.splits) {
            let e = nu.exps();
            for (f, parts) in self.cubics.iter().zip(rows) {
                let mut acc = TernaryForm::zero(3);
                for j in 0..3 {
                    let mut p = [0; 3];
                    p[j] = e[j] + 1;
                    let lead = TernaryForm::term(Rational::from_integer(1.into()), Monomial::new(p[0], p[1], p[2]));
                    acc = acc.add(&lead.mul(&parts[j])).expect("split terms are cubic");
                }
                assert_eq!(&acc, f, "splitting identity failed along {nu}");
            }
        }
    }

    /// `S(x^ν)`: the determinant of the 3×3 matrix of split parts.
    pub fn s_image(&self, nu: &Monomial) -> TernaryForm {
        let f = &self.splits[basis_index(nu)];
        let term = |a: usize, b: usize, c: usize| f[0][a].mul(&f[1][b]).mul(&f[2][c]);
        let plus = [(0, 1, 2), (1, 2, 0), (2, 0, 1)];
        let minus = [(0, 2, 1), (1, 0, 2), (2, 1, 0)];
        let mut acc = TernaryForm::zero(4);
        for (a, b, c) in plus {
            acc = acc.add(&term(a, b, c)).expect("S(x^ν) has degree 4");
        }
        for (a, b, c) in minus {
            acc = acc.sub(&term(a, b, c)).expect("S(x^ν) has degree 4");
        }
        acc
    }

    /// The 15×15 matrix of `T`. Rows follow `basis(4)`; columns are
    /// `x·f₁, x·f₂, x·f₃, y·f₁, …, z·f₃` and then `S(x^ν)` for `ν` in
    /// `basis(2)`. This orientation gives `Res(x³, y³, z³) = +1`.
    pub fn matrix(&self) -> QMatrix {
        let mut columns: Vec<TernaryForm> = Vec::with_capacity(15);
        for k in 0..3 {
            let var = TernaryForm::term(Rational::from_integer(1.into()), Monomial::var(k));
            for f in &self.cubics {
                columns.push(var.mul(f));
            }
        }
        for nu in basis(2) {
            columns.push(self.s_image(&nu));
        }
        let mut m = QMatrix::zeros(15, 15);
        for (col, form) in columns.iter().enumerate() {
            for (mono, c) in form.terms() {
                m[(basis_index(mono), col)] = c.clone();
            }
        }
        m
    }
}

pub fn sylvester_matrix(sys: &SylvesterSystem) -> QMatrix {
    sys.matrix()
}

/// `Res(f₁, f₂, f₃)` for three ternary cubics, normalized so that
/// `Res(x³, y³, z³) = 1`.
pub fn resultant3(f1: &TernaryForm, f2: &TernaryForm, f3: &TernaryForm) -> Result<Rational, ResultantError> {
    resultant3_with(f1, f2, f3, SplitRule::Greedy)
}

pub fn resultant3_with(f1: &TernaryForm, f2: &TernaryForm, f3: &TernaryForm, rule: SplitRule) -> Result<Rational, ResultantError> {
    let sys = SylvesterSystem::new(f1, f2, f3, rule)?;
    Ok(sys.matrix().det())
}

/// `Disc Q = Res(∂ₓQ, ∂ᵧQ, ∂_zQ)`; zero iff the plane quartic `Q = 0` is singular.
pub fn discriminant_quartic(q: &TernaryForm) -> Result<Rational, ResultantError> {
    if q.degree() != 4 {
        return Err(ResultantError::NotQuartic(q.degree()));
    }
    let [q1, q2, q3] = q.gradient();
    resultant3(&q1, &q2, &q3)
}
