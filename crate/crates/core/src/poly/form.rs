use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use super::monomial::Monomial;
use crate::linalg::QMatrix;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("degree mismatch: {left} vs {right}")]
pub struct DegreeMismatch {
    pub left: u32,
    pub right: u32,
}

/// One of the three variables `x₁ = x`, `x₂ = y`, `x₃ = z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }
}

/// A homogeneous form in `x, y, z` with rational coefficients.
///
/// Only nonzero coefficients are stored and every stored monomial has degree
/// exactly `degree`; the zero form keeps its degree tag.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TernaryForm {
    degree: u32,
    terms: BTreeMap<Monomial, Rational>,
}

impl TernaryForm {
    pub fn zero(degree: u32) -> Self {
        Self { degree, terms: BTreeMap::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, Monomial::ONE)
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut f = Self::zero(m.degree());
        if !c.is_zero() {
            f.terms.insert(m, c);
        }
        f
    }

    pub fn var(axis: Axis) -> Self {
        Self::term(Rational::one(), Monomial::var(axis.index()))
    }

    /// Builds a form from `(monomial, coefficient)` pairs, summing repeats.
    /// Panics if the monomials do not all have degree `degree`.
    pub fn from_terms(degree: u32, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut f = Self::zero(degree);
        for (m, c) in terms {
            assert_eq!(m.degree(), degree, "inhomogeneous term {m} in a form of degree {degree}");
            f.add_term(m, c);
        }
        f
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, other: &Self) -> Result<Self, DegreeMismatch> {
        self.check_degree(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, DegreeMismatch> {
        self.add(&other.neg())
    }

    fn check_degree(&self, other: &Self) -> Result<(), DegreeMismatch> {
        if self.degree == other.degree {
            Ok(())
        } else {
            Err(DegreeMismatch { left: self.degree, right: other.degree })
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero(self.degree);
        }
        Self { degree: self.degree, terms: self.terms.iter().map(|(m, c)| (*m, c * s)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.degree + other.degree);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(Rational::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Formal partial derivative. The derivative of a constant is the zero
    /// form of degree 0.
    pub fn partial_derivative(&self, axis: Axis) -> Self {
        let k = axis.index();
        let mut out = Self::zero(self.degree.saturating_sub(1));
        for (m, c) in &self.terms {
            let e = m.exp(k);
            if e == 0 {
                continue;
            }
            let mut exps = m.exps();
            exps[k] -= 1;
            out.add_term(Monomial::new(exps[0], exps[1], exps[2]), c * Rational::from_integer(e.into()));
        }
        out
    }

    pub fn gradient(&self) -> [TernaryForm; 3] {
        Axis::ALL.map(|a| self.partial_derivative(a))
    }

    /// `f ∘ g`: substitutes `v ↦ g·v`, i.e. `xᵢ ↦ Σⱼ g[i][j]·xⱼ`.
    pub fn substitute_linear(&self, g: &QMatrix) -> Self {
        assert!(g.rows() == 3 && g.cols() == 3, "substitution matrix must be 3×3");
        let images: Vec<TernaryForm> =
            (0..3).map(|i| TernaryForm::from_terms(1, (0..3).map(|j| (Monomial::var(j), g[(i, j)].clone())))).collect();
        let powers: Vec<Vec<TernaryForm>> = images
            .iter()
            .map(|l| {
                let mut p = Vec::with_capacity(self.degree as usize + 1);
                p.push(TernaryForm::constant(Rational::one()));
                for e in 1..=self.degree as usize {
                    let next = p[e - 1].mul(l);
                    p.push(next);
                }
                p
            })
            .collect();
        let mut out = Self::zero(self.degree);
        for (m, c) in &self.terms {
            let [a, b, cz] = m.exps();
            let prod = powers[0][a as usize].mul(&powers[1][b as usize]).mul(&powers[2][cz as usize]);
            for (mm, cc) in prod.terms {
                out.add_term(mm, cc * c);
            }
        }
        out
    }

    /// Euler operator `Σ xᵢ ∂ᵢ f`.
    pub fn euler(&self) -> Self {
        let mut out = Self::zero(self.degree);
        for axis in Axis::ALL {
            let d = self.partial_derivative(axis);
            if d.is_zero() {
                continue;
            }
            let t = TernaryForm::var(axis).mul(&d);
            out = out.add(&t).expect("Euler terms share the degree");
        }
        out
    }
}

fn fmt_coefficient(f: &mut fmt::Formatter<'_>, c: &Rational, m: &Monomial) -> fmt::Result {
    let is_const = m.degree() == 0;
    if c.is_integer() {
        if c.is_one() && !is_const {
            return write!(f, "{m}");
        }
        write!(f, "{}", c.numer())?;
    } else {
        write!(f, "({}/{})", c.numer(), c.denom())?;
    }
    if !is_const {
        write!(f, "*{m}")?;
    }
    Ok(())
}

/// Renders in the grammar accepted by [`super::parse_form`]. The zero form of
/// degree `d > 0` renders as `0*x^d` so its degree survives a round trip.
impl fmt::Display for TernaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return match self.degree {
                0 => write!(f, "0"),
                1 => write!(f, "0*x"),
                d => write!(f, "0*x^{d}"),
            };
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            fmt_coefficient(f, &mag, m)?;
        }
        Ok(())
    }
}

impl fmt::Debug for TernaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TernaryForm[{}]({})", self.degree, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_form;
    use crate::rational::{frac, int};

    fn p(s: &str) -> TernaryForm {
        parse_form(s).unwrap()
    }

    #[test]
    fn add_examples() {
        let z = p("x^4").add(&p("-x^4")).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.degree(), 4);
        assert_eq!(p("x^4").add(&p("y^4")).unwrap(), p("x^4+y^4"));
        assert_eq!(p("x^2*y^2").add(&p("x^2*y^2")).unwrap(), p("2*x^2*y^2"));
        assert_eq!(p("x^4").add(&p("y^3")), Err(DegreeMismatch { left: 4, right: 3 }));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(p("x").mul(&p("x^3")), p("x^4"));
        assert_eq!(p("x+y").mul(&p("x-y")), p("x^2-y^2"));
        assert_eq!(p("2*x^2").mul(&p("3*y^2")), p("6*x^2*y^2"));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(p("x^4+y^4+z^4").partial_derivative(Axis::X), p("4*x^3"));
        assert_eq!(p("2*x^2*y^2").partial_derivative(Axis::Y), p("4*x^2*y"));
        let c = TernaryForm::constant(int(5)).partial_derivative(Axis::Z);
        assert!(c.is_zero() && c.degree() == 0);
        let f = p("x^2*y*z");
        assert_eq!(f.euler(), f.scale(&int(4)));
    }

    #[test]
    fn substitution_examples() {
        let f = p("x^3*y - (1/3)*y*z^3 + x*y*z^2");
        assert_eq!(f.substitute_linear(&QMatrix::identity(3)), f);
        let d = QMatrix::from_i64(3, 3, &[2, 0, 0, 0, 1, 0, 0, 0, 1]);
        assert_eq!(p("x^4").substitute_linear(&d), p("16*x^4"));
        let swap = QMatrix::from_i64(3, 3, &[0, 1, 0, 1, 0, 0, 0, 0, 1]);
        assert_eq!(p("x^2*y^2").substitute_linear(&swap), p("x^2*y^2"));
        let shear = QMatrix::from_i64(3, 3, &[1, 1, 0, 0, 1, 0, 0, 0, 1]);
        assert_eq!(p("x^2").substitute_linear(&shear), p("x^2+2*x*y+y^2"));
    }

    #[test]
    fn rendering() {
        assert_eq!(alloc::format!("{}", p("x^4 + y^4 + z^4")), "x^4 + y^4 + z^4");
        assert_eq!(alloc::format!("{}", p("-(1/2)*x^2*y^2 + 3*z^4")), "-(1/2)*x^2*y^2 + 3*z^4");
        assert_eq!(alloc::format!("{}", TernaryForm::zero(4)), "0*x^4");
        assert_eq!(alloc::format!("{}", TernaryForm::constant(frac(-2, 3))), "-(2/3)");
    }
}
