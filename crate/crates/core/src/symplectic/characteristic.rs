use alloc::vec::Vec;
use core::fmt;

use super::matrix::{IntMatrix, SymplecticMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

/// A theta characteristic `[ε₁; ε₂]` with integer entries.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ThetaCharacteristic {
    pub eps1: Vec<i64>,
    pub eps2: Vec<i64>,
}

impl ThetaCharacteristic {
    pub fn new(eps1: Vec<i64>, eps2: Vec<i64>) -> Self {
        assert_eq!(eps1.len(), eps2.len(), "characteristic halves differ in length");
        Self { eps1, eps2 }
    }

    pub fn zero(g: usize) -> Self {
        Self::new(alloc::vec![0; g], alloc::vec![0; g])
    }

    /// From a bit mask: bit `k < g` is `ε₁[k]`, bit `g + k` is `ε₂[k]`.
    pub fn from_bits(g: usize, bits: u64) -> Self {
        let bit = |k: usize| ((bits >> k) & 1) as i64;
        Self::new((0..g).map(bit).collect(), (g..2 * g).map(bit).collect())
    }

    pub fn genus(&self) -> usize {
        self.eps1.len()
    }

    pub fn reduced(&self) -> Self {
        let r = |v: &[i64]| v.iter().map(|x| x.rem_euclid(2)).collect();
        Self::new(r(&self.eps1), r(&self.eps2))
    }

    pub fn to_bits(&self) -> u64 {
        let g = self.genus();
        let r = self.reduced();
        r.eps1.iter().chain(&r.eps2).enumerate().take(2 * g).fold(0, |acc, (k, &b)| acc | (b as u64) << k)
    }

    pub fn parity(&self) -> Parity {
        if dot(&self.eps1, &self.eps2).rem_euclid(2) == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_even(&self) -> bool {
        self.parity() == Parity::Even
    }

    /// Parses `"011;110"` or `"[011;110]"` (digits 0/1 only).
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim().trim_start_matches('[').trim_end_matches(']');
        let (l, r) = s.split_once(';')?;
        let digits = |t: &str| t.trim().chars().map(|c| c.to_digit(2).map(i64::from)).collect::<Option<Vec<_>>>();
        let (e1, e2) = (digits(l)?, digits(r)?);
        (e1.len() == e2.len() && !e1.is_empty()).then(|| Self::new(e1, e2))
    }
}

impl fmt::Display for ThetaCharacteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let all_bits = self.eps1.iter().chain(&self.eps2).all(|x| (0..=1).contains(x));
        f.write_str("[")?;
        for (k, v) in [&self.eps1, &self.eps2].into_iter().enumerate() {
            if k == 1 {
                f.write_str(";")?;
            }
            for (i, x) in v.iter().enumerate() {
                if !all_bits && i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
        }
        f.write_str("]")
    }
}

impl fmt::Debug for ThetaCharacteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All `2^{2g}` reduced characteristics, ordered by bit mask.
pub fn enumerate_chars(g: usize) -> Vec<ThetaCharacteristic> {
    (0..1u64 << (2 * g)).map(|b| ThetaCharacteristic::from_bits(g, b)).collect()
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn quad(v: &[i64], m: &IntMatrix, w: &[i64]) -> i64 {
    dot(v, &m.mul_vec(w))
}

/// `[D·ε₁ − C·ε₂ + (C·ᵗD)₀ ; −B·ε₁ + A·ε₂ + (A·ᵗB)₀]`, unreduced.
pub fn char_action(m: &SymplecticMatrix, eps: &ThetaCharacteristic) -> ThetaCharacteristic {
    assert_eq!(m.genus(), eps.genus(), "genus mismatch");
    let (a, b, c, d) = (m.a(), m.b(), m.c(), m.d());
    let cd = c.mul(&d.transpose()).diagonal();
    let ab = a.mul(&b.transpose()).diagonal();
    let top = sub(&d.mul_vec(&eps.eps1), &c.mul_vec(&eps.eps2));
    let bottom = sub(&a.mul_vec(&eps.eps2), &b.mul_vec(&eps.eps1));
    ThetaCharacteristic::new(top.iter().zip(&cd).map(|(x, y)| x + y).collect(), bottom.iter().zip(&ab).map(|(x, y)| x + y).collect())
}

/// The four terms shared by [`phi`] and [`phase_exponent`].
fn phase_terms(eps: &ThetaCharacteristic, m: &SymplecticMatrix) -> [i64; 4] {
    assert_eq!(m.genus(), eps.genus(), "genus mismatch");
    let (a, b, c, d) = (m.a(), m.b(), m.c(), m.d());
    let (e1, e2) = (&eps.eps1, &eps.eps2);
    let dbe = quad(e1, &d.transpose().mul(&b), e1);
    let bc = quad(e1, &b.transpose().mul(&c), e2);
    let ca = quad(e2, &c.transpose().mul(&a), e2);
    let shift = sub(&d.mul_vec(e1), &c.mul_vec(e2));
    let last = dot(&shift, &a.mul(&b.transpose()).diagonal());
    [dbe, bc, ca, last]
}

/// `ε₁ᵗ·ᵗD·B·ε₁ − 2ε₁ᵗ·ᵗB·C·ε₂ + ε₂ᵗ·ᵗC·A·ε₂ − 2(D·ε₁ − C·ε₂)·(A·ᵗB)₀`,
/// the classical exponent of `e^{iπ/4}` in the theta transformation formula.
///
/// This expression does not reproduce the phase for every parabolic `M`;
/// [`phase_exponent`] is the corrected form.
pub fn phi(eps: &ThetaCharacteristic, m: &SymplecticMatrix) -> i64 {
    let [dbe, bc, ca, last] = phase_terms(eps, m);
    dbe - 2 * bc + ca - 2 * last
}

/// Exponent `e` with `θ[M.ε](M.τ)² = iᵉ·θ[ε](τ)²` for `M ∈ P(ℤ)`:
/// `−(ε₁ᵗ·ᵗD·B·ε₁ − 2ε₁ᵗ·ᵗB·C·ε₂ + ε₂ᵗ·ᵗC·A·ε₂ + 2(D·ε₁ − C·ε₂)·(A·ᵗB)₀)`.
pub fn phase_exponent(eps: &ThetaCharacteristic, m: &SymplecticMatrix) -> i64 {
    let [dbe, bc, ca, last] = phase_terms(eps, m);
    -(dbe - 2 * bc + ca + 2 * last)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn action_examples() {
        let eps = ThetaCharacteristic::new(alloc::vec![0], alloc::vec![1]);
        let j = SymplecticMatrix::j(1);
        assert_eq!(char_action(&j, &eps).reduced(), ThetaCharacteristic::new(alloc::vec![1], alloc::vec![0]));
        assert_eq!(char_action(&SymplecticMatrix::identity(1), &eps), eps);
    }

    #[test]
    fn phi_examples() {
        let m = SymplecticMatrix::from_rows(&[[1, 0], [2, 1]]).unwrap();
        let eps = ThetaCharacteristic::new(alloc::vec![0], alloc::vec![1]);
        assert_eq!(phi(&eps, &m), 2);
        assert_eq!(phi(&ThetaCharacteristic::zero(1), &m), 0);
        assert_eq!(phi(&eps, &SymplecticMatrix::identity(1)), 0);
    }

    #[test]
    fn parse_and_display() {
        let c = ThetaCharacteristic::parse("[011;110]").unwrap();
        assert_eq!(c.to_string(), "[011;110]");
        assert_eq!(ThetaCharacteristic::from_bits(3, c.to_bits()), c);
        assert!(!c.is_even());
        assert!(ThetaCharacteristic::parse("011;000").unwrap().is_even());
        assert!(!ThetaCharacteristic::parse("1;1").unwrap().is_even());
        assert_eq!(enumerate_chars(3).iter().filter(|c| c.is_even()).count(), 36);
        assert_eq!(enumerate_chars(2).iter().filter(|c| c.is_even()).count(), 10);
    }
}
