//! Reproducible random elements as words in elementary generators.

use alloc::vec::Vec;

use rand_core::RngCore;

use super::matrix::{IntMatrix, SymplecticMatrix};

/// An elementary generator of `Sp_{2g}(ℤ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    /// `diag(A, ᵗA⁻¹)` with `A = 1 + sign·E_{ij}` (`i ≠ j`).
    Levi { i: usize, j: usize, sign: i64 },
    /// `diag(A, ᵗA⁻¹)` with `A` the diagonal sign flip at `i`.
    Flip { i: usize },
    /// `U(S)` with `S = scale·(E_{ij} + E_{ji})`, or `scale·E_{ii}` on the diagonal.
    Upper { i: usize, j: usize, scale: i64 },
    /// `V(S)`, same shape as `Upper`.
    Lower { i: usize, j: usize, scale: i64 },
}

impl Generator {
    pub fn matrix(self, g: usize) -> SymplecticMatrix {
        let sym = |i: usize, j: usize, scale: i64| {
            let mut s = IntMatrix::zeros(g, g);
            s[(i, j)] = scale;
            s[(j, i)] = scale;
            s
        };
        match self {
            Generator::Levi { i, j, sign } => {
                let mut a = IntMatrix::identity(g);
                a[(i, j)] = sign;
                SymplecticMatrix::levi(&a).expect("unipotent")
            }
            Generator::Flip { i } => {
                let mut a = IntMatrix::identity(g);
                a[(i, i)] = -1;
                SymplecticMatrix::levi(&a).expect("diagonal sign")
            }
            Generator::Upper { i, j, scale } => SymplecticMatrix::upper(&sym(i, j, scale)).expect("symmetric"),
            Generator::Lower { i, j, scale } => SymplecticMatrix::lower(&sym(i, j, scale)).expect("symmetric"),
        }
    }

    fn random(rng: &mut impl RngCore, g: usize, upper_scale: i64) -> Self {
        let pick = |rng: &mut dyn RngCore, n: usize| (rng.next_u32() as usize) % n;
        let sign = |rng: &mut dyn RngCore| if rng.next_u32() & 1 == 0 { 1 } else { -1 };
        let (i, j) = (pick(rng, g), pick(rng, g));
        match pick(rng, 4) {
            0 if g > 1 && i != j => Generator::Levi { i, j, sign: sign(rng) },
            0 => Generator::Flip { i },
            1 | 2 => Generator::Upper { i, j, scale: upper_scale * sign(rng) },
            _ => Generator::Lower { i, j, scale: sign(rng) },
        }
    }
}

fn word(rng: &mut impl RngCore, g: usize, len: usize, upper_scale: i64) -> (SymplecticMatrix, Vec<Generator>) {
    let mut m = SymplecticMatrix::identity(g);
    let mut gens = Vec::with_capacity(len);
    for _ in 0..len {
        let gen = Generator::random(rng, g, upper_scale);
        match m.checked_mul(&gen.matrix(g)) {
            Some(next) if next.matrix().max_abs() < 1 << 20 => {
                m = next;
                gens.push(gen);
            }
            _ => break,
        }
    }
    (m, gens)
}

/// A product of up to `len` generators `M(1)`, `U(1)`, `V(1)`; words stop
/// early once entries reach `2²⁰`.
pub fn random_symplectic(rng: &mut impl RngCore, g: usize, len: usize) -> SymplecticMatrix {
    word(rng, g, len, 1).0
}

/// A product of generators `M(1)`, `U(2)`, `V(1)`; all lie in `Γ⁰(2)`, so
/// the result has `B ≡ 0 mod 2`.
pub fn random_gamma0_upper(rng: &mut impl RngCore, g: usize, len: usize) -> SymplecticMatrix {
    word(rng, g, len, 2).0
}
