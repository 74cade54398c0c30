//! Linear algebra over 𝔽₂ on bit-mask vectors.

use alloc::collections::BTreeSet;

use alloc::vec::Vec;

use super::matrix::{IntMatrix, Subgroup, SymplecticError, SymplecticMatrix};

/// `⟨x, y⟩ = x₁·y₂ + x₂·y₁ mod 2` on `𝔽₂^{2g}`.
pub fn f2_pairing(g: usize, x: u64, y: u64) -> bool {
    ((swap_halves(g, x) & y).count_ones() & 1) == 1
}

/// `v ↦ J·v` mod 2, so that `⟨x, y⟩ = popcount(swap(x) ∧ y)`.
fn swap_halves(g: usize, x: u64) -> u64 {
    let low = (1u64 << g) - 1;
    ((x & low) << g) | ((x >> g) & low)
}

/// A square matrix over 𝔽₂; row `i` is a bit mask over columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct F2Matrix {
    n: usize,
    rows: Vec<u64>,
}

impl F2Matrix {
    pub fn identity(n: usize) -> Self {
        Self { n, rows: (0..n).map(|i| 1 << i).collect() }
    }

    pub fn from_int(m: &IntMatrix) -> Self {
        assert!(m.is_square());
        let n = m.rows();
        let rows = (0..n).map(|i| (0..n).filter(|&j| m[(i, j)].rem_euclid(2) == 1).fold(0, |acc, j| acc | 1 << j)).collect();
        Self { n, rows }
    }

    pub fn to_int(&self) -> IntMatrix {
        IntMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j) as i64)
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        (self.rows[i] >> j) & 1 == 1
    }

    pub fn mul(&self, other: &Self) -> Self {
        let rows = self.rows.iter().map(|&r| (0..self.n).filter(|&k| (r >> k) & 1 == 1).fold(0, |acc, k| acc ^ other.rows[k])).collect();
        Self { n: self.n, rows }
    }

    /// Row-reduces to the identity, returning the elementary operations
    /// applied in order, or `None` if singular.
    fn reduction(&self) -> Option<Vec<RowOp>> {
        let mut rows = self.rows.clone();
        let mut ops = Vec::new();
        for col in 0..self.n {
            let pivot = (col..self.n).find(|&r| (rows[r] >> col) & 1 == 1)?;
            if pivot != col {
                rows.swap(pivot, col);
                ops.push(RowOp::Swap(pivot, col));
            }
            for r in 0..self.n {
                if r != col && (rows[r] >> col) & 1 == 1 {
                    rows[r] ^= rows[col];
                    ops.push(RowOp::Add { from: col, to: r });
                }
            }
        }
        Some(ops)
    }

    pub fn inverse(&self) -> Option<Self> {
        let mut inv = Self::identity(self.n);
        for op in self.reduction()? {
            op.apply(&mut inv.rows);
        }
        Some(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.reduction().is_some()
    }
}

#[derive(Debug, Clone, Copy)]
enum RowOp {
    Swap(usize, usize),
    Add { from: usize, to: usize },
}

impl RowOp {
    fn apply(self, rows: &mut [u64]) {
        match self {
            RowOp::Swap(a, b) => rows.swap(a, b),
            RowOp::Add { from, to } => rows[to] ^= rows[from],
        }
    }

    fn int_matrix(self, n: usize) -> IntMatrix {
        let mut e = IntMatrix::identity(n);
        match self {
            RowOp::Swap(a, b) => {
                e[(a, a)] = 0;
                e[(b, b)] = 0;
                e[(a, b)] = 1;
                e[(b, a)] = 1;
            }
            RowOp::Add { from, to } => e[(to, from)] = 1,
        }
        e
    }
}

/// An integer unimodular matrix reducing to `a` mod 2.
///
/// If `Eₖ⋯E₁·a = 1` over 𝔽₂ then `a = E₁⋯Eₖ` since every elementary
/// operation used is an involution mod 2; each `Eᵢ` has an obvious integer
/// lift of determinant ±1.
pub fn lift_gl_f2(a: &F2Matrix) -> Option<IntMatrix> {
    let ops = a.reduction()?;
    Some(ops.iter().fold(IntMatrix::identity(a.n), |acc, op| acc.mul(&op.int_matrix(a.n))))
}

/// An isotropic subspace of `𝔽₂^{2g}` with its basis in reduced echelon
/// form: each basis vector's lowest set bit is its pivot, no other basis
/// vector has that bit, and vectors are sorted by pivot.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IsotropicSubspace {
    g: usize,
    basis: Vec<u64>,
}

fn echelon(vectors: &[u64]) -> Vec<u64> {
    let mut basis: Vec<u64> = Vec::new();
    for &v in vectors {
        let mut v = v;
        for &b in &basis {
            if v & (b & b.wrapping_neg()) != 0 {
                v ^= b;
            }
        }
        if v == 0 {
            continue;
        }
        let pivot = v & v.wrapping_neg();
        for b in basis.iter_mut() {
            if *b & pivot != 0 {
                *b ^= v;
            }
        }
        basis.push(v);
    }
    basis.sort_by_key(|b| b.trailing_zeros());
    basis
}

impl IsotropicSubspace {
    /// The span of `vectors`; fails unless all pairings vanish.
    pub fn new(g: usize, vectors: &[u64]) -> Result<Self, SymplecticError> {
        if !(1..=32).contains(&g) || vectors.iter().any(|&v| v >> (2 * g) != 0) {
            return Err(SymplecticError::GenusOutOfRange(g));
        }
        for (i, &x) in vectors.iter().enumerate() {
            if vectors[..i].iter().any(|&y| f2_pairing(g, x, y)) {
                return Err(SymplecticError::NotMaximalIsotropic);
            }
        }
        Ok(Self { g, basis: echelon(vectors) })
    }

    /// `V₀ = span(e₁, …, e_g)`.
    pub fn standard(g: usize) -> Self {
        Self { g, basis: (0..g).map(|i| 1 << i).collect() }
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn basis(&self) -> &[u64] {
        &self.basis
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn is_maximal(&self) -> bool {
        self.dimension() == self.g
    }

    pub fn contains(&self, v: u64) -> bool {
        echelon(&[&self.basis[..], &[v]].concat()).len() == self.basis.len()
    }

    /// Basis vectors as 0/1 rows of length `2g`.
    pub fn basis_rows(&self) -> Vec<Vec<u8>> {
        self.basis.iter().map(|&b| (0..2 * self.g).map(|k| ((b >> k) & 1) as u8).collect()).collect()
    }

    /// Every pair of basis vectors, paired, is zero.
    pub fn is_isotropic(&self) -> bool {
        self.basis.iter().all(|&x| self.basis.iter().all(|&y| !f2_pairing(self.g, x, y)))
    }
}

/// All maximal isotropic subspaces of `𝔽₂^{2g}`, sorted. There are
/// `∏ᵢ(2ⁱ + 1)` of them: 3, 15 and 135 for `g = 1, 2, 3`.
pub fn enumerate_max_isotropic(g: usize) -> Result<Vec<IsotropicSubspace>, SymplecticError> {
    if !(1..=3).contains(&g) {
        return Err(SymplecticError::GenusOutOfRange(g));
    }
    let mut level: BTreeSet<IsotropicSubspace> = BTreeSet::new();
    level.insert(IsotropicSubspace { g, basis: Vec::new() });
    for _ in 0..g {
        let mut next = BTreeSet::new();
        for sub in &level {
            for v in 1..1u64 << (2 * g) {
                if sub.basis.iter().any(|&b| f2_pairing(g, b, v)) || sub.contains(v) {
                    continue;
                }
                next.insert(IsotropicSubspace { g, basis: echelon(&[&sub.basis[..], &[v]].concat()) });
            }
        }
        level = next;
    }
    Ok(level.into_iter().collect())
}

/// A symplectic basis completion: `w` with `⟨vᵢ, w_j⟩ = δᵢⱼ` and `⟨wᵢ, w_j⟩ = 0`.
fn complete_basis(g: usize, v: &[u64]) -> Vec<u64> {
    // Each w_j solves the system with functionals swap(vᵢ).
    let funcs: Vec<u64> = v.iter().map(|&x| swap_halves(g, x)).collect();
    let mut w: Vec<u64> = (0..g).map(|j| solve_f2(&funcs, 1 << j, 2 * g).expect("independent functionals")).collect();
    for j in 0..g {
        for i in 0..j {
            if f2_pairing(g, w[i], w[j]) {
                w[j] ^= v[i];
            }
        }
    }
    w
}

/// Some `x` with `parity(funcs[i] ∧ x) = bit i of rhs`.
fn solve_f2(funcs: &[u64], rhs: u64, n: usize) -> Option<u64> {
    let mut rows: Vec<(u64, bool)> = funcs.iter().enumerate().map(|(i, &f)| (f, (rhs >> i) & 1 == 1)).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| (rows[i].0 >> col) & 1 == 1) else { continue };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && (rows[i].0 >> col) & 1 == 1 {
                rows[i].0 ^= rows[r].0;
                rows[i].1 ^= rows[r].1;
            }
        }
        pivots.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|&(_, b)| b) {
        return None;
    }
    Some(pivots.iter().zip(&rows).filter(|(_, row)| row.1).fold(0, |acc, (&c, _)| acc | 1 << c))
}

fn symmetric_from_bits(g: usize, bits: u32) -> IntMatrix {
    let mut s = IntMatrix::zeros(g, g);
    let mut k = 0;
    for i in 0..g {
        for j in i..g {
            let b = ((bits >> k) & 1) as i64;
            s[(i, j)] = b;
            s[(j, i)] = b;
            k += 1;
        }
    }
    s
}

/// An integer symplectic `M` with `M·V₀ ≡ V mod 2`, built from the canonical basis of `V`.
pub fn transporter_lift(v: &IsotropicSubspace) -> Result<SymplecticMatrix, SymplecticError> {
    transporter_lift_from_basis(v.genus(), v.basis())
}

/// As [`transporter_lift`], with `M·eᵢ ≡ basis[i]`. Different bases of the
/// same subspace give lifts in the same left coset of `Γ₀(2)`.
///
/// The 𝔽₂ symplectic matrix `X` with columns `v₁…v_g, w₁…w_g` is factored as
/// `U(S)·diag(A′, ᵗA′⁻¹)·V(C′)·U(B′)` and each factor is lifted to ℤ.
pub fn transporter_lift_from_basis(g: usize, basis: &[u64]) -> Result<SymplecticMatrix, SymplecticError> {
    let sub = IsotropicSubspace::new(g, basis)?;
    if basis.len() != g || !sub.is_maximal() {
        return Err(SymplecticError::NotMaximalIsotropic);
    }
    let w = complete_basis(g, basis);
    let columns: Vec<u64> = basis.iter().chain(&w).copied().collect();
    let x = IntMatrix::from_fn(2 * g, 2 * g, |i, j| ((columns[j] >> i) & 1) as i64);
    let block = |r0, c0| x.submatrix(r0, c0, g, g);
    let (a, b, c, d) = (block(0, 0), block(0, g), block(g, 0), block(g, g));

    // U(S)·X has upper-left block A + S·C; some 0/1 symmetric S makes it invertible.
    let (s, a1) = (0..1u32 << (g * (g + 1) / 2))
        .map(|bits| {
            let s = symmetric_from_bits(g, bits);
            let a1 = F2Matrix::from_int(&a.add(&s.mul(&c)));
            (s, a1)
        })
        .find(|(_, a1)| a1.is_invertible())
        .expect("a symplectic 𝔽₂ matrix always admits an invertible A + S·C");
    let b1 = b.add(&s.mul(&d));
    let a1_inv = a1.inverse().expect("checked invertible").to_int();
    let a1_t = a1.to_int().transpose();
    // diag(A₁⁻¹, ᵗA₁)·U(S)·X = [[1, B′], [C′, D′]] mod 2.
    let b_prime = a1_inv.mul(&b1).reduce_mod(2);
    let c_prime = a1_t.mul(&c).reduce_mod(2);
    debug_assert!(c_prime.is_symmetric() && b_prime.is_symmetric());

    let levi = SymplecticMatrix::levi(&lift_gl_f2(&a1).expect("invertible")).expect("unimodular lift");
    let m = SymplecticMatrix::upper(&s)
        .expect("symmetric")
        .mul(&levi)
        .mul(&SymplecticMatrix::lower(&c_prime).expect("symmetric"))
        .mul(&SymplecticMatrix::upper(&b_prime).expect("symmetric"));

    assert!(m.matrix().congruent_mod(&x, 2), "transporter lift does not reduce to the 𝔽₂ completion");
    assert_eq!(m.image_of_standard_lagrangian(), basis, "transporter lift misses the target subspace");
    Ok(m)
}

/// Whether two lifts lie in the same left coset `M·Γ₀(2)`.
pub fn same_transporter_coset(m1: &SymplecticMatrix, m2: &SymplecticMatrix) -> bool {
    m1.inverse().mul(m2).is_in(Subgroup::LowerTheta)
}
