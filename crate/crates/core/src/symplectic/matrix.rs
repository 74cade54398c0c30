use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymplecticError {
    #[error("matrix is {rows}×{cols}; expected a square matrix of even size")]
    BadShape { rows: usize, cols: usize },
    #[error("matrix is not symplectic")]
    NotSymplectic,
    #[error("matrix is not in {0}")]
    NotInSubgroup(Subgroup),
    #[error("genus {0} is out of range (1..=3)")]
    GenusOutOfRange(usize),
    #[error("subspace is not maximal isotropic")]
    NotMaximalIsotropic,
    #[error("integer overflow in matrix arithmetic")]
    Overflow,
}

/// A dense integer matrix with overflow-checked arithmetic.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| (i == j) as i64)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Panics on ragged input.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        assert!(rows.iter().all(|r| r.as_ref().len() == cols), "ragged rows");
        Self::from_fn(rows.len(), cols, |i, j| rows[i].as_ref()[j])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.cols.max(1)).take(self.rows).map(<[i64]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn checked_mul(&self, other: &Self) -> Option<Self> {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let t = a.checked_mul(other[(k, j)])?;
                    out[(i, j)] = out[(i, j)].checked_add(t)?;
                }
            }
        }
        Some(out)
    }

    /// Panics on overflow; use [`checked_mul`](Self::checked_mul) when entries may be large.
    pub fn mul(&self, other: &Self) -> Self {
        self.checked_mul(other).expect("integer overflow in matrix product")
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.checked_add(*b).expect("overflow")).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, s: i64) -> Self {
        let data = self.data.iter().map(|a| a.checked_mul(s).expect("overflow")).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum()).collect()
    }

    pub fn reduce_mod(&self, n: i64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.rem_euclid(n)).collect() }
    }

    pub fn congruent_mod(&self, other: &Self, n: i64) -> bool {
        self.data.iter().zip(&other.data).all(|(a, b)| (a - b).rem_euclid(n) == 0)
    }

    pub fn is_zero_mod(&self, n: i64) -> bool {
        self.data.iter().all(|a| a.rem_euclid(n) == 0)
    }

    pub fn max_abs(&self) -> i64 {
        self.data.iter().map(|a| a.abs()).max().unwrap_or(0)
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        let g = a.rows;
        Self::from_fn(2 * g, 2 * g, |i, j| match (i < g, j < g) {
            (true, true) => a[(i, j)],
            (true, false) => b[(i, j - g)],
            (false, true) => c[(i - g, j)],
            (false, false) => d[(i - g, j - g)],
        })
    }

    /// Exact determinant by fraction-free elimination.
    pub fn det(&self) -> i64 {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut m: Vec<Vec<i128>> = self.to_rows().into_iter().map(|r| r.into_iter().map(i128::from).collect()).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n {
            if m[k][k] == 0 {
                match (k + 1..n).find(|&r| m[r][k] != 0) {
                    Some(r) => {
                        m.swap(k, r);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
                }
            }
            prev = m[k][k];
        }
        i64::try_from(sign * if n == 0 { 1 } else { m[n - 1][n - 1] }).expect("determinant overflow")
    }

    /// The inverse of a unimodular matrix, via the adjugate. `None` if `det ≠ ±1`.
    pub fn unimodular_inverse(&self) -> Option<Self> {
        let d = self.det();
        if d.abs() != 1 {
            return None;
        }
        let n = self.rows;
        let minor = |r: usize, c: usize| {
            let rows: Vec<Vec<i64>> =
                (0..n).filter(|&i| i != r).map(|i| (0..n).filter(|&j| j != c).map(|j| self[(i, j)]).collect()).collect();
            if n == 1 {
                1
            } else {
                IntMatrix::from_rows(&rows).det()
            }
        };
        Some(Self::from_fn(n, n, |i, j| {
            let s = if (i + j) % 2 == 0 { 1 } else { -1 };
            s * minor(j, i) * d
        }))
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

/// `J = [[0, 1], [−1, 0]]` in `g×g` blocks.
pub fn standard_j(g: usize) -> IntMatrix {
    IntMatrix::from_fn(2 * g, 2 * g, |i, j| {
        if j == i + g {
            1
        } else if i == j + g {
            -1
        } else {
            0
        }
    })
}

fn check_shape(m: &IntMatrix) -> Result<usize, SymplecticError> {
    if !m.is_square() || !m.rows().is_multiple_of(2) || m.rows() == 0 {
        return Err(SymplecticError::BadShape { rows: m.rows(), cols: m.cols() });
    }
    Ok(m.rows() / 2)
}

/// Whether `M·J·ᵗM = J`.
///
/// Two equivalent block criteria are evaluated alongside:
/// `ᵗA·C`, `ᵗB·D` symmetric with `ᵗA·D − ᵗC·B = 1`, and
/// `A·ᵗB`, `C·ᵗD` symmetric with `A·ᵗD − B·ᵗC = 1`.
/// Disagreement between them is a bug and panics.
pub fn is_symplectic(m: &IntMatrix) -> Result<bool, SymplecticError> {
    let g = check_shape(m)?;
    let j = standard_j(g);
    let mul = |x: &IntMatrix, y: &IntMatrix| x.checked_mul(y).ok_or(SymplecticError::Overflow);
    let direct = mul(&mul(m, &j)?, &m.transpose())? == j;

    let [a, b, c, d] = blocks(m, g);
    let (at, bt, ct, dt) = (a.transpose(), b.transpose(), c.transpose(), d.transpose());
    let id = IntMatrix::identity(g);
    let columns = mul(&at, &c)?.is_symmetric() && mul(&bt, &d)?.is_symmetric() && mul(&at, &d)?.sub(&mul(&ct, &b)?) == id;
    let rows = mul(&a, &bt)?.is_symmetric() && mul(&c, &dt)?.is_symmetric() && mul(&a, &dt)?.sub(&mul(&b, &ct)?) == id;
    assert!(direct == columns && direct == rows, "symplectic criteria disagree on {m:?}");
    Ok(direct)
}

fn blocks(m: &IntMatrix, g: usize) -> [IntMatrix; 4] {
    [m.submatrix(0, 0, g, g), m.submatrix(0, g, g, g), m.submatrix(g, 0, g, g), m.submatrix(g, g, g, g)]
}

/// Congruence and block subgroups of `Sp_{2g}(ℤ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Subgroup {
    /// `Γ(n)`: `M ≡ 1 mod n`.
    Principal(u32),
    /// `Γ⁰(2)`: `B ≡ 0 mod 2`.
    UpperTheta,
    /// `Γ₀(2)`: `C ≡ 0 mod 2`.
    LowerTheta,
    /// `Γ(1,2)`: `(A·ᵗB)₀ ≡ (C·ᵗD)₀ ≡ 0 mod 2`.
    Theta,
    /// `M(ℤ)`: block diagonal.
    Levi,
    /// `U(ℤ)`: `[[1, S], [0, 1]]`.
    Upper,
    /// `V(ℤ)`: `[[1, 0], [S, 1]]`.
    Lower,
    /// `P(ℤ)`: `C = 0`.
    Parabolic,
}

impl Subgroup {
    /// Every tracked subgroup, with `Γ(2)` standing in for the principal family.
    pub const TRACKED: [Subgroup; 9] = [
        Subgroup::Principal(2),
        Subgroup::Principal(4),
        Subgroup::UpperTheta,
        Subgroup::LowerTheta,
        Subgroup::Theta,
        Subgroup::Levi,
        Subgroup::Upper,
        Subgroup::Lower,
        Subgroup::Parabolic,
    ];

    pub fn name(self) -> String {
        match self {
            Subgroup::Principal(n) => format!("Gamma({n})"),
            Subgroup::UpperTheta => "Gamma^0(2)".into(),
            Subgroup::LowerTheta => "Gamma_0(2)".into(),
            Subgroup::Theta => "Gamma(1,2)".into(),
            Subgroup::Levi => "M(Z)".into(),
            Subgroup::Upper => "U(Z)".into(),
            Subgroup::Lower => "V(Z)".into(),
            Subgroup::Parabolic => "P(Z)".into(),
        }
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// An integer symplectic matrix `[[A, B], [C, D]]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymplecticMatrix {
    g: usize,
    m: IntMatrix,
}

impl SymplecticMatrix {
    pub fn new(m: IntMatrix) -> Result<Self, SymplecticError> {
        let g = check_shape(&m)?;
        if !is_symplectic(&m)? {
            return Err(SymplecticError::NotSymplectic);
        }
        Ok(Self { g, m })
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self, SymplecticError> {
        Self::new(IntMatrix::from_rows(rows))
    }

    /// For matrices already known to be symplectic (closed-form constructions).
    pub(crate) fn new_unchecked(m: IntMatrix) -> Self {
        debug_assert_eq!(is_symplectic(&m), Ok(true));
        Self { g: m.rows() / 2, m }
    }

    pub fn identity(g: usize) -> Self {
        Self { g, m: IntMatrix::identity(2 * g) }
    }

    pub fn j(g: usize) -> Self {
        Self { g, m: standard_j(g) }
    }

    /// `diag(A, ᵗA⁻¹)` for unimodular `A`.
    pub fn levi(a: &IntMatrix) -> Option<Self> {
        let inv_t = a.unimodular_inverse()?.transpose();
        let z = IntMatrix::zeros(a.rows(), a.rows());
        Some(Self::new_unchecked(IntMatrix::from_blocks(a, &z, &z, &inv_t)))
    }

    /// `[[1, S], [0, 1]]` for symmetric `S`.
    pub fn upper(s: &IntMatrix) -> Option<Self> {
        s.is_symmetric().then(|| {
            let g = s.rows();
            Self::new_unchecked(IntMatrix::from_blocks(&IntMatrix::identity(g), s, &IntMatrix::zeros(g, g), &IntMatrix::identity(g)))
        })
    }

    /// `[[1, 0], [S, 1]]` for symmetric `S`.
    pub fn lower(s: &IntMatrix) -> Option<Self> {
        s.is_symmetric().then(|| {
            let g = s.rows();
            Self::new_unchecked(IntMatrix::from_blocks(&IntMatrix::identity(g), &IntMatrix::zeros(g, g), s, &IntMatrix::identity(g)))
        })
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.m
    }

    pub fn a(&self) -> IntMatrix {
        self.m.submatrix(0, 0, self.g, self.g)
    }

    pub fn b(&self) -> IntMatrix {
        self.m.submatrix(0, self.g, self.g, self.g)
    }

    pub fn c(&self) -> IntMatrix {
        self.m.submatrix(self.g, 0, self.g, self.g)
    }

    pub fn d(&self) -> IntMatrix {
        self.m.submatrix(self.g, self.g, self.g, self.g)
    }

    pub fn transpose(&self) -> Self {
        Self::new_unchecked(self.m.transpose())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new_unchecked(self.m.mul(&other.m))
    }

    pub fn checked_mul(&self, other: &Self) -> Option<Self> {
        self.m.checked_mul(&other.m).map(|m| Self { g: self.g, m })
    }

    /// `M⁻¹ = [[ᵗD, −ᵗB], [−ᵗC, ᵗA]]`.
    pub fn inverse(&self) -> Self {
        let m = IntMatrix::from_blocks(
            &self.d().transpose(),
            &self.b().transpose().scale(-1),
            &self.c().transpose().scale(-1),
            &self.a().transpose(),
        );
        Self::new_unchecked(m)
    }

    pub fn is_in(&self, which: Subgroup) -> bool {
        let g = self.g;
        let zero = IntMatrix::zeros(g, g);
        let id = IntMatrix::identity(g);
        match which {
            Subgroup::Principal(n) => self.m.congruent_mod(&IntMatrix::identity(2 * g), i64::from(n)),
            Subgroup::UpperTheta => self.b().is_zero_mod(2),
            Subgroup::LowerTheta => self.c().is_zero_mod(2),
            Subgroup::Theta => {
                let ab = self.a().mul(&self.b().transpose()).diagonal();
                let cd = self.c().mul(&self.d().transpose()).diagonal();
                ab.iter().chain(&cd).all(|x| x % 2 == 0)
            }
            Subgroup::Levi => self.b() == zero && self.c() == zero,
            Subgroup::Upper => self.a() == id && self.d() == id && self.c() == zero,
            Subgroup::Lower => self.a() == id && self.d() == id && self.b() == zero,
            Subgroup::Parabolic => self.c() == zero,
        }
    }

    /// Membership across [`Subgroup::TRACKED`].
    pub fn membership(&self) -> Vec<(Subgroup, bool)> {
        Subgroup::TRACKED.iter().map(|&s| (s, self.is_in(s))).collect()
    }

    /// The columns `M·e₁, …, M·e_g` reduced mod 2, as bit masks.
    pub fn image_of_standard_lagrangian(&self) -> Vec<u64> {
        (0..self.g).map(|j| column_mask(&self.m, j)).collect()
    }
}

pub(crate) fn column_mask(m: &IntMatrix, j: usize) -> u64 {
    (0..m.rows()).filter(|&i| m[(i, j)].rem_euclid(2) == 1).fold(0, |acc, i| acc | 1 << i)
}

impl fmt::Debug for SymplecticMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sp{}({:?})", 2 * self.g, self.m)
    }
}

/// `κ(M)² = det D` for `M ∈ P(ℤ)`.
pub fn kappa_squared_parabolic(m: &SymplecticMatrix) -> Result<i64, SymplecticError> {
    if !m.is_in(Subgroup::Parabolic) {
        return Err(SymplecticError::NotInSubgroup(Subgroup::Parabolic));
    }
    let d = m.d().det();
    assert!(d.abs() == 1, "D block of a parabolic symplectic matrix is unimodular");
    Ok(d)
}

/// The level-2 transporter used for the Klein comparison; it carries
/// `e₁, e₂, e₃` to `[000;011]`, `[000;110]`, `[111;000]` mod 2.
pub fn klein_transporter() -> SymplecticMatrix {
    SymplecticMatrix::new_unchecked(IntMatrix::from_rows(&[
        [0, 0, 1, 0, -1, 0],
        [0, 0, 1, 0, 0, 0],
        [0, 0, 1, -1, 0, 0],
        [0, 1, 0, 0, 0, 0],
        [-1, -1, 0, 0, 0, 1],
        [1, 0, 0, 0, 0, 0],
    ]))
}

/// `diag(A, ᵗA⁻¹)` with `A = [[0,−1,1],[0,0,1],[−1,0,1]]`; left factor of the transporter.
pub fn transporter_levi_factor() -> SymplecticMatrix {
    SymplecticMatrix::levi(&IntMatrix::from_rows(&[[0, -1, 1], [0, 0, 1], [-1, 0, 1]])).expect("det A = 1")
}

/// Right factor of the transporter; its square is `diag(S, S)` with `S = diag(−1, −1, 1)`.
pub fn transporter_right_factor() -> SymplecticMatrix {
    SymplecticMatrix::new_unchecked(IntMatrix::from_rows(&[
        [0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 1, 0],
        [0, 0, 1, 0, 0, 0],
        [-1, 0, 0, 0, 0, 0],
        [0, -1, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 1],
    ]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_membership() {
        assert_eq!(is_symplectic(&standard_j(2)), Ok(true));
        assert_eq!(is_symplectic(&IntMatrix::identity(6)), Ok(true));
        assert_eq!(is_symplectic(klein_transporter().matrix()), Ok(true));
        assert_eq!(is_symplectic(&IntMatrix::from_rows(&[[2, 0], [0, 1]])), Ok(false));
        assert!(matches!(is_symplectic(&IntMatrix::identity(3)), Err(SymplecticError::BadShape { .. })));
        assert!(matches!(is_symplectic(&IntMatrix::zeros(2, 4)), Err(SymplecticError::BadShape { .. })));
        assert!(!SymplecticMatrix::j(1).is_in(Subgroup::UpperTheta));
        let perm = IntMatrix::from_rows(&[[0, 1, 0], [0, 0, 1], [1, 0, 0]]);
        let p = SymplecticMatrix::levi(&perm).unwrap();
        assert!(p.is_in(Subgroup::Parabolic) && p.is_in(Subgroup::UpperTheta) && p.is_in(Subgroup::Levi));
    }

    #[test]
    fn transporter_factorization() {
        let (n, l, q) = (klein_transporter(), transporter_levi_factor(), transporter_right_factor());
        assert!(n.is_in(Subgroup::Theta) && n.transpose().is_in(Subgroup::Theta));
        assert_eq!(l.mul(&q), n);
        let s = IntMatrix::from_rows(&[[-1, 0, 0], [0, -1, 0], [0, 0, 1]]);
        let z = IntMatrix::zeros(3, 3);
        assert_eq!(q.mul(&q).matrix(), &IntMatrix::from_blocks(&s, &z, &z, &s));
        assert_eq!(n.image_of_standard_lagrangian(), [0b110000, 0b011000, 0b000111]);
        assert_eq!(kappa_squared_parabolic(&l), Ok(1));
        assert_eq!(kappa_squared_parabolic(&q.mul(&q)), Ok(1));
        assert_eq!(kappa_squared_parabolic(&SymplecticMatrix::identity(3)), Ok(1));
        assert!(kappa_squared_parabolic(&q).is_err());
    }

    #[test]
    fn inverse_and_det() {
        let n = klein_transporter();
        assert_eq!(n.mul(&n.inverse()), SymplecticMatrix::identity(3));
        assert_eq!(n.matrix().det(), 1);
        let a = IntMatrix::from_rows(&[[2, 1], [1, 1]]);
        assert_eq!(a.mul(&a.unimodular_inverse().unwrap()), IntMatrix::identity(2));
        assert!(IntMatrix::from_rows(&[[2, 0], [0, 1]]).unimodular_inverse().is_none());
    }
}
