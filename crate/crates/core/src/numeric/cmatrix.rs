use alloc::vec::Vec;

use super::{BigComplex, Ctx};
use crate::symplectic::IntMatrix;

/// A dense complex matrix.
#[derive(Debug, Clone)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigComplex>,
}

impl CMatrix {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigComplex) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize, ctx: &Ctx) -> Self {
        Self::from_fn(rows, cols, |_, _| BigComplex::zero(ctx))
    }

    pub fn identity(n: usize, ctx: &Ctx) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { BigComplex::one(ctx) } else { BigComplex::zero(ctx) })
    }

    pub fn diagonal(entries: &[BigComplex], ctx: &Ctx) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { BigComplex::zero(ctx) })
    }

    pub fn from_int(m: &IntMatrix, ctx: &Ctx) -> Self {
        Self::from_fn(m.rows(), m.cols(), |i, j| BigComplex::from_i64(ctx, m[(i, j)]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigComplex {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, z: BigComplex) {
        self.data[i * self.cols + j] = z;
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn hconcat(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).conj())
    }

    pub fn add(&self, o: &Self, ctx: &Ctx) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).add(o.get(i, j), ctx))
    }

    pub fn sub(&self, o: &Self, ctx: &Ctx) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).sub(o.get(i, j), ctx))
    }

    pub fn scale(&self, s: &BigComplex, ctx: &Ctx) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).mul(s, ctx))
    }

    pub fn mul(&self, o: &Self, ctx: &Ctx) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
        Self::from_fn(self.rows, o.cols, |i, j| {
            (0..self.cols).fold(BigComplex::zero(ctx), |acc, k| acc.add(&self.get(i, k).mul(o.get(k, j), ctx), ctx))
        })
    }

    /// `M·I` for an integer matrix, skipping zero entries.
    pub fn mul_int(&self, o: &IntMatrix, ctx: &Ctx) -> Self {
        assert_eq!(self.cols, o.rows());
        Self::from_fn(self.rows, o.cols(), |i, j| {
            (0..self.cols)
                .filter(|&k| o[(k, j)] != 0)
                .fold(BigComplex::zero(ctx), |acc, k| acc.add(&self.get(i, k).scale_i64(o[(k, j)], ctx), ctx))
        })
    }

    /// Real parts as `f64`.
    pub fn re_f64(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j).to_f64().0).collect()).collect()
    }

    /// Imaginary parts as `f64`.
    pub fn im_f64(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j).to_f64().1).collect()).collect()
    }

    /// Largest entry modulus as `f64`.
    pub fn max_abs_f64(&self) -> f64 {
        self.data.iter().map(BigComplex::abs_f64).fold(0.0, f64::max)
    }

    /// `log₂` of the largest entry modulus.
    pub fn max_log2_abs(&self, ctx: &Ctx) -> f64 {
        self.data.iter().map(|z| z.log2_abs(ctx)).fold(f64::NEG_INFINITY, f64::max)
    }

    /// LU factorization with partial pivoting; `None` when a pivot vanishes.
    fn lu(&self, ctx: &Ctx) -> Option<(Vec<Vec<BigComplex>>, Vec<usize>, bool)> {
        assert_eq!(self.rows, self.cols, "square matrix required");
        let n = self.rows;
        let mut a: Vec<Vec<BigComplex>> = (0..n).map(|i| (0..n).map(|j| self.get(i, j).clone()).collect()).collect();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut odd = false;
        for k in 0..n {
            let p = (k..n).max_by(|&x, &y| a[x][k].abs_f64().total_cmp(&a[y][k].abs_f64()))?;
            if a[p][k].is_zero() {
                return None;
            }
            if p != k {
                a.swap(p, k);
                perm.swap(p, k);
                odd = !odd;
            }
            let inv = a[k][k].recip(ctx);
            for i in k + 1..n {
                let f = a[i][k].mul(&inv, ctx);
                for j in k + 1..n {
                    let t = f.mul(&a[k][j], ctx);
                    a[i][j] = a[i][j].sub(&t, ctx);
                }
                a[i][k] = f;
            }
        }
        Some((a, perm, odd))
    }

    pub fn det(&self, ctx: &Ctx) -> BigComplex {
        let Some((lu, _, odd)) = self.lu(ctx) else {
            return BigComplex::zero(ctx);
        };
        let d = (0..self.rows).fold(BigComplex::one(ctx), |acc, k| acc.mul(&lu[k][k], ctx));
        if odd {
            d.neg()
        } else {
            d
        }
    }

    pub fn inverse(&self, ctx: &Ctx) -> Option<Self> {
        let n = self.rows;
        let (lu, perm, _) = self.lu(ctx)?;
        let mut inv = Self::zeros(n, n, ctx);
        for col in 0..n {
            // Solve L·U·x = P·e_col.
            let mut x: Vec<BigComplex> =
                (0..n).map(|i| if perm[i] == col { BigComplex::one(ctx) } else { BigComplex::zero(ctx) }).collect();
            for i in 0..n {
                for j in 0..i {
                    let t = lu[i][j].mul(&x[j], ctx);
                    x[i] = x[i].sub(&t, ctx);
                }
            }
            for i in (0..n).rev() {
                for j in i + 1..n {
                    let t = lu[i][j].mul(&x[j], ctx);
                    x[i] = x[i].sub(&t, ctx);
                }
                x[i] = x[i].div(&lu[i][i], ctx);
            }
            for (i, v) in x.into_iter().enumerate() {
                inv.set(i, col, v);
            }
        }
        Some(inv)
    }

    /// `log₂` of the largest entrywise difference.
    pub fn log2_max_diff(&self, o: &Self, ctx: &Ctx) -> f64 {
        self.sub(o, ctx).max_log2_abs(ctx)
    }
}
