//! Theta constants of Riemann matrices, the modular forms built from them,
//! and numerical checks of the classical theta identities.
//!
//! Convention: `θ[ε₁;ε₂](τ) = Σ_{n∈ℤ^g} exp(πi·(vᵗτv + v·ε₂))` with `v = n + ε₁/2`.

mod checks;
mod forms;
mod lattice;

use alloc::vec::Vec;

use crate::numeric::{BigComplex, CMatrix, Ctx};
use crate::symplectic::{SymplecticMatrix, ThetaCharacteristic};

pub use checks::{chi18_half_modularity, chi_modularity, duplication_check, jacobi_residual, transformation_check, TransformationReport};
pub use forms::{chi_k, chi_period, even_thetas, igusa_classify, sigma140, IgusaLabel, IgusaReport, Thresholds};
pub use lattice::{theta_null, theta_table, theta_table_scaled, ThetaTable, Truncation};

/// Working precision below which theta evaluation is refused.
pub const MIN_PRECISION: usize = 32;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ThetaError {
    #[error("imaginary part is not positive definite")]
    NotPositiveDefinite,
    #[error("matrix is not symmetric (log2 asymmetry {0:.1})")]
    NotSymmetric(f64),
    #[error("matrix is not square")]
    NotSquare,
    #[error("precision {0} is below the minimum of 32 bits")]
    PrecisionTooLow(usize),
    #[error("genus {0} is not supported (1..=3)")]
    UnsupportedGenus(usize),
    #[error("genus mismatch: expected {expected}, got {got}")]
    GenusMismatch { expected: usize, got: usize },
    #[error("matrix is singular at working precision")]
    Singular,
    #[error("period matrix violates the Riemann conditions")]
    RiemannConditions,
    #[error("matrix is not in {0}")]
    NotInSubgroup(crate::symplectic::Subgroup),
}

/// A symmetric `g×g` complex matrix with positive definite imaginary part.
#[derive(Debug, Clone)]
pub struct RiemannMatrix {
    tau: CMatrix,
}

impl RiemannMatrix {
    /// Validates symmetry to `2^{1−p}` relative and symmetrizes exactly;
    /// positivity of `Im τ` is checked by a Cholesky factorization at working precision.
    pub fn new(tau: CMatrix, ctx: &Ctx) -> Result<Self, ThetaError> {
        if tau.rows() != tau.cols() || tau.rows() == 0 {
            return Err(ThetaError::NotSquare);
        }
        let g = tau.rows();
        let asym = tau.log2_max_diff(&tau.transpose(), ctx);
        let scale = tau.max_log2_abs(ctx).max(0.0);
        if asym > scale + 1.0 - ctx.bits() as f64 {
            return Err(ThetaError::NotSymmetric(asym));
        }
        let half = ctx.f64(0.5);
        let sym =
            CMatrix::from_fn(
                g,
                g,
                |i, j| {
                    if i == j {
                        tau.get(i, i).clone()
                    } else {
                        tau.get(i, j).add(tau.get(j, i), ctx).scale(&half, ctx)
                    }
                },
            );
        if !real_positive_definite(&sym, ctx) {
            return Err(ThetaError::NotPositiveDefinite);
        }
        Ok(Self { tau: sym })
    }

    pub fn diagonal(entries: &[BigComplex], ctx: &Ctx) -> Result<Self, ThetaError> {
        Self::new(CMatrix::diagonal(entries, ctx), ctx)
    }

    /// From `f64` parts, mainly for tests and examples.
    pub fn from_f64(re: &[&[f64]], im: &[&[f64]], ctx: &Ctx) -> Result<Self, ThetaError> {
        let g = re.len();
        Self::new(CMatrix::from_fn(g, g, |i, j| BigComplex::from_f64(ctx, re[i][j], im[i][j])), ctx)
    }

    pub fn genus(&self) -> usize {
        self.tau.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.tau
    }

    pub fn half(&self, ctx: &Ctx) -> Self {
        Self { tau: self.tau.scale(&BigComplex::real(ctx, ctx.f64(0.5)), ctx) }
    }

    pub fn double(&self, ctx: &Ctx) -> Self {
        Self { tau: self.tau.scale(&BigComplex::from_i64(ctx, 2), ctx) }
    }
}

/// Whether the imaginary part of a symmetric matrix is positive definite.
fn real_positive_definite(m: &CMatrix, ctx: &Ctx) -> bool {
    let n = m.rows();
    let mut l: Vec<Vec<crate::numeric::Real>> = alloc::vec![alloc::vec![ctx.zero(); n]; n];
    for j in 0..n {
        let mut d = m.get(j, j).im.clone();
        for k in 0..j {
            d = ctx.sub(&d, &ctx.mul(&l[j][k], &l[j][k]));
        }
        if !d.is_positive() || d.is_zero() {
            return false;
        }
        let s = ctx.sqrt(&d);
        for i in j + 1..n {
            let mut v = m.get(i, j).im.clone();
            for k in 0..j {
                v = ctx.sub(&v, &ctx.mul(&l[i][k], &l[j][k]));
            }
            l[i][j] = ctx.div(&v, &s);
        }
        l[j][j] = s;
    }
    true
}

fn blocks_c(m: &SymplecticMatrix, ctx: &Ctx) -> [CMatrix; 4] {
    [m.a(), m.b(), m.c(), m.d()].map(|b| CMatrix::from_int(&b, ctx))
}

fn check_genus(m: &SymplecticMatrix, tau: &RiemannMatrix) -> Result<(), ThetaError> {
    if m.genus() != tau.genus() {
        return Err(ThetaError::GenusMismatch { expected: tau.genus(), got: m.genus() });
    }
    Ok(())
}

/// `j(M, τ) = det(C·τ + D)`.
pub fn j_factor(m: &SymplecticMatrix, tau: &RiemannMatrix, ctx: &Ctx) -> Result<BigComplex, ThetaError> {
    check_genus(m, tau)?;
    let [_, _, c, d] = blocks_c(m, ctx);
    Ok(c.mul(tau.matrix(), ctx).add(&d, ctx).det(ctx))
}

/// `M.τ = (A·τ + B)(C·τ + D)⁻¹`.
pub fn act(m: &SymplecticMatrix, tau: &RiemannMatrix, ctx: &Ctx) -> Result<RiemannMatrix, ThetaError> {
    check_genus(m, tau)?;
    let [a, b, c, d] = blocks_c(m, ctx);
    let num = a.mul(tau.matrix(), ctx).add(&b, ctx);
    let den = c.mul(tau.matrix(), ctx).add(&d, ctx).inverse(ctx).ok_or(ThetaError::Singular)?;
    RiemannMatrix::new(num.mul(&den, ctx), ctx)
}

/// A period matrix `Ω = [Ω₁ Ω₂]` with `g×g` blocks.
#[derive(Debug, Clone)]
pub struct PeriodMatrix {
    pub omega1: CMatrix,
    pub omega2: CMatrix,
}

impl PeriodMatrix {
    pub fn new(omega1: CMatrix, omega2: CMatrix) -> Self {
        assert_eq!((omega1.rows(), omega1.cols()), (omega2.rows(), omega2.cols()), "block shapes differ");
        Self { omega1, omega2 }
    }

    /// `[τ, 1]`.
    pub fn from_tau(tau: &RiemannMatrix, ctx: &Ctx) -> Self {
        Self::new(tau.matrix().clone(), CMatrix::identity(tau.genus(), ctx))
    }

    pub fn genus(&self) -> usize {
        self.omega1.rows()
    }

    /// `Ω·M` for a `2g×2g` integer matrix.
    pub fn mul_int(&self, m: &crate::symplectic::IntMatrix, ctx: &Ctx) -> Self {
        let g = self.genus();
        let full = self.omega1.hconcat(&self.omega2).mul_int(m, ctx);
        Self::new(full.submatrix(0, 0, g, g), full.submatrix(0, g, g, g))
    }

    /// `Ω·diag(½, 1)`.
    pub fn halve_first(&self, ctx: &Ctx) -> Self {
        Self::new(self.omega1.scale(&BigComplex::real(ctx, ctx.f64(0.5)), ctx), self.omega2.clone())
    }

    /// `log₂‖Ω·J·ᵗΩ‖ = log₂‖Ω₁·ᵗΩ₂ − Ω₂·ᵗΩ₁‖`.
    pub fn isotropy_log2(&self, ctx: &Ctx) -> f64 {
        let a = self.omega1.mul(&self.omega2.transpose(), ctx);
        let b = self.omega2.mul(&self.omega1.transpose(), ctx);
        a.log2_max_diff(&b, ctx)
    }

    /// Both Riemann conditions: `Ω·J·ᵗΩ = 0` to `2^{−p/2}` relative and
    /// `2i(Ω̄·J⁻¹·ᵗΩ)⁻¹` Hermitian positive definite.
    pub fn satisfies_riemann(&self, ctx: &Ctx) -> bool {
        let scale = self.omega1.max_log2_abs(ctx).max(self.omega2.max_log2_abs(ctx));
        if self.isotropy_log2(ctx) > 2.0 * scale - ctx.bits() as f64 / 2.0 {
            return false;
        }
        // Ω̄·J⁻¹·ᵗΩ = Ω̄₂·ᵗΩ₁ − Ω̄₁·ᵗΩ₂.
        let inner = self.omega2.conj().mul(&self.omega1.transpose(), ctx).sub(&self.omega1.conj().mul(&self.omega2.transpose(), ctx), ctx);
        let Some(inv) = inner.inverse(ctx) else { return false };
        let h = inv.scale(&BigComplex::from_i64(ctx, 2).mul_i(), ctx);
        hermitian_positive_definite(&h, ctx)
    }

    /// `τ(Ω) = Ω₂⁻¹·Ω₁`.
    pub fn tau(&self, ctx: &Ctx) -> Result<RiemannMatrix, ThetaError> {
        let inv = self.omega2.inverse(ctx).ok_or(ThetaError::Singular)?;
        RiemannMatrix::new(inv.mul(&self.omega1, ctx), ctx)
    }
}

/// Hermitian to `2^{−p/2}` relative and positive definite by Cholesky.
fn hermitian_positive_definite(h: &CMatrix, ctx: &Ctx) -> bool {
    let n = h.rows();
    let scale = h.max_log2_abs(ctx);
    if h.log2_max_diff(&h.transpose().conj(), ctx) > scale - ctx.bits() as f64 / 2.0 {
        return false;
    }
    let mut l: Vec<Vec<BigComplex>> = alloc::vec![alloc::vec![BigComplex::zero(ctx); n]; n];
    for j in 0..n {
        let mut d = h.get(j, j).re.clone();
        for k in 0..j {
            d = ctx.sub(&d, &l[j][k].norm_sqr(ctx));
        }
        if !d.is_positive() || d.is_zero() {
            return false;
        }
        let s = ctx.sqrt(&d);
        for i in j + 1..n {
            let mut v = h.get(i, j).clone();
            for k in 0..j {
                v = v.sub(&l[i][k].mul(&l[j][k].conj(), ctx), ctx);
            }
            l[i][j] = v.scale(&ctx.div(&ctx.int(1), &s), ctx);
        }
        l[j][j] = BigComplex::real(ctx, s);
    }
    true
}

/// `θ[ε](τ)` for every characteristic of a table, in bit-mask order.
pub fn all_thetas(table: &ThetaTable) -> Vec<(ThetaCharacteristic, BigComplex)> {
    crate::symplectic::enumerate_chars(table.genus())
        .into_iter()
        .map(|e| {
            let v = table.get(&e);
            (e, v)
        })
        .collect()
}
