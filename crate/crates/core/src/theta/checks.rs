//! Residuals of the duplication, Jacobi and transformation identities.

use super::lattice::theta_table;
use super::{act, j_factor, RiemannMatrix, ThetaError};
use crate::numeric::{log2_rel_diff, BigComplex, Ctx};
use crate::symplectic::{char_action, phase_exponent, Subgroup, SymplecticMatrix, ThetaCharacteristic};

/// `log₂` of `|lhs − rhs|` relative to `max(|θ(τ/2)|)²`, where
/// `lhs = θ[ε₁;ε₂](τ/2)·θ[ε₁;δ](τ/2)` and
/// `rhs = Σ_μ (−1)^{μ·δ}·θ[ε₁−μ; ε₂−δ](τ)·θ[μ; ε₂−δ](τ)`.
pub fn duplication_check(eps1: &[i64], eps2: &[i64], delta: &[i64], tau: &RiemannMatrix, ctx: &Ctx) -> Result<f64, ThetaError> {
    let g = tau.genus();
    for v in [eps1, eps2, delta] {
        if v.len() != g {
            return Err(ThetaError::GenusMismatch { expected: g, got: v.len() });
        }
    }
    let half = theta_table(&tau.half(ctx), ctx)?;
    let full = theta_table(tau, ctx)?;
    let ch = |a: &[i64], b: &[i64]| ThetaCharacteristic::new(a.to_vec(), b.to_vec());
    let lhs = half.get(&ch(eps1, eps2)).mul(&half.get(&ch(eps1, delta)), ctx);
    let e2d: alloc::vec::Vec<i64> = eps2.iter().zip(delta).map(|(a, b)| a - b).collect();
    let mut rhs = BigComplex::zero(ctx);
    for mu_bits in 0..1u64 << g {
        let mu: alloc::vec::Vec<i64> = (0..g).map(|k| ((mu_bits >> k) & 1) as i64).collect();
        let e1m: alloc::vec::Vec<i64> = eps1.iter().zip(&mu).map(|(a, b)| a - b).collect();
        let term = full.get(&ch(&e1m, &e2d)).mul(&full.get(&ch(&mu, &e2d)), ctx);
        let sign: i64 = mu.iter().zip(delta).map(|(a, b)| a * b).sum();
        rhs = if sign.rem_euclid(2) == 1 { rhs.sub(&term, ctx) } else { rhs.add(&term, ctx) };
    }
    let scale = 2.0 * half.log2_max_even(ctx);
    Ok(lhs.sub(&rhs, ctx).log2_abs(ctx) - scale)
}

/// `log₂` relative residual of `θ[0;0]⁴ = θ[1;0]⁴ + θ[0;1]⁴` in genus 1.
pub fn jacobi_residual(tau: &RiemannMatrix, ctx: &Ctx) -> Result<f64, ThetaError> {
    if tau.genus() != 1 {
        return Err(ThetaError::UnsupportedGenus(tau.genus()));
    }
    let t = theta_table(tau, ctx)?;
    let [t00, t10, t01] = [0b00, 0b01, 0b10].map(|b| t.get_bits(b).powu(4, ctx));
    Ok(log2_rel_diff(&t00, &t10.add(&t01, ctx), ctx))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransformationReport {
    /// `log₂` relative residual of `|θ[M.ε](M.τ)|² = |j(M,τ)|·|θ[ε](τ)|²`.
    pub modulus_log2: f64,
    /// For `M ∈ P(ℤ)`: residual of `θ[M.ε](M.τ)² = i^e·θ[ε](τ)²` with the corrected phase exponent.
    pub phase_log2: Option<f64>,
}

pub fn transformation_check(
    m: &SymplecticMatrix,
    eps: &ThetaCharacteristic,
    tau: &RiemannMatrix,
    ctx: &Ctx,
) -> Result<TransformationReport, ThetaError> {
    let image = act(m, tau, ctx)?;
    let j = j_factor(m, tau, ctx)?;
    let before = theta_table(tau, ctx)?.get(eps);
    let after = theta_table(&image, ctx)?.get(&char_action(m, eps));
    let lhs = BigComplex::real(ctx, after.norm_sqr(ctx));
    let rhs = BigComplex::real(ctx, ctx.mul(&j.abs(ctx), &before.norm_sqr(ctx)));
    let modulus_log2 = log2_rel_diff(&lhs, &rhs, ctx);
    let phase_log2 = m.is_in(Subgroup::Parabolic).then(|| {
        let lhs = after.square(ctx);
        let rhs = before.square(ctx).mul_i_pow(phase_exponent(eps, m));
        log2_rel_diff(&lhs, &rhs, ctx)
    });
    Ok(TransformationReport { modulus_log2, phase_log2 })
}

/// `log₂` relative residual of `χ18((M.τ)/2) = j(M,τ)^{18}·χ18(τ/2)` for `M ∈ Γ⁰(2)`.
pub fn chi18_half_modularity(m: &SymplecticMatrix, tau: &RiemannMatrix, ctx: &Ctx) -> Result<f64, ThetaError> {
    if !m.is_in(Subgroup::UpperTheta) {
        return Err(ThetaError::NotInSubgroup(Subgroup::UpperTheta));
    }
    if tau.genus() != 3 {
        return Err(ThetaError::UnsupportedGenus(tau.genus()));
    }
    let image = act(m, tau, ctx)?;
    let j = j_factor(m, tau, ctx)?;
    let lhs = theta_table(&image.half(ctx), ctx)?.chi(ctx);
    let rhs = theta_table(&tau.half(ctx), ctx)?.chi(ctx).mul(&j.powu(18, ctx), ctx);
    Ok(log2_rel_diff(&lhs, &rhs, ctx))
}

/// `log₂` relative residual of `χ_k(M.τ) = j(M,τ)^k·χ_k(τ)`.
pub fn chi_modularity(m: &SymplecticMatrix, tau: &RiemannMatrix, ctx: &Ctx) -> Result<f64, ThetaError> {
    let image = act(m, tau, ctx)?;
    let j = j_factor(m, tau, ctx)?;
    let before = theta_table(tau, ctx)?;
    let k = before.chi_weight() as u64;
    let lhs = theta_table(&image, ctx)?.chi(ctx);
    let rhs = before.chi(ctx).mul(&j.powu(k, ctx), ctx);
    Ok(log2_rel_diff(&lhs, &rhs, ctx))
}
