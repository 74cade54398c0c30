//! Truncated lattice sums for all theta constants at once.
//!
//! Writing `m = 2n + ε₁`, every term is `exp(πi·mᵗτm/4)·i^{m·ε₂}`, so one
//! pass over `m ∈ ℤ^g` with the sums bucketed by `m mod 4` yields all
//! `4^g` characteristics. Points are enumerated inside the ellipsoid
//! `mᵗ(Im τ/4)m ≤ B`; with `λ` a lower bound for the least eigenvalue of
//! `Im τ/4` and any `s ∈ (0, 1)`,
//! `Σ_{outside} e^{−π·mᵗYm} ≤ e^{−π(1−s)B}·(2 + (sλ)^{−1/2})^g`,
//! and `B` is chosen to push this below `2^{−p−8}`.

use alloc::vec;
use alloc::vec::Vec;

use super::{RiemannMatrix, ThetaError, MIN_PRECISION};
use crate::numeric::{BigComplex, Ctx};
use crate::symplectic::ThetaCharacteristic;

const TAIL_SPLIT: f64 = 0.125;

/// What the truncation did, for audit.
#[derive(Debug, Clone, PartialEq)]
pub struct Truncation {
    /// Ellipsoid bound `B` on `mᵗ(Im τ/4)m`.
    pub bound: f64,
    /// Certified lower bound on the least eigenvalue of `Im τ/4`.
    pub lambda: f64,
    pub points: usize,
    pub lines: usize,
    /// `log₂` of the certified tail bound.
    pub tail_log2: f64,
}

/// Theta constants for all `4^g` reduced characteristics at one `τ`.
#[derive(Debug, Clone)]
pub struct ThetaTable {
    g: usize,
    values: Vec<BigComplex>,
    truncation: Truncation,
}

impl ThetaTable {
    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn truncation(&self) -> &Truncation {
        &self.truncation
    }

    /// By bit mask: bit `k < g` is `ε₁[k]`, bit `g + k` is `ε₂[k]`.
    pub fn get_bits(&self, bits: u64) -> &BigComplex {
        &self.values[bits as usize]
    }

    /// Any integer characteristic: `θ[ε₁+2a; ε₂+2b] = (−1)^{ε₁·b}·θ[ε₁; ε₂]`.
    pub fn get(&self, eps: &ThetaCharacteristic) -> BigComplex {
        assert_eq!(eps.genus(), self.g, "genus mismatch");
        let r = eps.reduced();
        let twist: i64 = r.eps1.iter().zip(&eps.eps2).zip(&r.eps2).map(|((e1, e2), r2)| e1 * ((e2 - r2) / 2)).sum();
        let v = self.values[r.to_bits() as usize].clone();
        if twist.rem_euclid(2) == 1 {
            v.neg()
        } else {
            v
        }
    }
}

/// Upper Cholesky factor `U` with `Y = ᵗU·U`, in `f64`.
fn cholesky_upper(y: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = y.len();
    let mut u = vec![vec![0.0; n]; n];
    for i in 0..n {
        let d = y[i][i] - (0..i).map(|k| u[k][i] * u[k][i]).sum::<f64>();
        if d.is_nan() || d <= 0.0 {
            return None;
        }
        u[i][i] = libm::sqrt(d);
        for j in i + 1..n {
            u[i][j] = (y[i][j] - (0..i).map(|k| u[k][i] * u[k][j]).sum::<f64>()) / u[i][i];
        }
    }
    Some(u)
}

/// `max(Gershgorin, 1/tr(Y⁻¹))`, a lower bound for the least eigenvalue.
fn least_eigenvalue_bound(y: &[Vec<f64>], u: &[Vec<f64>]) -> f64 {
    let n = y.len();
    let gershgorin = (0..n).map(|i| y[i][i] - (0..n).filter(|&j| j != i).map(|j| y[i][j].abs()).sum::<f64>()).fold(f64::INFINITY, f64::min);
    // tr(Y⁻¹) = ‖U⁻¹‖²_F; invert the triangular factor column by column.
    let mut frob = 0.0;
    for col in 0..n {
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let rhs = if i == col { 1.0 } else { 0.0 };
            x[i] = (rhs - (i + 1..n).map(|k| u[i][k] * x[k]).sum::<f64>()) / u[i][i];
        }
        frob += x.iter().map(|v| v * v).sum::<f64>();
    }
    gershgorin.max(1.0 / frob) * (1.0 - 1e-9)
}

pub fn theta_table(tau: &RiemannMatrix, ctx: &Ctx) -> Result<ThetaTable, ThetaError> {
    theta_table_scaled(tau, ctx, 1.0)
}

/// As [`theta_table`] with the truncation radius multiplied by `radius_scale`.
pub fn theta_table_scaled(tau: &RiemannMatrix, ctx: &Ctx, radius_scale: f64) -> Result<ThetaTable, ThetaError> {
    let g = tau.genus();
    if !(1..=3).contains(&g) {
        return Err(ThetaError::UnsupportedGenus(g));
    }
    if ctx.bits() < MIN_PRECISION {
        return Err(ThetaError::PrecisionTooLow(ctx.bits()));
    }
    let y: Vec<Vec<f64>> = tau.matrix().im_f64().into_iter().map(|r| r.into_iter().map(|v| v / 4.0).collect()).collect();
    let u = cholesky_upper(&y).ok_or(ThetaError::NotPositiveDefinite)?;
    let lambda = least_eigenvalue_bound(&y, &u);
    if lambda.is_nan() || lambda <= 0.0 {
        return Err(ThetaError::NotPositiveDefinite);
    }
    let ln_k = libm::log(2.0 + libm::sqrt(1.0 / (TAIL_SPLIT * lambda)));
    let target = (ctx.bits() + 8) as f64 * core::f64::consts::LN_2;
    let base_bound = (g as f64 * ln_k + target) / (core::f64::consts::PI * (1.0 - TAIL_SPLIT));
    let bound = base_bound * radius_scale * radius_scale;
    let tail_log2 = (g as f64 * ln_k - core::f64::consts::PI * (1.0 - TAIL_SPLIT) * bound) / core::f64::consts::LN_2;

    let lines = enumerate_lines(&u, bound);
    let mut buckets = vec![BigComplex::zero(ctx); 1 << (2 * g)];
    let tau_m = tau.matrix();
    let quarter = ctx.f64(0.25);
    let a = tau_m.get(0, 0);
    // exp(πi·a/2): ratio between consecutive step factors along a line.
    let step = a.scale(&ctx.f64(0.5), ctx).exp_i_pi(ctx);
    let mut points = 0;
    for line in &lines {
        let outer = &line.outer;
        // b = Σ_{j>0} τ₀ⱼ·mⱼ and c = Σ_{j,k>0} τⱼₖ·mⱼ·mₖ.
        let mut b = BigComplex::zero(ctx);
        let mut c = BigComplex::zero(ctx);
        for j in 1..g {
            if outer[j] == 0 {
                continue;
            }
            b = b.add(&tau_m.get(0, j).scale_i64(outer[j], ctx), ctx);
            for k in 1..g {
                if outer[k] != 0 {
                    c = c.add(&tau_m.get(j, k).scale_i64(outer[j] * outer[k], ctx), ctx);
                }
            }
        }
        let t0 = line.lo;
        // E(t) = exp(πi/4·(a t² + 2b t + c)), R(t) = E(t+1)/E(t) = exp(πi/4·(a(2t+1) + 2b)).
        let e_arg = a.scale_i64(t0 * t0, ctx).add(&b.scale_i64(2 * t0, ctx), ctx).add(&c, ctx);
        let mut e = e_arg.scale(&quarter, ctx).exp_i_pi(ctx);
        let r_arg = a.scale_i64(2 * t0 + 1, ctx).add(&b.scale_i64(2, ctx), ctx);
        let mut r = r_arg.scale(&quarter, ctx).exp_i_pi(ctx);
        let outer_index: usize = (1..g).map(|k| (outer[k].rem_euclid(4) as usize) << (2 * k)).sum();
        for t in line.lo..=line.hi {
            let idx = outer_index | t.rem_euclid(4) as usize;
            buckets[idx] = buckets[idx].add(&e, ctx);
            points += 1;
            if t < line.hi {
                e = e.mul(&r, ctx);
                r = r.mul(&step, ctx);
            }
        }
    }

    let values = (0..1u64 << (2 * g))
        .map(|bits| {
            let eps1: Vec<usize> = (0..g).map(|k| ((bits >> k) & 1) as usize).collect();
            let eps2: Vec<usize> = (0..g).map(|k| ((bits >> (g + k)) & 1) as usize).collect();
            let mut acc = BigComplex::zero(ctx);
            for (idx, s) in buckets.iter().enumerate() {
                let rs: Vec<usize> = (0..g).map(|k| (idx >> (2 * k)) & 3).collect();
                if (0..g).any(|k| rs[k] % 2 != eps1[k]) {
                    continue;
                }
                let phase: usize = (0..g).map(|k| rs[k] * eps2[k]).sum();
                acc = acc.add(&s.mul_i_pow(phase as i64), ctx);
            }
            acc
        })
        .collect();
    Ok(ThetaTable { g, values, truncation: Truncation { bound, lambda, points, lines: lines.len(), tail_log2 } })
}

struct Line {
    /// Coordinates `1..g` (index 0 unused).
    outer: Vec<i64>,
    lo: i64,
    hi: i64,
}

/// Fincke–Pohst enumeration of `{m : |U·m|² ≤ bound}` as lines along coordinate 0.
fn enumerate_lines(u: &[Vec<f64>], bound: f64) -> Vec<Line> {
    let g = u.len();
    let mut out = Vec::new();
    let mut m = vec![0i64; g];
    recurse(u, g - 1, bound, &mut m, &mut out);
    out
}

fn recurse(u: &[Vec<f64>], i: usize, rem: f64, m: &mut Vec<i64>, out: &mut Vec<Line>) {
    let g = u.len();
    let center = -(i + 1..g).map(|j| u[i][j] * m[j] as f64).sum::<f64>() / u[i][i];
    let width = libm::sqrt(rem.max(0.0)) / u[i][i];
    let slack = 1e-9 * (1.0 + width);
    let lo = libm::ceil(center - width - slack) as i64;
    let hi = libm::floor(center + width + slack) as i64;
    if lo > hi {
        return;
    }
    if i == 0 {
        out.push(Line { outer: m.clone(), lo, hi });
        return;
    }
    for v in lo..=hi {
        m[i] = v;
        let d = u[i][i] * (v as f64 - center);
        recurse(u, i - 1, rem - d * d, m, out);
    }
    m[i] = 0;
}

/// `θ[ε](τ)` for one characteristic (computes the whole table).
pub fn theta_null(eps: &ThetaCharacteristic, tau: &RiemannMatrix, ctx: &Ctx) -> Result<BigComplex, ThetaError> {
    if eps.genus() != tau.genus() {
        return Err(ThetaError::GenusMismatch { expected: tau.genus(), got: eps.genus() });
    }
    Ok(theta_table(tau, ctx)?.get(eps))
}
