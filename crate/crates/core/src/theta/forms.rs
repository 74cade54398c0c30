//! `χ_k`, `Σ140` and Igusa's trichotomy in genus 3.

use alloc::vec::Vec;

use super::lattice::{theta_table, ThetaTable};
use super::{PeriodMatrix, RiemannMatrix, ThetaError};
use crate::numeric::{BigComplex, Ctx};
use crate::symplectic::{enumerate_chars, ThetaCharacteristic};

/// Even theta constants in bit-mask order of their characteristics.
pub fn even_thetas(table: &ThetaTable) -> Vec<(ThetaCharacteristic, BigComplex)> {
    enumerate_chars(table.genus())
        .into_iter()
        .filter(ThetaCharacteristic::is_even)
        .map(|e| {
            let v = table.get_bits(e.to_bits()).clone();
            (e, v)
        })
        .collect()
}

impl ThetaTable {
    /// `χ_k = ∏_{even ε} θ[ε]`, multiplied in characteristic order.
    pub fn chi(&self, ctx: &Ctx) -> BigComplex {
        even_thetas(self).iter().fold(BigComplex::one(ctx), |acc, (_, v)| acc.mul(v, ctx))
    }

    /// Weight `k = #even/2` of [`chi`](Self::chi).
    pub fn chi_weight(&self) -> usize {
        let g = self.genus();
        (1 << (g - 1)) * ((1 << g) + 1) / 2
    }

    /// `e₃₅(θ[ε]⁸ : ε even)`; genus 3 only.
    pub fn sigma140(&self, ctx: &Ctx) -> BigComplex {
        assert_eq!(self.genus(), 3, "Σ140 is defined in genus 3");
        let eighth: Vec<BigComplex> = even_thetas(self).iter().map(|(_, v)| v.powu(8, ctx)).collect();
        elementary_35(eighth, ctx)
    }

    /// `log₂ max |θ[ε]|` over even `ε`.
    pub fn log2_max_even(&self, ctx: &Ctx) -> f64 {
        even_thetas(self).iter().map(|(_, v)| v.log2_abs(ctx)).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// `e_{n−1}` of `n` values. Inputs are put in a canonical order first, so
/// the result does not depend on how they were labelled.
fn elementary_35(mut xs: Vec<BigComplex>, ctx: &Ctx) -> BigComplex {
    xs.sort_by(|a, b| {
        let (ar, ai) = a.to_f64();
        let (br, bi) = b.to_f64();
        ar.total_cmp(&br).then(ai.total_cmp(&bi))
    });
    let n = xs.len();
    if xs.iter().all(|x| !x.is_zero()) {
        let prod = xs.iter().fold(BigComplex::one(ctx), |acc, x| acc.mul(x, ctx));
        let inv_sum = xs.iter().fold(BigComplex::zero(ctx), |acc, x| acc.add(&x.recip(ctx), ctx));
        return prod.mul(&inv_sum, ctx);
    }
    // e_k recursion: e_k ← e_k + x·e_{k−1}.
    let mut e = alloc::vec![BigComplex::zero(ctx); n + 1];
    e[0] = BigComplex::one(ctx);
    for x in &xs {
        for k in (1..=n).rev() {
            let t = e[k - 1].mul(x, ctx);
            e[k] = e[k].add(&t, ctx);
        }
    }
    e[n - 1].clone()
}

pub fn chi_k(tau: &RiemannMatrix, ctx: &Ctx) -> Result<BigComplex, ThetaError> {
    if tau.genus() < 2 {
        return Err(ThetaError::UnsupportedGenus(tau.genus()));
    }
    Ok(theta_table(tau, ctx)?.chi(ctx))
}

pub fn sigma140(tau: &RiemannMatrix, ctx: &Ctx) -> Result<BigComplex, ThetaError> {
    if tau.genus() != 3 {
        return Err(ThetaError::UnsupportedGenus(tau.genus()));
    }
    Ok(theta_table(tau, ctx)?.sigma140(ctx))
}

/// `det(Ω₂)^{−k}·χ_k(τ(Ω))`.
pub fn chi_period(omega: &PeriodMatrix, ctx: &Ctx) -> Result<BigComplex, ThetaError> {
    let tau = omega.tau(ctx)?;
    let table = theta_table(&tau, ctx)?;
    let k = table.chi_weight() as i64;
    Ok(table.chi(ctx).mul(&omega.omega2.det(ctx).powi(-k, ctx), ctx))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IgusaLabel {
    Decomposable,
    HyperellipticJacobian,
    NonHyperellipticJacobian,
    /// A value fell between the vanishing and non-vanishing thresholds.
    Indeterminate,
}

impl IgusaLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            IgusaLabel::Decomposable => "Decomposable",
            IgusaLabel::HyperellipticJacobian => "HyperellipticJacobian",
            IgusaLabel::NonHyperellipticJacobian => "NonHyperellipticJacobian",
            IgusaLabel::Indeterminate => "Indeterminate",
        }
    }
}

/// Relative `log₂` thresholds: a value is zero below `zero_log2` and
/// nonzero above `nonzero_log2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub zero_log2: f64,
    pub nonzero_log2: f64,
}

impl Thresholds {
    /// `2^{−p/3}` and `2^{−p/6}`.
    pub fn for_precision(p: usize) -> Self {
        Self { zero_log2: -(p as f64) / 3.0, nonzero_log2: -(p as f64) / 6.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IgusaReport {
    pub label: IgusaLabel,
    pub log2_chi18: f64,
    pub log2_sigma140: f64,
    /// `log₂` of the scale `χ18` is compared against: the product of the
    /// even constants with the smallest one replaced by the largest.
    pub log2_chi18_scale: f64,
    /// `log₂` of the scale for `Σ140`: eighth power of the product with the
    /// two smallest replaced by one copy of the largest. The decision uses
    /// one eighth of `log2_sigma140 − log2_sigma140_scale`.
    pub log2_sigma140_scale: f64,
    pub thresholds: Thresholds,
}

impl IgusaReport {
    /// `log₂` of `|χ18|` over its scale: about the smallest `|θ|/M`.
    pub fn chi18_relative(&self) -> f64 {
        self.log2_chi18 - self.log2_chi18_scale
    }

    /// `log₂` of `(|Σ140|/scale)^{1/8}`: about the second smallest `|θ|/M`.
    pub fn sigma140_relative(&self) -> f64 {
        (self.log2_sigma140 - self.log2_sigma140_scale) / 8.0
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Vanishing {
    Zero,
    NonZero,
    Unclear,
}

fn vanishing(rel: f64, t: Thresholds) -> Vanishing {
    if rel < t.zero_log2 {
        Vanishing::Zero
    } else if rel > t.nonzero_log2 {
        Vanishing::NonZero
    } else {
        Vanishing::Unclear
    }
}

/// Per-factor scales for `χ18` and `Σ140` from the sizes `log₂|θ[ε]|`.
///
/// `χ18` is compared with `M·∏(35 largest |θ|)`, `M` the largest, so the
/// ratio is the smallest `|θ|/M`. `Σ140` is compared with
/// `(M·∏(34 largest |θ|))⁸` and the ratio taken to the power `1/8`, which
/// makes it about the second smallest `|θ|/M`. Sizes are floored `bits`
/// below `M` so exact zeros stay finite.
fn magnitude_scales(sizes: &[f64], bits: usize) -> (f64, f64) {
    let max = sizes.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sorted: Vec<f64> = sizes.iter().map(|&l| l.max(max - bits as f64)).collect();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let n = sorted.len();
    let chi_scale = max + sorted[..n - 1].iter().sum::<f64>();
    let sigma_scale = 8.0 * (max + sorted[..n - 2].iter().sum::<f64>());
    (chi_scale, sigma_scale)
}

/// Igusa's trichotomy from a genus-3 theta table.
pub fn igusa_classify(table: &ThetaTable, thresholds: Thresholds, ctx: &Ctx) -> IgusaReport {
    assert_eq!(table.genus(), 3, "Igusa classification needs genus 3");
    let sizes: Vec<f64> = even_thetas(table).iter().map(|(_, v)| v.log2_abs(ctx)).collect();
    let chi = table.chi(ctx).log2_abs(ctx);
    let sigma = table.sigma140(ctx).log2_abs(ctx);
    let (chi_scale, sigma_scale) = magnitude_scales(&sizes, ctx.work());
    let mut report = IgusaReport {
        label: IgusaLabel::Indeterminate,
        log2_chi18: chi,
        log2_sigma140: sigma,
        log2_chi18_scale: chi_scale,
        log2_sigma140_scale: sigma_scale,
        thresholds,
    };
    report.label = match (vanishing(report.chi18_relative(), thresholds), vanishing(report.sigma140_relative(), thresholds)) {
        (Vanishing::NonZero, _) => IgusaLabel::NonHyperellipticJacobian,
        (Vanishing::Zero, Vanishing::NonZero) => IgusaLabel::HyperellipticJacobian,
        (Vanishing::Zero, Vanishing::Zero) => IgusaLabel::Decomposable,
        _ => IgusaLabel::Indeterminate,
    };
    report
}
