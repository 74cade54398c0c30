//! Theta constants: lattice sums against closed forms and classical identities.

use ciani_core::numeric::{log2_rel_diff, BigComplex, Ctx};
use ciani_core::symplectic::{enumerate_chars, random_symplectic, ThetaCharacteristic};
use ciani_core::theta::{
    chi_modularity, duplication_check, jacobi_residual, theta_table, theta_table_scaled, transformation_check, RiemannMatrix,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn diag(ctx: &Ctx, im: &[f64]) -> RiemannMatrix {
    let entries: Vec<BigComplex> = im.iter().map(|&y| BigComplex::from_f64(ctx, 0.0, y)).collect();
    RiemannMatrix::diagonal(&entries, ctx).unwrap()
}

fn generic3(ctx: &Ctx) -> RiemannMatrix {
    let re: [&[f64]; 3] = [&[0.1, 0.2, -0.3], &[0.2, -0.4, 0.15], &[-0.3, 0.15, 0.25]];
    let im: [&[f64]; 3] = [&[1.1, 0.2, 0.1], &[0.2, 0.9, -0.15], &[0.1, -0.15, 1.3]];
    RiemannMatrix::from_f64(&re, &im, ctx).unwrap()
}

/// `θ[0;0](i) = π^{1/4}/Γ(3/4)`, with `Γ(1/4)² = 2ϖ√(2π)` and `ϖ = π/AGM(1, √2)`.
#[test]
fn theta_at_i_matches_gamma_closed_form() {
    let ctx = Ctx::new(256);
    let t = theta_table(&diag(&ctx, &[1.0]), &ctx).unwrap();
    let pi = ctx.pi();
    let (mut a, mut b) = (ctx.int(1), ctx.sqrt(&ctx.int(2)));
    for _ in 0..12 {
        let m = ctx.div(&ctx.add(&a, &b), &ctx.int(2));
        b = ctx.sqrt(&ctx.mul(&a, &b));
        a = m;
    }
    let lemniscate = ctx.div(&pi, &a);
    let two_pi = ctx.mul(&pi, &ctx.int(2));
    let gamma_quarter = ctx.sqrt(&ctx.mul(&ctx.mul(&ctx.int(2), &lemniscate), &ctx.sqrt(&two_pi)));
    let gamma_three_quarters = ctx.div(&ctx.mul(&pi, &ctx.sqrt(&ctx.int(2))), &gamma_quarter);
    let expected = ctx.div(&ctx.sqrt(&ctx.sqrt(&pi)), &gamma_three_quarters);
    let err = log2_rel_diff(t.get_bits(0), &BigComplex::real(&ctx, expected), &ctx);
    assert!(err < -240.0, "log2 error {err}");
}

#[test]
fn odd_constants_vanish_and_reduction_signs() {
    let ctx = Ctx::new(128);
    let tau = generic3(&ctx);
    let t = theta_table(&tau, &ctx).unwrap();
    for e in enumerate_chars(3) {
        let v = t.get(&e);
        if !e.is_even() {
            assert!(v.log2_abs(&ctx) < -120.0, "{e} = {:?}", v.to_f64());
        } else {
            assert!(v.log2_abs(&ctx) > -20.0);
        }
        // θ[ε₁+2a; ε₂+2b] = (−1)^{ε₁·b} θ[ε₁;ε₂]
        let shifted =
            ThetaCharacteristic::new(e.eps1.iter().map(|x| x + 2).collect(), e.eps2.iter().zip([2, 0, -2]).map(|(x, s)| x + s).collect());
        let sign = e.eps1[0] + e.eps1[2];
        let w = t.get(&shifted);
        let w = if sign % 2 == 1 { w.neg() } else { w };
        if e.is_even() {
            assert!(log2_rel_diff(&v, &w, &ctx) < -120.0);
        }
    }
}

#[test]
fn widening_the_ellipsoid_changes_nothing() {
    let ctx = Ctx::new(128);
    let tau = generic3(&ctx);
    let a = theta_table(&tau, &ctx).unwrap();
    let b = theta_table_scaled(&tau, &ctx, 1.5).unwrap();
    assert!(b.truncation().points > a.truncation().points);
    for bits in 0..64 {
        let (x, y) = (a.get_bits(bits), b.get_bits(bits));
        let scale = x.log2_abs(&ctx).max(0.0);
        assert!(x.sub(y, &ctx).log2_abs(&ctx) - scale < -124.0, "bits {bits}");
    }
}

#[test]
fn diagonal_period_matrix_splits() {
    let ctx = Ctx::new(128);
    let im = [0.8, 1.1, 1.3];
    let full = theta_table(&diag(&ctx, &im), &ctx).unwrap();
    let parts: Vec<_> = im.iter().map(|&y| theta_table(&diag(&ctx, &[y]), &ctx).unwrap()).collect();
    for e in enumerate_chars(3) {
        let mut prod = BigComplex::one(&ctx);
        for k in 0..3 {
            let c = ThetaCharacteristic::new(vec![e.eps1[k]], vec![e.eps2[k]]);
            prod = prod.mul(&parts[k].get(&c), &ctx);
        }
        let v = full.get(&e);
        assert!(v.sub(&prod, &ctx).log2_abs(&ctx) < -120.0, "{e}");
    }
}

#[test]
fn jacobi_identity() {
    let ctx = Ctx::new(128);
    let re: [&[f64]; 1] = [&[0.3]];
    let im: [&[f64]; 1] = [&[0.7]];
    let tau = RiemannMatrix::from_f64(&re, &im, &ctx).unwrap();
    assert!(jacobi_residual(&tau, &ctx).unwrap() < -120.0);
}

#[test]
fn duplication_formula() {
    let ctx = Ctx::new(96);
    let tau = generic3(&ctx);
    let cases: [([i64; 3], [i64; 3], [i64; 3]); 4] = [
        ([0, 0, 0], [0, 0, 0], [0, 0, 1]),
        ([1, 0, 1], [0, 1, 0], [1, 1, 0]),
        ([1, 1, 1], [1, 1, 1], [0, 0, 0]),
        ([0, 1, 0], [1, 0, 0], [0, 1, 1]),
    ];
    for (e1, e2, d) in cases {
        let r = duplication_check(&e1, &e2, &d, &tau, &ctx).unwrap();
        assert!(r < -48.0, "{e1:?} {e2:?} {d:?}: {r}");
    }
}

#[test]
fn transformation_and_modularity() {
    let ctx = Ctx::new(96);
    let tau = generic3(&ctx);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..3 {
        let m = random_symplectic(&mut rng, 3, 6);
        let e = ThetaCharacteristic::from_bits(3, 0b100011);
        assert!(e.is_even());
        let report = transformation_check(&m, &e, &tau, &ctx).unwrap();
        assert!(report.modulus_log2 < -80.0, "{report:?}");
        if let Some(p) = report.phase_log2 {
            assert!(p < -80.0);
        }
        assert!(chi_modularity(&m, &tau, &ctx).unwrap() < -80.0);
    }
}

mod properties {
    use super::*;
    use ciani_core::symplectic::{Generator, SymplecticMatrix};
    use ciani_core::theta::{sigma140, IgusaLabel};
    use proptest::prelude::*;

    /// A Riemann matrix `X + iY` with `Y` diagonally dominant.
    fn riemann(g: usize) -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<Vec<f64>>)> {
        (
            proptest::collection::vec(-0.5f64..0.5, g * g),
            proptest::collection::vec(-0.2f64..0.2, g * g),
            proptest::collection::vec(0.7f64..1.5, g),
        )
            .prop_map(move |(re, off, diag)| {
                let sym = |v: &[f64], i: usize, j: usize| if i <= j { v[i * g + j] } else { v[j * g + i] };
                let x = (0..g).map(|i| (0..g).map(|j| sym(&re, i, j)).collect()).collect();
                let y = (0..g).map(|i| (0..g).map(|j| if i == j { diag[i] } else { sym(&off, i, j) }).collect()).collect();
                (x, y)
            })
    }

    fn build(x: &[Vec<f64>], y: &[Vec<f64>], ctx: &Ctx) -> RiemannMatrix {
        let xr: Vec<&[f64]> = x.iter().map(Vec::as_slice).collect();
        let yr: Vec<&[f64]> = y.iter().map(Vec::as_slice).collect();
        RiemannMatrix::from_f64(&xr, &yr, ctx).unwrap()
    }

    fn genus_and_precision() -> impl Strategy<Value = (usize, usize)> {
        prop_oneof![Just((1, 64)), Just((1, 256)), Just((2, 128)), Just((2, 256)), Just((3, 64)), Just((3, 128))]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn doubling_the_radius_is_invisible(((g, p), (x, y)) in genus_and_precision().prop_flat_map(|(g, p)| (Just((g, p)), riemann(g)))) {
            let ctx = Ctx::new(p);
            let tau = build(&x, &y, &ctx);
            let a = theta_table(&tau, &ctx).unwrap();
            let b = theta_table_scaled(&tau, &ctx, 2.0).unwrap();
            let scale = a.log2_max_even(&ctx);
            for bits in 0..1u64 << (2 * g) {
                let d = a.get_bits(bits).sub(b.get_bits(bits), &ctx).log2_abs(&ctx) - scale;
                prop_assert!(d < -(p as f64), "bits {bits}: 2^{d}");
            }
        }

        #[test]
        fn jacobi_quartic((x, y) in riemann(1)) {
            let ctx = Ctx::new(128);
            prop_assert!(jacobi_residual(&build(&x, &y, &ctx), &ctx).unwrap() < -64.0);
        }

        #[test]
        fn reduction_preserves_absolute_values((x, y) in riemann(2), shift in proptest::collection::vec(-2i64..=2, 4), bits in 0u64..16) {
            let ctx = Ctx::new(96);
            let t = theta_table(&build(&x, &y, &ctx), &ctx).unwrap();
            let e = ThetaCharacteristic::from_bits(2, bits);
            let moved = ThetaCharacteristic::new(
                vec![e.eps1[0] + 2 * shift[0], e.eps1[1] + 2 * shift[1]],
                vec![e.eps2[0] + 2 * shift[2], e.eps2[1] + 2 * shift[3]],
            );
            let (v, w) = (t.get(&e), t.get(&moved));
            prop_assert!(log2_rel_diff(&v.mul(&v.conj(), &ctx), &w.mul(&w.conj(), &ctx), &ctx) < -48.0 || v.log2_abs(&ctx) < -80.0);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(8))]

        #[test]
        fn parabolic_phase_formula(word in proptest::collection::vec(0usize..6, 1..5), bits in 0u64..64) {
            let pool = [
                Generator::Levi { i: 0, j: 1, sign: 1 },
                Generator::Levi { i: 2, j: 0, sign: -1 },
                Generator::Flip { i: 1 },
                Generator::Upper { i: 0, j: 2, scale: 1 },
                Generator::Upper { i: 1, j: 1, scale: 1 },
                Generator::Upper { i: 2, j: 2, scale: -1 },
            ];
            let m = word.iter().fold(SymplecticMatrix::identity(3), |acc, &k| acc.mul(&pool[k].matrix(3)));
            let e = ThetaCharacteristic::from_bits(3, bits);
            prop_assume!(e.is_even());
            let ctx = Ctx::new(96);
            let r = transformation_check(&m, &e, &generic3(&ctx), &ctx).unwrap();
            prop_assert!(r.modulus_log2 < -64.0);
            prop_assert!(r.phase_log2.unwrap() < -64.0);
        }

        #[test]
        fn evaluation_is_deterministic((x, y) in riemann(3)) {
            let ctx = Ctx::new(64);
            let tau = build(&x, &y, &ctx);
            let a = sigma140(&tau, &ctx).unwrap();
            let b = sigma140(&tau, &ctx).unwrap();
            prop_assert_eq!(a.format(&ctx), b.format(&ctx));
        }
    }

    #[test]
    fn diagonal_matrices_are_decomposable() {
        let ctx = Ctx::new(128);
        let t = theta_table(&diag(&ctx, &[0.9, 1.0, 1.2]), &ctx).unwrap();
        let r = ciani_core::theta::igusa_classify(&t, ciani_core::theta::Thresholds::for_precision(128), &ctx);
        assert_eq!(r.label, IgusaLabel::Decomposable);
        let t = theta_table(&generic3(&ctx), &ctx).unwrap();
        let r = ciani_core::theta::igusa_classify(&t, ciani_core::theta::Thresholds::for_precision(128), &ctx);
        assert_eq!(r.label, IgusaLabel::NonHyperellipticJacobian);
    }
}
