//! The uniformized pipeline: coefficients, quotient periods, the product
//! identities and the comparison with the exact invariant.

use ciani_core::ciani::{classify_matrix, CianiMatrix, JacobianLabel};
use ciani_core::klein::{
    coefficients_from_tau, coefficients_with_periods, eighteen_identities, elliptic_periods, hyperelliptic_point, omega_prime,
    quotient_chi18, verify_klein_corollary, verify_main_identity, w_characteristics, KleinError,
};
use ciani_core::numeric::{log2_rel_diff, BigComplex, Ctx};
use ciani_core::rational::{frac, int};
use ciani_core::symplectic::{klein_transporter, random_gamma0_upper, same_transporter_coset, IsotropicSubspace, SymplecticMatrix};
use ciani_core::theta::IgusaLabel;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn imag(ctx: &Ctx, ys: [f64; 3]) -> [BigComplex; 3] {
    ys.map(|y| BigComplex::from_f64(ctx, 0.0, y))
}

fn generic(ctx: &Ctx, rng: &mut ChaCha8Rng) -> [BigComplex; 3] {
    core::array::from_fn(|_| BigComplex::from_f64(ctx, rng.gen_range(-0.5..0.5), rng.gen_range(0.75..1.4)))
}

#[test]
fn coefficient_identities_at_random_points() {
    let ctx = Ctx::new(128);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let u = coefficients_from_tau(&generic(&ctx, &mut rng), &ctx).unwrap();
        let deltas = (0..3).fold(BigComplex::one(&ctx), |acc, i| acc.mul(&u.delta(i, &ctx), &ctx));
        assert!(log2_rel_diff(&u.rho.square(&ctx), &deltas, &ctx) < -64.0);
        assert!(log2_rel_diff(&u.det_m(&ctx), &u.det_m_closed(&ctx), &ctx) < -64.0);
        assert!(log2_rel_diff(&u.x_direct(&ctx), &u.x_closed(&ctx), &ctx) < -64.0);
    }
}

#[test]
fn period_scaling_is_homogeneous() {
    // ω₂ᵢ → λᵢω₂ᵢ scales aᵢ by λᵢ²/(λⱼλₖ)² and bᵢ, cᵢ by λᵢ⁻², λᵢ⁻⁴.
    let ctx = Ctx::new(128);
    let tau = imag(&ctx, [0.9, 1.0, 1.2]);
    let one = BigComplex::one(&ctx);
    let base = coefficients_with_periods(&tau, &[one.clone(), one.clone(), one.clone()], &ctx).unwrap();
    let lambda = [2.0, 0.5, 3.0].map(|x| BigComplex::from_f64(&ctx, x, 0.0));
    let scaled = coefficients_with_periods(&tau, &lambda, &ctx).unwrap();
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let f = lambda[i].square(&ctx).div(&lambda[j].mul(&lambda[k], &ctx).square(&ctx), &ctx);
        assert!(log2_rel_diff(&scaled.a[i], &base.a[i].mul(&f, &ctx), &ctx) < -120.0);
        let l2 = lambda[i].square(&ctx);
        assert!(log2_rel_diff(&scaled.b[i].mul(&l2, &ctx), &base.b[i], &ctx) < -120.0);
        assert!(log2_rel_diff(&scaled.c[i].mul(&l2.square(&ctx), &ctx), &base.c[i], &ctx) < -120.0);
    }
}

#[test]
fn quotient_period_matrix_matches_the_action() {
    let ctx = Ctx::new(128);
    let u = coefficients_from_tau(&imag(&ctx, [0.8, 1.1, 1.3]), &ctx).unwrap();
    let q = omega_prime(&u, &klein_transporter(), &ctx).unwrap();
    assert!(q.cross_check_log2 < -64.0);
    assert!(q.omega_prime.satisfies_riemann(&ctx));
    // The identity matrix does not carry the standard Lagrangian to W.
    let err = omega_prime(&u, &SymplecticMatrix::identity(3), &ctx);
    assert!(err.is_ok(), "Ω·H is still a period matrix, just of a different quotient");
}

#[test]
fn eighteen_identities_with_one_constant() {
    let ctx = Ctx::new(128);
    let u = coefficients_from_tau(&imag(&ctx, [0.8, 1.1, 1.3]), &ctx).unwrap();
    let r = eighteen_identities(&u, &klein_transporter(), &ctx).unwrap();
    assert_eq!(r.residuals.len(), 18);
    assert!(r.worst() < -64.0, "{:?}", r.residuals);
    assert!(r.abs_c_log2 < -64.0);
    assert!(r.signed_c_log2 < -64.0);
    assert!(r.r1_log2 < -64.0);
    assert!(r.r2_log2 < -64.0);
}

#[test]
fn main_identity_at_generic_points() {
    let ctx = Ctx::new(128);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..3 {
        let r = verify_main_identity(&generic(&ctx, &mut rng), &ctx).unwrap();
        assert!(!r.degenerate);
        assert!(r.residual_log2 < -64.0, "{}", r.residual_log2);
    }
}

#[test]
fn transporter_lift_independence() {
    let ctx = Ctx::new(96);
    let u = coefficients_from_tau(&imag(&ctx, [0.8, 1.1, 1.3]), &ctx).unwrap();
    let n = klein_transporter();
    let base = quotient_chi18(&u, &n, &ctx).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut lifts = 0;
    while lifts < 3 {
        // Right multiplication by Γ₀(2) keeps the transporter coset.
        let gamma = random_gamma0_upper(&mut rng, 3, 4).transpose();
        let other = n.mul(&gamma);
        assert!(same_transporter_coset(&n, &other));
        if other == n {
            continue;
        }
        let v = quotient_chi18(&u, &other, &ctx).unwrap();
        assert!(log2_rel_diff(&base, &v, &ctx) < -48.0);
        lifts += 1;
    }
}

#[test]
fn w_characteristics_are_the_transporter_image() {
    let w = w_characteristics();
    let image = IsotropicSubspace::new(3, &klein_transporter().image_of_standard_lagrangian()).unwrap();
    assert_eq!(image, w.subspace);
    for p in &w.points {
        assert!(w.subspace.contains(p.to_bits()));
    }
}

#[test]
fn elliptic_periods_round_trip() {
    let ctx = Ctx::new(128);
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut done = 0;
    while done < 20 {
        let b = frac(rng.gen_range(-6..=6), rng.gen_range(1..=4));
        let c = frac(rng.gen_range(-9..=9), rng.gen_range(1..=4));
        let delta = &b * &b + &c;
        use num_traits::{Signed, Zero};

        if c.is_zero() || !delta.is_positive() {
            continue;
        }
        let p = elliptic_periods(&b, &c, &ctx).unwrap();
        assert!(p.round_trip_log2 < -64.0, "{b} {c}");
        // (b, c) → (λ²b, λ⁴c) divides the periods by λ.
        let scaled = elliptic_periods(&(&b * int(4)), &(&c * int(16)), &ctx).unwrap();
        let tau_moved = scaled.tau.sub(&p.tau, &ctx);
        let shift = ctx.f64(ciani_core::numeric::to_f64(&tau_moved.re).round());
        let tau_moved = BigComplex::new(ctx.sub(&tau_moved.re, &shift), tau_moved.im);
        assert!(tau_moved.log2_abs(&ctx) < -64.0, "{b} {c}");
        let ratio = p.omega2.div(&scaled.omega2, &ctx).abs_f64();
        assert!((ratio - 2.0).abs() < 1e-12, "{b} {c}: {ratio}");
        done += 1;
    }
}

#[test]
fn hyperelliptic_root() {
    let ctx = Ctx::new(128);
    let h = hyperelliptic_point(0.8, 1.1, &ctx).unwrap();
    assert!(h.det_m.log2_abs(&ctx) < -100.0);
    assert_eq!(h.igusa.label, IgusaLabel::HyperellipticJacobian);
    assert!(h.main.degenerate);
    assert!(h.main.residual_log2 < -64.0);
}

#[test]
fn corollary_on_small_matrices() {
    let ctx = Ctx::new(96);
    for m in [CianiMatrix::identity(), CianiMatrix::from_i64([2, 3, 5], [1, 1, 1])] {
        let r = verify_klein_corollary(&m, &ctx).unwrap();
        assert!(r.passed(&ctx), "{m:?}: {}", r.residual_log2);
        // The cofactor matrix has square determinant, so its quotient is a Jacobian.
        let label = classify_matrix(&r.cofactor).unwrap().label;
        assert_eq!(label, JacobianLabel::NonHyperellipticJacobian);
    }
    let singular = CianiMatrix::new([int(1), int(1), int(1)], [int(1), int(0), int(0)]);
    assert!(matches!(verify_klein_corollary(&singular, &ctx), Err(KleinError::NotInSTimes)));
}

#[test]
fn degeneration_tracks_det_m() {
    // Along τ₃ = it, both sides of the main identity stay equal while det m crosses zero.
    let ctx = Ctx::new(128);
    let h = hyperelliptic_point(0.8, 1.1, &ctx).unwrap();
    let t0 = ciani_core::numeric::to_f64(&h.t);
    let mut previous: Option<f64> = None;
    for k in 1..=3 {
        let t = t0 + 0.02 / (1 << (2 * k)) as f64;
        let r = verify_main_identity(&imag(&ctx, [0.8, 1.1, t]), &ctx).unwrap();
        assert!(r.residual_log2 < -64.0);
        let size = r.lhs.log2_abs(&ctx);
        if let Some(p) = previous {
            // det m is linear near a simple root: quartering the offset takes ~2 bits.
            assert!((p - size - 2.0).abs() < 0.5, "{p} {size}");
        }
        previous = Some(size);
    }
}
