//! Property tests for the integer and mod-2 symplectic machinery.

use ciani_core::symplectic::{
    char_action, decompose_gamma0, enumerate_chars, enumerate_max_isotropic, f2_pairing, is_symplectic, random_gamma0_upper,
    random_symplectic, same_transporter_coset, transporter_lift, transporter_lift_from_basis, IntMatrix, Subgroup, SymplecticMatrix,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Direct `M·J·ᵗM = J`, computed here without the library's block criteria.
fn preserves_j(m: &IntMatrix) -> bool {
    let n = m.rows();
    let g = n / 2;
    let j = |r: usize, c: usize| -> i64 {
        if c == r + g {
            1
        } else if r == c + g {
            -1
        } else {
            0
        }
    };
    (0..n).all(|r| {
        (0..n).all(|c| {
            let mut s = 0i128;
            for k in 0..n {
                for l in 0..n {
                    s += i128::from(m[(r, k)]) * i128::from(j(k, l)) * i128::from(m[(c, l)]);
                }
            }
            s == i128::from(j(r, c))
        })
    })
}

#[test]
fn membership_criteria_agree_on_random_products() {
    let mut r = rng(1);
    for k in 0..500 {
        let g = 1 + k % 3;
        let m = random_symplectic(&mut r, g, 12);
        assert!(preserves_j(m.matrix()));
        // is_symplectic panics internally if its three criteria disagree.
        assert_eq!(is_symplectic(m.matrix()), Ok(true));
        let mut broken = m.matrix().clone();
        broken[(0, 0)] += 2;
        assert_eq!(is_symplectic(&broken), Ok(preserves_j(&broken)));
    }
}

#[test]
fn char_action_composes_mod_2_and_preserves_parity() {
    let mut r = rng(2);
    for k in 0..60 {
        let g = 1 + k % 3;
        let m1 = random_symplectic(&mut r, g, 8);
        let m2 = random_symplectic(&mut r, g, 8);
        let m12 = m1.mul(&m2);
        for eps in enumerate_chars(g) {
            let lhs = char_action(&m12, &eps).reduced();
            let rhs = char_action(&m1, &char_action(&m2, &eps)).reduced();
            assert_eq!(lhs, rhs, "M1={m1:?} M2={m2:?} eps={eps}");
            assert_eq!(char_action(&m1, &eps).parity(), eps.parity());
        }
    }
}

#[test]
fn char_action_permutes_characteristics() {
    let mut r = rng(3);
    for g in 1..=3 {
        for _ in 0..10 {
            let m = random_symplectic(&mut r, g, 10);
            let mut images: Vec<u64> = enumerate_chars(g).iter().map(|e| char_action(&m, e).to_bits()).collect();
            images.sort_unstable();
            images.dedup();
            assert_eq!(images.len(), 1 << (2 * g));
        }
    }
}

#[test]
fn isotropic_counts_and_brute_force_pairing() {
    for (g, expected) in [(1usize, 3usize), (2, 15), (3, 135)] {
        let all = enumerate_max_isotropic(g).unwrap();
        let product: usize = (1..=g).map(|i| (1 << i) + 1).product();
        assert_eq!(all.len(), expected);
        assert_eq!(all.len(), product);
        for v in &all {
            assert_eq!(v.dimension(), g);
            // Pairing vanishes on every pair of elements of the span, not just the basis.
            let span: Vec<u64> =
                (0..1u64 << g).map(|c| (0..g).filter(|&i| (c >> i) & 1 == 1).fold(0, |acc, i| acc ^ v.basis()[i])).collect();
            assert!(span.iter().all(|&x| span.iter().all(|&y| !f2_pairing(g, x, y))));
        }
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted, all);
    }
}

#[test]
fn transporter_lifts_form_cosets() {
    for v in enumerate_max_isotropic(3).unwrap() {
        let m = transporter_lift(&v).unwrap();
        assert_eq!(is_symplectic(m.matrix()), Ok(true));
        assert_eq!(m.image_of_standard_lagrangian(), v.basis());
        // A different basis of the same subspace.
        let b = v.basis();
        let alt_basis = [b[1] ^ b[0], b[2], b[0] ^ b[2]];
        let alt = transporter_lift_from_basis(3, &alt_basis).unwrap();
        assert!(same_transporter_coset(&m, &alt));
        assert!(m.inverse().mul(&alt).is_in(Subgroup::LowerTheta));
        // Right multiplication by Γ₀(2) stays in the coset and keeps the image.
        let shifted = m.mul(&SymplecticMatrix::upper(&IntMatrix::identity(3)).unwrap());
        assert!(same_transporter_coset(&m, &shifted));
    }
}

#[test]
fn decomposition_round_trips() {
    let mut r = rng(4);
    for _ in 0..200 {
        let m = random_gamma0_upper(&mut r, 3, 16);
        assert!(m.is_in(Subgroup::UpperTheta));
        let d = decompose_gamma0(&m).unwrap();
        assert!(d.gamma.is_in(Subgroup::Principal(2)));
        assert!(d.levi.is_in(Subgroup::Levi));
        assert!(d.lower.is_in(Subgroup::Lower));
        assert_eq!(d.product(), m);
    }
}

#[test]
fn lower_theta_is_transpose_of_upper_theta() {
    let mut r = rng(5);
    for _ in 0..100 {
        let m = random_symplectic(&mut r, 2, 10);
        assert_eq!(m.is_in(Subgroup::UpperTheta), m.transpose().is_in(Subgroup::LowerTheta));
    }
}
