//! Property tests for forms, resultants and the Ciani correspondence.

use ciani_core::ciani::{
    ab_of, ciani_form, classify, classify_matrix, closed_discriminant, hlp_coefficients, hlp_t0, mat_of, t_invariant, x_invariant,
    CianiMatrix,
};
use ciani_core::linalg::QMatrix;
use ciani_core::poly::{basis, parse_form, Axis, Monomial, TernaryForm};
use ciani_core::rational::{frac, int, is_square_rational, pow};
use ciani_core::resultant::{discriminant_quartic, resultant3, resultant3_with, SplitRule};
use ciani_core::Rational;
use num_traits::Zero;
use proptest::prelude::*;

fn rational(max: i64) -> impl Strategy<Value = Rational> {
    (-max..=max, 1..=max).prop_map(|(n, d)| frac(n, d))
}

fn form(degree: u32, max: i64) -> impl Strategy<Value = TernaryForm> {
    let mons = basis(degree);
    let n = mons.len();
    proptest::collection::vec(prop_oneof![2 => Just(int(0)), 3 => rational(max)], n)
        .prop_map(move |cs| TernaryForm::from_terms(degree, mons.iter().copied().zip(cs)))
}

fn int_form(degree: u32, max: i64) -> impl Strategy<Value = TernaryForm> {
    let mons = basis(degree);
    let n = mons.len();
    proptest::collection::vec(-max..=max, n)
        .prop_map(move |cs| TernaryForm::from_terms(degree, mons.iter().copied().zip(cs.into_iter().map(int))))
}

fn matrix3(max: i64) -> impl Strategy<Value = QMatrix> {
    proptest::collection::vec(rational(max), 9).prop_map(|v| QMatrix::from_fn(3, 3, |i, j| v[3 * i + j].clone()))
}

fn invertible3(max: i64) -> impl Strategy<Value = QMatrix> {
    matrix3(max).prop_filter("invertible", |m| !m.det().is_zero())
}

fn ciani(max: i64) -> impl Strategy<Value = CianiMatrix> {
    proptest::collection::vec(rational(max), 6)
        .prop_map(|v| CianiMatrix::new([v[0].clone(), v[1].clone(), v[2].clone()], [v[3].clone(), v[4].clone(), v[5].clone()]))
}

fn ciani_in_s(max: i64) -> impl Strategy<Value = CianiMatrix> {
    ciani(max).prop_filter("in S", CianiMatrix::in_s)
}

fn ciani_in_s_times(max: i64) -> impl Strategy<Value = CianiMatrix> {
    ciani(max).prop_filter("in S×", CianiMatrix::in_s_times)
}

/// `(a·x + b·y + c·z)` from a coefficient triple.
fn linear(c: &[i64; 3]) -> TernaryForm {
    TernaryForm::from_terms(1, (0..3).map(|k| (Monomial::var(k), int(c[k]))))
}

fn det3(a: &[i64; 3], b: &[i64; 3], c: &[i64; 3]) -> Rational {
    int(a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn euler_identity(f in (1u32..=6).prop_flat_map(|d| form(d, 9))) {
        let d = f.degree();
        let mut acc = TernaryForm::zero(d);
        for axis in Axis::ALL {
            let df = f.partial_derivative(axis);
            acc = acc.add(&TernaryForm::var(axis).mul(&df)).unwrap();
        }
        prop_assert_eq!(acc, f.scale(&int(d as i64)));
    }

    #[test]
    fn render_parse_round_trip(f in (0u32..=6).prop_flat_map(|d| form(d, 50))) {
        let text = f.to_string();
        prop_assert_eq!(parse_form(&text).unwrap(), f);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn substitution_is_a_right_action(f in form(4, 5), g in matrix3(3), h in matrix3(3)) {
        let lhs = f.substitute_linear(&g.mul(&h));
        let rhs = f.substitute_linear(&g).substitute_linear(&h);
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn splitting_independence(f1 in int_form(3, 3), f2 in int_form(3, 3), f3 in int_form(3, 3)) {
        let a = resultant3_with(&f1, &f2, &f3, SplitRule::Greedy).unwrap();
        let b = resultant3_with(&f1, &f2, &f3, SplitRule::Reverse).unwrap();
        prop_assert_eq!(a, b);
    }

    /// Oracle: for cubics that split into linear factors,
    /// Res(∏ₐ l₁ₐ, ∏_b l₂_b, ∏_c l₃_c) = ∏_{a,b,c} det(l₁ₐ, l₂_b, l₃_c).
    #[test]
    fn resultant_of_split_cubics(ls in proptest::collection::vec(proptest::array::uniform3(-3i64..=3), 9)) {
        let cubic = |k: usize| linear(&ls[3 * k]).mul(&linear(&ls[3 * k + 1])).mul(&linear(&ls[3 * k + 2]));
        let res = resultant3(&cubic(0), &cubic(1), &cubic(2)).unwrap();
        let mut expected = int(1);
        for a in 0..3 {
            for b in 3..6 {
                for c in 6..9 {
                    expected *= det3(&ls[a], &ls[b], &ls[c]);
                }
            }
        }
        prop_assert_eq!(res, expected);
    }

    #[test]
    fn multihomogeneity(f1 in int_form(3, 3), f2 in int_form(3, 3), f3 in int_form(3, 3), s in rational(4)) {
        let base = resultant3(&f1, &f2, &f3).unwrap();
        let scaled = resultant3(&f1, &f2.scale(&s), &f3).unwrap();
        prop_assert_eq!(scaled, pow(&s, 9) * base);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn discriminant_invariance(m in ciani(4), g in invertible3(3)) {
        let q = ciani_form(&m);
        let lhs = discriminant_quartic(&q.substitute_linear(&g)).unwrap();
        prop_assert_eq!(lhs, pow(&g.det(), 36) * discriminant_quartic(&q).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn ciani_discriminant_closed_form(m in ciani_in_s_times(6)) {
        let disc = discriminant_quartic(&ciani_form(&m)).unwrap();
        prop_assert_eq!(disc, pow(&int(2), 54) * closed_discriminant(&m));
    }

    #[test]
    fn cofactor_identities(m in ciani(9)) {
        let q = m.to_matrix();
        let c = q.cofactor();
        let d = q.det();
        prop_assert_eq!(q.mul(&c.transpose()), QMatrix::identity(3).scale(&d));
        prop_assert_eq!(c.det(), &d * &d);
        prop_assert_eq!(c.cofactor(), q.scale(&d));
        prop_assert_eq!(x_invariant(&m.cofactor()), pow(&closed_discriminant(&m), 2));
    }

    #[test]
    fn mat_ab_round_trips(m in ciani_in_s(9)) {
        let t = ab_of(&m).unwrap();
        prop_assert_eq!(mat_of(&t), m.clone());
        prop_assert_eq!(ab_of(&mat_of(&t)).unwrap(), t.clone());
        let e = t.base();
        let disc_product = e.discriminant(0) * e.discriminant(1) * e.discriminant(2);
        prop_assert_eq!(disc_product, pow(&(pow(&int(2), 18) * m.a_product() * m.c_product()), 2));
    }

    #[test]
    fn t0_is_64_t(m in ciani_in_s(9)) {
        let t = ab_of(&m).unwrap();
        prop_assert_eq!(hlp_t0(&hlp_coefficients(t.base()), t.rho()), int(64) * t_invariant(&t));
    }

    #[test]
    fn classification_scaling(m in ciani_in_s(7), l in rational(5).prop_filter("nonzero", |q| !q.is_zero())) {
        let l2 = &l * &l;
        let a = classify_matrix(&m).unwrap();
        let b = classify_matrix(&m.scale(&l2)).unwrap();
        prop_assert_eq!(a.label, b.label);
        prop_assert_eq!(b.t, pow(&l, 6) * a.t);
    }

    #[test]
    fn twisting_removes_the_obstruction(m in ciani_in_s_times(7)) {
        let c = classify(&ab_of(&m).unwrap());
        if let Some(tw) = c.twist {
            prop_assert!(!is_square_rational(&c.t));
            prop_assert_eq!(tw.matrix.det(), pow(&c.t, 4));
            prop_assert_eq!(
                classify_matrix(&tw.matrix).unwrap().label,
                ciani_core::ciani::JacobianLabel::NonHyperellipticJacobian
            );
        }
    }
}

#[test]
fn discriminant_vanishes_on_degenerate_matrices() {
    let cases = [
        CianiMatrix::from_i64([1, 1, 2], [1, 1, 0]),
        CianiMatrix::from_i64([0, 1, 1], [1, 2, 3]),
        CianiMatrix::from_i64([1, 1, 1], [1, 0, 0]),
        CianiMatrix::from_i64([1, 4, 1], [2, 0, 0]),
        CianiMatrix::from_i64([4, 1, 1], [1, 0, 0]),
    ];
    for m in cases {
        let degenerate = (m.det() * m.a_product() * m.c_product()).is_zero();
        assert!(degenerate, "{m:?}");
        assert_eq!(discriminant_quartic(&ciani_form(&m)).unwrap(), int(0), "{m:?}");
        assert_eq!(closed_discriminant(&m), int(0));
    }
}
