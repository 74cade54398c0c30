use super::f2::{lift_gl_f2, F2Matrix};
use super::matrix::{IntMatrix, Subgroup, SymplecticError, SymplecticMatrix};

/// `M = gamma · levi · lower` with `gamma ∈ Γ(2)`, `levi ∈ M(ℤ)`, `lower ∈ V(ℤ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gamma0Decomposition {
    pub gamma: SymplecticMatrix,
    pub levi: SymplecticMatrix,
    pub lower: SymplecticMatrix,
}

impl Gamma0Decomposition {
    pub fn product(&self) -> SymplecticMatrix {
        self.gamma.mul(&self.levi).mul(&self.lower)
    }
}

/// Splits `M ∈ Γ⁰(2)` into a level-2 part and generators.
///
/// Right-multiplying by `P = diag(A′, ᵗA′⁻¹)`, where `A′` is unimodular with
/// `A·A′ ≡ 1 mod 2`, lands in `Γ¹(2)`; the lower-left block is then
/// symmetric mod 2 and a further `V(S)` factor clears it. `A` itself need
/// not be unimodular, so `A′` is a lift of `(A mod 2)⁻¹` rather than `A⁻¹`.
pub fn decompose_gamma0(m: &SymplecticMatrix) -> Result<Gamma0Decomposition, SymplecticError> {
    if !m.is_in(Subgroup::UpperTheta) {
        return Err(SymplecticError::NotInSubgroup(Subgroup::UpperTheta));
    }
    let g = m.genus();
    let a = m.a();
    let a_prime = match a.unimodular_inverse() {
        Some(inv) => inv,
        None => {
            let inv2 = F2Matrix::from_int(&a).inverse().expect("A is invertible mod 2 on Γ⁰(2)");
            lift_gl_f2(&inv2).expect("invertible over 𝔽₂")
        }
    };
    let p = SymplecticMatrix::levi(&a_prime).expect("unimodular");
    let mp = m.mul(&p);
    debug_assert!(mp.a().congruent_mod(&IntMatrix::identity(g), 2) && mp.b().is_zero_mod(2));

    let c = mp.c();
    let s = IntMatrix::from_fn(g, g, |i, j| -c[(i.min(j), i.max(j))]);
    let v_s = SymplecticMatrix::lower(&s).expect("symmetric");
    let gamma = mp.mul(&v_s);
    assert!(gamma.is_in(Subgroup::Principal(2)), "reduction failed to reach Γ(2)");

    let p_inv = p.inverse();
    let lower = p.mul(&SymplecticMatrix::lower(&s.scale(-1)).expect("symmetric")).mul(&p_inv);
    let out = Gamma0Decomposition { gamma, levi: p_inv, lower };
    assert!(out.levi.is_in(Subgroup::Levi) && out.lower.is_in(Subgroup::Lower));
    assert_eq!(&out.product(), m, "Γ⁰(2) decomposition does not reconstruct its input");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_cases() {
        let id = SymplecticMatrix::identity(3);
        let d = decompose_gamma0(&id).unwrap();
        assert_eq!((d.gamma, d.levi, d.lower), (id.clone(), id.clone(), id.clone()));
        let s = IntMatrix::from_rows(&[[1, 2, 0], [2, -1, 1], [0, 1, 3]]);
        let v = SymplecticMatrix::lower(&s).unwrap();
        let d = decompose_gamma0(&v).unwrap();
        assert_eq!((d.gamma, d.levi, d.lower), (id.clone(), id, v));
        assert!(decompose_gamma0(&SymplecticMatrix::j(3)).is_err());
    }

    #[test]
    fn non_unimodular_a() {
        // A = 3, B = 2, C = 4, D = 3: AD − BC = 1.
        let m = SymplecticMatrix::from_rows(&[[3, 2], [4, 3]]).unwrap();
        let d = decompose_gamma0(&m).unwrap();
        assert_eq!(d.product(), m);
    }
}
