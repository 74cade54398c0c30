//! Integer and mod-2 symplectic groups.
//!
//! Matrices act on column vectors and are written in `g×g` blocks
//! `M = [[A, B], [C, D]]`; `J = [[0, 1], [−1, 0]]`. Vectors of `𝔽₂^{2g}` are
//! bit masks (bit `k` is coordinate `k`), with the first `g` coordinates
//! playing the role of `ε₁` and the last `g` of `ε₂`.

mod characteristic;
mod decompose;
mod f2;
mod matrix;
mod words;

pub use characteristic::{char_action, enumerate_chars, phase_exponent, phi, Parity, ThetaCharacteristic};
pub use decompose::{decompose_gamma0, Gamma0Decomposition};
pub use f2::{
    enumerate_max_isotropic, f2_pairing, lift_gl_f2, same_transporter_coset, transporter_lift, transporter_lift_from_basis, F2Matrix,
    IsotropicSubspace,
};
pub use matrix::{
    is_symplectic, kappa_squared_parabolic, klein_transporter, transporter_levi_factor, transporter_right_factor, IntMatrix, Subgroup,
    SymplecticError, SymplecticMatrix,
};
pub use words::{random_gamma0_upper, random_symplectic, Generator};
