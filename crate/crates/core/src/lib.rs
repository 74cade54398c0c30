//! Exact and numerical machinery for the Ciani family of abelian threefolds.
//!
//! The crate is `no_std` (it needs `alloc`). It covers:
//!
//! * [`poly`]: ternary forms over ℚ and a small text parser for them;
//! * [`resultant`]: Sylvester's 15×15 determinantal resultant of three ternary
//!   cubics and the discriminant of ternary quartics;
//! * [`ciani`]: the correspondence between symmetric 3×3 matrices, Ciani
//!   quartics and products of elliptic curves, with the twist-obstruction
//!   invariant `T = det m` and the classification it drives;
//! * [`symplectic`]: integer and mod-2 symplectic groups, theta characteristics,
//!   maximal isotropic subspaces and transporters;
//! * [`numeric`] and [`theta`]: arbitrary-precision complex arithmetic,
//!   Thetanullwerte with a certified truncation, `χ_k`, `Σ140`, and the
//!   duplication/transformation checks;
//! * [`klein`]: the uniformized pipeline that compares `(π/2)^54·χ18(Ω′)` with
//!   the exact invariant `X(m)`.

#![no_std]
// Dense linear algebra reads more clearly with explicit indices.
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod ciani;
pub mod klein;
pub mod linalg;
pub mod numeric;
pub mod poly;
pub mod rational;
pub mod resultant;
pub mod symplectic;
pub mod theta;

pub use rational::Rational;
