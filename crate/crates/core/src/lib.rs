//! Phase-space structure of a relativistic particle whose Lorentz symmetry
//! acts as a Poisson-Lie group rather than canonically.
//!
//! The crate has three layers:
//!
//! * [`mat`]: exact and floating-point 2×2 / 4×4 complex matrices, the
//!   hermitean-matrix ↔ four-vector dictionary, and matrix functions;
//! * [`sym`]: an exact-arithmetic graded polynomial algebra over commuting
//!   and Grassmann variables, with Poisson brackets extended from fundamental
//!   tables by the super-Leibniz rule;
//! * [`brackets`], [`verify`], [`dynamics`]: the specific deformed bracket
//!   structures, executable checks of every identity they satisfy, and the
//!   particle dynamics they generate (conserved quantities, closed-form
//!   trajectory, numeric integration).

pub mod brackets;
pub mod dynamics;
pub mod mat;
pub mod rng;
pub mod scalar;
pub mod sym;
pub mod verify;
