//! Programmable quantum detectors.
//!
//! A programmable detector is a fixed joint POVM `F = {F_i}` on
//! system ⊗ ancilla. Preparing the ancilla in a program state `σ` makes the
//! system see the POVM `Q_i = Tr_A[(I ⊗ σ) F_i]`. This crate builds such
//! detectors, programs them, and measures how well they approximate target
//! measurements:
//!
//! * [`linalg`]: dense complex matrices, Kronecker products, partial traces,
//!   Hermitian spectra and seeded Haar sampling.
//! * [`povm`]: POVMs, density states, Born statistics and the exact
//!   worst-case POVM distance together with its norm upper bounds.
//! * [`detector`]: the program map, controlled-unitary detectors and
//!   accuracy estimation.
//! * [`su2`]: spin-j representations, Clebsch-Gordan coefficients,
//!   symmetric projectors and the two explicit qubit detectors.
//! * [`unet`]: greedy ε-nets on the unitary group modulo diagonal phases.
//! * [`covariant`]: exact programming of covariant POVMs through the Bell
//!   POVM.
//!
//! Tensor products are ordered system-major everywhere: in `A ⊗ B` the first
//! factor is the measured system and the second is the ancilla, so the joint
//! index is `system_index * anc_dim + ancilla_index`.

pub mod covariant;
pub mod detector;
mod error;
pub mod linalg;
pub mod povm;
pub mod rng;
pub mod su2;
pub mod unet;

pub use error::{Error, Result};
pub use linalg::ComplexMatrix;
pub use rng::Rng;

pub use num_complex::Complex64;

/// Maximum entrywise deviation from Hermiticity accepted by validators.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Most negative eigenvalue still accepted as positive semidefinite.
pub const PSD_TOL: f64 = 1e-9;
/// Frobenius tolerance for completeness (`Σ P_i = I`) and unit trace.
pub const NORMALIZATION_TOL: f64 = 1e-9;
/// Frobenius tolerance for `U†U = I`.
pub const UNITARY_TOL: f64 = 1e-10;
