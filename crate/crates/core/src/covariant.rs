//! Covariant POVM densities and their exact programming through the Bell POVM.
//!
//! A covariant density has the form `V_g ν V_g†` for a seed state `ν`. With
//! the double-ket `|V⟩⟩ = Σ_{mn} V[m, n] |m⟩ ⊗ |n⟩` one has the pointwise
//! identity
//!
//! ```text
//! V_g ν V_g† = Tr_A[(I ⊗ ν^⊤) |V_g⟩⟩⟨⟨V_g|]
//! ```
//!
//! where `ν^⊤` is the transpose in the basis that defines `|V⟩⟩`. Leaving
//! the transpose out yields `V_g ν^⊤ V_g†` instead, which differs whenever
//! `ν` is not real.

use num_complex::Complex64;

use crate::error::{shape, Result};
use crate::linalg::{fro_norm, partial_trace_ancilla, tensor, ComplexMatrix};
use crate::povm::DensityState;
use crate::rng::Rng;
use crate::su2::{irrep_matrix, AngularMomentum, GroupElement};

/// Unitary representation of SU(2) on `C^dim`.
pub trait UnitaryRep: Sync {
    fn dim(&self) -> usize;
    fn matrix(&self, g: &GroupElement) -> ComplexMatrix;
}

impl UnitaryRep for AngularMomentum {
    fn dim(&self) -> usize {
        AngularMomentum::dim(*self)
    }

    fn matrix(&self, g: &GroupElement) -> ComplexMatrix {
        irrep_matrix(*self, g)
    }
}

/// Representation given by a callback. The callback must return a
/// `dim × dim` unitary.
pub struct FnRep<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(&GroupElement) -> ComplexMatrix + Sync> FnRep<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F: Fn(&GroupElement) -> ComplexMatrix + Sync> UnitaryRep for FnRep<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn matrix(&self, g: &GroupElement) -> ComplexMatrix {
        (self.f)(g)
    }
}

/// Seed state `ν` of a covariant POVM density.
#[derive(Clone, Debug, PartialEq)]
pub struct CovariantSeed {
    nu: DensityState,
}

impl CovariantSeed {
    pub fn new(nu: DensityState) -> Self {
        Self { nu }
    }

    pub fn dim(&self) -> usize {
        self.nu.dim()
    }

    pub fn nu(&self) -> &DensityState {
        &self.nu
    }
}

/// `Σ_{mn} v[m, n] |m⟩ ⊗ |n⟩`, index `m·cols + n`.
pub fn double_ket(v: &ComplexMatrix) -> Vec<Complex64> {
    v.entries().to_vec()
}

/// Bell POVM element `|V⟩⟩⟨⟨V|`.
pub fn bell_effect(v: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::projector(&double_ket(v))
}

fn check_rep(seed: &CovariantSeed, rep: &impl UnitaryRep) -> Result<()> {
    if rep.dim() != seed.dim() {
        return Err(shape(format!(
            "representation of dimension {} for a seed of dimension {}",
            rep.dim(),
            seed.dim()
        )));
    }
    Ok(())
}

/// `V_g ν V_g†` for the spin-½ representation; the seed must be a qubit state.
pub fn covariant_density(seed: &CovariantSeed, g: &GroupElement) -> Result<ComplexMatrix> {
    covariant_density_in(seed, &AngularMomentum::HALF, g)
}

/// `V_g ν V_g†` for an arbitrary representation of matching dimension.
pub fn covariant_density_in(
    seed: &CovariantSeed,
    rep: &impl UnitaryRep,
    g: &GroupElement,
) -> Result<ComplexMatrix> {
    check_rep(seed, rep)?;
    let v = rep.matrix(g);
    Ok(&(&v * seed.nu.matrix()) * &v.adjoint())
}

/// Which ancilla program is paired with the Bell POVM.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProgramConvention {
    /// Program `ν^⊤`: reproduces `V ν V†` exactly.
    Transposed,
    /// Program `ν`: the negative control, yields `V ν^⊤ V†`.
    Untransposed,
}

/// `Tr_A[(I ⊗ X)|V⟩⟩⟨⟨V|]` with `X = ν^⊤` or `X = ν`, evaluated literally on
/// the `n²`-dimensional joint space.
pub fn bell_programmed_density(
    seed: &CovariantSeed,
    v: &ComplexMatrix,
    convention: ProgramConvention,
) -> Result<ComplexMatrix> {
    let n = seed.dim();
    if v.rows() != n || v.cols() != n {
        return Err(shape(format!(
            "{}x{} representation matrix for a seed of dimension {n}",
            v.rows(),
            v.cols()
        )));
    }
    let program = match convention {
        ProgramConvention::Transposed => seed.nu.matrix().transpose(),
        ProgramConvention::Untransposed => seed.nu.matrix().clone(),
    };
    let joint = &tensor(&ComplexMatrix::identity(n), &program) * &bell_effect(v);
    partial_trace_ancilla(&joint, n, n)
}

/// Frobenius residual of the Bell programming identity at `g`, spin-½.
pub fn bell_program_check(seed: &CovariantSeed, g: &GroupElement) -> Result<f64> {
    bell_program_residual(seed, &AngularMomentum::HALF, g, ProgramConvention::Transposed)
}

/// Residual `‖V_g ν V_g† − Tr_A[(I ⊗ X)|V_g⟩⟩⟨⟨V_g|]‖₂` for either program.
pub fn bell_program_residual(
    seed: &CovariantSeed,
    rep: &impl UnitaryRep,
    g: &GroupElement,
    convention: ProgramConvention,
) -> Result<f64> {
    let target = covariant_density_in(seed, rep, g)?;
    let programmed = bell_programmed_density(seed, &rep.matrix(g), convention)?;
    Ok(fro_norm(&(&target - &programmed)))
}

/// Monte Carlo estimate of `∫ V_g ν V_g† dg` under the unit-mass Haar
/// measure; the exact value is `I/n` for an irreducible representation.
pub fn haar_average_density(
    seed: &CovariantSeed,
    rep: &impl UnitaryRep,
    samples: usize,
    rng: &mut Rng,
) -> Result<ComplexMatrix> {
    check_rep(seed, rep)?;
    let n = seed.dim();
    let mut acc = ComplexMatrix::zeros(n, n);
    for _ in 0..samples {
        acc = &acc + &covariant_density_in(seed, rep, &GroupElement::random(rng))?;
    }
    Ok(acc.scale_real(1.0 / samples.max(1) as f64))
}
