//! Symmetric-subspace projectors and the two explicit qubit detectors.
//!
//! * The symmetric-projector detector uses `N` program qubits and the joint
//!   effect `F₀ = Z₊` on all `N + 1` qubits. Programmed with `|ψ⟩^{⊗N}` it
//!   yields `Q₀ = |ψ⟩⟨ψ| + (I − |ψ⟩⟨ψ|)/(N + 1)`, so the accuracy is
//!   `2/(N + 1)` at ancilla dimension `2^N`.
//! * The covariant detector uses one spin-j ancilla and the projector onto
//!   the `j + ½` irrep of `½ ⊗ j`. Programmed with `W_g|j, j⟩`, it yields
//!   `V_g(|↑⟩⟨↑| + |↓⟩⟨↓|/(2j + 1))V_g†`, so the accuracy is `2/d` at ancilla
//!   dimension `d = 2j + 1`.

use num_complex::Complex64;

use super::clebsch::coupling_isometry;
use super::{irrep_matrix, AngularMomentum, GroupElement};
use crate::detector::Detector;
use crate::error::{invalid, Error, Result};
use crate::linalg::{tensor_vec, ComplexMatrix};
use crate::povm::{DensityState, Povm};

/// Largest qubit count accepted by [`symmetric_projector`].
pub const SYMMETRIC_PROJECTOR_MAX_QUBITS: usize = 12;
/// Largest program-qubit count accepted by [`fiurasek_detector`].
pub const FIURASEK_MAX_PROGRAM_QUBITS: usize = 11;

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Normalized Dicke state of `n` qubits with `k` excitations.
///
/// Bit `q` of the basis index is qubit `n − 1 − q`, matching the
/// system-major Kronecker order.
pub fn dicke_state(n: usize, k: usize) -> Vec<Complex64> {
    assert!(k <= n, "Dicke state with {k} excitations on {n} qubits");
    let amp = 1.0 / binomial(n, k).sqrt();
    (0..1usize << n)
        .map(|x| {
            if x.count_ones() as usize == k {
                Complex64::new(amp, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect()
}

/// Projector onto the symmetric subspace of `(C²)^{⊗n}`.
///
/// Equal to `Σ_k |D_k⟩⟨D_k|` over the `n + 1` Dicke states, which in the
/// computational basis is `Z[x, y] = [|x| = |y|] / C(n, |x|)`.
pub fn symmetric_projector(num_qubits: usize) -> Result<ComplexMatrix> {
    if num_qubits == 0 {
        return Err(invalid("symmetric projector needs at least one qubit"));
    }
    if num_qubits > SYMMETRIC_PROJECTOR_MAX_QUBITS {
        return Err(Error::Capacity(format!(
            "symmetric projector on {num_qubits} qubits exceeds the cap of {SYMMETRIC_PROJECTOR_MAX_QUBITS}"
        )));
    }
    let dim = 1usize << num_qubits;
    let weights: Vec<f64> = (0..=num_qubits).map(|k| 1.0 / binomial(num_qubits, k)).collect();
    Ok(ComplexMatrix::from_fn(dim, dim, |x, y| {
        let (wx, wy) = (x.count_ones(), y.count_ones());
        if wx == wy {
            Complex64::new(weights[wx as usize], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

/// Qubit detector with `N` program qubits and `F₀ = Z₊^{(N+1)}`.
pub fn fiurasek_detector(program_qubits: usize) -> Result<Detector> {
    if program_qubits == 0 {
        return Err(invalid("symmetric-projector detector needs at least one program qubit"));
    }
    if program_qubits > FIURASEK_MAX_PROGRAM_QUBITS {
        return Err(Error::Capacity(format!(
            "{program_qubits} program qubits exceed the cap of {FIURASEK_MAX_PROGRAM_QUBITS}"
        )));
    }
    let z = symmetric_projector(program_qubits + 1)?;
    let rest = &ComplexMatrix::identity(z.rows()) - &z;
    // {Z₊, I − Z₊} is a projector pair by construction; skip the O(dim³)
    // spectral validation, which dominates at the larger sizes.
    let joint = Povm::from_projector_pair(z, rest);
    Detector::new(2, 1 << program_qubits, joint)
}

/// Program state `|ψ⟩⟨ψ|^{⊗N}`.
pub fn fiurasek_program_state(psi: &[Complex64], program_qubits: usize) -> Result<DensityState> {
    if psi.len() != 2 {
        return Err(invalid("program qubit state must have two amplitudes"));
    }
    let mut v = vec![Complex64::new(1.0, 0.0)];
    for _ in 0..program_qubits {
        v = tensor_vec(&v, psi);
    }
    DensityState::pure(&v)
}

/// Covariant qubit detector with a spin-j ancilla.
///
/// `F₀` projects onto the `j + ½` irrep inside `½ ⊗ j`, `F₁` onto `j − ½`,
/// both expressed in the product basis.
pub fn covariant_qubit_detector(j: AngularMomentum) -> Result<Detector> {
    if j.twice_j() < 1 {
        return Err(invalid("covariant detector needs j ≥ 1/2"));
    }
    let u = coupling_isometry(AngularMomentum::HALF, j);
    let dim = u.rows();
    let upper = j.dim() + 1;
    let select = |lo: usize, hi: usize| {
        ComplexMatrix::from_fn(dim, dim, |r, c| {
            Complex64::new(if r == c && (lo..hi).contains(&r) { 1.0 } else { 0.0 }, 0.0)
        })
    };
    let ud = u.adjoint();
    let f0 = &(&ud * &select(0, upper)) * &u;
    let f1 = &(&ud * &select(upper, dim)) * &u;
    Detector::new(2, j.dim(), Povm::new(dim, vec![f0, f1])?)
}

/// Program state `W_g|j, j⟩⟨j, j|W_g†`.
pub fn covariant_program_state(j: AngularMomentum, g: &GroupElement) -> DensityState {
    let top = irrep_matrix(j, g).column(0);
    DensityState::pure(&top).expect("rotated basis vector is a unit vector")
}

/// Qubit observable `{V_g|↑⟩⟨↑|V_g†, V_g|↓⟩⟨↓|V_g†}`.
pub fn qubit_observable(g: &GroupElement) -> Povm {
    let v = g.matrix();
    let effects = vec![
        ComplexMatrix::projector(&v.column(0)),
        ComplexMatrix::projector(&v.column(1)),
    ];
    Povm::new(2, effects).expect("rotated qubit basis is an observable")
}
