//! POVMs, density states and POVM distances.
//!
//! The distance between two POVMs with like-labelled outcomes is the largest
//! total-variation gap between their outcome statistics over all input
//! states:
//!
//! ```text
//! δ(P, Q) = max_ρ Σ_i |Tr[ρ (P_i − Q_i)]|
//! ```
//!
//! Writing `|x| = max_{s=±1} s·x` turns this into a maximum over sign vectors
//! of the top eigenvalue of `Σ_i s_i (P_i − Q_i)`. The objective is linear in
//! `ρ`, so the optimum is attained on a pure state (the top eigenvector),
//! which is returned as a witness.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, shape, Error, Result};
use crate::linalg::{
    fro_norm, herm_eigh, herm_eigs, op_norm, random_unit_vector, ginibre, ComplexMatrix,
    MatrixJson,
};
use crate::rng::Rng;
use crate::{HERMITIAN_TOL, NORMALIZATION_TOL, PSD_TOL, UNITARY_TOL};

/// Largest outcome count accepted by [`povm_distance`].
pub const MAX_DISTANCE_OUTCOMES: usize = 20;

fn check_positive(m: &ComplexMatrix, what: &str) -> Result<()> {
    let defect = m.hermiticity_defect();
    if defect > HERMITIAN_TOL {
        return Err(invalid(format!(
            "{what} is not Hermitian (max |m - m†| = {defect:.3e})"
        )));
    }
    let min = herm_eigs(m)?[0];
    if min < -PSD_TOL {
        return Err(invalid(format!(
            "{what} is not positive semidefinite (min eigenvalue {min:.3e})"
        )));
    }
    Ok(())
}

/// Ordered effects on an `n`-dimensional system summing to the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct Povm {
    dim: usize,
    effects: Vec<ComplexMatrix>,
}

impl Povm {
    /// Validates and wraps a list of effects.
    ///
    /// Each effect must be `dim × dim`, Hermitian and positive semidefinite,
    /// and the effects must sum to the identity.
    pub fn new(dim: usize, effects: Vec<ComplexMatrix>) -> Result<Self> {
        if dim == 0 {
            return Err(shape("POVM dimension must be positive"));
        }
        if effects.is_empty() {
            return Err(invalid("POVM has no effects"));
        }
        let mut total = ComplexMatrix::zeros(dim, dim);
        for (i, e) in effects.iter().enumerate() {
            if e.rows() != dim || e.cols() != dim {
                return Err(shape(format!(
                    "effect {i} is {}x{}, expected {dim}x{dim}",
                    e.rows(),
                    e.cols()
                )));
            }
            check_positive(e, &format!("effect {i}"))?;
            total = &total + e;
        }
        let gap = fro_norm(&(&total - &ComplexMatrix::identity(dim)));
        if gap > NORMALIZATION_TOL {
            return Err(invalid(format!(
                "effects sum to identity only within {gap:.3e}"
            )));
        }
        Ok(Self { dim, effects })
    }

    /// Two-outcome POVM `{E, I − E}`.
    pub fn from_effect(effect: ComplexMatrix) -> Result<Self> {
        let dim = effect.rows();
        let rest = &ComplexMatrix::identity(dim) - &effect;
        Self::new(dim, vec![effect, rest])
    }

    /// Random POVM with `outcomes` full-rank effects: `E_i = S^{-1/2} A_i†A_i S^{-1/2}`
    /// for Ginibre `A_i` and `S = Σ_i A_i†A_i`.
    pub fn random(dim: usize, outcomes: usize, rng: &mut Rng) -> Result<Self> {
        if dim == 0 || outcomes == 0 {
            return Err(shape("random POVM needs positive dimension and outcome count"));
        }
        let grams: Vec<_> = (0..outcomes)
            .map(|_| {
                let a = ginibre(dim, dim, rng);
                &a.adjoint() * &a
            })
            .collect();
        let mut total = ComplexMatrix::zeros(dim, dim);
        for g in &grams {
            total = &total + g;
        }
        let eig = herm_eigh(&total.hermitian_part())?;
        let inv_sqrt: Vec<f64> = eig.values.iter().map(|v| 1.0 / v.sqrt()).collect();
        let mut root = ComplexMatrix::zeros(dim, dim);
        for (k, w) in inv_sqrt.iter().enumerate() {
            root = &root + &ComplexMatrix::projector(&eig.vector(k)).scale_real(*w);
        }
        let effects = grams
            .iter()
            .map(|g| (&(&root * g) * &root).hermitian_part())
            .collect();
        Povm::new(dim, effects)
    }

    /// `{P, I − P}` for a known orthogonal projector, without spectral
    /// validation. Callers guarantee the pair.
    pub(crate) fn from_projector_pair(p: ComplexMatrix, rest: ComplexMatrix) -> Self {
        debug_assert!(p.is_hermitian(HERMITIAN_TOL));
        Self {
            dim: p.rows(),
            effects: vec![p, rest],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn effects(&self) -> &[ComplexMatrix] {
        &self.effects
    }

    pub fn effect(&self, i: usize) -> &ComplexMatrix {
        &self.effects[i]
    }

    pub fn num_outcomes(&self) -> usize {
        self.effects.len()
    }
}

/// Hermitian, positive semidefinite, unit-trace operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityState {
    dim: usize,
    matrix: ComplexMatrix,
}

impl DensityState {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(shape(format!(
                "density matrix must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        check_positive(&matrix, "density matrix")?;
        let trace = matrix.trace();
        if (trace - Complex64::new(1.0, 0.0)).norm() > NORMALIZATION_TOL {
            return Err(invalid(format!(
                "density matrix has trace {:.12}{:+.3e}i",
                trace.re, trace.im
            )));
        }
        Ok(Self {
            dim: matrix.rows(),
            matrix,
        })
    }

    /// `|ψ⟩⟨ψ|` for a unit vector `ψ`.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        if psi.is_empty() {
            return Err(shape("empty state vector"));
        }
        Self::new(ComplexMatrix::projector(psi))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            dim,
            matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    /// Haar-random pure state.
    pub fn random_pure(dim: usize, rng: &mut Rng) -> Self {
        let psi = random_unit_vector(dim, rng);
        Self {
            dim,
            matrix: ComplexMatrix::projector(&psi),
        }
    }

    /// Random full-rank mixed state `G G† / Tr[G G†]` from a square Ginibre
    /// matrix (Hilbert-Schmidt measure).
    pub fn random_mixed(dim: usize, rng: &mut Rng) -> Self {
        let g = ginibre(dim, dim, rng);
        let gg = &g * &g.adjoint();
        let tr = gg.trace().re;
        Self {
            dim,
            matrix: gg.scale_real(1.0 / tr).hermitian_part(),
        }
    }

    /// `λ·a + (1 − λ)·b` for `λ ∈ [0, 1]`.
    pub fn mix(a: &DensityState, b: &DensityState, lambda: f64) -> Result<Self> {
        if a.dim != b.dim {
            return Err(shape("mixing states of different dimension"));
        }
        if !(0.0..=1.0).contains(&lambda) {
            return Err(invalid(format!("mixing weight {lambda} outside [0, 1]")));
        }
        Ok(Self {
            dim: a.dim,
            matrix: &a.matrix.scale_real(lambda) + &b.matrix.scale_real(1.0 - lambda),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

/// Outcome probabilities `p_i = Re Tr[ρ P_i]`.
pub fn born_probabilities(rho: &DensityState, p: &Povm) -> Result<Vec<f64>> {
    if rho.dim != p.dim {
        return Err(shape(format!(
            "state of dimension {} measured by a POVM of dimension {}",
            rho.dim, p.dim
        )));
    }
    Ok(p.effects
        .iter()
        .map(|e| crate::linalg::hs_inner(&rho.matrix, e).re)
        .collect())
}

/// Computational basis of `C^n` as column vectors.
pub fn computational_basis(n: usize) -> Vec<Vec<Complex64>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0))
                .collect()
        })
        .collect()
}

/// Checks that `basis` is an orthonormal basis of `C^n`.
pub(crate) fn check_basis(basis: &[Vec<Complex64>], n: usize) -> Result<()> {
    if basis.len() != n || basis.iter().any(|v| v.len() != n) {
        return Err(shape(format!("basis must hold {n} vectors of length {n}")));
    }
    for (i, u) in basis.iter().enumerate() {
        for (j, v) in basis.iter().enumerate() {
            let ip: Complex64 = u.iter().zip(v).map(|(a, b)| a.conj() * b).sum();
            let expected = if i == j { 1.0 } else { 0.0 };
            if (ip - expected).norm() > 1e-10 {
                return Err(invalid(format!(
                    "basis vectors {i} and {j} are not orthonormal"
                )));
            }
        }
    }
    Ok(())
}

pub(crate) fn check_unitary(w: &ComplexMatrix, what: &str) -> Result<()> {
    if !w.is_square() {
        return Err(shape(format!("{what} is not square")));
    }
    let defect = w.unitarity_defect();
    if defect > UNITARY_TOL {
        return Err(invalid(format!(
            "{what} is not unitary (‖U†U − I‖₂ = {defect:.3e})"
        )));
    }
    Ok(())
}

/// Observable with effects `P_i = W†|ψ_i⟩⟨ψ_i|W`.
pub fn observable_from_unitary(w: &ComplexMatrix, basis: &[Vec<Complex64>]) -> Result<Povm> {
    check_unitary(w, "observable unitary")?;
    let n = w.rows();
    check_basis(basis, n)?;
    let wd = w.adjoint();
    let effects = basis
        .iter()
        .map(|psi| ComplexMatrix::projector(&wd.apply(psi)))
        .collect();
    Povm::new(n, effects)
}

fn check_comparable(p: &Povm, q: &Povm) -> Result<()> {
    if p.dim != q.dim {
        return Err(shape(format!(
            "comparing POVMs of dimension {} and {}",
            p.dim, q.dim
        )));
    }
    if p.num_outcomes() != q.num_outcomes() {
        return Err(shape(format!(
            "comparing POVMs with {} and {} outcomes",
            p.num_outcomes(),
            q.num_outcomes()
        )));
    }
    Ok(())
}

/// Exact distance with the maximizing pure state.
#[derive(Clone, Debug)]
pub struct Distance {
    pub delta: f64,
    /// Unit vector `ψ*` with `Σ_i |⟨ψ*|P_i − Q_i|ψ*⟩| = delta`.
    pub witness: Vec<Complex64>,
}

impl Distance {
    pub fn witness_state(&self) -> DensityState {
        DensityState {
            dim: self.witness.len(),
            matrix: ComplexMatrix::projector(&self.witness),
        }
    }
}

/// Exact `max_ρ Σ_i |Tr[ρ(P_i − Q_i)]|` by sign-vector enumeration.
///
/// Fails with [`Error::Capacity`] above [`MAX_DISTANCE_OUTCOMES`] outcomes;
/// use [`distance_bounds`] there.
pub fn povm_distance_with_witness(p: &Povm, q: &Povm) -> Result<Distance> {
    check_comparable(p, q)?;
    let k = p.num_outcomes();
    if k > MAX_DISTANCE_OUTCOMES {
        return Err(Error::Capacity(format!(
            "{k} outcomes exceed the exact-distance cap of {MAX_DISTANCE_OUTCOMES}; \
             use distance_bounds for an upper bound"
        )));
    }
    let diffs: Vec<ComplexMatrix> = p
        .effects
        .iter()
        .zip(&q.effects)
        .map(|(a, b)| (a - b).hermitian_part())
        .collect();

    let mut best: Option<Distance> = None;
    for mask in 0u32..(1u32 << k) {
        let mut signed = ComplexMatrix::zeros(p.dim, p.dim);
        for (i, d) in diffs.iter().enumerate() {
            signed = if mask & (1 << i) == 0 {
                &signed + d
            } else {
                &signed - d
            };
        }
        let eig = herm_eigh(&signed)?;
        let top = p.dim - 1;
        let value = eig.values[top];
        if best.as_ref().is_none_or(|b| value > b.delta) {
            best = Some(Distance {
                delta: value,
                witness: eig.vector(top),
            });
        }
    }
    let mut best = best.expect("at least one sign vector");
    best.delta = best.delta.max(0.0);
    Ok(best)
}

/// Exact worst-case total-variation distance between two POVMs.
pub fn povm_distance(p: &Povm, q: &Povm) -> Result<f64> {
    povm_distance_with_witness(p, q).map(|d| d.delta)
}

/// Closed form `2‖P₀ − Q₀‖` for two-outcome POVMs.
pub fn two_outcome_distance(p: &Povm, q: &Povm) -> Result<f64> {
    if p.num_outcomes() != 2 || q.num_outcomes() != 2 {
        return Err(invalid(format!(
            "two-outcome distance needs 2 outcomes each, got {} and {}",
            p.num_outcomes(),
            q.num_outcomes()
        )));
    }
    check_comparable(p, q)?;
    Ok(2.0 * op_norm(&(&p.effects[0] - &q.effects[0]).hermitian_part()))
}

/// Upper bounds `δ ≤ Σ_i ‖P_i − Q_i‖ ≤ Σ_i ‖P_i − Q_i‖₂`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceBounds {
    pub sum_op: f64,
    pub sum_fro: f64,
}

pub fn distance_bounds(p: &Povm, q: &Povm) -> Result<DistanceBounds> {
    check_comparable(p, q)?;
    let mut bounds = DistanceBounds {
        sum_op: 0.0,
        sum_fro: 0.0,
    };
    for (a, b) in p.effects.iter().zip(&q.effects) {
        let diff = (a - b).hermitian_part();
        bounds.sum_op += op_norm(&diff);
        bounds.sum_fro += fro_norm(&diff);
    }
    Ok(bounds)
}

/// Wire format: `{"dim": n, "effects": [matrix, ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PovmJson {
    pub dim: usize,
    pub effects: Vec<MatrixJson>,
}

impl From<&Povm> for PovmJson {
    fn from(p: &Povm) -> Self {
        Self {
            dim: p.dim,
            effects: p.effects.iter().map(MatrixJson::from).collect(),
        }
    }
}

impl TryFrom<PovmJson> for Povm {
    type Error = Error;

    fn try_from(j: PovmJson) -> Result<Self> {
        let effects = j
            .effects
            .into_iter()
            .map(ComplexMatrix::try_from)
            .collect::<Result<Vec<_>>>()?;
        Povm::new(j.dim, effects)
    }
}

impl Serialize for Povm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PovmJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Povm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Povm::try_from(PovmJson::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}
