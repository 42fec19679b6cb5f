//! SU(2) representation machinery and the explicit qubit detectors.
//!
//! Conventions, shared by every basis-dependent function here:
//!
//! * Spin-j bases `|j, m⟩` are ordered with `m` descending: `j, j−1, …, −j`.
//! * The qubit is spin ½ with `|½, ½⟩ ≡ |0⟩` and `|½, −½⟩ ≡ |1⟩`.
//! * Clebsch-Gordan coefficients and rotation matrices follow the
//!   Condon-Shortley phase convention.
//! * Coupled bases `⊕_J |J, M⟩` list `J` descending, then `M` descending.

mod clebsch;
mod detectors;

pub use clebsch::{clebsch_gordan, coupled_blocks, coupling_isometry};
pub use detectors::{
    covariant_program_state, covariant_qubit_detector, dicke_state, fiurasek_detector,
    fiurasek_program_state, qubit_observable, symmetric_projector, FIURASEK_MAX_PROGRAM_QUBITS,
    SYMMETRIC_PROJECTOR_MAX_QUBITS,
};

use std::fmt;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::linalg::{haar_unitary, ComplexMatrix};
use crate::rng::Rng;
use crate::UNITARY_TOL;

/// Angular momentum `j`, stored as `2j` so half-integers are exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AngularMomentum {
    twice_j: u32,
}

impl AngularMomentum {
    pub const HALF: AngularMomentum = AngularMomentum { twice_j: 1 };

    pub const fn from_twice(twice_j: u32) -> Self {
        Self { twice_j }
    }

    pub fn twice_j(self) -> u32 {
        self.twice_j
    }

    pub fn j(self) -> f64 {
        self.twice_j as f64 / 2.0
    }

    /// Irrep dimension `2j + 1`.
    pub fn dim(self) -> usize {
        self.twice_j as usize + 1
    }

    /// `2m` for `m = j, j−1, …, −j`.
    pub fn twice_m_values(self) -> impl Iterator<Item = i32> {
        let tj = self.twice_j as i32;
        (0..=tj).map(move |k| tj - 2 * k)
    }

    /// Position of `|j, m⟩` in the descending basis.
    pub fn index_of(self, twice_m: i32) -> Option<usize> {
        let tj = self.twice_j as i32;
        if twice_m.abs() > tj || (tj - twice_m) % 2 != 0 {
            return None;
        }
        Some(((tj - twice_m) / 2) as usize)
    }
}

impl fmt::Display for AngularMomentum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice_j.is_multiple_of(2) {
            write!(f, "{}", self.twice_j / 2)
        } else {
            write!(f, "{}/2", self.twice_j)
        }
    }
}

/// Element of SU(2), held both as ZYZ Euler angles and as the spin-½ matrix.
///
/// The matrix is
///
/// ```text
/// ⎡ e^{−i(α+γ)/2} cos β/2   −e^{−i(α−γ)/2} sin β/2 ⎤
/// ⎣ e^{ i(α−γ)/2} sin β/2    e^{ i(α+γ)/2} cos β/2 ⎦
/// ```
///
/// Angles are not reduced modulo 2π, so they pin down the sign of the
/// matrix as well.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement {
    alpha: f64,
    beta: f64,
    gamma: f64,
    matrix: ComplexMatrix,
}

impl GroupElement {
    pub fn identity() -> Self {
        Self::from_euler(0.0, 0.0, 0.0)
    }

    pub fn from_euler(alpha: f64, beta: f64, gamma: f64) -> Self {
        let (s, c) = (beta / 2.0).sin_cos();
        let sum = (alpha + gamma) / 2.0;
        let diff = (alpha - gamma) / 2.0;
        let matrix = ComplexMatrix::new(
            2,
            2,
            vec![
                Complex64::from_polar(c, -sum),
                -Complex64::from_polar(s, -diff),
                Complex64::from_polar(s, diff),
                Complex64::from_polar(c, sum),
            ],
        )
        .expect("finite angles");
        Self {
            alpha,
            beta,
            gamma,
            matrix,
        }
    }

    /// Wraps a 2×2 special-unitary matrix, recovering Euler angles with
    /// `β ∈ [0, π]`.
    pub fn from_su2(matrix: ComplexMatrix) -> Result<Self> {
        if matrix.rows() != 2 || matrix.cols() != 2 {
            return Err(invalid("SU(2) element must be 2x2"));
        }
        let defect = matrix.unitarity_defect();
        let det = matrix[(0, 0)] * matrix[(1, 1)] - matrix[(0, 1)] * matrix[(1, 0)];
        if defect > UNITARY_TOL || (det - 1.0).norm() > UNITARY_TOL {
            return Err(invalid(format!(
                "matrix is not special unitary (‖U†U − I‖₂ = {defect:.3e}, det = {det:.6})"
            )));
        }
        let (a, c) = (matrix[(0, 0)], matrix[(1, 0)]);
        let beta = 2.0 * c.norm().atan2(a.norm());
        let (p, q) = (a.arg(), c.arg());
        Ok(Self {
            alpha: q - p,
            beta,
            gamma: -p - q,
            matrix,
        })
    }

    /// Element whose spin-½ matrix maps `|½, ½⟩` to the unit vector `v`.
    pub fn aligning(v: &[Complex64]) -> Result<Self> {
        if v.len() != 2 {
            return Err(invalid("qubit direction must have two amplitudes"));
        }
        let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
        if (norm - 1.0).abs() > UNITARY_TOL {
            return Err(invalid(format!("qubit direction has norm {norm}")));
        }
        let (a, b) = (v[0], v[1]);
        Self::from_su2(ComplexMatrix::new(2, 2, vec![a, -b.conj(), b, a.conj()])?)
    }

    /// Haar-random element.
    pub fn random(rng: &mut Rng) -> Self {
        let u = haar_unitary(2, rng);
        let det = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
        let fix = det.sqrt().inv();
        Self::from_su2(u.scale(fix)).expect("normalized Haar sample is special unitary")
    }

    /// Product `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        let m = &self.matrix * &other.matrix;
        // Re-normalize away roundoff so the SU(2) check stays tight.
        let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
        let m = m.scale(det.sqrt().inv());
        GroupElement::from_su2(m).expect("product of SU(2) elements")
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement::from_su2(self.matrix.adjoint()).expect("adjoint of SU(2) element")
    }

    /// `(α, β, γ)` in radians.
    pub fn euler_angles(&self) -> (f64, f64, f64) {
        (self.alpha, self.beta, self.gamma)
    }

    /// The spin-½ matrix.
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

fn binomial(n: u32, k: u32) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Spin-j rotation matrix of `g` in the `|j, m⟩` basis (`m` descending).
///
/// Built as the symmetric power of the spin-½ matrix acting on
/// `x^{j+m} y^{j−m} / sqrt((j+m)!(j−m)!)`, so it is an exact
/// representation: `irrep(j, g₁)·irrep(j, g₂) = irrep(j, g₁∘g₂)`. For
/// `j = ½` it is `g.matrix()` itself.
pub fn irrep_matrix(j: AngularMomentum, g: &GroupElement) -> ComplexMatrix {
    let u = g.matrix();
    let (a, b, c, d) = (u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)]);
    let tj = j.twice_j;
    let dim = j.dim();
    // Row r ↔ m' with j + m' = tj − r; column s ↔ m with j + m = tj − s.
    ComplexMatrix::from_fn(dim, dim, |r, s| {
        let up_out = tj - r as u32;
        let down_out = r as u32;
        let up_in = tj - s as u32;
        let down_in = s as u32;
        let mut acc = Complex64::new(0.0, 0.0);
        // k powers of x from the up factors, l = up_out − k from the down factors.
        for k in 0..=up_in {
            if k > up_out {
                break;
            }
            let l = up_out - k;
            if l > down_in {
                continue;
            }
            acc += binomial(up_in, k)
                * binomial(down_in, l)
                * a.powu(k)
                * c.powu(up_in - k)
                * b.powu(l)
                * d.powu(down_in - l);
        }
        let norm = (factorial(up_out) * factorial(down_out) / (factorial(up_in) * factorial(down_in))).sqrt();
        acc * norm
    })
}

/// `J_z`, `J_+`, `J_−` in the descending `|j, m⟩` basis (Condon-Shortley).
pub fn spin_operators(j: AngularMomentum) -> (ComplexMatrix, ComplexMatrix, ComplexMatrix) {
    let dim = j.dim();
    let jj = j.j();
    let m_of = |i: usize| jj - i as f64;
    let jz = ComplexMatrix::from_fn(dim, dim, |r, c| {
        Complex64::new(if r == c { m_of(r) } else { 0.0 }, 0.0)
    });
    // J_+ |m⟩ = sqrt((j − m)(j + m + 1)) |m + 1⟩, and |m + 1⟩ sits one row up.
    let jp = ComplexMatrix::from_fn(dim, dim, |r, c| {
        if c == r + 1 {
            let m = m_of(c);
            Complex64::new(((jj - m) * (jj + m + 1.0)).sqrt(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let jm = jp.adjoint();
    (jz, jp, jm)
}
