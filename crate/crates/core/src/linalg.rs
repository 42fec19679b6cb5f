//! Dense complex linear algebra.
//!
//! [`ComplexMatrix`] is the carrier for states, effects and unitaries. Joint
//! operators on system ⊗ ancilla use system-major ordering: the entry for
//! system index `i` and ancilla index `a` lives at row `i * d + a`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, shape, Error, Result};
use crate::rng::Rng;
use crate::HERMITIAN_TOL;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    ///
    /// Rejects empty shapes, a wrong entry count and non-finite entries.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(shape(format!("matrix shape {rows}x{cols} is empty")));
        }
        if data.len() != rows * cols {
            return Err(shape(format!(
                "{} entries given for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(invalid("matrix has non-finite entries"));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix shape");
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j);
            }
        }
        m
    }

    /// Real matrix from row-major entries. Panics on a length mismatch.
    pub fn from_real(rows: usize, cols: usize, re: &[f64]) -> Self {
        assert_eq!(re.len(), rows * cols, "entry count does not match shape");
        Self::from_fn(rows, cols, |i, j| Complex64::new(re[i * cols + j], 0.0))
    }

    pub fn diag(values: &[Complex64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    pub fn diag_real(values: &[f64]) -> Self {
        let v: Vec<_> = values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::diag(&v)
    }

    /// `|u⟩⟨v|`.
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    /// `|u⟩⟨u|`.
    pub fn projector(u: &[Complex64]) -> Self {
        Self::outer(u, u)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|z| z * c)
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.map(|z| z * c)
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.cols, "vector length does not match columns");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - self†`.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// `(m + m†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * 0.5
        })
    }

    /// `‖U†U − I‖₂`; zero exactly for unitaries.
    pub fn unitarity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        fro_norm(&(&self.adjoint() * self - Self::identity(self.rows)))
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub(crate) fn from_nalgebra(m: &DMatrix<Complex64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }

    fn check_same_shape(&self, other: &Self, op: &str) {
        assert!(
            self.rows == other.rows && self.cols == other.cols,
            "{op} of {}x{} and {}x{} matrices",
            self.rows,
            self.cols,
            other.rows,
            other.cols
        );
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            self.cols, rhs.rows,
            "product of {}x{} and {}x{} matrices",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                for (o, b) in out_row.iter_mut().zip(rhs.row(k)) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

impl Mul for ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: ComplexMatrix) -> ComplexMatrix {
        &self * &rhs
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.check_same_shape(rhs, "sum");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Add for ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: ComplexMatrix) -> ComplexMatrix {
        &self + &rhs
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.check_same_shape(rhs, "difference");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Sub for ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: ComplexMatrix) -> ComplexMatrix {
        &self - &rhs
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.map(|z| -z)
    }
}

/// Kronecker product `a ⊗ b`; block `(i, j)` equals `a[i, j] · b`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (br, bc) = (b.rows, b.cols);
    ComplexMatrix::from_fn(a.rows * br, a.cols * bc, |r, c| {
        a[(r / br, c / bc)] * b[(r % br, c % bc)]
    })
}

/// Kronecker product of two vectors, system-major.
pub fn tensor_vec(u: &[Complex64], v: &[Complex64]) -> Vec<Complex64> {
    u.iter().flat_map(|a| v.iter().map(move |b| a * b)).collect()
}

/// Traces out the ancilla factor of an `(n·d) × (n·d)` operator.
///
/// `out[i, j] = Σ_a m[i·d + a, j·d + a]`.
pub fn partial_trace_ancilla(m: &ComplexMatrix, n: usize, d: usize) -> Result<ComplexMatrix> {
    if n == 0 || d == 0 || m.rows != n * d || m.cols != n * d {
        return Err(shape(format!(
            "partial trace over a {}-dim ancilla needs a {}x{} operator, got {}x{}",
            d,
            n * d,
            n * d,
            m.rows,
            m.cols
        )));
    }
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        (0..d).map(|a| m[(i * d + a, j * d + a)]).sum()
    }))
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `k` is the unit eigenvector for `values[k]`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.vectors.column(k)
    }

    /// `V Λ V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let lambda = ComplexMatrix::diag_real(&self.values);
        &(&self.vectors * &lambda) * &self.vectors.adjoint()
    }
}

fn checked_hermitian(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(shape(format!(
            "eigenvalues of a non-square {}x{} matrix",
            m.rows, m.cols
        )));
    }
    let defect = m.hermiticity_defect();
    if defect > HERMITIAN_TOL {
        return Err(invalid(format!(
            "matrix is not Hermitian (max |m - m†| = {defect:.3e})"
        )));
    }
    Ok(m.hermitian_part())
}

/// Full Hermitian eigen-decomposition, eigenvalues ascending.
///
/// Inputs within [`HERMITIAN_TOL`] of Hermitian are symmetrized first. Ties
/// keep the eigensolver's column order, so the result is deterministic.
pub fn herm_eigh(m: &ComplexMatrix) -> Result<HermitianEigen> {
    let h = checked_hermitian(m)?;
    let eig = SymmetricEigen::new(h.to_nalgebra());
    let mut order: Vec<usize> = (0..h.rows).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = ComplexMatrix::from_fn(h.rows, h.rows, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(HermitianEigen { values, vectors })
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn herm_eigs(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let h = checked_hermitian(m)?;
    let mut values: Vec<f64> = SymmetricEigen::new(h.to_nalgebra())
        .eigenvalues
        .iter()
        .copied()
        .collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Operator norm: the largest singular value.
pub fn op_norm(m: &ComplexMatrix) -> f64 {
    if m.is_square() && m.is_hermitian(HERMITIAN_TOL) {
        let values = herm_eigs(m).expect("Hermitian input");
        return values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    }
    let gram = &m.adjoint() * m;
    let top = herm_eigs(&gram).expect("Gram matrix is Hermitian");
    top.last().copied().unwrap_or(0.0).max(0.0).sqrt()
}

/// Frobenius norm `sqrt(Tr[m†m])`.
pub fn fro_norm(m: &ComplexMatrix) -> f64 {
    m.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Hilbert-Schmidt inner product `Tr[a†b]`.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    a.check_same_shape(b, "inner product");
    a.data.iter().zip(&b.data).map(|(x, y)| x.conj() * y).sum()
}

fn complex_gaussian(rng: &mut Rng) -> Complex64 {
    Complex64::new(rng.standard_normal(), rng.standard_normal()) * std::f64::consts::FRAC_1_SQRT_2
}

/// Haar-distributed `n × n` unitary.
///
/// QR of a complex Ginibre matrix, with the phases of `R`'s diagonal pushed
/// into `Q` so the result is exactly Haar.
pub fn haar_unitary(n: usize, rng: &mut Rng) -> ComplexMatrix {
    assert!(n >= 1, "unitary dimension must be positive");
    let ginibre = DMatrix::from_fn(n, n, |_, _| complex_gaussian(rng));
    let qr = ginibre.qr();
    let (q, r) = (qr.q(), qr.r());
    let mut u = ComplexMatrix::from_nalgebra(&q);
    for j in 0..n {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { ONE };
        for i in 0..n {
            u[(i, j)] *= phase;
        }
    }
    u
}

/// Haar-random unit vector in `C^n`.
pub fn random_unit_vector(n: usize, rng: &mut Rng) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..n).map(|_| complex_gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Complex Ginibre matrix with unit-variance entries.
pub fn ginibre(rows: usize, cols: usize, rng: &mut Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Wire format: `{"rows", "cols", "re", "im"}` with row-major parts.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        Self {
            rows: m.rows,
            cols: m.cols,
            re: m.data.iter().map(|z| z.re).collect(),
            im: m.data.iter().map(|z| z.im).collect(),
        }
    }
}

impl TryFrom<MatrixJson> for ComplexMatrix {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<Self> {
        let expected = j.rows * j.cols;
        if j.re.len() != expected || j.im.len() != expected {
            return Err(shape(format!(
                "matrix json declares {}x{} but carries {} real and {} imaginary entries",
                j.rows,
                j.cols,
                j.re.len(),
                j.im.len()
            )));
        }
        let data = j
            .re
            .iter()
            .zip(&j.im)
            .map(|(&re, &im)| Complex64::new(re, im))
            .collect();
        ComplexMatrix::new(j.rows, j.cols, data)
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = MatrixJson::deserialize(d)?;
        ComplexMatrix::try_from(j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_matrix(rows: usize, cols: usize, rng: &mut Rng) -> ComplexMatrix {
        ginibre(rows, cols, rng)
    }

    fn random_hermitian(n: usize, rng: &mut Rng) -> ComplexMatrix {
        random_matrix(n, n, rng).hermitian_part()
    }

    #[test]
    fn new_rejects_bad_input() {
        assert!(matches!(ComplexMatrix::new(2, 2, vec![ONE; 3]), Err(Error::Shape(_))));
        assert!(matches!(ComplexMatrix::new(0, 2, vec![]), Err(Error::Shape(_))));
        assert!(matches!(
            ComplexMatrix::new(1, 1, vec![c(f64::NAN, 0.0)]),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn tensor_identities() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(tensor(&i2, &i2), ComplexMatrix::identity(4));

        let p0 = ComplexMatrix::diag_real(&[1.0, 0.0]);
        let p1 = ComplexMatrix::diag_real(&[0.0, 1.0]);
        assert_eq!(tensor(&p0, &p1), ComplexMatrix::diag_real(&[0.0, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn tensor_index_formula() {
        let mut rng = Rng::new(11);
        let a = random_matrix(2, 2, &mut rng);
        let b = random_matrix(3, 3, &mut rng);
        let ab = tensor(&a, &b);
        assert_eq!((ab.rows(), ab.cols()), (6, 6));
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..3 {
                    for l in 0..3 {
                        assert_eq!(ab[(3 * i + k, 3 * j + l)], a[(i, j)] * b[(k, l)]);
                    }
                }
            }
        }
    }

    #[test]
    fn partial_trace_examples() {
        let mut rng = Rng::new(12);
        let rho = random_hermitian(3, &mut rng);
        let sigma = random_hermitian(2, &mut rng);
        let out = partial_trace_ancilla(&tensor(&rho, &sigma), 3, 2).unwrap();
        assert!(out.max_abs_diff(&rho.scale(sigma.trace())) < 1e-12);

        let id = partial_trace_ancilla(&ComplexMatrix::identity(6), 2, 3).unwrap();
        assert_eq!(id, ComplexMatrix::identity(2).scale_real(3.0));
    }

    #[test]
    fn partial_trace_index_oracle() {
        let mut rng = Rng::new(13);
        let m = random_hermitian(4, &mut rng);
        // Two-index summation written out with explicit (system, ancilla) pairs.
        let mut expected = ComplexMatrix::zeros(2, 2);
        for s in 0..2 {
            for t in 0..2 {
                let mut acc = ZERO;
                for a in 0..2 {
                    let row = [s, a];
                    let col = [t, a];
                    acc += m[(row[0] * 2 + row[1], col[0] * 2 + col[1])];
                }
                expected[(s, t)] = acc;
            }
        }
        let out = partial_trace_ancilla(&m, 2, 2).unwrap();
        assert!(out.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn partial_trace_shape_error() {
        let m = ComplexMatrix::identity(5);
        assert!(matches!(partial_trace_ancilla(&m, 2, 2), Err(Error::Shape(_))));
        assert!(matches!(
            partial_trace_ancilla(&ComplexMatrix::zeros(4, 2), 2, 2),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn eigs_known_spectra() {
        let v = herm_eigs(&ComplexMatrix::diag_real(&[3.0, 1.0, 2.0])).unwrap();
        assert_abs_diff_eq!(v.as_slice(), [1.0, 2.0, 3.0].as_slice(), epsilon = 1e-14);

        let x = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let v = herm_eigs(&x).unwrap();
        assert_abs_diff_eq!(v.as_slice(), [-1.0, 1.0].as_slice(), epsilon = 1e-14);
    }

    #[test]
    fn eigs_reject_non_hermitian() {
        let m = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(herm_eigs(&m), Err(Error::Validation(_))));
        assert!(matches!(herm_eigs(&ComplexMatrix::zeros(2, 3)), Err(Error::Shape(_))));
    }

    #[test]
    fn eigs_tolerate_tiny_asymmetry() {
        let mut m = ComplexMatrix::diag_real(&[1.0, 2.0]);
        m[(0, 1)] = c(1e-12, 0.0);
        assert!(herm_eigs(&m).is_ok());
    }

    #[test]
    fn eigh_reconstructs() {
        let mut rng = Rng::new(14);
        for n in 1..8 {
            let m = random_hermitian(n, &mut rng);
            let eig = herm_eigh(&m).unwrap();
            let residual = fro_norm(&(&m - &eig.reconstruct()));
            assert!(residual <= 1e-9 * fro_norm(&m).max(1.0), "n={n} residual={residual}");
            assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
            assert!(eig.vectors.unitarity_defect() < 1e-10);
        }
    }

    #[test]
    fn spectrum_invariant_under_unitary_conjugation() {
        let mut rng = Rng::new(15);
        let m = random_hermitian(5, &mut rng);
        let u = haar_unitary(5, &mut rng);
        let conj = &(&u * &m) * &u.adjoint();
        let a = herm_eigs(&m).unwrap();
        let b = herm_eigs(&conj).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() <= 1e-9);
        }
    }

    #[test]
    fn projector_spectrum_is_binary() {
        let mut rng = Rng::new(16);
        let u = haar_unitary(4, &mut rng);
        let p = &u.adjoint() * &(&ComplexMatrix::diag_real(&[1.0, 1.0, 0.0, 0.0]) * &u);
        for v in herm_eigs(&p).unwrap() {
            assert!(v.abs() < 1e-9 || (v - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn norms() {
        assert_abs_diff_eq!(op_norm(&ComplexMatrix::identity(3)), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(op_norm(&ComplexMatrix::diag_real(&[-2.0, 1.0])), 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(fro_norm(&ComplexMatrix::identity(2)), 2f64.sqrt(), epsilon = 1e-15);
        assert_eq!(fro_norm(&ComplexMatrix::zeros(3, 3)), 0.0);

        let mut rng = Rng::new(17);
        let u = random_unit_vector(4, &mut rng);
        let v = random_unit_vector(4, &mut rng);
        let mut direct = 0.0;
        for a in &u {
            for b in &v {
                direct += (a * b.conj()).norm_sqr();
            }
        }
        assert_abs_diff_eq!(direct.sqrt(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fro_norm(&ComplexMatrix::outer(&u, &v)), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn op_norm_of_non_hermitian() {
        // Nilpotent shift with weight 3: singular values {3, 0}.
        let m = ComplexMatrix::from_real(2, 2, &[0.0, 3.0, 0.0, 0.0]);
        assert_abs_diff_eq!(op_norm(&m), 3.0, epsilon = 1e-12);
    }

    #[test]
    fn op_norm_bounded_by_fro_norm() {
        let mut rng = Rng::new(18);
        for k in 0..100 {
            let n = 1 + k % 6;
            let m = random_matrix(n, n, &mut rng);
            assert!(op_norm(&m) <= fro_norm(&m) + 1e-12);
        }
    }

    #[test]
    fn haar_is_unitary_and_deterministic() {
        let mut a = Rng::new(19);
        let mut b = Rng::new(19);
        for n in 1..7 {
            let u = haar_unitary(n, &mut a);
            assert!(u.unitarity_defect() <= 1e-10);
            let v = haar_unitary(n, &mut b);
            let bits = |m: &ComplexMatrix| -> Vec<(u64, u64)> {
                m.entries().iter().map(|z| (z.re.to_bits(), z.im.to_bits())).collect()
            };
            assert_eq!(bits(&u), bits(&v));
        }
    }

    #[test]
    fn haar_second_moment() {
        let mut rng = Rng::new(20);
        let samples = 10_000;
        let mean: f64 = (0..samples)
            .map(|_| haar_unitary(2, &mut rng)[(0, 0)].norm_sqr())
            .sum::<f64>()
            / samples as f64;
        assert!((mean - 0.5).abs() < 0.02, "mean {mean}");
    }

    #[test]
    fn json_round_trip_and_rejection() {
        let mut rng = Rng::new(21);
        let m = random_matrix(2, 3, &mut rng);
        let s = serde_json::to_string(&m).unwrap();
        let back: ComplexMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);

        let bad = r#"{"rows":2,"cols":2,"re":[1,0,0],"im":[0,0,0,0]}"#;
        assert!(serde_json::from_str::<ComplexMatrix>(bad).is_err());
    }
}
