//! ε-nets on the unitary group modulo diagonal phases.
//!
//! Observables `P_i = W†|ψ_i⟩⟨ψ_i|W` do not change under `W → D W` for `D`
//! diagonal in the observable basis, so nets live on the quotient by those
//! phases (a manifold of dimension `n² − n`). The metric is
//!
//! ```text
//! q(W, V) = min_D ‖W − D V‖₂ = sqrt(Σ_i (2 − 2 |⟨ψ_i|W V†|ψ_i⟩|))
//! ```
//!
//! and a net of radius `r = ε / √(2n)` realizes, through the controlled-unitary
//! detector, every observable within distance `ε`, because
//! `δ(obs W, obs V) ≤ √(2n) · q(W, V)`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::detector::{controlled_unitary_detector, Detector};
use crate::error::{invalid, shape, Error, Result};
use crate::linalg::{haar_unitary, ComplexMatrix, MatrixJson};
use crate::povm::{check_basis, check_unitary, computational_basis};
use crate::rng::Rng;

/// Rows `⟨ψ_i|W`: the coordinates the quotient metric compares.
fn frame(w: &ComplexMatrix, basis: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let n = w.rows();
    basis
        .iter()
        .map(|psi| {
            (0..n)
                .map(|k| (0..n).map(|m| psi[m].conj() * w[(m, k)]).sum())
                .collect()
        })
        .collect()
}

fn frame_distance(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> f64 {
    let sq: f64 = a
        .iter()
        .zip(b)
        .map(|(ra, rb)| {
            let overlap: Complex64 = ra.iter().zip(rb).map(|(x, y)| x * y.conj()).sum();
            2.0 - 2.0 * overlap.norm()
        })
        .sum();
    sq.max(0.0).sqrt()
}

/// Frobenius distance between `w` and the closest `D·v`, `D` diagonal
/// in `basis` with unit-modulus entries.
pub fn quotient_distance(
    w: &ComplexMatrix,
    v: &ComplexMatrix,
    basis: &[Vec<Complex64>],
) -> Result<f64> {
    if w.rows() != v.rows() || w.cols() != v.cols() {
        return Err(shape(format!(
            "quotient distance between {}x{} and {}x{} matrices",
            w.rows(),
            w.cols(),
            v.rows(),
            v.cols()
        )));
    }
    check_unitary(w, "first argument")?;
    check_unitary(v, "second argument")?;
    check_basis(basis, w.rows())?;
    Ok(frame_distance(&frame(w, basis), &frame(v, basis)))
}

/// Finite set of unitaries whose radius-`r` quotient balls cover the group.
///
/// Built greedily, so centers are pairwise more than `radius` apart.
/// The metric uses the computational basis.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryNet {
    pub dim: usize,
    pub radius: f64,
    pub centers: Vec<ComplexMatrix>,
    pub seed: u64,
    pub candidates_tested: u64,
}

impl UnitaryNet {
    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// Index of and distance to the closest center.
    pub fn nearest(&self, w: &ComplexMatrix) -> (usize, f64) {
        let basis = computational_basis(self.dim);
        let fw = frame(w, &basis);
        self.centers
            .iter()
            .enumerate()
            .map(|(k, c)| (k, frame_distance(&fw, &frame(c, &basis))))
            .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc })
    }

    /// Smallest pairwise center distance (`∞` for fewer than two centers).
    pub fn min_separation(&self) -> f64 {
        let basis = computational_basis(self.dim);
        let frames: Vec<_> = self.centers.iter().map(|c| frame(c, &basis)).collect();
        let mut best = f64::INFINITY;
        for a in 0..frames.len() {
            for b in a + 1..frames.len() {
                best = best.min(frame_distance(&frames[a], &frames[b]));
            }
        }
        best
    }
}

/// Greedy packing: draw Haar candidates, keep one iff it is farther than
/// `radius` from every center, stop after `budget` consecutive rejections.
pub fn build_net(n: usize, radius: f64, budget: usize, rng: &mut Rng) -> Result<UnitaryNet> {
    if n == 0 {
        return Err(invalid("net dimension must be positive"));
    }
    if radius.is_nan() || radius <= 0.0 {
        return Err(invalid(format!("net radius must be positive, got {radius}")));
    }
    if budget == 0 {
        return Err(invalid("rejection budget must be at least 1"));
    }
    let basis = computational_basis(n);
    let mut centers = Vec::new();
    let mut frames: Vec<Vec<Vec<Complex64>>> = Vec::new();
    let mut rejected = 0;
    let mut tested = 0u64;
    while rejected < budget {
        let candidate = haar_unitary(n, rng);
        tested += 1;
        let f = frame(&candidate, &basis);
        if frames.iter().all(|c| frame_distance(&f, c) > radius) {
            centers.push(candidate);
            frames.push(f);
            rejected = 0;
        } else {
            rejected += 1;
        }
    }
    Ok(UnitaryNet {
        dim: n,
        radius,
        centers,
        seed: rng.seed(),
        candidates_tested: tested,
    })
}

/// Fraction of fresh Haar samples within `net.radius` of some center.
pub fn certify_coverage(net: &UnitaryNet, samples: usize, rng: &mut Rng) -> Result<f64> {
    if samples == 0 {
        return Err(invalid("coverage certification needs at least one sample"));
    }
    if net.is_empty() {
        return Ok(0.0);
    }
    let basis = computational_basis(net.dim);
    let frames: Vec<_> = net.centers.iter().map(|c| frame(c, &basis)).collect();
    let covered = (0..samples)
        .filter(|_| {
            let f = frame(&haar_unitary(net.dim, rng), &basis);
            frames.iter().any(|c| frame_distance(&f, c) <= net.radius)
        })
        .count();
    Ok(covered as f64 / samples as f64)
}

/// Controlled-unitary detector whose ancilla indexes the net's centers.
pub fn net_detector(net: &UnitaryNet, basis: &[Vec<Complex64>]) -> Result<Detector> {
    if net.is_empty() {
        return Err(invalid("net has no centers"));
    }
    controlled_unitary_detector(&net.centers, basis)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetScanRow {
    pub epsilon: f64,
    pub radius: f64,
    pub net_size: usize,
    pub coverage_rate: f64,
    pub seed: u64,
}

/// Scan rows plus the least-squares fit `log size = log κ + p · log(1/ε)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingScan {
    pub rows: Vec<NetScanRow>,
    pub exponent: f64,
    pub kappa_fit: f64,
}

/// Slope and intercept of the ordinary least-squares line through `points`.
pub fn fit_line(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Builds one net per accuracy `ε` (radius `ε/√(2n)`), certifies it on
/// `coverage_samples` fresh samples and fits the size-accuracy exponent.
///
/// Row `k` draws from `rng.fork(k)`, so rows are independent and run in
/// parallel.
pub fn scaling_scan(
    n: usize,
    eps_list: &[f64],
    budget: usize,
    coverage_samples: usize,
    rng: &Rng,
) -> Result<ScalingScan> {
    if eps_list.len() < 2 {
        return Err(invalid("scaling scan needs at least two accuracies"));
    }
    if let Some(bad) = eps_list.iter().find(|e| !(**e > 0.0 && **e <= 2.0)) {
        return Err(invalid(format!("accuracy {bad} outside (0, 2]")));
    }
    let rows = eps_list
        .par_iter()
        .enumerate()
        .map(|(k, &epsilon)| -> Result<NetScanRow> {
            let mut sub = rng.fork(k as u64);
            let seed = sub.seed();
            let radius = epsilon / (2.0 * n as f64).sqrt();
            let net = build_net(n, radius, budget, &mut sub)?;
            let coverage_rate = certify_coverage(&net, coverage_samples, &mut sub)?;
            Ok(NetScanRow {
                epsilon,
                radius,
                net_size: net.len(),
                coverage_rate,
                seed,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let points: Vec<_> = rows
        .iter()
        .map(|r| ((1.0 / r.epsilon).ln(), (r.net_size as f64).ln()))
        .collect();
    let (exponent, intercept) = fit_line(&points);
    Ok(ScalingScan {
        rows,
        exponent,
        kappa_fit: intercept.exp(),
    })
}

/// Wire format: `{"dim", "radius", "seed", "candidates_tested", "centers"}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NetJson {
    pub dim: usize,
    pub radius: f64,
    pub seed: u64,
    #[serde(default)]
    pub candidates_tested: u64,
    pub centers: Vec<MatrixJson>,
}

impl From<&UnitaryNet> for NetJson {
    fn from(net: &UnitaryNet) -> Self {
        Self {
            dim: net.dim,
            radius: net.radius,
            seed: net.seed,
            candidates_tested: net.candidates_tested,
            centers: net.centers.iter().map(MatrixJson::from).collect(),
        }
    }
}

impl TryFrom<NetJson> for UnitaryNet {
    type Error = Error;

    fn try_from(j: NetJson) -> Result<Self> {
        let centers = j
            .centers
            .into_iter()
            .map(ComplexMatrix::try_from)
            .collect::<Result<Vec<_>>>()?;
        for (k, c) in centers.iter().enumerate() {
            if c.rows() != j.dim || c.cols() != j.dim {
                return Err(shape(format!("center {k} is not {0}x{0}", j.dim)));
            }
            check_unitary(c, &format!("center {k}"))?;
        }
        Ok(UnitaryNet {
            dim: j.dim,
            radius: j.radius,
            centers,
            seed: j.seed,
            candidates_tested: j.candidates_tested,
        })
    }
}
