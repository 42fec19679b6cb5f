//! Programmable detectors.
//!
//! A [`Detector`] is a joint POVM `F` on system ⊗ ancilla, with any
//! system-ancilla interaction already absorbed (`F_i = U† E_i U`).
//! Programming it with an ancilla state `σ` yields the system POVM
//! `Q_i = Tr_A[(I ⊗ σ) F_i]`.

use std::fmt::Write as _;
use std::io;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, shape, Error, Result};
use crate::linalg::{ComplexMatrix, MatrixJson};
use crate::povm::{check_basis, check_unitary, povm_distance, DensityState, Povm, PovmJson};
use crate::rng::Rng;

#[derive(Clone, Debug, PartialEq)]
pub struct Detector {
    sys_dim: usize,
    anc_dim: usize,
    joint: Povm,
}

impl Detector {
    pub fn new(sys_dim: usize, anc_dim: usize, joint: Povm) -> Result<Self> {
        if sys_dim == 0 || anc_dim == 0 {
            return Err(shape("detector dimensions must be positive"));
        }
        if joint.dim() != sys_dim * anc_dim {
            return Err(shape(format!(
                "joint POVM of dimension {} for a {sys_dim}x{anc_dim} detector",
                joint.dim()
            )));
        }
        Ok(Self {
            sys_dim,
            anc_dim,
            joint,
        })
    }

    pub fn sys_dim(&self) -> usize {
        self.sys_dim
    }

    pub fn anc_dim(&self) -> usize {
        self.anc_dim
    }

    pub fn joint(&self) -> &Povm {
        &self.joint
    }

    pub fn num_outcomes(&self) -> usize {
        self.joint.num_outcomes()
    }
}

/// `Tr_A[(I ⊗ σ) F]` contracted directly:
/// `out[i, j] = Σ_{a,b} σ[a, b] · F[i·d + b, j·d + a]`.
fn reduce_effect(f: &ComplexMatrix, sigma: &ComplexMatrix, n: usize, d: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(n, n);
    for a in 0..d {
        for b in 0..d {
            let s = sigma[(a, b)];
            if s == Complex64::new(0.0, 0.0) {
                continue;
            }
            for i in 0..n {
                for j in 0..n {
                    out[(i, j)] += s * f[(i * d + b, j * d + a)];
                }
            }
        }
    }
    out
}

/// Programs the detector with ancilla state `sigma`.
///
/// The output is validated as a POVM rather than assumed to be one.
pub fn program(f: &Detector, sigma: &DensityState) -> Result<Povm> {
    if sigma.dim() != f.anc_dim {
        return Err(shape(format!(
            "program state of dimension {} for an ancilla of dimension {}",
            sigma.dim(),
            f.anc_dim
        )));
    }
    let effects = f
        .joint
        .effects()
        .iter()
        .map(|e| reduce_effect(e, sigma.matrix(), f.sys_dim, f.anc_dim))
        .collect();
    Povm::new(f.sys_dim, effects)
}

/// `U = Σ_k W_k ⊗ |φ_k⟩⟨φ_k|` over the ancilla computational basis.
pub fn controlled_unitary(ws: &[ComplexMatrix]) -> ComplexMatrix {
    let d = ws.len();
    let n = ws[0].rows();
    ComplexMatrix::from_fn(n * d, n * d, |r, c| {
        let (s, a) = (r / d, r % d);
        let (t, b) = (c / d, c % d);
        if a == b {
            ws[a][(s, t)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Detector with `F_i = U†(|ψ_i⟩⟨ψ_i| ⊗ I_d)U` for the controlled unitary
/// built from `ws`.
///
/// Programming it with the ancilla basis state `|φ_k⟩` realizes the
/// observable `W_k†|ψ_i⟩⟨ψ_i|W_k`.
pub fn controlled_unitary_detector(
    ws: &[ComplexMatrix],
    basis: &[Vec<Complex64>],
) -> Result<Detector> {
    let first = ws
        .first()
        .ok_or_else(|| invalid("controlled-unitary detector needs at least one unitary"))?;
    let n = first.rows();
    for (k, w) in ws.iter().enumerate() {
        if w.rows() != n || w.cols() != n {
            return Err(shape(format!("unitary {k} is not {n}x{n}")));
        }
        check_unitary(w, &format!("unitary {k}"))?;
    }
    check_basis(basis, n)?;
    let d = ws.len();
    let u = controlled_unitary(ws);
    let ud = u.adjoint();
    let id_anc = ComplexMatrix::identity(d);
    let effects = basis
        .iter()
        .map(|psi| {
            let e = crate::linalg::tensor(&ComplexMatrix::projector(psi), &id_anc);
            &(&ud * &e) * &u
        })
        .collect();
    Detector::new(n, d, Povm::new(n * d, effects)?)
}

/// `|φ_k⟩⟨φ_k|` on a `d`-dimensional ancilla.
pub fn ancilla_basis_state(d: usize, k: usize) -> DensityState {
    assert!(k < d, "basis index {k} out of range for dimension {d}");
    let mut v = vec![Complex64::new(0.0, 0.0); d];
    v[k] = Complex64::new(1.0, 0.0);
    DensityState::pure(&v).expect("basis vector is a unit vector")
}

/// All ancilla computational-basis states.
pub fn ancilla_basis_states(d: usize) -> Vec<DensityState> {
    (0..d).map(|k| ancilla_basis_state(d, k)).collect()
}

/// `δ(target, program(f, σ))`.
pub fn accuracy_for_program(f: &Detector, target: &Povm, sigma: &DensityState) -> Result<f64> {
    povm_distance(target, &program(f, sigma)?)
}

/// Program rule mapping a target to the state used for it.
pub type MatchedRule = dyn Fn(usize, &Povm, &mut Rng) -> Result<DensityState> + Send + Sync;

/// Program states tried for each target.
pub enum ProgramStrategy {
    /// Fixed finite family; each target uses its best member.
    States(Vec<DensityState>),
    /// One state per target, computed from `(target index, target, rng)`.
    Matched(Box<MatchedRule>),
}

impl ProgramStrategy {
    pub fn matched(
        rule: impl Fn(usize, &Povm, &mut Rng) -> Result<DensityState> + Send + Sync + 'static,
    ) -> Self {
        ProgramStrategy::Matched(Box::new(rule))
    }
}

#[derive(Clone, Debug)]
pub struct TargetAccuracy {
    pub target_id: usize,
    pub delta: f64,
    /// Index into the strategy's states, `None` for matched rules.
    pub program_index: Option<usize>,
    pub program: DensityState,
}

/// Per-target best distances and their maximum.
#[derive(Clone, Debug)]
pub struct AccuracyReport {
    pub epsilon: f64,
    /// Index of the target that attains `epsilon`.
    pub worst_target: usize,
    pub per_target: Vec<TargetAccuracy>,
}

impl AccuracyReport {
    /// CSV rows `target_id,delta,epsilon` with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("target_id,delta,epsilon\n");
        for t in &self.per_target {
            writeln!(out, "{},{:.17e},{:.17e}", t.target_id, t.delta, self.epsilon).unwrap();
        }
        out
    }

    pub fn write_csv(&self, mut w: impl io::Write) -> io::Result<()> {
        w.write_all(self.to_csv().as_bytes())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let per_target: Vec<_> = self
            .per_target
            .iter()
            .map(|t| {
                serde_json::json!({
                    "target_id": t.target_id,
                    "delta": t.delta,
                    "program_index": t.program_index,
                    "program": MatrixJson::from(t.program.matrix()),
                })
            })
            .collect();
        serde_json::json!({
            "epsilon": self.epsilon,
            "worst_target": self.worst_target,
            "per_target": per_target,
        })
    }
}

fn best_over_states(f: &Detector, target: &Povm, states: &[DensityState]) -> Result<(usize, f64)> {
    let mut best = (0, f64::INFINITY);
    for (k, sigma) in states.iter().enumerate() {
        let delta = accuracy_for_program(f, target, sigma)?;
        if delta < best.1 {
            best = (k, delta);
        }
    }
    Ok(best)
}

/// Estimates `max_target min_σ δ(target, program(f, σ))` over a strategy.
///
/// This is an upper estimate of the true max-min whenever the strategy does
/// not exhaust the ancilla state space. Targets are evaluated in parallel,
/// target `t` drawing from `rng.fork(t)`.
pub fn estimate_accuracy(
    f: &Detector,
    targets: &[Povm],
    programs: &ProgramStrategy,
    rng: &Rng,
) -> Result<AccuracyReport> {
    if targets.is_empty() {
        return Err(invalid("accuracy estimate needs at least one target"));
    }
    if let ProgramStrategy::States(states) = programs {
        if states.is_empty() {
            return Err(invalid("program strategy has no states"));
        }
    }
    let per_target = targets
        .par_iter()
        .enumerate()
        .map(|(id, target)| -> Result<TargetAccuracy> {
            match programs {
                ProgramStrategy::States(states) => {
                    let (k, delta) = best_over_states(f, target, states)?;
                    Ok(TargetAccuracy {
                        target_id: id,
                        delta,
                        program_index: Some(k),
                        program: states[k].clone(),
                    })
                }
                ProgramStrategy::Matched(rule) => {
                    let mut sub = rng.fork(id as u64);
                    let sigma = rule(id, target, &mut sub)?;
                    Ok(TargetAccuracy {
                        target_id: id,
                        delta: accuracy_for_program(f, target, &sigma)?,
                        program_index: None,
                        program: sigma,
                    })
                }
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let (worst_target, epsilon) = per_target
        .iter()
        .map(|t| (t.target_id, t.delta))
        .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
    Ok(AccuracyReport {
        epsilon,
        worst_target,
        per_target,
    })
}

/// Wire format: `{"sys_dim", "anc_dim", "joint": POVM}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DetectorJson {
    pub sys_dim: usize,
    pub anc_dim: usize,
    pub joint: PovmJson,
}

impl From<&Detector> for DetectorJson {
    fn from(f: &Detector) -> Self {
        Self {
            sys_dim: f.sys_dim,
            anc_dim: f.anc_dim,
            joint: PovmJson::from(&f.joint),
        }
    }
}

impl TryFrom<DetectorJson> for Detector {
    type Error = Error;

    fn try_from(j: DetectorJson) -> Result<Self> {
        Detector::new(j.sys_dim, j.anc_dim, Povm::try_from(j.joint)?)
    }
}

impl Serialize for Detector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DetectorJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Detector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Detector::try_from(DetectorJson::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}
