use std::error::Error;
use std::fs;

use povmforge::covariant::{bell_program_residual, CovariantSeed, ProgramConvention};
use povmforge::detector::{estimate_accuracy, ProgramStrategy};
use povmforge::linalg::{haar_unitary, herm_eigh};
use povmforge::povm::{
    computational_basis, distance_bounds, observable_from_unitary, povm_distance_with_witness,
    DensityState, Povm,
};
use povmforge::su2::{
    covariant_program_state, covariant_qubit_detector, fiurasek_detector, fiurasek_program_state,
    qubit_observable, AngularMomentum, GroupElement, FIURASEK_MAX_PROGRAM_QUBITS,
};
use povmforge::unet::{build_net, scaling_scan, NetJson};
use povmforge::{Complex64, Rng};
use serde::Serialize;
use serde_json::json;

use crate::output::{csv_body, Artifact, Destination};
use crate::{Cli, CovariantArgs, DistanceArgs, ExactArgs, FiurasekArgs, NetArgs, Run};

type Result<T> = std::result::Result<T, Box<dyn Error>>;

// Stream indices under the master seed, one per experiment.
const FIURASEK_STREAM: u64 = 1;
const COVARIANT_STREAM: u64 = 2;
const EXACT_STREAM: u64 = 4;
const NET_STREAM: u64 = 7;

const CONTROL_THRESHOLD: f64 = 0.1;

fn top_eigenvector(p: &Povm) -> povmforge::Result<Vec<Complex64>> {
    let eig = herm_eigh(p.effect(0))?;
    Ok(eig.vector(eig.values.len() - 1))
}

fn table(rows: &[impl Serialize], trailer: Vec<String>) -> Result<Artifact> {
    Ok(Artifact::Csv {
        to: Destination::Primary,
        body: csv_body(rows)?,
        trailer,
    })
}

#[derive(Serialize)]
struct ScalingRow {
    #[serde(rename = "N")]
    program_qubits: usize,
    d: usize,
    epsilon_measured: f64,
    epsilon_theory: f64,
    max_abs_err: f64,
    /// `½·4^{1/ε}` at the measured accuracy.
    d_from_epsilon: f64,
}

pub fn fiurasek_scan(cli: &Cli, a: &FiurasekArgs) -> Result<Run> {
    if a.n_min == 0 || a.n_min > a.n_max {
        return Err(format!("invalid program-qubit range {}..={}", a.n_min, a.n_max).into());
    }
    if a.n_max > FIURASEK_MAX_PROGRAM_QUBITS {
        return Err(format!(
            "{} program qubits exceed the cap of {FIURASEK_MAX_PROGRAM_QUBITS}",
            a.n_max
        )
        .into());
    }
    if a.samples == 0 {
        return Err("--samples must be at least 1".into());
    }
    let mut rng = Rng::new(cli.seed).fork(FIURASEK_STREAM);
    let mut rows = Vec::new();
    let mut breaches = Vec::new();
    for n in a.n_min..=a.n_max {
        let f = fiurasek_detector(n)?;
        let targets: Vec<_> = (0..a.samples)
            .map(|_| observable_from_unitary(&haar_unitary(2, &mut rng), &computational_basis(2)))
            .collect::<povmforge::Result<_>>()?;
        let rule = ProgramStrategy::matched(move |_, target: &Povm, _: &mut Rng| {
            fiurasek_program_state(&top_eigenvector(target)?, n)
        });
        let report = estimate_accuracy(&f, &targets, &rule, &rng.fork(n as u64))?;
        let theory = 2.0 / (n as f64 + 1.0);
        let max_abs_err = report
            .per_target
            .iter()
            .map(|t| (t.delta - theory).abs())
            .fold(0.0, f64::max);
        if max_abs_err > cli.tol {
            breaches.push(format!("N={n}: |measured − 2/(N+1)| = {max_abs_err:.3e} > {}", cli.tol));
        }
        rows.push(ScalingRow {
            program_qubits: n,
            d: 1 << n,
            epsilon_measured: report.epsilon,
            epsilon_theory: theory,
            max_abs_err,
            d_from_epsilon: 0.5 * 4f64.powf(1.0 / report.epsilon),
        });
    }
    Ok(Run {
        artifacts: vec![table(&rows, vec![])?],
        breaches,
    })
}

#[derive(Serialize)]
struct CovariantRow {
    twice_j: u32,
    d: usize,
    epsilon_measured: f64,
    epsilon_theory: f64,
    max_abs_err: f64,
    /// `2/ε` at the measured accuracy.
    d_from_epsilon: f64,
}

pub fn covariant_scan(cli: &Cli, a: &CovariantArgs) -> Result<Run> {
    if a.j_min == 0 || a.j_min > a.j_max {
        return Err(format!("invalid 2j range {}..={}", a.j_min, a.j_max).into());
    }
    if a.samples == 0 {
        return Err("--samples must be at least 1".into());
    }
    let mut rng = Rng::new(cli.seed).fork(COVARIANT_STREAM);
    let mut rows = Vec::new();
    let mut breaches = Vec::new();
    for tj in a.j_min..=a.j_max {
        let j = AngularMomentum::from_twice(tj);
        let f = covariant_qubit_detector(j)?;
        let targets: Vec<_> = (0..a.samples)
            .map(|_| qubit_observable(&GroupElement::random(&mut rng)))
            .collect();
        let rule = ProgramStrategy::matched(move |_, target: &Povm, _: &mut Rng| {
            Ok(covariant_program_state(j, &GroupElement::aligning(&top_eigenvector(target)?)?))
        });
        let report = estimate_accuracy(&f, &targets, &rule, &rng.fork(tj as u64))?;
        let theory = 2.0 / j.dim() as f64;
        let max_abs_err = report
            .per_target
            .iter()
            .map(|t| (t.delta - theory).abs())
            .fold(0.0, f64::max);
        if max_abs_err > cli.tol {
            breaches.push(format!("2j={tj}: |measured − 2/d| = {max_abs_err:.3e} > {}", cli.tol));
        }
        rows.push(CovariantRow {
            twice_j: tj,
            d: j.dim(),
            epsilon_measured: report.epsilon,
            epsilon_theory: theory,
            max_abs_err,
            d_from_epsilon: 2.0 / report.epsilon,
        });
    }
    Ok(Run {
        artifacts: vec![table(&rows, vec![])?],
        breaches,
    })
}

pub fn net_scan(cli: &Cli, a: &NetArgs) -> Result<Run> {
    if a.samples == 0 {
        return Err("--samples must be at least 1".into());
    }
    let scan = scaling_scan(a.n, &a.eps, a.budget, a.samples, &Rng::new(cli.seed).fork(NET_STREAM))?;
    let mut breaches = Vec::new();
    for row in &scan.rows {
        if row.coverage_rate < a.min_coverage {
            breaches.push(format!(
                "eps={}: coverage {} < {}",
                row.epsilon, row.coverage_rate, a.min_coverage
            ));
        }
    }
    if !(a.exponent_min..=a.exponent_max).contains(&scan.exponent) {
        breaches.push(format!(
            "fitted exponent {} outside [{}, {}]",
            scan.exponent, a.exponent_min, a.exponent_max
        ));
    }
    let fit = json!({
        "n": a.n,
        "exponent": scan.exponent,
        "kappa_fit": scan.kappa_fit,
        "exponent_band": [a.exponent_min, a.exponent_max],
    });
    let fit_path = a
        .fit_out
        .clone()
        .or_else(|| cli.out.as_ref().map(|p| p.with_extension("fit.json")));
    let mut trailer = Vec::new();
    let mut artifacts = Vec::new();
    match fit_path {
        Some(path) => artifacts.push(Artifact::Json {
            to: Destination::File(path),
            value: fit,
        }),
        None => trailer.push(format!("fit {fit}")),
    }
    artifacts.insert(0, table(&scan.rows, trailer)?);
    if let Some(path) = &a.net_out {
        let finest = scan
            .rows
            .iter()
            .min_by(|x, y| x.epsilon.total_cmp(&y.epsilon))
            .expect("scan has rows");
        let net = build_net(a.n, finest.radius, a.budget, &mut Rng::new(finest.seed))?;
        artifacts.push(Artifact::Json {
            to: Destination::File(path.clone()),
            value: serde_json::to_value(NetJson::from(&net))?,
        });
    }
    Ok(Run { artifacts, breaches })
}

#[derive(Serialize)]
struct ExactRow {
    row: usize,
    nu_id: String,
    alpha: f64,
    beta: f64,
    gamma: f64,
    residual: f64,
    flagged: bool,
}

pub fn exact_check(cli: &Cli, a: &ExactArgs) -> Result<Run> {
    let mut rng = Rng::new(cli.seed).fork(EXACT_STREAM);
    let convention = if a.negative_control {
        ProgramConvention::Untransposed
    } else {
        ProgramConvention::Transposed
    };
    let half = AngularMomentum::HALF;
    let flag_above = if a.negative_control { CONTROL_THRESHOLD } else { a.threshold };

    let mut cases = vec![(
        "maximally_mixed".to_string(),
        CovariantSeed::new(DensityState::maximally_mixed(2)),
        GroupElement::random(&mut rng.fork(0)),
    )];
    for k in 0..a.samples {
        let seed = CovariantSeed::new(DensityState::random_pure(2, &mut rng));
        cases.push((format!("pure_{k}"), seed, GroupElement::random(&mut rng)));
    }

    let mut rows = Vec::new();
    for (row, (nu_id, seed, g)) in cases.into_iter().enumerate() {
        let residual = bell_program_residual(&seed, &half, &g, convention)?;
        let (alpha, beta, gamma) = g.euler_angles();
        rows.push(ExactRow {
            row,
            nu_id,
            alpha,
            beta,
            gamma,
            residual,
            flagged: residual > flag_above,
        });
    }

    let mut breaches = Vec::new();
    let mut trailer = Vec::new();
    if a.negative_control {
        // Only random seeds are expected to expose the missing transpose.
        let random = &rows[1..];
        let flagged = random.iter().filter(|r| r.flagged).count();
        let fraction = if random.is_empty() { 1.0 } else { flagged as f64 / random.len() as f64 };
        trailer.push(format!("flagged {flagged}/{} random rows ({fraction:.4})", random.len()));
        if fraction < a.control_fraction {
            breaches.push(format!(
                "negative control flagged {fraction:.4} of random rows, below {}",
                a.control_fraction
            ));
        }
    } else {
        for r in rows.iter().filter(|r| r.flagged) {
            breaches.push(format!("row {}: residual {:.3e} > {}", r.row, r.residual, a.threshold));
        }
    }
    Ok(Run {
        artifacts: vec![table(&rows, trailer)?],
        breaches,
    })
}

fn read_povm(path: &std::path::Path) -> Result<Povm> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?)
}

pub fn distance(cli: &Cli, a: &DistanceArgs) -> Result<Run> {
    let p = read_povm(&a.povm_a)?;
    let q = read_povm(&a.povm_b)?;
    let d = povm_distance_with_witness(&p, &q)?;
    let bounds = distance_bounds(&p, &q)?;
    let mut breaches = Vec::new();
    if d.delta > bounds.sum_op + cli.tol || bounds.sum_op > bounds.sum_fro + cli.tol {
        breaches.push(format!(
            "bound chain violated: delta {} sum_op {} sum_fro {}",
            d.delta, bounds.sum_op, bounds.sum_fro
        ));
    }
    let value = json!({
        "delta": d.delta,
        "sum_op_bound": bounds.sum_op,
        "sum_fro_bound": bounds.sum_fro,
        "witness_state": {
            "re": d.witness.iter().map(|z| z.re).collect::<Vec<_>>(),
            "im": d.witness.iter().map(|z| z.im).collect::<Vec<_>>(),
        },
    });
    Ok(Run {
        artifacts: vec![Artifact::Json {
            to: Destination::Primary,
            value,
        }],
        breaches,
    })
}
