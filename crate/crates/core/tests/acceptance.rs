//! Acceptance suite. Each criterion prints one `PASS`/`FAIL` line; the process
//! exits nonzero if any criterion fails.

use std::f64::consts::TAU;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use povmforge::detector::{
    ancilla_basis_states, estimate_accuracy, program, Detector, ProgramStrategy,
};
use povmforge::linalg::{fro_norm, haar_unitary, herm_eigh, tensor, ComplexMatrix};
use povmforge::povm::{
    computational_basis, distance_bounds, observable_from_unitary, povm_distance,
    two_outcome_distance, DensityState, Povm,
};
use povmforge::su2::{
    clebsch_gordan, coupled_blocks, coupling_isometry, covariant_program_state,
    covariant_qubit_detector, fiurasek_detector, fiurasek_program_state, irrep_matrix,
    qubit_observable, symmetric_projector, AngularMomentum, GroupElement,
};
use povmforge::covariant::{bell_program_residual, CovariantSeed, ProgramConvention};
use povmforge::unet::{build_net, net_detector, quotient_distance, scaling_scan};
use povmforge::Rng;

const SEED: u64 = 20_240_601;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

fn top_eigenvector(m: &ComplexMatrix) -> Vec<Complex64> {
    let eig = herm_eigh(m).expect("Hermitian effect");
    eig.vector(eig.values.len() - 1)
}

fn haar_observable(n: usize, rng: &mut Rng) -> Povm {
    observable_from_unitary(&haar_unitary(n, rng), &computational_basis(n)).unwrap()
}

fn fiurasek_scaling(rng: &mut Rng) -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for n in 1..=6 {
        let f = fiurasek_detector(n).unwrap();
        let targets: Vec<_> = (0..20).map(|_| haar_observable(2, rng)).collect();
        let rule = ProgramStrategy::matched(move |_, target: &Povm, _: &mut Rng| {
            fiurasek_program_state(&top_eigenvector(target.effect(0)), n)
        });
        let report = estimate_accuracy(&f, &targets, &rule, &rng.fork(n as u64)).unwrap();
        let theory = 2.0 / (n as f64 + 1.0);
        for t in &report.per_target {
            worst = worst.max((t.delta - theory).abs());
        }
    }
    let elapsed = start.elapsed();
    Outcome::new(
        worst <= 1e-9 && elapsed <= Duration::from_secs(60),
        format!("max |δ − 2/(N+1)| = {worst:.2e} over N=1..6, {:.2?}", elapsed),
    )
}

fn covariant_scaling(rng: &mut Rng) -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for tj in 1..=9 {
        let j = AngularMomentum::from_twice(tj);
        let f = covariant_qubit_detector(j).unwrap();
        let targets: Vec<_> = (0..20).map(|_| qubit_observable(&GroupElement::random(rng))).collect();
        let rule = ProgramStrategy::matched(move |_, target: &Povm, _: &mut Rng| {
            Ok(covariant_program_state(j, &GroupElement::aligning(&top_eigenvector(target.effect(0)))?))
        });
        let report = estimate_accuracy(&f, &targets, &rule, &rng.fork(tj as u64)).unwrap();
        let theory = 2.0 / j.dim() as f64;
        for t in &report.per_target {
            worst = worst.max((t.delta - theory).abs());
        }
    }
    let elapsed = start.elapsed();
    Outcome::new(
        worst <= 1e-9 && elapsed <= Duration::from_secs(10),
        format!("max |δ − 2/(2j+1)| = {worst:.2e} over 2j=1..9, {:.2?}", elapsed),
    )
}

fn clebsch_gordan_weights() -> Outcome {
    let half = AngularMomentum::HALF;
    let mut worst = 0.0f64;
    for tj in 1..=12u32 {
        let j = AngularMomentum::from_twice(tj);
        let plus = AngularMomentum::from_twice(tj + 1);
        let m = tj as i32;
        let top = clebsch_gordan(half, 1, j, m, plus, m + 1).unwrap();
        let low = clebsch_gordan(half, -1, j, m, plus, m - 1).unwrap();
        worst = worst
            .max((top * top - 1.0).abs())
            .max((low * low - 1.0 / (tj as f64 + 1.0)).abs());
    }
    Outcome::new(worst <= 1e-10, format!("max weight error {worst:.2e} for j ≤ 6"))
}

fn exact_programmability(rng: &mut Rng) -> Outcome {
    let half = AngularMomentum::HALF;
    let mut worst = 0.0f64;
    let mut control_hits = 0;
    let pairs = 500;
    for _ in 0..pairs {
        let seed = CovariantSeed::new(DensityState::random_pure(2, rng));
        let g = GroupElement::random(rng);
        worst = worst.max(bell_program_residual(&seed, &half, &g, ProgramConvention::Transposed).unwrap());
        if bell_program_residual(&seed, &half, &g, ProgramConvention::Untransposed).unwrap() > 0.1 {
            control_hits += 1;
        }
    }
    let fraction = control_hits as f64 / pairs as f64;
    Outcome::new(
        worst <= 1e-10 && fraction >= 0.95,
        format!(
            "max residual {worst:.2e} over {pairs} pairs; untransposed control > 0.1 for {:.1}% (need ≥ 95%)",
            100.0 * fraction
        ),
    )
}

fn norm_bound_chain(rng: &mut Rng) -> Outcome {
    let mut violations = 0;
    for k in 0..100 {
        let outcomes = 2 + k % 3;
        let p = Povm::random(2, outcomes, rng).unwrap();
        let q = Povm::random(2, outcomes, rng).unwrap();
        let delta = povm_distance(&p, &q).unwrap();
        let b = distance_bounds(&p, &q).unwrap();
        if !(delta <= b.sum_op + 1e-9 && b.sum_op <= b.sum_fro + 1e-9) {
            violations += 1;
        }
    }
    Outcome::new(violations == 0, format!("{violations} violations in 100 qubit pairs"))
}

fn jensen_bound(rng: &mut Rng) -> Outcome {
    let mut violations = 0;
    let mut tightest = f64::INFINITY;
    for k in 0..100 {
        let n = 2 + k % 2;
        let basis = computational_basis(n);
        let w = haar_unitary(n, rng);
        let v = haar_unitary(n, rng);
        let delta = povm_distance(
            &observable_from_unitary(&w, &basis).unwrap(),
            &observable_from_unitary(&v, &basis).unwrap(),
        )
        .unwrap();
        let bound = (2.0 * n as f64).sqrt() * quotient_distance(&w, &v, &basis).unwrap();
        tightest = tightest.min(bound - delta);
        if delta > bound + 1e-9 {
            violations += 1;
        }
    }
    Outcome::new(
        violations == 0,
        format!("{violations} violations in 100 pairs, n ∈ {{2,3}}; min slack {tightest:.3e}"),
    )
}

fn net_scaling(rng: &Rng) -> Outcome {
    let start = Instant::now();
    let eps = [1.2, 0.9, 0.7, 0.5, 0.35];
    let scan = scaling_scan(2, &eps, NET_BUDGET, 1000, rng).unwrap();
    let elapsed = start.elapsed();
    let min_cov = scan.rows.iter().map(|r| r.coverage_rate).fold(1.0, f64::min);
    let sizes: Vec<_> = scan.rows.iter().map(|r| r.net_size).collect();
    Outcome::new(
        (1.3..=2.7).contains(&scan.exponent) && min_cov >= 0.99 && elapsed <= Duration::from_secs(300),
        format!(
            "exponent {:.3}, sizes {sizes:?}, min coverage {min_cov:.3}, {:.2?}",
            scan.exponent, elapsed
        ),
    )
}

const NET_BUDGET: usize = 4000;

fn end_to_end(rng: &mut Rng) -> Outcome {
    let eps = 0.7;
    let net = build_net(2, eps / 2.0, NET_BUDGET, rng).unwrap();
    let basis = computational_basis(2);
    let f: Detector = net_detector(&net, &basis).unwrap();
    let targets: Vec<_> = (0..200).map(|_| haar_observable(2, rng)).collect();
    let programs = ProgramStrategy::States(ancilla_basis_states(net.len()));
    let report = estimate_accuracy(&f, &targets, &programs, &rng.fork(0)).unwrap();
    Outcome::new(
        report.epsilon <= eps + 1e-9,
        format!("worst δ {:.4} over 200 targets, net of {} centers", report.epsilon, net.len()),
    )
}

/// Qubit `perm[q]` receives qubit `q`.
fn permutation_average(n: usize) -> ComplexMatrix {
    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }
    let dim = 1usize << n;
    let all = perms(n);
    let mut acc = ComplexMatrix::zeros(dim, dim);
    for p in &all {
        for x in 0..dim {
            let mut y = 0;
            for (q, &target) in p.iter().enumerate() {
                y |= ((x >> (n - 1 - q)) & 1) << (n - 1 - target);
            }
            acc[(y, x)] += Complex64::new(1.0 / all.len() as f64, 0.0);
        }
    }
    acc
}

/// Brute-force `min_D ‖W − D V‖₂` over a phase grid. The squared norm splits
/// into per-row terms, which are tabulated per grid angle before enumerating
/// every grid point.
fn phase_grid_minimum(w: &ComplexMatrix, v: &ComplexMatrix, steps: usize) -> f64 {
    let n = w.rows();
    let row_cost: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..steps)
                .map(|a| {
                    let d = Complex64::from_polar(1.0, TAU * a as f64 / steps as f64);
                    (0..n).map(|k| (w[(i, k)] - d * v[(i, k)]).norm_sqr()).sum()
                })
                .collect()
        })
        .collect();
    let mut best = f64::INFINITY;
    let total = steps.pow(n as u32);
    for point in 0..total {
        let mut rest = point;
        let mut sum = 0.0;
        for costs in &row_cost {
            sum += costs[rest % steps];
            rest /= steps;
        }
        best = best.min(sum);
    }
    best.sqrt()
}

fn oracle_equivalences(rng: &mut Rng) -> Outcome {
    let mut two_outcome = 0.0f64;
    for _ in 0..100 {
        let p = Povm::random(2, 2, rng).unwrap();
        let q = Povm::random(2, 2, rng).unwrap();
        two_outcome = two_outcome.max((two_outcome_distance(&p, &q).unwrap() - povm_distance(&p, &q).unwrap()).abs());
    }
    let mut projector = 0.0f64;
    for n in 1..=4 {
        projector = projector.max(symmetric_projector(n).unwrap().max_abs_diff(&permutation_average(n)));
    }
    let mut grid = 0.0f64;
    for k in 0..50 {
        let n = 2 + k % 2;
        let w = haar_unitary(n, rng);
        let v = haar_unitary(n, rng);
        let exact = quotient_distance(&w, &v, &computational_basis(n)).unwrap();
        grid = grid.max((phase_grid_minimum(&w, &v, 128) - exact).abs());
    }
    Outcome::new(
        two_outcome <= 1e-10 && projector <= 1e-10 && grid <= 2e-3,
        format!("two-outcome {two_outcome:.2e}, symmetric projector {projector:.2e}, phase grid {grid:.2e}"),
    )
}

fn structural_invariants(rng: &mut Rng) -> Outcome {
    let mut affine = 0.0f64;
    let mut completeness = 0.0f64;
    let mut invalid = 0;
    for k in 0..100 {
        let (n, d, outcomes) = (2 + k % 2, 1 + k % 3, 2 + k % 2);
        let f = Detector::new(n, d, Povm::random(n * d, outcomes, rng).unwrap()).unwrap();
        let s1 = DensityState::random_mixed(d, rng);
        let s2 = DensityState::random_pure(d, rng);
        let lambda = rng.uniform();
        let (Ok(q1), Ok(q2), Ok(qm)) = (
            program(&f, &s1),
            program(&f, &s2),
            program(&f, &DensityState::mix(&s1, &s2, lambda).unwrap()),
        ) else {
            invalid += 1;
            continue;
        };
        let mut total = ComplexMatrix::zeros(n, n);
        for i in 0..outcomes {
            let expected = &q1.effect(i).scale_real(lambda) + &q2.effect(i).scale_real(1.0 - lambda);
            affine = affine.max(qm.effect(i).max_abs_diff(&expected));
            total = &total + q1.effect(i);
        }
        completeness = completeness.max(fro_norm(&(&total - &ComplexMatrix::identity(n))));
    }

    let half = AngularMomentum::HALF;
    let mut coupling = 0.0f64;
    let mut pairs = Vec::new();
    for tj in 0..=12 {
        pairs.push((half, AngularMomentum::from_twice(tj)));
    }
    for (a, b) in [(2, 2), (2, 3), (3, 4), (4, 4), (6, 6), (12, 2)] {
        pairs.push((AngularMomentum::from_twice(a), AngularMomentum::from_twice(b)));
    }
    for (j1, j2) in pairs {
        let u = coupling_isometry(j1, j2);
        coupling = coupling.max(u.unitarity_defect());
        let g = GroupElement::random(rng);
        let product = tensor(&irrep_matrix(j1, &g), &irrep_matrix(j2, &g));
        let coupled = &(&u * &product) * &u.adjoint();
        let mut expected = ComplexMatrix::zeros(u.rows(), u.rows());
        for (big_j, offset) in coupled_blocks(j1, j2) {
            let block = irrep_matrix(big_j, &g);
            for r in 0..big_j.dim() {
                for c in 0..big_j.dim() {
                    expected[(offset + r, offset + c)] = block[(r, c)];
                }
            }
        }
        coupling = coupling.max(coupled.max_abs_diff(&expected));
    }
    Outcome::new(
        invalid == 0 && affine <= 1e-12 && completeness <= 1e-10 && coupling <= 1e-9,
        format!(
            "{invalid} invalid programs, affinity {affine:.2e}, completeness {completeness:.2e}, coupling {coupling:.2e}"
        ),
    )
}

fn main() -> ExitCode {
    let rng = Rng::new(SEED);
    type Criterion<'a> = (&'static str, Box<dyn FnOnce() -> Outcome + 'a>);
    let criteria: Vec<Criterion> = vec![
        ("symmetric-projector scaling", Box::new(|| fiurasek_scaling(&mut rng.fork(1)))),
        ("covariant linear scaling", Box::new(|| covariant_scaling(&mut rng.fork(2)))),
        ("Clebsch-Gordan weights", Box::new(clebsch_gordan_weights)),
        ("exact covariant programmability", Box::new(|| exact_programmability(&mut rng.fork(4)))),
        ("norm-bound chain", Box::new(|| norm_bound_chain(&mut rng.fork(5)))),
        ("quotient distance bound", Box::new(|| jensen_bound(&mut rng.fork(6)))),
        ("net scaling exponent", Box::new(|| net_scaling(&rng.fork(7)))),
        ("end-to-end net accuracy", Box::new(|| end_to_end(&mut rng.fork(8)))),
        ("oracle equivalences", Box::new(|| oracle_equivalences(&mut rng.fork(9)))),
        ("structural invariants", Box::new(|| structural_invariants(&mut rng.fork(10)))),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.into_iter().enumerate() {
        let outcome = run();
        if !outcome.pass {
            failed += 1;
        }
        println!(
            "{} criterion {:>2} {name}: {}",
            if outcome.pass { "PASS" } else { "FAIL" },
            k + 1,
            outcome.detail
        );
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
