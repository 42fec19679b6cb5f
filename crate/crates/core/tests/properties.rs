use proptest::prelude::*;

use povmforge::detector::{program, Detector};
use povmforge::linalg::{ginibre, haar_unitary, ComplexMatrix};
use povmforge::povm::{
    computational_basis, distance_bounds, observable_from_unitary, povm_distance, DensityState, Povm,
};
use povmforge::su2::{irrep_matrix, AngularMomentum, GroupElement};
use povmforge::unet::quotient_distance;
use povmforge::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matrix_json_round_trip(seed in any::<u64>(), rows in 1usize..5, cols in 1usize..5) {
        let m = ginibre(rows, cols, &mut Rng::new(seed));
        let text = serde_json::to_string(&m).unwrap();
        prop_assert_eq!(serde_json::from_str::<ComplexMatrix>(&text).unwrap(), m);
    }

    #[test]
    fn povm_json_round_trip(seed in any::<u64>(), dim in 1usize..4, outcomes in 1usize..4) {
        let p = Povm::random(dim, outcomes, &mut Rng::new(seed)).unwrap();
        let text = serde_json::to_string(&p).unwrap();
        prop_assert_eq!(serde_json::from_str::<Povm>(&text).unwrap(), p);
    }

    #[test]
    fn distance_is_a_bounded_metric(seed in any::<u64>(), dim in 1usize..4, outcomes in 2usize..4) {
        let mut rng = Rng::new(seed);
        let p = Povm::random(dim, outcomes, &mut rng).unwrap();
        let q = Povm::random(dim, outcomes, &mut rng).unwrap();
        let r = Povm::random(dim, outcomes, &mut rng).unwrap();
        let pq = povm_distance(&p, &q).unwrap();
        prop_assert!((pq - povm_distance(&q, &p).unwrap()).abs() < 1e-10);
        prop_assert!(pq <= 2.0 + 1e-10);
        prop_assert!(povm_distance(&p, &p).unwrap() < 1e-10);
        prop_assert!(pq <= povm_distance(&p, &r).unwrap() + povm_distance(&r, &q).unwrap() + 1e-10);
        let b = distance_bounds(&p, &q).unwrap();
        prop_assert!(pq <= b.sum_op + 1e-9 && b.sum_op <= b.sum_fro + 1e-9);
    }

    #[test]
    fn programs_are_affine_and_valid(
        seed in any::<u64>(),
        n in 1usize..4,
        d in 1usize..4,
        outcomes in 1usize..4,
        lambda in 0.0f64..=1.0,
    ) {
        let mut rng = Rng::new(seed);
        let f = Detector::new(n, d, Povm::random(n * d, outcomes, &mut rng).unwrap()).unwrap();
        let a = DensityState::random_mixed(d, &mut rng);
        let b = DensityState::random_pure(d, &mut rng);
        let qa = program(&f, &a).unwrap();
        let qb = program(&f, &b).unwrap();
        let qm = program(&f, &DensityState::mix(&a, &b, lambda).unwrap()).unwrap();
        for i in 0..outcomes {
            let expected = &qa.effect(i).scale_real(lambda) + &qb.effect(i).scale_real(1.0 - lambda);
            prop_assert!(qm.effect(i).max_abs_diff(&expected) <= 1e-12);
        }
    }

    #[test]
    fn quotient_distance_dominates_observable_distance(seed in any::<u64>(), n in 1usize..5) {
        let mut rng = Rng::new(seed);
        let basis = computational_basis(n);
        let w = haar_unitary(n, &mut rng);
        let v = haar_unitary(n, &mut rng);
        let q = quotient_distance(&w, &v, &basis).unwrap();
        prop_assert!((q - quotient_distance(&v, &w, &basis).unwrap()).abs() < 1e-10);
        let delta = povm_distance(
            &observable_from_unitary(&w, &basis).unwrap(),
            &observable_from_unitary(&v, &basis).unwrap(),
        )
        .unwrap();
        prop_assert!(delta <= (2.0 * n as f64).sqrt() * q + 1e-9);
    }

    #[test]
    fn irreps_are_homomorphisms(seed in any::<u64>(), twice_j in 0u32..9) {
        let mut rng = Rng::new(seed);
        let j = AngularMomentum::from_twice(twice_j);
        let g = GroupElement::random(&mut rng);
        let h = GroupElement::random(&mut rng);
        let lhs = irrep_matrix(j, &g.compose(&h));
        let rhs = &irrep_matrix(j, &g) * &irrep_matrix(j, &h);
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-9);
    }
}
