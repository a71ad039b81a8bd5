mod common;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use toric_core::cox::{cox_presentation, primitive_collections};
use toric_core::glsm::{
    find_kahler_class, kahler_cone_contains, kempf_ness_gradient, kempf_ness_solve, kempf_ness_value, moment_map,
    moment_map_at, semistable, unstable_supports, SolveStatus, Stability, DEFAULT_MAX_ITER,
};
use toric_core::lattice::{to_rational, IntMatrix};

fn random_t<R: Rng>(rng: &mut R, k: usize) -> Vec<f64> {
    (0..k).map(|_| rng.random_range(-1.0..1.0)).collect()
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn gradient_matches_finite_differences(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_problem(&mut rng);
        let t = random_t(&mut rng, p.rank());
        let g = kempf_ness_gradient(&p, &t);
        let h = 1e-6;
        let fd: Vec<f64> = (0..t.len())
            .map(|a| {
                let mut up = t.clone();
                let mut dn = t.clone();
                up[a] += h;
                dn[a] -= h;
                (kempf_ness_value(&p, &up) - kempf_ness_value(&p, &dn)) / (2.0 * h)
            })
            .collect();
        let err: Vec<f64> = fd.iter().zip(&g).map(|(x, y)| x - y).collect();
        let scale = inf_norm(&g).max(1e-3);
        prop_assert!(inf_norm(&err) / scale < 1e-5, "fd {:?} vs {:?}", fd, g);
    }

    #[test]
    fn objective_is_convex_along_lines(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_problem(&mut rng);
        let t = random_t(&mut rng, p.rank());
        let d = random_t(&mut rng, p.rank());
        let h = 1e-3;
        let at = |s: f64| {
            let x: Vec<f64> = t.iter().zip(&d).map(|(a, b)| a + s * b).collect();
            kempf_ness_value(&p, &x)
        };
        prop_assert!(at(h) - 2.0 * at(0.0) + at(-h) >= -1e-9);
    }

    #[test]
    fn gradient_is_twice_moment_map(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_problem(&mut rng);
        let g = kempf_ness_gradient(&p, &vec![0.0; p.rank()]);
        let mu: Vec<f64> = moment_map(&p).iter().map(|x| num_traits::ToPrimitive::to_f64(x).unwrap()).collect();
        for (a, b) in g.iter().zip(&mu) {
            prop_assert!((a - 2.0 * b).abs() < 1e-12);
        }
    }
}

#[test]
fn solver_agrees_with_exact_stability() {
    let charges: Vec<IntMatrix> = golden_fans()
        .iter()
        .map(|f| cox_presentation(f).unwrap().charge_matrix)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let tol = 1e-8;
    for i in 0..300 {
        let p = golden_instance(&charges[i % charges.len()], &mut rng);
        let oracle = semistable(&p.charges, &p.support(), &p.fi).unwrap();
        let rep = kempf_ness_solve(&p, tol, DEFAULT_MAX_ITER).unwrap();
        match &rep.status {
            SolveStatus::Converged { t } => {
                assert_eq!(oracle, Stability::InteriorStable, "{p:?}");
                assert!(inf_norm(&moment_map_at(&p, t)) < tol);
            }
            SolveStatus::Unstable { boundary, .. } => {
                let expected = if *boundary { Stability::BoundaryMarginal } else { Stability::Unstable };
                assert_eq!(oracle, expected, "{p:?}");
            }
            SolveStatus::IterationLimit { .. } => panic!("iteration limit on {p:?}: {rep:?}"),
        }
    }
}

#[test]
fn phases_reproduce_primitive_collections() {
    for fan in golden_fans() {
        let pres = cox_presentation(&fan).unwrap();
        let a = find_kahler_class(&fan, &pres).unwrap().expect("projective fan");
        assert!(kahler_cone_contains(&fan, &pres, &a).unwrap());
        let r: Vec<BigRational> = a.iter().map(to_rational).collect();
        assert_eq!(
            unstable_supports(&pres.charge_matrix, &r, 16).unwrap(),
            primitive_collections(&fan).unwrap(),
            "{}",
            fan.name
        );
    }
}

#[test]
fn non_kahler_classes_change_the_phase() {
    // on F1 the class D_1 (the (-1)-curve) is effective but not ample: its
    // unstable locus differs from V(I)
    let fan = toric_core::fan::Fan::hirzebruch(1);
    let pres = cox_presentation(&fan).unwrap();
    let e: Vec<BigInt> = [0i64, 1, 0, 0].iter().map(|&x| BigInt::from(x)).collect();
    let a = pres.charge_matrix.mul_vec(&e).unwrap();
    assert!(!kahler_cone_contains(&fan, &pres, &a).unwrap());
    let r: Vec<BigRational> = a.iter().map(to_rational).collect();
    assert_ne!(
        unstable_supports(&pres.charge_matrix, &r, 16).unwrap(),
        primitive_collections(&fan).unwrap()
    );
}

#[test]
fn support_outside_range_is_rejected() {
    let q3 = IntMatrix::from_rows(&[vec![1i64, 1, 1]]).unwrap();
    let s: BTreeSet<usize> = [3].into_iter().collect();
    assert!(semistable(&q3, &s, &[q(1)]).is_err());
}
