mod common;

use proptest::prelude::*;
use rand::Rng;
use satforge_core::encode::{augment, clause_residual, node_residual, stack_point};
use satforge_core::rng::seeded;
use satforge_core::{
    encode_augmented, encode_cnf, evaluate_clause, induced_slack, Assignment, CnfFormula,
};

fn bits(x: u64, n: usize) -> Assignment {
    Assignment::new((0..n).map(|j| x >> j & 1 == 1).collect())
}

/// Dense copy of the linear system, built straight from the literals.
fn dense(f: &CnfFormula) -> (Vec<Vec<i64>>, Vec<i64>) {
    let mut a = vec![vec![0i64; f.num_vars()]; f.num_clauses()];
    let mut b = vec![1i64; f.num_clauses()];
    for (i, c) in common::dimacs_clauses(f).iter().enumerate() {
        for &l in c {
            a[i][l.unsigned_abs() as usize - 1] = l.signum();
            if l < 0 {
                b[i] -= 1;
            }
        }
    }
    (a, b)
}

#[test]
fn feasibility_matches_satisfaction_exhaustively() {
    let mut rng = seeded(7);
    for _ in 0..200 {
        let n = rng.random_range(1..=12);
        let m = rng.random_range(0..=3 * n);
        let f = common::random_formula(&mut rng, n, m, 4);
        let sys = encode_cnf(&f);
        let clauses = common::dimacs_clauses(&f);
        for x in 0..1u64 << n {
            assert_eq!(
                sys.is_feasible(&bits(x, n)),
                common::satisfied_by(&clauses, x)
            );
        }
    }
}

#[test]
fn sparse_encoding_matches_dense_definition() {
    let mut rng = seeded(8);
    for _ in 0..100 {
        let f = common::random_formula(&mut rng, 9, 20, 5);
        let sys = encode_cnf(&f);
        let (a, b) = dense(&f);
        assert_eq!(sys.b, b);
        for (i, row) in a.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                assert_eq!(sys.a.get(i, j) as i64, v);
            }
        }
        let widths: usize = f.clauses().iter().map(|c| c.width()).sum();
        assert_eq!(sys.a.nnz(), widths);
        assert_eq!(encode_augmented(&f).a_hat.nnz(), widths + f.num_clauses());
    }
}

#[test]
fn induced_slack_identity_on_random_pairs() {
    let mut rng = seeded(9);
    let mut checked = 0;
    while checked < 10_000 {
        let n = rng.random_range(1..=10);
        let f = common::random_formula(&mut rng, n, 10, 6);
        let x = bits(rng.random(), n);
        let sys = encode_cnf(&f);
        let s = induced_slack(&f, &x).unwrap();
        let activity = sys.activity(&x);
        for (i, c) in f.clauses().iter().enumerate() {
            let count = evaluate_clause(c, &x).unwrap() as i64;
            assert_eq!(s.0[i], count - 1);
            assert_eq!(activity[i] - sys.b[i], count - 1);
            if count > 0 {
                assert!(s.0[i] < c.width() as i64);
            }
            checked += 1;
        }
    }
}

fn half_sq_norm(a: &satforge_core::AugmentedSystem, z: &[f64]) -> f64 {
    clause_residual(a, z)
        .unwrap()
        .iter()
        .map(|r| r * r)
        .sum::<f64>()
        / 2.0
}

#[test]
fn node_residual_is_the_gradient() {
    let mut rng = seeded(10);
    let h = 1e-4;
    for _ in 0..100 {
        let n = rng.random_range(1..=8);
        let m = rng.random_range(1..=12);
        let f = common::random_formula(&mut rng, n, m, 4);
        let aug = encode_augmented(&f);
        let z: Vec<f64> = (0..n + m).map(|_| rng.random_range(-1.0..2.0)).collect();
        let g = node_residual(&aug, &clause_residual(&aug, &z).unwrap()).unwrap();
        let fd: Vec<f64> = (0..z.len())
            .map(|j| {
                let mut hi = z.clone();
                let mut lo = z.clone();
                hi[j] += h;
                lo[j] -= h;
                (half_sq_norm(&aug, &hi) - half_sq_norm(&aug, &lo)) / (2.0 * h)
            })
            .collect();
        let err: f64 = g
            .iter()
            .zip(&fd)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt();
        let scale: f64 = g.iter().map(|a| a * a).sum::<f64>().sqrt().max(1e-12);
        assert!(err / scale < 1e-6, "relative error {}", err / scale);
    }
}

#[test]
fn planted_points_have_zero_residual() {
    let mut rng = seeded(11);
    for _ in 0..50 {
        let f = common::random_formula(&mut rng, 12, 40, 4);
        let n = f.num_vars();
        let x = bits(rng.random(), n);
        let s = induced_slack(&f, &x).unwrap();
        let aug = augment(&encode_cnf(&f), &f.widths()).unwrap();
        let r = clause_residual(&aug, &stack_point(&x, &s)).unwrap();
        assert!(r.iter().all(|&v| v == 0.0));
    }
}

proptest! {
    #[test]
    fn satisfying_slacks_within_bounds(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let f = common::random_formula(&mut rng, 6, 8, 4);
        for x in 0..1u64 << 6 {
            let a = bits(x, 6);
            let s = induced_slack(&f, &a).unwrap();
            let feasible = encode_cnf(&f).is_feasible(&a);
            let in_range = f.clauses().iter().zip(&s.0).all(|(c, &v)| (0..c.width() as i64).contains(&v));
            prop_assert_eq!(feasible, in_range);
        }
    }
}
