#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::seq::index;
use rand::Rng;
use satforge_core::{BenchmarkProfile, CnfFormula};

/// Clauses as signed 1-based literals, read back through the public API.
pub fn dimacs_clauses(f: &CnfFormula) -> Vec<Vec<i64>> {
    f.clauses()
        .iter()
        .map(|c| c.lits().iter().map(|l| l.to_dimacs()).collect())
        .collect()
}

/// True literals of a DIMACS clause under the bit mask `x` (bit `v-1` is `x_v`).
pub fn true_literals(clause: &[i64], x: u64) -> usize {
    clause
        .iter()
        .filter(|&&l| {
            let bit = x >> (l.unsigned_abs() - 1) & 1 == 1;
            bit == (l > 0)
        })
        .count()
}

pub fn satisfied_by(clauses: &[Vec<i64>], x: u64) -> bool {
    clauses.iter().all(|c| true_literals(c, x) > 0)
}

/// Plain `2^n` loop with per-clause re-evaluation.
pub fn oracle_is_sat(f: &CnfFormula) -> bool {
    let clauses = dimacs_clauses(f);
    (0..1u64 << f.num_vars()).any(|x| satisfied_by(&clauses, x))
}

pub fn random_formula<R: Rng>(rng: &mut R, n: usize, m: usize, max_width: usize) -> CnfFormula {
    let mut clauses = Vec::with_capacity(m);
    for _ in 0..m {
        let k = rng.random_range(1..=max_width.min(n));
        let clause: Vec<i64> = index::sample(rng, n, k)
            .into_iter()
            .map(|v| {
                if rng.random() {
                    v as i64 + 1
                } else {
                    -(v as i64 + 1)
                }
            })
            .collect();
        clauses.push(clause);
    }
    let refs: Vec<&[i64]> = clauses.iter().map(|c| c.as_slice()).collect();
    CnfFormula::from_dimacs_clauses(n, &refs).unwrap()
}

pub fn tv(p: &[f64], q: &[f64]) -> f64 {
    let len = p.len().max(q.len());
    (0..len)
        .map(|i| (p.get(i).unwrap_or(&0.0) - q.get(i).unwrap_or(&0.0)).abs())
        .sum::<f64>()
        / 2.0
}

pub fn normalize(counts: &[u64]) -> Vec<f64> {
    let total: u64 = counts.iter().sum();
    counts.iter().map(|&c| c as f64 / total as f64).collect()
}

/// Mixed-width profile with deliberately lopsided slack distributions.
pub fn mixed_profile() -> BenchmarkProfile {
    let mut p = BenchmarkProfile::random_3sat();
    p.width_dist = BTreeMap::from([(2, 0.2), (3, 0.5), (4, 0.3)]);
    p.sat_slack = BTreeMap::from([
        (2, vec![0.7, 0.3]),
        (3, vec![0.5, 0.3, 0.2]),
        (4, vec![0.1, 0.2, 0.3, 0.4]),
    ]);
    p.unsat_slack = BTreeMap::from([
        (2, vec![0.4, 0.6]),
        (3, vec![0.6, 0.3, 0.1]),
        (4, vec![0.25, 0.25, 0.25, 0.25]),
    ]);
    p.skew_profile = (0..10).map(|i| (10 - i) as f64 / 55.0).collect();
    p.dominant_width = 3;
    p.validate().unwrap();
    p
}
