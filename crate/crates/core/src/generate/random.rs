//! Uniform random k-CNF, the unlabeled input of generate-and-test pipelines.

use rand::seq::index;
use rand::Rng;

use crate::cnf::{Clause, CnfFormula, Lit, Var};

/// `m` clauses, each over `k` distinct uniform variables with uniform polarities.
pub fn uniform_ksat<R: Rng + ?Sized>(n: usize, m: usize, k: usize, rng: &mut R) -> CnfFormula {
    assert!(k >= 1 && k <= n, "width {k} needs 1 ≤ k ≤ n = {n}");
    let mut f = CnfFormula::empty(n);
    for _ in 0..m {
        let lits = index::sample(rng, n, k)
            .into_iter()
            .map(|j| Lit::new(Var::new(j as u32), rng.random::<bool>()))
            .collect();
        f.push_unchecked(Clause::from_distinct(lits));
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn shape() {
        let f = uniform_ksat(10, 43, 3, &mut seeded(1));
        assert_eq!((f.num_vars(), f.num_clauses()), (10, 43));
        assert!(f.clauses().iter().all(|c| c.width() == 3));
    }

    #[test]
    fn polarities_balanced() {
        let f = uniform_ksat(50, 2000, 3, &mut seeded(2));
        let neg: usize = f.clauses().iter().map(|c| c.num_negative()).sum();
        let frac = neg as f64 / 6000.0;
        assert!((frac - 0.5).abs() < 0.03, "{frac}");
    }
}
