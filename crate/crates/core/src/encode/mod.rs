//! Binary linear encoding of CNF formulas.
//!
//! A clause with positive variables `P` and negated variables `N` holds under
//! a 0/1 assignment iff `Σ_{j∈P} x_j − Σ_{j∈N} x_j ≥ 1 − |N|`. Stacking rows
//! gives `A x ≥ b`. Introducing one slack per clause gives `A x − s = b`, or
//! `Â z = b` with `Â = [A | −I]` and `z = [x; s]`. For an assignment the
//! slack `s_i = A_i x − b_i` is the number of true literals in clause `i`
//! minus one.

pub mod export;
pub mod sparse;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cnf::{Assignment, CnfError, CnfFormula};
pub use sparse::{SignedCsr, Triplet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EncodeError {
    #[error("expected {expected} clause widths, got {got}")]
    WidthCount { expected: usize, got: usize },
    #[error("row {row} has {nnz} nonzeros but width {width}")]
    WidthMismatch {
        row: usize,
        nnz: usize,
        width: usize,
    },
    #[error("vector has length {got}, expected {expected}")]
    Dimension { expected: usize, got: usize },
}

/// `A x ≥ b` with `A ∈ {−1,0,1}^{m×n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    pub a: SignedCsr,
    pub b: Vec<i64>,
}

impl LinearSystem {
    pub fn num_vars(&self) -> usize {
        self.a.num_cols()
    }

    pub fn num_rows(&self) -> usize {
        self.a.num_rows()
    }

    /// `A x` for a 0/1 assignment.
    pub fn activity(&self, x: &Assignment) -> Vec<i64> {
        let xi: Vec<i64> = x.values().iter().map(|&v| v as i64).collect();
        self.a.mul_vec_i64(&xi)
    }

    /// Whether `A x ≥ b` holds componentwise.
    pub fn is_feasible(&self, x: &Assignment) -> bool {
        self.activity(x).iter().zip(&self.b).all(|(ax, b)| ax >= b)
    }
}

/// `Â z = b` with `Â = [A | −I]` and per-clause slack upper bounds `k_i − 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugmentedSystem {
    pub a_hat: SignedCsr,
    pub b: Vec<i64>,
    pub num_vars: usize,
    pub slack_bounds: Vec<usize>,
}

impl AugmentedSystem {
    pub fn num_rows(&self) -> usize {
        self.b.len()
    }

    pub fn num_cols(&self) -> usize {
        self.a_hat.num_cols()
    }
}

/// Per-clause slack values; `−1` marks a violated clause.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SlackVector(pub Vec<i64>);

impl SlackVector {
    pub fn values(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub fn encode_cnf(f: &CnfFormula) -> LinearSystem {
    let mut a = SignedCsr::with_capacity(f.num_vars(), f.num_clauses(), f.num_literals());
    let mut b = Vec::with_capacity(f.num_clauses());
    for clause in f.clauses() {
        a.push_row(
            clause
                .lits()
                .iter()
                .map(|l| (l.var().index(), if l.is_positive() { 1 } else { -1 })),
        );
        b.push(1 - clause.num_negative() as i64);
    }
    LinearSystem { a, b }
}

pub fn augment(sys: &LinearSystem, widths: &[usize]) -> Result<AugmentedSystem, EncodeError> {
    let m = sys.num_rows();
    let n = sys.num_vars();
    if widths.len() != m {
        return Err(EncodeError::WidthCount {
            expected: m,
            got: widths.len(),
        });
    }
    let mut a_hat = SignedCsr::with_capacity(n + m, m, sys.a.nnz() + m);
    for (i, &width) in widths.iter().enumerate() {
        let nnz = sys.a.row_nnz(i);
        if nnz != width || width == 0 {
            return Err(EncodeError::WidthMismatch { row: i, nnz, width });
        }
        a_hat.push_row(sys.a.row(i).chain(std::iter::once((n + i, -1))));
    }
    Ok(AugmentedSystem {
        a_hat,
        b: sys.b.clone(),
        num_vars: n,
        slack_bounds: widths.iter().map(|k| k - 1).collect(),
    })
}

/// Encodes and augments in one step.
pub fn encode_augmented(f: &CnfFormula) -> AugmentedSystem {
    augment(&encode_cnf(f), &f.widths()).expect("widths come from the same formula")
}

/// `s_i = A_i x − b_i` for every clause, computed from the clause literals.
pub fn induced_slack(f: &CnfFormula, a: &Assignment) -> Result<SlackVector, CnfError> {
    if a.len() != f.num_vars() {
        return Err(CnfError::LengthMismatch {
            expected: f.num_vars(),
            got: a.len(),
        });
    }
    let values = f
        .clauses()
        .iter()
        .map(|clause| {
            let mut activity = 0i64;
            let mut negatives = 0i64;
            for lit in clause.lits() {
                let x = a.value(lit.var()) as i64;
                if lit.is_positive() {
                    activity += x;
                } else {
                    activity -= x;
                    negatives += 1;
                }
            }
            activity - (1 - negatives)
        })
        .collect();
    Ok(SlackVector(values))
}

/// Stacks `z = [x; s]` as reals.
pub fn stack_point(x: &Assignment, s: &SlackVector) -> Vec<f64> {
    x.values()
        .iter()
        .map(|&v| v as u8 as f64)
        .chain(s.values().iter().map(|&v| v as f64))
        .collect()
}

/// Clause residual `r = Â z − b`.
pub fn clause_residual(aug: &AugmentedSystem, z: &[f64]) -> Result<Vec<f64>, EncodeError> {
    if z.len() != aug.num_cols() {
        return Err(EncodeError::Dimension {
            expected: aug.num_cols(),
            got: z.len(),
        });
    }
    let mut r = aug.a_hat.mul_vec(z);
    for (ri, &bi) in r.iter_mut().zip(&aug.b) {
        *ri -= bi as f64;
    }
    Ok(r)
}

/// Node residual `g = Âᵀ r`, the gradient of `½‖Âz − b‖²` when `r = Âz − b`.
pub fn node_residual(aug: &AugmentedSystem, r: &[f64]) -> Result<Vec<f64>, EncodeError> {
    if r.len() != aug.num_rows() {
        return Err(EncodeError::Dimension {
            expected: aug.num_rows(),
            got: r.len(),
        });
    }
    Ok(aug.a_hat.transpose_mul_vec(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::{evaluate_clause, CnfFormula};

    fn formula(n: usize, clauses: &[&[i64]]) -> CnfFormula {
        CnfFormula::from_dimacs_clauses(n, clauses).unwrap()
    }

    fn bits(s: &str) -> Assignment {
        Assignment::from_bit_string(s).unwrap()
    }

    #[test]
    fn encodes_rows() {
        let sys = encode_cnf(&formula(3, &[&[1, -2, 3]]));
        assert_eq!(
            (0..3).map(|j| sys.a.get(0, j)).collect::<Vec<_>>(),
            [1, -1, 1]
        );
        assert_eq!(sys.b, [0]);

        let sys = encode_cnf(&formula(1, &[&[1]]));
        assert_eq!((sys.a.get(0, 0), sys.b[0]), (1, 1));

        let sys = encode_cnf(&formula(2, &[&[-1, -2]]));
        assert_eq!((sys.a.get(0, 0), sys.a.get(0, 1), sys.b[0]), (-1, -1, -1));
    }

    #[test]
    fn augment_single_clause() {
        let aug = encode_augmented(&formula(2, &[&[1, 2]]));
        assert_eq!(aug.num_cols(), 3);
        assert_eq!(
            (0..3).map(|j| aug.a_hat.get(0, j)).collect::<Vec<_>>(),
            [1, 1, -1]
        );
        assert_eq!(aug.b, [1]);
        assert_eq!(aug.slack_bounds, [1]);
    }

    #[test]
    fn augment_empty_system() {
        let aug = encode_augmented(&CnfFormula::empty(4));
        assert_eq!((aug.num_rows(), aug.num_cols(), aug.a_hat.nnz()), (0, 4, 0));
    }

    #[test]
    fn augment_two_clause_example() {
        let f = formula(3, &[&[1, -2], &[2, 3]]);
        let aug = encode_augmented(&f);
        let dense: Vec<Vec<i8>> = (0..2)
            .map(|i| (0..5).map(|j| aug.a_hat.get(i, j)).collect())
            .collect();
        assert_eq!(dense, vec![vec![1, -1, 0, -1, 0], vec![0, 1, 1, 0, -1]]);
        assert_eq!(aug.b, [0, 1]);
    }

    #[test]
    fn augment_rejects_bad_widths() {
        let sys = encode_cnf(&formula(2, &[&[1, 2]]));
        assert_eq!(
            augment(&sys, &[3]).unwrap_err(),
            EncodeError::WidthMismatch {
                row: 0,
                nnz: 2,
                width: 3
            }
        );
        assert!(matches!(
            augment(&sys, &[2, 2]),
            Err(EncodeError::WidthCount { .. })
        ));
    }

    #[test]
    fn slack_examples() {
        let f = formula(3, &[&[1, -2, -3], &[2, 3]]);
        assert_eq!(induced_slack(&f, &bits("101")).unwrap().0, [1, 0]);
        assert_eq!(
            induced_slack(&formula(1, &[&[1]]), &bits("0")).unwrap().0,
            [-1]
        );
        for c in f.clauses() {
            let count = evaluate_clause(c, &bits("101")).unwrap() as i64;
            assert!(count >= 1);
        }
    }

    #[test]
    fn residual_examples() {
        let aug = encode_augmented(&formula(2, &[&[1, 2]]));
        assert_eq!(clause_residual(&aug, &[0.5, 0.5, 0.0]).unwrap(), [0.0]);
        assert_eq!(clause_residual(&aug, &[1.0, 1.0, 0.0]).unwrap(), [1.0]);
        assert_eq!(node_residual(&aug, &[1.0]).unwrap(), [1.0, 1.0, -1.0]);
        assert_eq!(node_residual(&aug, &[0.0]).unwrap(), [0.0, 0.0, 0.0]);
        assert!(matches!(
            clause_residual(&aug, &[1.0]),
            Err(EncodeError::Dimension { .. })
        ));
        assert!(matches!(
            node_residual(&aug, &[1.0, 2.0]),
            Err(EncodeError::Dimension { .. })
        ));
    }

    #[test]
    fn planted_point_has_zero_residual() {
        let f = formula(3, &[&[1, -2, -3], &[2, 3]]);
        let x = bits("101");
        let z = stack_point(&x, &induced_slack(&f, &x).unwrap());
        assert_eq!(
            clause_residual(&encode_augmented(&f), &z).unwrap(),
            [0.0, 0.0]
        );
    }

    #[test]
    fn sparsity_counts() {
        let f = formula(4, &[&[1, -2, 3], &[2, 4], &[-1]]);
        let sys = encode_cnf(&f);
        assert_eq!(sys.a.nnz(), 6);
        assert_eq!(encode_augmented(&f).a_hat.nnz(), 6 + 3);
    }
}
