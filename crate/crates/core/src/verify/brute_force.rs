//! Exhaustive satisfiability check by Gray-code enumeration.
//!
//! Consecutive Gray codes differ in one variable, so each step only touches
//! the clauses containing that variable.

use std::time::Instant;

use thiserror::Error;

use crate::cnf::{Assignment, CnfFormula, Label};

pub const DEFAULT_CAP: usize = 25;

/// Deadline checks happen once per this many steps.
const DEADLINE_STRIDE: u64 = 1 << 14;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BruteForceError {
    #[error("{n} variables exceed the enumeration cap of {cap}")]
    TooManyVariables { n: usize, cap: usize },
    #[error("deadline passed after {steps} assignments")]
    Deadline { steps: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BruteForceResult {
    Sat(Assignment),
    Unsat,
}

impl BruteForceResult {
    pub fn label(&self) -> Label {
        match self {
            BruteForceResult::Sat(_) => Label::Sat,
            BruteForceResult::Unsat => Label::Unsat,
        }
    }
}

pub fn brute_force_label(f: &CnfFormula, cap: usize) -> Result<BruteForceResult, BruteForceError> {
    brute_force_label_until(f, cap, None)
}

/// Enumerates all `2^n` assignments, starting from all-false, and returns
/// the first satisfying one.
pub fn brute_force_label_until(
    f: &CnfFormula,
    cap: usize,
    deadline: Option<Instant>,
) -> Result<BruteForceResult, BruteForceError> {
    let n = f.num_vars();
    if n > cap || n >= 64 {
        return Err(BruteForceError::TooManyVariables { n, cap });
    }
    // Clauses listed per literal code, `2 * var + negated`.
    let mut occurrences = vec![Vec::<u32>::new(); 2 * n];
    let mut true_count = vec![0u32; f.num_clauses()];
    for (i, c) in f.clauses().iter().enumerate() {
        for &l in c.lits() {
            occurrences[2 * l.var().index() + !l.is_positive() as usize].push(i as u32);
            true_count[i] += !l.is_positive() as u32;
        }
    }
    let mut violated = true_count.iter().filter(|&&t| t == 0).count();
    let mut x = vec![false; n];

    for step in 1u64..(1u64 << n) {
        if violated == 0 {
            return Ok(BruteForceResult::Sat(Assignment::new(x)));
        }
        if step % DEADLINE_STRIDE == 0 && deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(BruteForceError::Deadline { steps: step });
        }
        let v = step.trailing_zeros() as usize;
        let now_true = 2 * v + x[v] as usize;
        let now_false = 2 * v + !x[v] as usize;
        x[v] = !x[v];
        for &c in &occurrences[now_false] {
            let t = &mut true_count[c as usize];
            *t -= 1;
            violated += (*t == 0) as usize;
        }
        for &c in &occurrences[now_true] {
            let t = &mut true_count[c as usize];
            violated -= (*t == 0) as usize;
            *t += 1;
        }
    }
    if violated == 0 {
        Ok(BruteForceResult::Sat(Assignment::new(x)))
    } else {
        Ok(BruteForceResult::Unsat)
    }
}
