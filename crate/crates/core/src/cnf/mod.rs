//! CNF domain types and clause/formula evaluation.
//!
//! Variables are 0-based inside the crate. The DIMACS reader and writer in
//! [`dimacs`] are the only places that translate to and from the 1-based
//! external numbering.

pub mod dimacs;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use dimacs::{parse_dimacs, parse_dimacs_with, write_dimacs, DimacsError, ParseMode, Parsed};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CnfError {
    #[error("clause has no literals")]
    EmptyClause,
    #[error("variable {} appears more than once in a clause", .0.to_dimacs())]
    RepeatedVariable(Var),
    #[error("variable {} out of range for {num_vars} variables", .var.to_dimacs())]
    VariableOutOfRange { var: Var, num_vars: usize },
    #[error("assignment has {got} values, formula has {expected} variables")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid assignment bit string: {0}")]
    BadBitString(String),
}

/// A 0-based variable index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u32);

impl Var {
    pub const fn new(index: u32) -> Self {
        Var(index)
    }

    /// 1-based DIMACS number of this variable.
    pub fn from_dimacs(number: u32) -> Option<Self> {
        number.checked_sub(1).map(Var)
    }

    pub const fn index(self) -> usize {
        self.0 as usize
    }

    pub const fn to_dimacs(self) -> u32 {
        self.0 + 1
    }

    pub const fn positive(self) -> Lit {
        Lit::new(self, true)
    }

    pub const fn negative(self) -> Lit {
        Lit::new(self, false)
    }
}

/// A literal packed as `2 * var + negated`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(u32);

impl Lit {
    pub const fn new(var: Var, positive: bool) -> Self {
        Lit(var.0 << 1 | (!positive) as u32)
    }

    /// Literal for a nonzero signed DIMACS integer.
    pub fn from_dimacs(value: i64) -> Option<Self> {
        if value == 0 {
            return None;
        }
        let var = u32::try_from(value.unsigned_abs() - 1).ok()?;
        if var > u32::MAX >> 1 {
            return None;
        }
        Some(Lit::new(Var(var), value > 0))
    }

    pub const fn var(self) -> Var {
        Var(self.0 >> 1)
    }

    pub const fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    pub const fn negate(self) -> Self {
        Lit(self.0 ^ 1)
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.var().to_dimacs() as i64;
        if self.is_positive() {
            v
        } else {
            -v
        }
    }

    /// Truth value of this literal when its variable takes `value`.
    #[inline]
    pub const fn eval(self, value: bool) -> bool {
        value == self.is_positive()
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_positive() {
            write!(f, "x{}", self.var().to_dimacs())
        } else {
            write!(f, "¬x{}", self.var().to_dimacs())
        }
    }
}

/// A disjunction of literals over pairwise distinct variables.
///
/// Literal order is significant and preserved through serialization.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    lits: Vec<Lit>,
}

impl Clause {
    pub fn new(lits: Vec<Lit>) -> Result<Self, CnfError> {
        if lits.is_empty() {
            return Err(CnfError::EmptyClause);
        }
        if let Some(var) = first_repeated_var(&lits) {
            return Err(CnfError::RepeatedVariable(var));
        }
        Ok(Clause { lits })
    }

    /// Builds a clause the caller already knows to be well formed.
    pub(crate) fn from_distinct(lits: Vec<Lit>) -> Self {
        debug_assert!(!lits.is_empty() && first_repeated_var(&lits).is_none());
        Clause { lits }
    }

    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn width(&self) -> usize {
        self.lits.len()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.lits.iter().map(|l| l.var())
    }

    pub fn num_negative(&self) -> usize {
        self.lits.iter().filter(|l| !l.is_positive()).count()
    }

    pub fn max_var(&self) -> Var {
        self.vars().max().expect("clauses are nonempty")
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, l) in self.lits.iter().enumerate() {
            if i > 0 {
                write!(f, " ∨ ")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

pub(crate) fn first_repeated_var(lits: &[Lit]) -> Option<Var> {
    if lits.len() <= 8 {
        for (i, a) in lits.iter().enumerate() {
            if lits[..i].iter().any(|b| b.var() == a.var()) {
                return Some(a.var());
            }
        }
        return None;
    }
    let mut seen = std::collections::HashSet::with_capacity(lits.len());
    lits.iter().map(|l| l.var()).find(|v| !seen.insert(*v))
}

/// Conjunction of clauses over `num_vars` variables. Duplicate clauses are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Clause>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Clause>) -> Result<Self, CnfError> {
        let mut f = CnfFormula::empty(num_vars);
        for c in clauses {
            f.push(c)?;
        }
        Ok(f)
    }

    pub fn empty(num_vars: usize) -> Self {
        CnfFormula {
            num_vars,
            clauses: Vec::new(),
        }
    }

    /// Convenience constructor from signed 1-based literals, mostly for tests.
    pub fn from_dimacs_clauses(num_vars: usize, clauses: &[&[i64]]) -> Result<Self, CnfError> {
        let clauses = clauses
            .iter()
            .map(|c| {
                let lits = c
                    .iter()
                    .map(|&v| Lit::from_dimacs(v).ok_or(CnfError::EmptyClause))
                    .collect::<Result<Vec<_>, _>>()?;
                Clause::new(lits)
            })
            .collect::<Result<Vec<_>, _>>()?;
        CnfFormula::new(num_vars, clauses)
    }

    pub fn push(&mut self, clause: Clause) -> Result<(), CnfError> {
        let var = clause.max_var();
        if var.index() >= self.num_vars {
            return Err(CnfError::VariableOutOfRange {
                var,
                num_vars: self.num_vars,
            });
        }
        self.clauses.push(clause);
        Ok(())
    }

    pub(crate) fn push_unchecked(&mut self, clause: Clause) {
        debug_assert!(clause.max_var().index() < self.num_vars);
        self.clauses.push(clause);
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn widths(&self) -> Vec<usize> {
        self.clauses.iter().map(Clause::width).collect()
    }

    /// Sum of clause widths, i.e. the number of literal occurrences.
    pub fn num_literals(&self) -> usize {
        self.clauses.iter().map(Clause::width).sum()
    }

    pub fn into_clauses(self) -> Vec<Clause> {
        self.clauses
    }
}

/// A complete truth assignment `x ∈ {0,1}^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    values: Vec<bool>,
}

impl Assignment {
    pub fn new(values: Vec<bool>) -> Self {
        Assignment { values }
    }

    pub fn all_false(num_vars: usize) -> Self {
        Assignment {
            values: vec![false; num_vars],
        }
    }

    /// Parses a string of `0`/`1` characters; character `j` is the value of `x_{j+1}`.
    pub fn from_bit_string(bits: &str) -> Result<Self, CnfError> {
        bits.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(CnfError::BadBitString(bits.to_owned())),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Assignment::new)
    }

    pub fn to_bit_string(&self) -> String {
        self.values
            .iter()
            .map(|&v| if v { '1' } else { '0' })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn value(&self, var: Var) -> bool {
        self.values[var.index()]
    }

    pub fn get(&self, var: Var) -> Option<bool> {
        self.values.get(var.index()).copied()
    }

    pub fn set(&mut self, var: Var, value: bool) {
        self.values[var.index()] = value;
    }

    pub fn flip(&mut self, var: Var) {
        let v = &mut self.values[var.index()];
        *v = !*v;
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    /// Whether `lit` is true under this assignment.
    #[inline]
    pub fn satisfies(&self, lit: Lit) -> bool {
        lit.eval(self.value(lit.var()))
    }
}

/// Satisfiability label of an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Sat,
    Unsat,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Sat => "sat",
            Label::Unsat => "unsat",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sat" => Ok(Label::Sat),
            "unsat" => Ok(Label::Unsat),
            other => Err(format!("unknown label `{other}`")),
        }
    }
}

/// Number of literals of `clause` that are true under `a`.
pub fn evaluate_clause(clause: &Clause, a: &Assignment) -> Result<usize, CnfError> {
    let mut count = 0;
    for &lit in clause.lits() {
        let value = a.get(lit.var()).ok_or(CnfError::VariableOutOfRange {
            var: lit.var(),
            num_vars: a.len(),
        })?;
        count += lit.eval(value) as usize;
    }
    Ok(count)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Evaluation {
    pub satisfied: bool,
    pub violated_count: usize,
}

pub fn evaluate_formula(f: &CnfFormula, a: &Assignment) -> Result<Evaluation, CnfError> {
    if a.len() != f.num_vars() {
        return Err(CnfError::LengthMismatch {
            expected: f.num_vars(),
            got: a.len(),
        });
    }
    let violated_count = f
        .clauses()
        .iter()
        .filter(|c| !c.lits().iter().any(|&l| a.satisfies(l)))
        .count();
    Ok(Evaluation {
        satisfied: violated_count == 0,
        violated_count,
    })
}
