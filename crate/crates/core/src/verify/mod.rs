//! Certification oracles that check generator claims from first principles.
//!
//! Everything here evaluates formulas through `cnf` and `encode` primitives
//! only; nothing calls back into the generator.

mod brute_force;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::cnf::{evaluate_formula, CnfFormula, Label, Var};
use crate::encode::induced_slack;
use crate::generate::GeneratedInstance;

pub use brute_force::{
    brute_force_label, brute_force_label_until, BruteForceError, BruteForceResult, DEFAULT_CAP,
};

/// One broken contract, naming the clause involved where there is one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VerifyFailure {
    WitnessLength {
        expected: usize,
        got: usize,
    },
    ClauseCount {
        expected: usize,
        got: usize,
    },
    /// SAT only: the witness leaves this clause unsatisfied.
    ViolatedClause {
        clause: usize,
    },
    SlackCount {
        expected: usize,
        got: usize,
    },
    SlackMismatch {
        clause: usize,
        planted: i64,
        induced: i64,
    },
    /// UNSAT only: the witness must violate exactly one clause.
    ViolationCount {
        violated: Vec<usize>,
    },
    ViolationOutsideCore {
        clause: usize,
    },
    CoreOnSat {
        size: usize,
    },
    CoreMissing,
    CoreIndexOutOfRange {
        index: usize,
    },
    CoreIndexRepeated {
        index: usize,
    },
    CoreSize {
        width: usize,
        size: usize,
    },
    CoreVariables {
        clause: usize,
    },
    CorePatternRepeated {
        clause: usize,
    },
}

impl VerifyFailure {
    pub fn clause(&self) -> Option<usize> {
        use VerifyFailure::*;
        match *self {
            ViolatedClause { clause }
            | SlackMismatch { clause, .. }
            | ViolationOutsideCore { clause }
            | CoreVariables { clause }
            | CorePatternRepeated { clause } => Some(clause),
            CoreIndexOutOfRange { index } | CoreIndexRepeated { index } => Some(index),
            _ => None,
        }
    }
}

impl fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use VerifyFailure::*;
        match self {
            WitnessLength { expected, got } => write!(
                f,
                "witness has {got} values, formula has {expected} variables"
            ),
            ClauseCount { expected, got } => {
                write!(f, "formula has {got} clauses, manifest declares {expected}")
            }
            ViolatedClause { clause } => write!(f, "clause {clause} violated by witness"),
            SlackCount { expected, got } => {
                write!(f, "{got} planted slacks for {expected} planted clauses")
            }
            SlackMismatch {
                clause,
                planted,
                induced,
            } => {
                write!(
                    f,
                    "clause {clause}: planted slack {planted}, induced {induced}"
                )
            }
            ViolationCount { violated } => write!(
                f,
                "witness violates {} clauses {violated:?}, expected 1",
                violated.len()
            ),
            ViolationOutsideCore { clause } => {
                write!(f, "violated clause {clause} is not a core clause")
            }
            CoreOnSat { size } => write!(f, "SAT instance lists {size} core clauses"),
            CoreMissing => write!(f, "UNSAT instance lists no core"),
            CoreIndexOutOfRange { index } => write!(f, "core index {index} out of range"),
            CoreIndexRepeated { index } => write!(f, "core index {index} repeated"),
            CoreSize { width, size } => write!(
                f,
                "core of width {width} has {size} clauses, expected 2^{width}"
            ),
            CoreVariables { clause } => {
                write!(f, "core clause {clause} uses a different variable set")
            }
            CorePatternRepeated { clause } => {
                write!(f, "core clause {clause} repeats a polarity pattern")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub label: Label,
    pub failures: Vec<VerifyFailure>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks the witness contract of a generated instance.
///
/// SAT: the witness satisfies every clause and each clause's induced slack
/// equals its planted slack. A satisfying witness is sufficient evidence;
/// uniqueness is never assumed. UNSAT: the witness violates exactly one
/// clause, that clause is in the core, non-core slacks match, and the core is
/// a full polarity enumeration over one variable set.
pub fn verify_witness(inst: &GeneratedInstance) -> VerifyReport {
    let mut failures = Vec::new();
    let f = &inst.formula;
    if inst.params.m != f.num_clauses() {
        failures.push(VerifyFailure::ClauseCount {
            expected: inst.params.m,
            got: f.num_clauses(),
        });
    }
    let (Ok(eval), Ok(induced)) = (
        evaluate_formula(f, &inst.witness),
        induced_slack(f, &inst.witness),
    ) else {
        failures.push(VerifyFailure::WitnessLength {
            expected: f.num_vars(),
            got: inst.witness.len(),
        });
        return VerifyReport {
            label: inst.label,
            failures,
        };
    };
    let violated: Vec<usize> = (0..f.num_clauses()).filter(|&i| induced.0[i] < 0).collect();
    debug_assert_eq!(violated.len(), eval.violated_count);

    let core: BTreeSet<usize> = inst.core_indices.iter().copied().collect();
    match inst.label {
        Label::Sat => {
            failures.extend(
                violated
                    .iter()
                    .map(|&clause| VerifyFailure::ViolatedClause { clause }),
            );
            if !inst.core_indices.is_empty() {
                failures.push(VerifyFailure::CoreOnSat {
                    size: inst.core_indices.len(),
                });
            }
        }
        Label::Unsat => {
            if violated.len() != 1 {
                failures.push(VerifyFailure::ViolationCount {
                    violated: violated.clone(),
                });
            }
            failures.extend(
                violated
                    .iter()
                    .filter(|c| !core.contains(c))
                    .map(|&clause| VerifyFailure::ViolationOutsideCore { clause }),
            );
            check_core(f, &inst.core_indices, &mut failures);
        }
    }

    let planted_positions: Vec<usize> =
        (0..f.num_clauses()).filter(|i| !core.contains(i)).collect();
    let planted = &inst.planted_slacks.0;
    if planted.len() != planted_positions.len() {
        failures.push(VerifyFailure::SlackCount {
            expected: planted_positions.len(),
            got: planted.len(),
        });
    }
    for (&clause, &p) in planted_positions.iter().zip(planted) {
        if induced.0[clause] != p {
            failures.push(VerifyFailure::SlackMismatch {
                clause,
                planted: p,
                induced: induced.0[clause],
            });
        }
    }
    VerifyReport {
        label: inst.label,
        failures,
    }
}

/// Sorted variables of a clause and its polarity pattern over them (bit `j`
/// set when the literal on the `j`-th smallest variable is negative).
fn signature(f: &CnfFormula, clause: usize) -> (Vec<Var>, u64) {
    let mut lits: Vec<_> = f.clauses()[clause].lits().to_vec();
    lits.sort_by_key(|l| l.var());
    let pattern = lits
        .iter()
        .enumerate()
        .filter(|(_, l)| !l.is_positive())
        .fold(0u64, |acc, (j, _)| acc | 1 << j);
    (lits.iter().map(|l| l.var()).collect(), pattern)
}

fn check_core(f: &CnfFormula, indices: &[usize], failures: &mut Vec<VerifyFailure>) {
    if indices.is_empty() {
        failures.push(VerifyFailure::CoreMissing);
        return;
    }
    let mut seen_index = BTreeSet::new();
    let mut valid = Vec::new();
    for &index in indices {
        if index >= f.num_clauses() {
            failures.push(VerifyFailure::CoreIndexOutOfRange { index });
        } else if !seen_index.insert(index) {
            failures.push(VerifyFailure::CoreIndexRepeated { index });
        } else {
            valid.push(index);
        }
    }
    let Some(&first) = valid.first() else { return };
    let (vars, _) = signature(f, first);
    let width = vars.len();
    if width >= 64 || indices.len() != 1usize << width {
        failures.push(VerifyFailure::CoreSize {
            width,
            size: indices.len(),
        });
    }
    let mut patterns = BTreeSet::new();
    for &clause in &valid {
        let (v, p) = signature(f, clause);
        if v != vars {
            failures.push(VerifyFailure::CoreVariables { clause });
        } else if !patterns.insert(p) {
            failures.push(VerifyFailure::CorePatternRepeated { clause });
        }
    }
}

/// A complete polarity core found in a formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetectedCore {
    pub width: usize,
    pub vars: Vec<Var>,
    /// One clause per polarity pattern, sorted; the first occurrence is taken
    /// when a pattern repeats.
    pub clause_indices: Vec<usize>,
}

/// Finds `2^w` clauses over one `w`-variable set covering every polarity
/// pattern, for `w ≤ w_max`. Clauses are grouped by their sorted variable
/// set. Among several cores the narrowest wins, then the one whose first
/// clause comes earliest.
pub fn detect_core(f: &CnfFormula, w_max: usize) -> Option<DetectedCore> {
    let w_max = w_max.min(63);
    let mut groups: BTreeMap<Vec<Var>, BTreeMap<u64, usize>> = BTreeMap::new();
    for i in 0..f.num_clauses() {
        if f.clauses()[i].width() > w_max {
            continue;
        }
        let (vars, pattern) = signature(f, i);
        groups.entry(vars).or_default().entry(pattern).or_insert(i);
    }
    groups
        .into_iter()
        .filter(|(vars, patterns)| patterns.len() == 1usize << vars.len())
        .map(|(vars, patterns)| {
            let mut clause_indices: Vec<usize> = patterns.into_values().collect();
            clause_indices.sort_unstable();
            DetectedCore {
                width: vars.len(),
                vars,
                clause_indices,
            }
        })
        .min_by_key(|c| (c.width, c.clause_indices[0]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::{Assignment, Clause, Lit};
    use crate::encode::SlackVector;
    use crate::generate::InstanceParams;

    fn instance(
        n: usize,
        clauses: &[&[i64]],
        label: Label,
        x: &str,
        slacks: &[i64],
        core: &[usize],
    ) -> GeneratedInstance {
        let formula = CnfFormula::from_dimacs_clauses(n, clauses).unwrap();
        GeneratedInstance {
            params: InstanceParams {
                n,
                m: formula.num_clauses(),
                profile_id: String::new(),
            },
            formula,
            label,
            witness: Assignment::from_bit_string(x).unwrap(),
            planted_slacks: SlackVector(slacks.to_vec()),
            core_indices: core.to_vec(),
            seed: 0,
        }
    }

    fn worked_sat() -> GeneratedInstance {
        instance(3, &[&[1, -2, -3], &[3, 2]], Label::Sat, "101", &[1, 0], &[])
    }

    fn worked_unsat() -> GeneratedInstance {
        instance(
            4,
            &[&[1, 2], &[1, -2], &[-1, 2], &[-1, -2], &[3, 4]],
            Label::Unsat,
            "0010",
            &[0],
            &[0, 1, 2, 3],
        )
    }

    #[test]
    fn worked_sat_passes() {
        let r = verify_witness(&worked_sat());
        assert!(r.passed(), "{:?}", r.failures);
    }

    #[test]
    fn worked_unsat_passes_with_core_violation() {
        let inst = worked_unsat();
        assert!(verify_witness(&inst).passed());
        let s = induced_slack(&inst.formula, &inst.witness).unwrap();
        let violated: Vec<usize> = (0..5).filter(|&i| s.0[i] < 0).collect();
        assert_eq!(violated, vec![0]);
        assert!(inst.core_indices.contains(&violated[0]));
    }

    #[test]
    fn tampered_filler_polarity_reports_clause() {
        // Flipping x4 in the filler clause keeps it satisfied but moves its slack.
        let mut inst = worked_unsat();
        inst.formula =
            CnfFormula::from_dimacs_clauses(4, &[&[1, 2], &[1, -2], &[-1, 2], &[-1, -2], &[3, -4]])
                .unwrap();
        let r = verify_witness(&inst);
        assert_eq!(
            r.failures,
            vec![VerifyFailure::SlackMismatch {
                clause: 4,
                planted: 0,
                induced: 1
            }]
        );

        let mut inst = worked_sat();
        inst.formula = CnfFormula::from_dimacs_clauses(3, &[&[1, -2, 3], &[3, 2]]).unwrap();
        let r = verify_witness(&inst);
        assert_eq!(r.failures.len(), 1);
        assert_eq!(r.failures[0].clause(), Some(0));
    }

    #[test]
    fn sat_violation_named() {
        let mut inst = worked_sat();
        inst.witness = Assignment::from_bit_string("011").unwrap();
        let r = verify_witness(&inst);
        assert!(r
            .failures
            .contains(&VerifyFailure::ViolatedClause { clause: 0 }));
    }

    #[test]
    fn broken_cores_rejected() {
        let mut inst = worked_unsat();
        inst.core_indices = vec![0, 1, 2];
        inst.planted_slacks = SlackVector(vec![0, 0]);
        let r = verify_witness(&inst);
        assert!(r
            .failures
            .iter()
            .any(|f| matches!(f, VerifyFailure::CoreSize { width: 2, size: 3 })));

        let mut inst = worked_unsat();
        inst.core_indices = vec![0, 1, 2, 4];
        inst.planted_slacks = SlackVector(vec![-1]);
        let r = verify_witness(&inst);
        assert!(r
            .failures
            .contains(&VerifyFailure::CoreVariables { clause: 4 }));

        let mut inst = worked_unsat();
        inst.core_indices = vec![0, 1, 2, 9];
        assert!(verify_witness(&inst)
            .failures
            .contains(&VerifyFailure::CoreIndexOutOfRange { index: 9 }));
    }

    #[test]
    fn wrong_length_witness() {
        let mut inst = worked_sat();
        inst.witness = Assignment::from_bit_string("10").unwrap();
        assert_eq!(
            verify_witness(&inst).failures,
            vec![VerifyFailure::WitnessLength {
                expected: 3,
                got: 2
            }]
        );
    }

    #[test]
    fn detects_worked_core() {
        let inst = worked_unsat();
        let core = detect_core(&inst.formula, 12).unwrap();
        assert_eq!(core.width, 2);
        assert_eq!(core.vars, vec![Var::new(0), Var::new(1)]);
        assert_eq!(core.clause_indices, vec![0, 1, 2, 3]);
    }

    #[test]
    fn no_core_in_sat_or_partial() {
        assert_eq!(detect_core(&worked_sat().formula, 12), None);
        let f =
            CnfFormula::from_dimacs_clauses(4, &[&[1, 2], &[1, -2], &[-1, -2], &[3, 4]]).unwrap();
        assert_eq!(detect_core(&f, 12), None);
    }

    #[test]
    fn core_respects_width_cap_and_order() {
        let f = CnfFormula::from_dimacs_clauses(
            3,
            &[&[2, 1], &[-1, 2], &[3], &[1, -2], &[-3], &[-2, -1]],
        )
        .unwrap();
        let core = detect_core(&f, 12).unwrap();
        assert_eq!(core.width, 1);
        assert_eq!(core.clause_indices, vec![2, 4]);
        assert_eq!(detect_core(&f, 0), None);
        // Literal order inside a clause does not matter.
        let mut g = CnfFormula::empty(2);
        for c in [[1, 2], [2, -1], [-2, 1], [-2, -1]] {
            g.push(Clause::new(c.iter().map(|&d| Lit::from_dimacs(d).unwrap()).collect()).unwrap())
                .unwrap();
        }
        assert_eq!(detect_core(&g, 2).unwrap().clause_indices, vec![0, 1, 2, 3]);
    }
}
