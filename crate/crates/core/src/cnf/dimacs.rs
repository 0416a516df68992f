//! DIMACS CNF reading and writing.
//!
//! The writer emits one canonical form: a single `p cnf <n> <m>` header
//! followed by one clause per line, literals in stored order, each line
//! terminated by ` 0\n`. Reading that output back yields the same formula.
//!
//! The reader has two modes. [`ParseMode::Strict`] (the default) rejects
//! anything off-contract. [`ParseMode::Lenient`] accepts the usual defects of
//! real benchmark files and reports each repair as a warning.

use std::io::{self, Write};

use thiserror::Error;

use super::{Clause, CnfFormula, Lit, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ParseMode {
    #[default]
    Strict,
    Lenient,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DimacsError {
    #[error("line {line}: clause data before the `p cnf` header")]
    MissingHeader { line: usize },
    #[error("input has no `p cnf` header")]
    NoHeader,
    #[error("line {line}: second `p cnf` header")]
    DuplicateHeader { line: usize },
    #[error("line {line}: malformed header `{text}`")]
    BadHeader { line: usize, text: String },
    #[error("line {line}: `{token}` is not an integer literal")]
    BadToken { line: usize, token: String },
    #[error("line {line}: literal {lit} exceeds declared variable count {num_vars}")]
    VariableOutOfRange {
        line: usize,
        lit: i64,
        num_vars: usize,
    },
    #[error("line {line}: empty clause")]
    EmptyClause { line: usize },
    #[error("line {line}: variable {var} repeated within a clause")]
    RepeatedVariable { line: usize, var: u32 },
    #[error("header declares {declared} clauses but {found} were found")]
    ClauseCountMismatch { declared: usize, found: usize },
    #[error("last clause is missing its `0` terminator")]
    UnterminatedClause,
    #[error("input is not valid UTF-8")]
    Encoding,
}

/// Parse result together with the repairs performed in lenient mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parsed {
    pub formula: CnfFormula,
    pub warnings: Vec<String>,
}

/// Strict parse.
pub fn parse_dimacs(input: &[u8]) -> Result<CnfFormula, DimacsError> {
    parse_dimacs_with(input, ParseMode::Strict).map(|p| p.formula)
}

pub fn parse_dimacs_with(input: &[u8], mode: ParseMode) -> Result<Parsed, DimacsError> {
    let text = std::str::from_utf8(input).map_err(|_| DimacsError::Encoding)?;
    let lenient = mode == ParseMode::Lenient;
    let mut warnings = Vec::new();
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Clause> = Vec::new();
    let mut pending: Vec<Lit> = Vec::new();
    let mut pending_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(DimacsError::DuplicateHeader { line: line_no });
            }
            header = Some(parse_header(line, line_no)?);
            continue;
        }
        if lenient && line.starts_with('%') {
            warnings.push(format!(
                "line {line_no}: `%` marker, ignoring the rest of the input"
            ));
            break;
        }
        let Some((num_vars, _)) = header else {
            return Err(DimacsError::MissingHeader { line: line_no });
        };
        for token in line.split_ascii_whitespace() {
            let value: i64 = token.parse().map_err(|_| DimacsError::BadToken {
                line: line_no,
                token: token.to_owned(),
            })?;
            if value == 0 {
                if pending.is_empty() {
                    return Err(DimacsError::EmptyClause { line: line_no });
                }
                let lits = std::mem::take(&mut pending);
                if let Some(clause) = finish_clause(lits, pending_line, lenient, &mut warnings)? {
                    clauses.push(clause);
                }
                continue;
            }
            if value.unsigned_abs() > num_vars as u64 {
                return Err(DimacsError::VariableOutOfRange {
                    line: line_no,
                    lit: value,
                    num_vars,
                });
            }
            if pending.is_empty() {
                pending_line = line_no;
            }
            // Range-checked above, so the conversion cannot fail.
            pending.push(Lit::from_dimacs(value).expect("nonzero literal"));
        }
    }

    let (num_vars, declared) = header.ok_or(DimacsError::NoHeader)?;
    if !pending.is_empty() {
        if !lenient {
            return Err(DimacsError::UnterminatedClause);
        }
        warnings.push(format!(
            "line {pending_line}: final clause has no `0` terminator"
        ));
        if let Some(clause) = finish_clause(pending, pending_line, lenient, &mut warnings)? {
            clauses.push(clause);
        }
    }
    if clauses.len() != declared {
        if !lenient {
            return Err(DimacsError::ClauseCountMismatch {
                declared,
                found: clauses.len(),
            });
        }
        warnings.push(format!(
            "header declares {declared} clauses but {} were parsed",
            clauses.len()
        ));
    }

    let mut formula = CnfFormula::empty(num_vars);
    for c in clauses {
        formula.push_unchecked(c);
    }
    Ok(Parsed { formula, warnings })
}

fn parse_header(line: &str, line_no: usize) -> Result<(usize, usize), DimacsError> {
    let bad = || DimacsError::BadHeader {
        line: line_no,
        text: line.to_owned(),
    };
    let mut parts = line.split_ascii_whitespace();
    if parts.next() != Some("p") || parts.next() != Some("cnf") {
        return Err(bad());
    }
    let n = parts.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
    let m = parts.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
    if parts.next().is_some() {
        return Err(bad());
    }
    Ok((n, m))
}

/// Validates a clause body. In lenient mode repeated literals are dropped and
/// tautological clauses are discarded (`Ok(None)`).
fn finish_clause(
    mut lits: Vec<Lit>,
    line: usize,
    lenient: bool,
    warnings: &mut Vec<String>,
) -> Result<Option<Clause>, DimacsError> {
    match super::first_repeated_var(&lits) {
        None => return Ok(Some(Clause::from_distinct(lits))),
        Some(var) if !lenient => {
            return Err(DimacsError::RepeatedVariable {
                line,
                var: var.to_dimacs(),
            })
        }
        Some(_) => {}
    }
    let mut seen: Vec<Lit> = Vec::with_capacity(lits.len());
    lits.retain(|l| {
        if seen.contains(l) {
            false
        } else {
            seen.push(*l);
            true
        }
    });
    let tautology: Option<Var> = lits
        .iter()
        .find(|l| lits.contains(&l.negate()))
        .map(|l| l.var());
    if let Some(var) = tautology {
        warnings.push(format!(
            "line {line}: clause contains both polarities of variable {}, dropped",
            var.to_dimacs()
        ));
        return Ok(None);
    }
    warnings.push(format!("line {line}: repeated literal removed"));
    Ok(Some(Clause::from_distinct(lits)))
}

/// Canonical DIMACS text for `f`.
pub fn write_dimacs(f: &CnfFormula) -> String {
    let mut out = Vec::with_capacity(16 + f.num_literals() * 4 + f.num_clauses() * 2);
    write_dimacs_to(f, &mut out).expect("writing to a Vec cannot fail");
    String::from_utf8(out).expect("DIMACS output is ASCII")
}

pub fn write_dimacs_to<W: Write>(f: &CnfFormula, mut w: W) -> io::Result<()> {
    writeln!(w, "p cnf {} {}", f.num_vars(), f.num_clauses())?;
    for c in f.clauses() {
        for l in c.lits() {
            write!(w, "{} ", l.to_dimacs())?;
        }
        w.write_all(b"0\n")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lenient(text: &str) -> Parsed {
        parse_dimacs_with(text.as_bytes(), ParseMode::Lenient).unwrap()
    }

    #[test]
    fn parses_two_clause_example() {
        let f = parse_dimacs(b"p cnf 3 2\n1 -2 0\n2 3 0\n").unwrap();
        assert_eq!(
            f,
            CnfFormula::from_dimacs_clauses(3, &[&[1, -2], &[2, 3]]).unwrap()
        );
    }

    #[test]
    fn parses_unit_with_comment() {
        let f = parse_dimacs(b"c comment\np cnf 1 1\n1 0").unwrap();
        assert_eq!(f.num_vars(), 1);
        assert_eq!(f, CnfFormula::from_dimacs_clauses(1, &[&[1]]).unwrap());
    }

    #[test]
    fn clauses_may_span_lines() {
        let f = parse_dimacs(b"p cnf 4 2\n1 -2\n 3 0 4\n0\n").unwrap();
        assert_eq!(
            f,
            CnfFormula::from_dimacs_clauses(4, &[&[1, -2, 3], &[4]]).unwrap()
        );
    }

    #[test]
    fn strict_rejects_count_mismatch() {
        let err = parse_dimacs(b"p cnf 3 2\n1 0\n2 0\n3 0\n").unwrap_err();
        assert_eq!(
            err,
            DimacsError::ClauseCountMismatch {
                declared: 2,
                found: 3
            }
        );
        let p = lenient("p cnf 3 2\n1 0\n2 0\n3 0\n");
        assert_eq!(p.formula.num_clauses(), 3);
        assert_eq!(p.warnings.len(), 1);
    }

    #[test]
    fn header_errors() {
        assert_eq!(
            parse_dimacs(b"1 2 0\n").unwrap_err(),
            DimacsError::MissingHeader { line: 1 }
        );
        assert_eq!(
            parse_dimacs(b"c only\n").unwrap_err(),
            DimacsError::NoHeader
        );
        assert_eq!(
            parse_dimacs(b"p cnf 1 0\np cnf 1 0\n").unwrap_err(),
            DimacsError::DuplicateHeader { line: 2 }
        );
        assert!(matches!(
            parse_dimacs(b"p cnf x 1\n"),
            Err(DimacsError::BadHeader { .. })
        ));
        assert!(matches!(
            parse_dimacs(b"p wcnf 1 1\n"),
            Err(DimacsError::BadHeader { .. })
        ));
    }

    #[test]
    fn body_errors() {
        assert!(matches!(
            parse_dimacs(b"p cnf 2 1\n1 3 0\n"),
            Err(DimacsError::VariableOutOfRange { lit: 3, .. })
        ));
        assert!(matches!(
            parse_dimacs(b"p cnf 2 1\n1 a 0\n"),
            Err(DimacsError::BadToken { .. })
        ));
        assert_eq!(
            parse_dimacs(b"p cnf 2 2\n1 0\n0\n").unwrap_err(),
            DimacsError::EmptyClause { line: 3 }
        );
        assert_eq!(
            parse_dimacs(b"p cnf 2 1\n1 2\n").unwrap_err(),
            DimacsError::UnterminatedClause
        );
    }

    #[test]
    fn repeated_variables() {
        assert_eq!(
            parse_dimacs(b"p cnf 2 1\n1 2 1 0\n").unwrap_err(),
            DimacsError::RepeatedVariable { line: 2, var: 1 }
        );
        let p = lenient("p cnf 2 1\n1 2 1 0\n");
        assert_eq!(
            p.formula,
            CnfFormula::from_dimacs_clauses(2, &[&[1, 2]]).unwrap()
        );
        assert_eq!(p.warnings.len(), 1);

        // A tautology is dropped, which then also trips the count check.
        let p = lenient("p cnf 2 2\n1 -1 2 0\n2 0\n");
        assert_eq!(
            p.formula,
            CnfFormula::from_dimacs_clauses(2, &[&[2]]).unwrap()
        );
        assert_eq!(p.warnings.len(), 2);
    }

    #[test]
    fn lenient_satlib_trailer() {
        let p = lenient("p cnf 2 1\n1 -2 0\n%\n0\n\n");
        assert_eq!(p.formula.num_clauses(), 1);
        assert!(parse_dimacs(b"p cnf 2 1\n1 -2 0\n%\n0\n").is_err());
    }

    #[test]
    fn writes_canonical_form() {
        let f = CnfFormula::from_dimacs_clauses(2, &[&[1, -2]]).unwrap();
        assert_eq!(write_dimacs(&f), "p cnf 2 1\n1 -2 0\n");
        assert_eq!(write_dimacs(&CnfFormula::empty(3)), "p cnf 3 0\n");
    }

    #[test]
    fn literal_order_is_preserved() {
        let f = CnfFormula::from_dimacs_clauses(3, &[&[3, -1, 2]]).unwrap();
        let text = write_dimacs(&f);
        assert_eq!(text, "p cnf 3 1\n3 -1 2 0\n");
        assert_eq!(parse_dimacs(text.as_bytes()).unwrap(), f);
    }
}
