mod common;

use proptest::prelude::*;
use satforge_core::cnf::{parse_dimacs_with, ParseMode};
use satforge_core::{parse_dimacs, write_dimacs, CnfFormula};

fn formula() -> impl Strategy<Value = CnfFormula> {
    (1usize..12).prop_flat_map(|n| {
        let clause =
            prop::collection::vec((1..=n as i64, any::<bool>()), 1..=n.min(6)).prop_map(|lits| {
                let mut seen = Vec::new();
                lits.into_iter()
                    .filter(|(v, _)| {
                        let fresh = !seen.contains(v);
                        seen.push(*v);
                        fresh
                    })
                    .map(|(v, pos)| if pos { v } else { -v })
                    .collect::<Vec<i64>>()
            });
        prop::collection::vec(clause, 0..25).prop_map(move |clauses| {
            let refs: Vec<&[i64]> = clauses.iter().map(|c| c.as_slice()).collect();
            CnfFormula::from_dimacs_clauses(n, &refs).unwrap()
        })
    })
}

/// Same formula with comments, irregular whitespace and clauses split or
/// joined across lines.
fn noisy_text(f: &CnfFormula, breaks: &[u8]) -> String {
    let mut out = format!(
        "c generated\nc   p cnf 0 0 inside a comment\n p  cnf {}\t{}\n",
        f.num_vars(),
        f.num_clauses()
    );
    let mut k = 0;
    for c in common::dimacs_clauses(f) {
        for l in c {
            out.push_str(&l.to_string());
            out.push_str(match breaks[k % breaks.len()] % 4 {
                0 => "\n",
                1 => "\t",
                2 => "   ",
                _ => " ",
            });
            k += 1;
        }
        out.push_str(if breaks[k % breaks.len()] % 3 == 0 {
            "0 "
        } else {
            "0\n"
        });
        k += 1;
    }
    out
}

proptest! {
    #[test]
    fn write_then_parse_is_identity(f in formula()) {
        let text = write_dimacs(&f);
        prop_assert_eq!(parse_dimacs(text.as_bytes()).unwrap(), f);
    }

    #[test]
    fn noisy_text_reaches_fixpoint(f in formula(), breaks in prop::collection::vec(any::<u8>(), 1..16)) {
        let text = noisy_text(&f, &breaks);
        let once = parse_dimacs(text.as_bytes()).unwrap();
        prop_assert_eq!(&once, &f);
        let canonical = write_dimacs(&once);
        let twice = parse_dimacs(canonical.as_bytes()).unwrap();
        prop_assert_eq!(&twice, &once);
        prop_assert_eq!(write_dimacs(&twice), canonical);
    }

    #[test]
    fn lenient_agrees_on_valid_input(f in formula()) {
        let parsed = parse_dimacs_with(write_dimacs(&f).as_bytes(), ParseMode::Lenient).unwrap();
        prop_assert!(parsed.warnings.is_empty());
        prop_assert_eq!(parsed.formula, f);
    }
}

#[test]
fn canonical_examples() {
    let f = CnfFormula::from_dimacs_clauses(2, &[&[1, -2]]).unwrap();
    assert_eq!(write_dimacs(&f), "p cnf 2 1\n1 -2 0\n");
    assert_eq!(write_dimacs(&CnfFormula::empty(3)), "p cnf 3 0\n");
}
