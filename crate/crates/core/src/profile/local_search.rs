//! Greedy stochastic local search used to obtain witnesses (or near-witnesses)
//! for corpus files that come without one.

use rand::Rng;

use crate::cnf::{Assignment, Clause, CnfFormula, Var};

struct SearchState {
    /// Clause indices per literal code (`2 * var + negated`).
    occurrences: Vec<Vec<u32>>,
    true_count: Vec<u32>,
    violated: Vec<u32>,
    /// Position of each clause in `violated`, or `u32::MAX`.
    slot: Vec<u32>,
}

impl SearchState {
    fn new(f: &CnfFormula, x: &Assignment) -> Self {
        let mut occurrences = vec![Vec::new(); 2 * f.num_vars()];
        let mut true_count = vec![0u32; f.num_clauses()];
        for (i, c) in f.clauses().iter().enumerate() {
            for &l in c.lits() {
                occurrences[lit_code(l.var(), l.is_positive())].push(i as u32);
                true_count[i] += x.satisfies(l) as u32;
            }
        }
        let mut state = SearchState {
            occurrences,
            true_count,
            violated: Vec::new(),
            slot: vec![u32::MAX; f.num_clauses()],
        };
        for i in 0..f.num_clauses() {
            if state.true_count[i] == 0 {
                state.mark_violated(i);
            }
        }
        state
    }

    fn mark_violated(&mut self, c: usize) {
        self.slot[c] = self.violated.len() as u32;
        self.violated.push(c as u32);
    }

    fn unmark_violated(&mut self, c: usize) {
        let pos = self.slot[c] as usize;
        let last = self.violated.pop().expect("clause is listed");
        if last as usize != c {
            self.violated[pos] = last;
            self.slot[last as usize] = pos as u32;
        }
        self.slot[c] = u32::MAX;
    }

    /// Violated-clause count after flipping `v`.
    fn cost_after_flip(&self, v: Var, current: bool) -> usize {
        let breaks = self.occurrences[lit_code(v, current)]
            .iter()
            .filter(|&&c| self.true_count[c as usize] == 1)
            .count();
        let makes = self.occurrences[lit_code(v, !current)]
            .iter()
            .filter(|&&c| self.true_count[c as usize] == 0)
            .count();
        self.violated.len() + breaks - makes
    }

    fn flip(&mut self, x: &mut Assignment, v: Var) {
        let old = x.value(v);
        x.flip(v);
        let falsified = lit_code(v, old);
        for k in 0..self.occurrences[falsified].len() {
            let c = self.occurrences[falsified][k] as usize;
            self.true_count[c] -= 1;
            if self.true_count[c] == 0 {
                self.mark_violated(c);
            }
        }
        let satisfied = lit_code(v, !old);
        for k in 0..self.occurrences[satisfied].len() {
            let c = self.occurrences[satisfied][k] as usize;
            self.true_count[c] += 1;
            if self.true_count[c] == 1 {
                self.unmark_violated(c);
            }
        }
    }
}

/// Index of the literal of `v` that is true when `v` takes `value`.
fn lit_code(v: Var, value: bool) -> usize {
    2 * v.index() + (!value) as usize
}

/// Probability of a random-walk move in [`find_assignment`].
pub const DEFAULT_NOISE: f64 = 0.3;

/// Best-effort satisfying assignment with the default noise.
pub fn find_assignment<R: Rng + ?Sized>(f: &CnfFormula, max_flips: u64, rng: &mut R) -> Assignment {
    find_assignment_with_noise(f, max_flips, DEFAULT_NOISE, rng)
}

/// Starts from a uniform random assignment, then repeatedly picks a violated
/// clause uniformly. With probability `noise` it flips a uniform variable of
/// that clause, otherwise the variable that leaves the fewest violated
/// clauses (ties broken uniformly). Returns the best assignment seen within
/// `max_flips` flips. `noise = 0` is the purely greedy walk.
pub fn find_assignment_with_noise<R: Rng + ?Sized>(
    f: &CnfFormula,
    max_flips: u64,
    noise: f64,
    rng: &mut R,
) -> Assignment {
    let mut x = Assignment::new((0..f.num_vars()).map(|_| rng.random::<bool>()).collect());
    let mut state = SearchState::new(f, &x);
    let mut best = x.clone();
    let mut best_cost = state.violated.len();

    for _ in 0..max_flips {
        if state.violated.is_empty() {
            break;
        }
        let c = state.violated[rng.random_range(0..state.violated.len())] as usize;
        let clause = &f.clauses()[c];
        let v = if noise > 0.0 && rng.random_bool(noise) {
            clause.lits()[rng.random_range(0..clause.width())].var()
        } else {
            greedy_choice(&state, &x, clause, rng)
        };
        state.flip(&mut x, v);
        if state.violated.len() < best_cost {
            best_cost = state.violated.len();
            best.clone_from(&x);
        }
    }
    best
}

/// Variable of `clause` whose flip leaves the fewest violated clauses.
fn greedy_choice<R: Rng + ?Sized>(
    state: &SearchState,
    x: &Assignment,
    clause: &Clause,
    rng: &mut R,
) -> Var {
    let mut chosen = None;
    let mut chosen_cost = usize::MAX;
    let mut ties = 0u32;
    for v in clause.vars() {
        let cost = state.cost_after_flip(v, x.value(v));
        if cost < chosen_cost {
            chosen_cost = cost;
            chosen = Some(v);
            ties = 1;
        } else if cost == chosen_cost {
            ties += 1;
            if rng.random_range(0..ties) == 0 {
                chosen = Some(v);
            }
        }
    }
    chosen.expect("clauses are nonempty")
}
