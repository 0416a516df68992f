//! Certified instance generation without solver calls.
//!
//! SAT instances are built around a uniform planted assignment `x*`: every
//! clause draws a width, distinct variables (already shuffled) and a target
//! slack `s*`, then the first `s* + 1` variables get the polarity that makes
//! their literal true under `x*` and the rest the falsifying polarity. The
//! result is satisfied by `x*` with induced slack exactly `s*`.
//!
//! UNSAT instances embed a polarity core, all `2^w` sign patterns over `w`
//! variables, which every assignment violates exactly once, and pad it with
//! filler clauses planted the same way against `x*`. The final clause order
//! is shuffled and core positions are recorded.
//!
//! Both run in `O(Σ k_i)` time after an `O(n)` per-instance setup.

pub mod dataset;
pub mod random;

use std::collections::HashSet;

use rand::seq::{index, SliceRandom};
use rand::Rng;
use thiserror::Error;

use crate::cnf::{Assignment, Clause, CnfFormula, Label, Lit, Var};
use crate::encode::SlackVector;
use crate::profile::{BenchmarkProfile, InstanceSampler, ProfileError};
use crate::rng::{seeded, SeededRng};

pub use dataset::{generate_dataset, DatasetError, DatasetSpec, ManifestRow};

pub const DEFAULT_W_MAX: usize = 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenerateError {
    #[error("instance needs at least one variable")]
    NoVariables,
    #[error("core width {w} exceeds the cap of {w_max}")]
    CoreTooWide { w: usize, w_max: usize },
    #[error("core width must be at least 1")]
    EmptyCore,
    #[error("{m} clauses cannot hold a core of {core} clauses")]
    CoreExceedsClauses { m: usize, core: usize },
    #[error("core width {w} exceeds the {n} available variables")]
    CoreExceedsVars { w: usize, n: usize },
    #[error("core variables are not distinct")]
    DuplicateCoreVars,
    #[error("profile incompatible with instance: {0}")]
    Profile(#[from] ProfileError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorConfig {
    /// Largest admissible core width.
    pub w_max: usize,
    /// Resample planted clauses that repeat an existing clause.
    pub dedupe: bool,
    pub dedupe_retries: usize,
    /// Keep core variables out of UNSAT filler clauses.
    pub exclude_core_vars: bool,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            w_max: DEFAULT_W_MAX,
            dedupe: false,
            dedupe_retries: 16,
            exclude_core_vars: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceParams {
    pub n: usize,
    pub m: usize,
    pub profile_id: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedInstance {
    pub formula: CnfFormula,
    pub label: Label,
    /// Planted assignment `x*`.
    pub witness: Assignment,
    /// Planted slacks of the non-core clauses, in formula order.
    pub planted_slacks: SlackVector,
    /// Sorted positions of the core clauses; empty for SAT.
    pub core_indices: Vec<usize>,
    pub seed: u64,
    pub params: InstanceParams,
}

impl GeneratedInstance {
    /// Positions of the non-core clauses, in formula order.
    pub fn filler_indices(&self) -> Vec<usize> {
        let mut core = self.core_indices.iter().peekable();
        (0..self.formula.num_clauses())
            .filter(|i| {
                if core.peek() == Some(&i) {
                    core.next();
                    false
                } else {
                    true
                }
            })
            .collect()
    }
}

/// The random choices the generator makes, in the order it makes them.
///
/// [`ProfileDraws`] is the production source; tests substitute scripted
/// sources to pin every choice.
pub trait DrawSource {
    fn witness(&mut self, n: usize) -> Assignment;
    /// `w` distinct core variables out of `n`.
    fn core_vars(&mut self, n: usize, w: usize) -> Vec<Var>;
    /// Called once before the planted clauses are drawn.
    fn start_clauses(
        &mut self,
        n: usize,
        label: Label,
        excluded: &[Var],
    ) -> Result<(), GenerateError>;
    fn width(&mut self) -> usize;
    /// Appends `k` distinct variables in their planting order.
    fn variables(&mut self, k: usize, out: &mut Vec<Var>) -> Result<(), GenerateError>;
    fn slack(&mut self, k: usize) -> usize;
    /// Shuffles the final clause order in place.
    fn shuffle_order(&mut self, order: &mut [usize]);
}

/// Draws from a [`BenchmarkProfile`] with a seeded generator.
pub struct ProfileDraws<'p, R: Rng> {
    profile: &'p BenchmarkProfile,
    rng: R,
    sampler: Option<InstanceSampler<'p>>,
}

impl<'p, R: Rng> ProfileDraws<'p, R> {
    pub fn new(profile: &'p BenchmarkProfile, rng: R) -> Self {
        ProfileDraws {
            profile,
            rng,
            sampler: None,
        }
    }
}

impl<R: Rng> DrawSource for ProfileDraws<'_, R> {
    fn witness(&mut self, n: usize) -> Assignment {
        Assignment::new((0..n).map(|_| self.rng.random::<bool>()).collect())
    }

    fn core_vars(&mut self, n: usize, w: usize) -> Vec<Var> {
        let mut vars: Vec<Var> = index::sample(&mut self.rng, n, w)
            .into_iter()
            .map(|j| Var::new(j as u32))
            .collect();
        vars.sort_unstable();
        vars
    }

    fn start_clauses(
        &mut self,
        n: usize,
        label: Label,
        excluded: &[Var],
    ) -> Result<(), GenerateError> {
        self.sampler = Some(InstanceSampler::new(
            self.profile,
            n,
            label,
            excluded,
            &mut self.rng,
        )?);
        Ok(())
    }

    fn width(&mut self) -> usize {
        let sampler = self.sampler.as_ref().expect("start_clauses was called");
        sampler.width(&mut self.rng)
    }

    fn variables(&mut self, k: usize, out: &mut Vec<Var>) -> Result<(), GenerateError> {
        let sampler = self.sampler.as_mut().expect("start_clauses was called");
        sampler.variables.sample(k, &mut self.rng, out)?;
        Ok(())
    }

    fn slack(&mut self, k: usize) -> usize {
        let sampler = self.sampler.as_mut().expect("start_clauses was called");
        sampler.slack(k, &mut self.rng)
    }

    fn shuffle_order(&mut self, order: &mut [usize]) {
        order.shuffle(&mut self.rng);
    }
}

/// Clause over `vars` (in order) whose first `slack + 1` literals are true under `x`
/// and the remaining literals false.
pub fn plant_clause(vars: &[Var], slack: usize, x: &Assignment) -> Clause {
    assert!(
        slack < vars.len(),
        "slack {slack} needs more than {} variables",
        vars.len()
    );
    let lits = vars
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let make_true = i <= slack;
            Lit::new(v, x.value(v) == make_true)
        })
        .collect();
    Clause::from_distinct(lits)
}

/// All `2^w` polarity patterns over `vars`, in binary-counter order: in clause
/// `c`, the literal at position `j` is negated iff bit `w − 1 − j` of `c` is set.
pub fn build_core(vars: &[Var], w_max: usize) -> Result<Vec<Clause>, GenerateError> {
    let w = vars.len();
    if w == 0 {
        return Err(GenerateError::EmptyCore);
    }
    if w > w_max || w >= usize::BITS as usize {
        return Err(GenerateError::CoreTooWide { w, w_max });
    }
    let mut sorted = vars.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|p| p[0] == p[1]) {
        return Err(GenerateError::DuplicateCoreVars);
    }
    Ok((0..1usize << w)
        .map(|c| {
            Clause::from_distinct(
                vars.iter()
                    .enumerate()
                    .map(|(j, &v)| Lit::new(v, c >> (w - 1 - j) & 1 == 0))
                    .collect(),
            )
        })
        .collect())
}

fn clause_key(c: &Clause) -> Vec<Lit> {
    let mut key = c.lits().to_vec();
    key.sort_unstable();
    key
}

/// Plants `count` clauses against `x`, appending clauses and slacks.
fn plant_clauses<D: DrawSource>(
    draws: &mut D,
    x: &Assignment,
    count: usize,
    config: &GeneratorConfig,
    seen: &mut HashSet<Vec<Lit>>,
    clauses: &mut Vec<Clause>,
    slacks: &mut Vec<i64>,
) -> Result<(), GenerateError> {
    let mut vars = Vec::new();
    for _ in 0..count {
        let mut attempt = 0;
        loop {
            let k = draws.width();
            vars.clear();
            draws.variables(k, &mut vars)?;
            let s = draws.slack(k);
            let clause = plant_clause(&vars, s, x);
            if config.dedupe {
                let key = clause_key(&clause);
                if seen.contains(&key) && attempt < config.dedupe_retries {
                    attempt += 1;
                    continue;
                }
                seen.insert(key);
            }
            clauses.push(clause);
            slacks.push(s as i64);
            break;
        }
    }
    Ok(())
}

fn params(n: usize, m: usize, profile_id: &str) -> InstanceParams {
    InstanceParams {
        n,
        m,
        profile_id: profile_id.to_owned(),
    }
}

pub fn generate_sat_with<D: DrawSource>(
    n: usize,
    m: usize,
    draws: &mut D,
    config: &GeneratorConfig,
) -> Result<(CnfFormula, Assignment, SlackVector), GenerateError> {
    if n == 0 {
        return Err(GenerateError::NoVariables);
    }
    let x = draws.witness(n);
    draws.start_clauses(n, Label::Sat, &[])?;
    let mut clauses = Vec::with_capacity(m);
    let mut slacks = Vec::with_capacity(m);
    plant_clauses(
        draws,
        &x,
        m,
        config,
        &mut HashSet::new(),
        &mut clauses,
        &mut slacks,
    )?;
    let mut f = CnfFormula::empty(n);
    for c in clauses {
        f.push_unchecked(c);
    }
    Ok((f, x, SlackVector(slacks)))
}

pub fn generate_unsat_with<D: DrawSource>(
    n: usize,
    m: usize,
    w: usize,
    draws: &mut D,
    config: &GeneratorConfig,
) -> Result<(CnfFormula, Assignment, SlackVector, Vec<usize>), GenerateError> {
    if n == 0 {
        return Err(GenerateError::NoVariables);
    }
    if w == 0 {
        return Err(GenerateError::EmptyCore);
    }
    if w > config.w_max {
        return Err(GenerateError::CoreTooWide {
            w,
            w_max: config.w_max,
        });
    }
    if w > n {
        return Err(GenerateError::CoreExceedsVars { w, n });
    }
    let core_size = 1usize << w;
    if m < core_size {
        return Err(GenerateError::CoreExceedsClauses { m, core: core_size });
    }
    let x = draws.witness(n);
    let core_vars = draws.core_vars(n, w);
    let core = build_core(&core_vars, config.w_max)?;
    let excluded: &[Var] = if config.exclude_core_vars {
        &core_vars
    } else {
        &[]
    };
    let filler_count = m - core_size;
    if filler_count > 0 {
        draws.start_clauses(n, Label::Unsat, excluded)?;
    }

    let mut seen = HashSet::new();
    if config.dedupe {
        seen.extend(core.iter().map(clause_key));
    }
    let mut clauses = core;
    let mut filler_slacks = Vec::with_capacity(filler_count);
    plant_clauses(
        draws,
        &x,
        filler_count,
        config,
        &mut seen,
        &mut clauses,
        &mut filler_slacks,
    )?;

    // order[p] = original index of the clause placed at position p.
    let mut order: Vec<usize> = (0..m).collect();
    draws.shuffle_order(&mut order);
    let mut f = CnfFormula::empty(n);
    let mut core_indices = Vec::with_capacity(core_size);
    let mut planted = Vec::with_capacity(filler_count);
    let mut slots: Vec<Option<Clause>> = clauses.into_iter().map(Some).collect();
    for (pos, &orig) in order.iter().enumerate() {
        f.push_unchecked(slots[orig].take().expect("order is a permutation"));
        if orig < core_size {
            core_indices.push(pos);
        } else {
            planted.push(filler_slacks[orig - core_size]);
        }
    }
    Ok((f, x, SlackVector(planted), core_indices))
}

/// SAT instance of `n` variables and `m` clauses drawn from `profile` with `seed`.
pub fn generate_sat(
    n: usize,
    m: usize,
    profile: &BenchmarkProfile,
    seed: u64,
    config: &GeneratorConfig,
) -> Result<GeneratedInstance, GenerateError> {
    let mut draws = ProfileDraws::new(profile, seeded(seed));
    let (formula, witness, planted_slacks) = generate_sat_with(n, m, &mut draws, config)?;
    Ok(GeneratedInstance {
        formula,
        label: Label::Sat,
        witness,
        planted_slacks,
        core_indices: Vec::new(),
        seed,
        params: params(n, m, &profile.profile_id()),
    })
}

/// UNSAT instance with a core over the profile's dominant width.
pub fn generate_unsat(
    n: usize,
    m: usize,
    profile: &BenchmarkProfile,
    seed: u64,
    config: &GeneratorConfig,
) -> Result<GeneratedInstance, GenerateError> {
    let mut draws = ProfileDraws::new(profile, seeded(seed));
    let (formula, witness, planted_slacks, core_indices) =
        generate_unsat_with(n, m, profile.dominant_width, &mut draws, config)?;
    Ok(GeneratedInstance {
        formula,
        label: Label::Unsat,
        witness,
        planted_slacks,
        core_indices,
        seed,
        params: params(n, m, &profile.profile_id()),
    })
}

pub fn generate(
    label: Label,
    n: usize,
    m: usize,
    profile: &BenchmarkProfile,
    seed: u64,
    config: &GeneratorConfig,
) -> Result<GeneratedInstance, GenerateError> {
    match label {
        Label::Sat => generate_sat(n, m, profile, seed, config),
        Label::Unsat => generate_unsat(n, m, profile, seed, config),
    }
}

/// Reusable generator for timing loops: the profile id is computed once.
pub struct Generator<'p> {
    profile: &'p BenchmarkProfile,
    config: GeneratorConfig,
}

impl<'p> Generator<'p> {
    pub fn new(profile: &'p BenchmarkProfile, config: GeneratorConfig) -> Self {
        Generator { profile, config }
    }

    pub fn sat(
        &self,
        n: usize,
        m: usize,
        rng: &mut SeededRng,
    ) -> Result<CnfFormula, GenerateError> {
        let mut draws = ProfileDraws::new(self.profile, rng);
        Ok(generate_sat_with(n, m, &mut draws, &self.config)?.0)
    }

    pub fn unsat(
        &self,
        n: usize,
        m: usize,
        rng: &mut SeededRng,
    ) -> Result<CnfFormula, GenerateError> {
        let mut draws = ProfileDraws::new(self.profile, rng);
        Ok(generate_unsat_with(n, m, self.profile.dominant_width, &mut draws, &self.config)?.0)
    }
}
