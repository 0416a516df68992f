//! Target corpus statistics and the samplers that consume them.
//!
//! A [`BenchmarkProfile`] records what the generator must reproduce: the
//! clause-width distribution, a non-parametric rank-frequency profile of
//! variable occurrences, and per-width slack distributions for SAT and UNSAT
//! instances. Profiles are versioned JSON documents (see `docs/formats.md`).

mod histogram;
mod local_search;
mod sampler;

use std::collections::BTreeMap;

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::cnf::{evaluate_formula, Assignment, CnfError, CnfFormula, Label};
use crate::encode::induced_slack;
use crate::rng::{derive_seed, seeded};

pub use histogram::{total_variation, SlackHistogram};
pub use local_search::{find_assignment, find_assignment_with_noise, DEFAULT_NOISE};
pub use sampler::{
    sample_slack, sample_width, InstanceSampler, SlackSampler, VariableSampler, WidthSampler,
};

pub const PROFILE_VERSION: u32 = 1;
const TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProfileError {
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("corpus contains no clauses")]
    NoClauses,
    #[error("entry {index}: supplied witness violates {violated} clause(s)")]
    BadWitness { index: usize, violated: usize },
    #[error("entry {index}: {source}")]
    Entry { index: usize, source: CnfError },
    #[error("width distribution is empty")]
    EmptyWidths,
    #[error("no clause width in the profile fits {available} variables")]
    NoFeasibleWidth { available: usize },
    #[error("cannot pick {k} distinct variables out of {available}")]
    TooFewVariables { k: usize, available: usize },
    #[error("invalid profile: {0}")]
    Invalid(String),
    #[error("unsupported profile version {0}")]
    Version(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeRange {
    pub n_min: usize,
    pub n_max: usize,
    pub m_min: usize,
    pub m_max: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkProfile {
    pub version: u32,
    /// Probability of each clause width.
    pub width_dist: BTreeMap<usize, f64>,
    /// Rank-frequency profile of variable occurrences, descending, summing to one.
    pub skew_profile: Vec<f64>,
    /// SAT slack distribution per width; entry `k` has length `k`.
    pub sat_slack: BTreeMap<usize, Vec<f64>>,
    /// UNSAT slack distribution per width, measured on satisfied clauses.
    pub unsat_slack: BTreeMap<usize, Vec<f64>>,
    pub dominant_width: usize,
    /// Mean clause-to-variable ratio.
    pub alpha: f64,
    pub size_range: SizeRange,
}

impl BenchmarkProfile {
    /// Phase-transition ratio of random 3-SAT.
    pub const PHASE_TRANSITION_ALPHA: f64 = 4.27;

    /// Profile of uniform random k-SAT planted at a uniform assignment.
    ///
    /// Each literal of a random clause is true with probability ½, so a clause
    /// that is satisfied has `t ≥ 1` true literals with probability
    /// `C(k,t) / (2^k − 1)`; the slack is `t − 1`.
    pub fn uniform_ksat(k: usize, alpha: f64) -> Self {
        assert!((1..63).contains(&k));
        let denom = ((1u64 << k) - 1) as f64;
        let mut slack = Vec::with_capacity(k);
        let mut binom = 1.0f64;
        for t in 1..=k {
            binom = binom * (k + 1 - t) as f64 / t as f64;
            slack.push(binom / denom);
        }
        BenchmarkProfile {
            version: PROFILE_VERSION,
            width_dist: BTreeMap::from([(k, 1.0)]),
            skew_profile: vec![1.0],
            sat_slack: BTreeMap::from([(k, slack.clone())]),
            unsat_slack: BTreeMap::from([(k, slack)]),
            dominant_width: k,
            alpha,
            size_range: SizeRange {
                n_min: 10,
                n_max: 40,
                m_min: (10.0 * alpha).round() as usize,
                m_max: (40.0 * alpha).round() as usize,
            },
        }
    }

    /// The default target: random 3-SAT at the phase transition.
    pub fn random_3sat() -> Self {
        Self::uniform_ksat(3, Self::PHASE_TRANSITION_ALPHA)
    }

    pub fn validate(&self) -> Result<(), ProfileError> {
        let bad = |msg: String| Err(ProfileError::Invalid(msg));
        if self.version != PROFILE_VERSION {
            return Err(ProfileError::Version(self.version));
        }
        if self.width_dist.is_empty() {
            return Err(ProfileError::EmptyWidths);
        }
        if self.width_dist.contains_key(&0) {
            return bad("width 0 in width distribution".into());
        }
        check_distribution("width_dist", self.width_dist.values())?;
        if !self.skew_profile.is_empty() {
            check_distribution("skew_profile", self.skew_profile.iter())?;
        }
        for (name, table) in [
            ("sat_slack", &self.sat_slack),
            ("unsat_slack", &self.unsat_slack),
        ] {
            for (&k, dist) in table {
                if dist.len() != k {
                    return bad(format!("{name}[{k}] has {} entries", dist.len()));
                }
                check_distribution(&format!("{name}[{k}]"), dist.iter())?;
            }
        }
        if self.dominant_width == 0 {
            return bad("dominant width is 0".into());
        }
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return bad(format!("alpha {}", self.alpha));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("profiles always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, ProfileError> {
        let p: BenchmarkProfile =
            serde_json::from_str(text).map_err(|e| ProfileError::Invalid(e.to_string()))?;
        p.validate()?;
        Ok(p)
    }

    /// First 16 hex digits of the SHA-256 of the compact JSON encoding.
    pub fn profile_id(&self) -> String {
        let json = serde_json::to_vec(self).expect("profiles always serialize");
        Sha256::digest(&json)
            .iter()
            .take(8)
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    pub fn slack_dist(&self, label: Label) -> &BTreeMap<usize, Vec<f64>> {
        match label {
            Label::Sat => &self.sat_slack,
            Label::Unsat => &self.unsat_slack,
        }
    }

    pub fn max_width(&self) -> usize {
        self.width_dist.keys().next_back().copied().unwrap_or(0)
    }

    /// `round(α·n)`.
    pub fn clauses_for(&self, n: usize) -> usize {
        (self.alpha * n as f64).round() as usize
    }
}

fn check_distribution<'a>(
    name: &str,
    values: impl Iterator<Item = &'a f64>,
) -> Result<(), ProfileError> {
    let mut sum = 0.0;
    for &p in values {
        if !(p.is_finite() && p >= 0.0) {
            return Err(ProfileError::Invalid(format!("{name} has entry {p}")));
        }
        sum += p;
    }
    if (sum - 1.0).abs() > TOLERANCE {
        return Err(ProfileError::Invalid(format!("{name} sums to {sum}")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledCorpusEntry {
    pub formula: CnfFormula,
    pub label: Label,
    pub witness: Option<Assignment>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProfileOptions {
    /// Local-search budget when an entry has no witness.
    pub max_flips: u64,
    pub seed: u64,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        ProfileOptions {
            max_flips: 100_000,
            seed: 0,
        }
    }
}

struct FormulaStats {
    n: usize,
    m: usize,
    widths: BTreeMap<usize, u64>,
    slacks: SlackHistogram,
    /// Occurrence counts divided by m, sorted descending.
    ranks: Vec<f64>,
}

/// Slack histogram of one entry: every clause for SAT entries, satisfied
/// clauses only for UNSAT entries. Entries without a witness get one from
/// [`find_assignment`].
pub fn entry_slack_histogram(
    entry: &LabeledCorpusEntry,
    index: usize,
    options: &ProfileOptions,
) -> Result<SlackHistogram, ProfileError> {
    let f = &entry.formula;
    let at = |source| ProfileError::Entry { index, source };
    let assignment = match &entry.witness {
        Some(w) => {
            let eval = evaluate_formula(f, w).map_err(at)?;
            if entry.label == Label::Sat && !eval.satisfied {
                return Err(ProfileError::BadWitness {
                    index,
                    violated: eval.violated_count,
                });
            }
            w.clone()
        }
        None => {
            let mut rng = seeded(derive_seed(options.seed, index as u64));
            let found = find_assignment(f, options.max_flips, &mut rng);
            if entry.label == Label::Sat {
                let eval = evaluate_formula(f, &found).map_err(at)?;
                if !eval.satisfied {
                    warn!(
                        "entry {index}: local search left {} clause(s) violated; \
                         their slacks are excluded",
                        eval.violated_count
                    );
                }
            }
            found
        }
    };
    let slacks = induced_slack(f, &assignment).map_err(at)?;
    let mut hist = SlackHistogram::default();
    for (clause, &s) in f.clauses().iter().zip(slacks.values()) {
        if s >= 0 {
            hist.record(entry.label, clause.width(), s as usize);
        }
    }
    Ok(hist)
}

fn formula_stats(
    entry: &LabeledCorpusEntry,
    index: usize,
    options: &ProfileOptions,
) -> Result<FormulaStats, ProfileError> {
    let f = &entry.formula;
    let m = f.num_clauses();
    let mut widths = BTreeMap::new();
    let mut occurrences = vec![0u64; f.num_vars()];
    for clause in f.clauses() {
        *widths.entry(clause.width()).or_insert(0) += 1;
        for v in clause.vars() {
            occurrences[v.index()] += 1;
        }
    }
    let mut ranks: Vec<f64> = if m == 0 {
        Vec::new()
    } else {
        occurrences.iter().map(|&c| c as f64 / m as f64).collect()
    };
    ranks.sort_by(|a, b| b.total_cmp(a));
    Ok(FormulaStats {
        n: f.num_vars(),
        m,
        widths,
        slacks: entry_slack_histogram(entry, index, options)?,
        ranks,
    })
}

/// Value of a descending profile at fractional rank position `t ∈ [0, 1]`.
pub(crate) fn interpolate_rank(profile: &[f64], t: f64) -> f64 {
    match profile.len() {
        0 => 1.0,
        1 => profile[0],
        len => {
            let pos = t.clamp(0.0, 1.0) * (len - 1) as f64;
            let lo = pos.floor() as usize;
            let hi = (lo + 1).min(len - 1);
            let frac = pos - lo as f64;
            profile[lo] * (1.0 - frac) + profile[hi] * frac
        }
    }
}

/// Resamples a descending profile to `len` ranks by linear interpolation.
pub(crate) fn stretch_profile(profile: &[f64], len: usize) -> Vec<f64> {
    if len == 1 {
        return vec![interpolate_rank(profile, 0.0)];
    }
    (0..len)
        .map(|r| interpolate_rank(profile, r as f64 / (len - 1) as f64))
        .collect()
}

fn normalize(values: &[u64]) -> Vec<f64> {
    let total: u64 = values.iter().sum();
    values.iter().map(|&c| c as f64 / total as f64).collect()
}

pub fn profile_corpus(
    entries: &[LabeledCorpusEntry],
    options: &ProfileOptions,
) -> Result<BenchmarkProfile, ProfileError> {
    if entries.is_empty() {
        return Err(ProfileError::EmptyCorpus);
    }
    let stats = entries
        .par_iter()
        .enumerate()
        .map(|(i, e)| formula_stats(e, i, options))
        .collect::<Result<Vec<_>, _>>()?;

    let mut width_counts: BTreeMap<usize, u64> = BTreeMap::new();
    let mut slacks = SlackHistogram::default();
    for s in &stats {
        for (&k, &c) in &s.widths {
            *width_counts.entry(k).or_insert(0) += c;
        }
        slacks.merge(&s.slacks);
    }
    let total: u64 = width_counts.values().sum();
    if total == 0 {
        return Err(ProfileError::NoClauses);
    }
    let width_dist: BTreeMap<usize, f64> = width_counts
        .iter()
        .map(|(&k, &c)| (k, c as f64 / total as f64))
        .collect();
    let dominant_width = width_counts
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
        .map(|(&k, _)| k)
        .expect("nonempty");

    let resolution = stats
        .iter()
        .filter(|s| s.m > 0)
        .map(|s| s.n)
        .max()
        .unwrap_or(0);
    let mut skew = vec![0.0; resolution];
    let mut contributing = 0usize;
    for s in stats.iter().filter(|s| s.m > 0 && s.n > 0) {
        for (acc, v) in skew.iter_mut().zip(stretch_profile(&s.ranks, resolution)) {
            *acc += v;
        }
        contributing += 1;
    }
    let skew_total: f64 = skew.iter().sum();
    let skew_profile = if contributing == 0 || skew_total <= 0.0 {
        vec![1.0]
    } else {
        skew.iter().map(|v| v / skew_total).collect()
    };

    let ratios: Vec<f64> = stats
        .iter()
        .filter(|s| s.n > 0)
        .map(|s| s.m as f64 / s.n as f64)
        .collect();
    let alpha = if ratios.is_empty() {
        0.0
    } else {
        ratios.iter().sum::<f64>() / ratios.len() as f64
    };

    let slack_table = |label| {
        slacks
            .counts(label)
            .iter()
            .filter(|(_, c)| c.iter().any(|&x| x > 0))
            .map(|(&k, c)| (k, normalize(c)))
            .collect::<BTreeMap<_, _>>()
    };

    let profile = BenchmarkProfile {
        version: PROFILE_VERSION,
        width_dist,
        skew_profile,
        sat_slack: slack_table(Label::Sat),
        unsat_slack: slack_table(Label::Unsat),
        dominant_width,
        alpha,
        size_range: SizeRange {
            n_min: stats.iter().map(|s| s.n).min().unwrap_or(0),
            n_max: stats.iter().map(|s| s.n).max().unwrap_or(0),
            m_min: stats.iter().map(|s| s.m).min().unwrap_or(0),
            m_max: stats.iter().map(|s| s.m).max().unwrap_or(0),
        },
    };
    profile.validate()?;
    Ok(profile)
}
