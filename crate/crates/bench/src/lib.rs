//! Wall-clock comparison of planted generation against generate-and-test
//! labeling: brute-force enumeration and an external solver in the loop.
//!
//! Every method is timed per labeled pair (one SAT plus one UNSAT formula).
//! Repetitions are preceded by discarded warm-up runs and summarized by their
//! median.

mod report;
mod solver;
mod timing;

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use report::{emit_csv, emit_table, fit_scaling, ScalingFit, CSV_HEADER};
pub use solver::{time_solver_loop, SolverCommand, SolverOutcome};
pub use timing::{median, time_naive, time_ours};

/// `(n, m)` pairs of the classic phase-transition timing table.
pub const TABLE_SIZES: [(usize, usize); 10] = [
    (15, 64),
    (20, 85),
    (50, 213),
    (75, 319),
    (100, 426),
    (150, 639),
    (200, 852),
    (250, 1064),
    (500, 2129),
    (1000, 4258),
];

/// Sizes for the scaling fit of the planted generator.
pub const SCALING_SIZES: [usize; 6] = [100, 200, 500, 1000, 2000, 5000];

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("generation failed at n={n}, m={m}: {source}")]
    Generate {
        n: usize,
        m: usize,
        source: satforge_core::GenerateError,
    },
    #[error("scaling fit needs at least 3 uncensored records with distinct m, got {0}")]
    InsufficientData(usize),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("unknown method {0:?}")]
    UnknownMethod(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Naive,
    SolverLoop,
    Ours,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Naive, Method::SolverLoop, Method::Ours];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Naive => "naive",
            Method::SolverLoop => "solver_loop",
            Method::Ours => "ours",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| BenchError::UnknownMethod(s.to_owned()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    /// A repetition hit the timeout or the size exceeds what the method can
    /// handle.
    Censored,
    /// The method could not run at all, e.g. no solver binary.
    Unavailable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingRecord {
    pub n: usize,
    pub m: usize,
    pub method: Method,
    /// Median milliseconds per labeled pair; absent unless `status` is `Ok`.
    pub median_ms: Option<f64>,
    pub reps: usize,
    pub status: Status,
    /// Solver calls that ended with an exit status other than 10 or 20.
    pub errors: usize,
}

impl TimingRecord {
    pub fn ok(n: usize, m: usize, method: Method, times: &[Duration], errors: usize) -> Self {
        TimingRecord {
            n,
            m,
            method,
            median_ms: Some(median(times).as_secs_f64() * 1e3),
            reps: times.len(),
            status: Status::Ok,
            errors,
        }
    }

    pub fn censored(n: usize, m: usize, method: Method, reps: usize, errors: usize) -> Self {
        TimingRecord {
            n,
            m,
            method,
            median_ms: None,
            reps,
            status: Status::Censored,
            errors,
        }
    }

    pub fn unavailable(n: usize, m: usize, method: Method) -> Self {
        TimingRecord {
            n,
            m,
            method,
            median_ms: None,
            reps: 0,
            status: Status::Unavailable,
            errors: 0,
        }
    }

    pub fn is_censored(&self) -> bool {
        self.status == Status::Censored
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub reps: usize,
    /// Discarded runs before timing starts.
    pub warmup: usize,
    /// Per-repetition limit for naive and solver-loop labeling.
    pub timeout: Duration,
    /// Clause-to-variable ratio of the random formulas the baselines sample.
    pub alpha: f64,
    /// Clause width of the baselines' random formulas.
    pub width: usize,
    /// Largest `n` the naive method attempts; larger sizes are censored.
    pub naive_cap: usize,
    pub seed: u64,
    /// Worker threads for repetitions; 1 keeps timing single-threaded.
    pub jobs: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            reps: 200,
            warmup: 10,
            timeout: Duration::from_secs(30),
            alpha: satforge_core::BenchmarkProfile::PHASE_TRANSITION_ALPHA,
            width: 3,
            naive_cap: satforge_core::verify::DEFAULT_CAP,
            seed: 0,
            jobs: 1,
        }
    }
}

/// Times the selected methods at every size. Once the naive method is
/// censored at some `n`, larger sizes are recorded as censored without
/// running. Without a solver the solver-loop column is omitted.
fn log_record(r: &TimingRecord) {
    match r.median_ms {
        Some(ms) => log::info!("n={} m={} {}: {ms:.3} ms", r.n, r.m, r.method),
        None => log::info!("n={} m={} {}: {:?}", r.n, r.m, r.method, r.status),
    }
}

pub fn run_table(
    sizes: &[(usize, usize)],
    methods: &[Method],
    profile: &satforge_core::BenchmarkProfile,
    solver: Option<&SolverCommand>,
    config: &BenchConfig,
) -> Result<Vec<TimingRecord>, BenchError> {
    let mut sizes = sizes.to_vec();
    sizes.sort_unstable();
    let mut records = Vec::new();
    let mut naive_censored_at = None;
    for (n, m) in sizes {
        if methods.contains(&Method::Naive) {
            let naive = match naive_censored_at {
                Some(limit) if n >= limit => TimingRecord::censored(n, m, Method::Naive, 0, 0),
                _ => time_naive(n, m, config),
            };
            if naive.is_censored() && naive_censored_at.is_none() {
                naive_censored_at = Some(n);
            }
            log_record(&naive);
            records.push(naive);
        }
        if let (Some(solver), true) = (solver, methods.contains(&Method::SolverLoop)) {
            let r = time_solver_loop(n, m, solver, config)?;
            log_record(&r);
            records.push(r);
        }
        if methods.contains(&Method::Ours) {
            let ours = time_ours(n, m, profile, config)?;
            log_record(&ours);
            records.push(ours);
        }
    }
    Ok(records)
}
