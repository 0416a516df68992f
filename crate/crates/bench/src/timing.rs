use std::hint::black_box;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use satforge_core::generate::random::uniform_ksat;
use satforge_core::generate::Generator;
use satforge_core::rng::{derive_seed, seeded};
use satforge_core::verify::{brute_force_label_until, BruteForceError};
use satforge_core::{BenchmarkProfile, BruteForceResult, GeneratorConfig};

use crate::{BenchConfig, BenchError, Method, TimingRecord};

/// Median of `times`, averaging the middle pair for even lengths. Zero for
/// an empty slice.
pub fn median(times: &[Duration]) -> Duration {
    if times.is_empty() {
        return Duration::ZERO;
    }
    let mut sorted = times.to_vec();
    sorted.sort_unstable();
    let mid = sorted.len() / 2;
    if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        (sorted[mid - 1] + sorted[mid]) / 2
    }
}

pub(crate) enum RepOutcome {
    Done { elapsed: Duration, errors: usize },
    Censored { errors: usize },
}

pub(crate) struct RepSummary {
    pub times: Vec<Duration>,
    pub censored: bool,
    pub errors: usize,
}

/// Runs warm-up then timed repetitions; repetition `r` gets seed
/// `derive_seed(config.seed, r)` so results do not depend on scheduling.
/// Sequential runs stop at the first censored repetition.
pub(crate) fn run_reps<F>(config: &BenchConfig, rep: F) -> Result<RepSummary, BenchError>
where
    F: Fn(u64) -> Result<RepOutcome, BenchError> + Sync,
{
    let warmup_base = derive_seed(config.seed, u64::MAX);
    for w in 0..config.warmup as u64 {
        if let RepOutcome::Censored { errors } = rep(derive_seed(warmup_base, w))? {
            return Ok(RepSummary {
                times: Vec::new(),
                censored: true,
                errors,
            });
        }
    }
    let outcomes: Vec<RepOutcome> = if config.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .map_err(|e| BenchError::Io(std::io::Error::other(e)))?;
        pool.install(|| {
            (0..config.reps as u64)
                .into_par_iter()
                .map(|r| rep(derive_seed(config.seed, r)))
                .collect::<Result<_, _>>()
        })?
    } else {
        let mut out = Vec::with_capacity(config.reps);
        for r in 0..config.reps as u64 {
            let o = rep(derive_seed(config.seed, r))?;
            let stop = matches!(o, RepOutcome::Censored { .. });
            out.push(o);
            if stop {
                break;
            }
        }
        out
    };
    let mut summary = RepSummary {
        times: Vec::with_capacity(outcomes.len()),
        censored: false,
        errors: 0,
    };
    for o in outcomes {
        match o {
            RepOutcome::Done { elapsed, errors } => {
                summary.times.push(elapsed);
                summary.errors += errors;
            }
            RepOutcome::Censored { errors } => {
                summary.censored = true;
                summary.errors += errors;
            }
        }
    }
    Ok(summary)
}

pub(crate) fn record(n: usize, m: usize, method: Method, s: RepSummary) -> TimingRecord {
    if s.censored || s.times.is_empty() {
        TimingRecord::censored(n, m, method, s.times.len(), s.errors)
    } else {
        TimingRecord::ok(n, m, method, &s.times, s.errors)
    }
}

/// Planted generation of one SAT and one UNSAT instance per repetition,
/// in memory.
pub fn time_ours(
    n: usize,
    m: usize,
    profile: &BenchmarkProfile,
    config: &BenchConfig,
) -> Result<TimingRecord, BenchError> {
    let generator = Generator::new(profile, GeneratorConfig::default());
    let wrap = |source| BenchError::Generate { n, m, source };
    let summary = run_reps(config, |seed| {
        let mut rng = seeded(seed);
        let start = Instant::now();
        let sat = generator.sat(n, m, &mut rng).map_err(wrap)?;
        let unsat = generator.unsat(n, m, &mut rng).map_err(wrap)?;
        let elapsed = start.elapsed();
        black_box((sat, unsat));
        Ok(RepOutcome::Done { elapsed, errors: 0 })
    })?;
    Ok(record(n, m, Method::Ours, summary))
}

/// Samples random formulas at the configured width and labels each by
/// exhaustive enumeration until one of each label is found. Sizes above
/// `config.naive_cap` and repetitions past `config.timeout` are censored.
pub fn time_naive(n: usize, m: usize, config: &BenchConfig) -> TimingRecord {
    if n == 0 || n > config.naive_cap {
        return TimingRecord::censored(n, m, Method::Naive, 0, 0);
    }
    let k = config.width.clamp(1, n);
    let summary = run_reps(config, |seed| {
        let mut rng = seeded(seed);
        let start = Instant::now();
        let deadline = start + config.timeout;
        let (mut sat, mut unsat) = (false, false);
        while !(sat && unsat) {
            if Instant::now() >= deadline {
                return Ok(RepOutcome::Censored { errors: 0 });
            }
            let f = uniform_ksat(n, m, k, &mut rng);
            match brute_force_label_until(&f, config.naive_cap, Some(deadline)) {
                Ok(BruteForceResult::Sat(_)) => sat = true,
                Ok(BruteForceResult::Unsat) => unsat = true,
                Err(BruteForceError::Deadline { .. }) => {
                    return Ok(RepOutcome::Censored { errors: 0 })
                }
                Err(BruteForceError::TooManyVariables { .. }) => {
                    unreachable!("n is within the cap")
                }
            }
        }
        Ok(RepOutcome::Done {
            elapsed: start.elapsed(),
            errors: 0,
        })
    })
    .expect("naive repetitions do not fail");
    record(n, m, Method::Naive, summary)
}
