//! External solver subprocess: `<program> [args..] <file.cnf>`, exit status
//! 10 for SAT, 20 for UNSAT, anything else is an error.

use std::env;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use log::warn;
use satforge_core::generate::random::uniform_ksat;
use satforge_core::rng::seeded;
use satforge_core::write_dimacs;
use wait_timeout::ChildExt;

use crate::timing::{record, run_reps, RepOutcome};
use crate::{BenchConfig, BenchError, Method, TimingRecord};

/// Consecutive error exits after which a repetition is abandoned.
const MAX_CONSECUTIVE_ERRORS: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverCommand {
    pub program: PathBuf,
    pub args: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverOutcome {
    Sat,
    Unsat,
    /// Exit status other than 10 or 20; `None` when killed by a signal.
    Error(Option<i32>),
    Timeout,
}

impl SolverCommand {
    /// Splits a command line on whitespace: program first, then fixed
    /// arguments placed before the file path.
    pub fn parse(line: &str) -> Option<Self> {
        let mut parts = line.split_whitespace();
        let program = PathBuf::from(parts.next()?);
        Some(SolverCommand {
            program,
            args: parts.map(str::to_owned).collect(),
        })
    }

    /// Resolves the program like a shell would: paths are checked directly,
    /// bare names are looked up on `PATH`.
    pub fn resolve(&self) -> Option<PathBuf> {
        if self.program.components().count() > 1 {
            return self.program.is_file().then(|| self.program.clone());
        }
        env::split_paths(&env::var_os("PATH")?)
            .map(|dir| dir.join(&self.program))
            .find(|p| p.is_file())
    }

    pub fn is_available(&self) -> bool {
        self.resolve().is_some()
    }

    pub fn solve(&self, file: &Path, timeout: Duration) -> io::Result<SolverOutcome> {
        let mut child = Command::new(&self.program)
            .args(&self.args)
            .arg(file)
            .stdin(Stdio::null())
            .stdout(Stdio::null())
            .stderr(Stdio::null())
            .spawn()?;
        match child.wait_timeout(timeout)? {
            Some(status) => Ok(match status.code() {
                Some(10) => SolverOutcome::Sat,
                Some(20) => SolverOutcome::Unsat,
                code => SolverOutcome::Error(code),
            }),
            None => {
                child.kill()?;
                child.wait()?;
                Ok(SolverOutcome::Timeout)
            }
        }
    }
}

/// Generate-and-test: sample a random formula, write it, call the solver,
/// repeat until one SAT and one UNSAT formula have been labeled. The time per
/// pair includes rejected formulas and the file writes the subprocess
/// protocol requires. A missing solver yields an unavailable record.
pub fn time_solver_loop(
    n: usize,
    m: usize,
    solver: &SolverCommand,
    config: &BenchConfig,
) -> Result<TimingRecord, BenchError> {
    if !solver.is_available() || n == 0 {
        return Ok(TimingRecord::unavailable(n, m, Method::SolverLoop));
    }
    let k = config.width.clamp(1, n);
    let dir = tempfile::tempdir()?;
    let summary = run_reps(config, |seed| {
        let mut rng = seeded(seed);
        let path = dir.path().join(format!("{seed:016x}.cnf"));
        let start = Instant::now();
        let deadline = start + config.timeout;
        let (mut sat, mut unsat) = (false, false);
        let (mut errors, mut consecutive) = (0, 0);
        while !(sat && unsat) {
            let remaining = deadline.saturating_duration_since(Instant::now());
            if remaining.is_zero() {
                return Ok(RepOutcome::Censored { errors });
            }
            let f = uniform_ksat(n, m, k, &mut rng);
            fs::write(&path, write_dimacs(&f))?;
            match solver.solve(&path, remaining)? {
                SolverOutcome::Sat => sat = true,
                SolverOutcome::Unsat => unsat = true,
                SolverOutcome::Timeout => return Ok(RepOutcome::Censored { errors }),
                SolverOutcome::Error(code) => {
                    errors += 1;
                    consecutive += 1;
                    if consecutive >= MAX_CONSECUTIVE_ERRORS {
                        warn!("solver failed {consecutive} times in a row (last status {code:?}); giving up on this repetition");
                        return Ok(RepOutcome::Censored { errors });
                    }
                    continue;
                }
            }
            consecutive = 0;
        }
        let elapsed = start.elapsed();
        let _ = fs::remove_file(&path);
        Ok(RepOutcome::Done { elapsed, errors })
    })?;
    Ok(record(n, m, Method::SolverLoop, summary))
}
