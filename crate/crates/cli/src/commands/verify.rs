use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use satforge_core::cnf::ParseMode;
use satforge_core::verify::{brute_force_label, DEFAULT_CAP};
use satforge_core::{verify_witness, Label, ManifestRow, VerifyFailure};
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::io;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// manifest.jsonl written by `generate`.
    pub manifest: PathBuf,
    /// Largest n labeled by exhaustive enumeration; larger instances get
    /// witness checks only.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    pub cap: usize,
    /// Write the JSON-lines report here instead of stdout.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Worker threads (0: all cores). The report does not depend on it.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "snake_case")]
enum Exhaustive {
    Agrees,
    Disagrees,
    Skipped,
}

#[derive(Debug, Serialize)]
struct Line {
    file: String,
    label: Label,
    passed: bool,
    exhaustive: Option<Exhaustive>,
    failures: Vec<VerifyFailure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn check(path: &Path, row: &ManifestRow, cap: usize) -> Line {
    let mut line = Line {
        file: row.file.clone(),
        label: row.label,
        passed: false,
        exhaustive: None,
        failures: Vec::new(),
        error: None,
    };
    let formula = match io::read_formula(path, ParseMode::Strict) {
        Ok(f) => f,
        Err(e) => {
            line.error = Some(e.to_string());
            return line;
        }
    };
    let exhaustive = if formula.num_vars() <= cap {
        match brute_force_label(&formula, cap) {
            Ok(r) if r.label() == row.label => Exhaustive::Agrees,
            Ok(_) => Exhaustive::Disagrees,
            Err(_) => Exhaustive::Skipped,
        }
    } else {
        Exhaustive::Skipped
    };
    let inst = match row.to_instance(formula) {
        Ok(i) => i,
        Err(e) => {
            line.error = Some(format!("witness: {e}"));
            return line;
        }
    };
    line.failures = verify_witness(&inst).failures;
    line.passed = line.failures.is_empty() && !matches!(exhaustive, Exhaustive::Disagrees);
    line.exhaustive = Some(exhaustive);
    line
}

pub fn run(args: Args) -> Result<()> {
    let rows = io::load_manifest(&args.manifest)?;
    let skipped = rows.iter().filter(|(_, r)| r.n > args.cap).count();
    if skipped > 0 {
        log::info!(
            "{skipped} instance(s) have n > {}; verifying their witnesses only",
            args.cap
        );
    }
    let pool = io::thread_pool(args.jobs)?;
    let lines: Vec<Line> = pool.install(|| {
        rows.par_iter()
            .map(|(p, r)| check(p, r, args.cap))
            .collect()
    });

    let mut out: Box<dyn Write> = match &args.report {
        Some(p) => Box::new(std::fs::File::create(p).map_err(|e| CliError::io(p, e))?),
        None => Box::new(std::io::stdout().lock()),
    };
    for line in &lines {
        writeln!(
            out,
            "{}",
            serde_json::to_string(line).expect("report lines serialize")
        )?;
    }
    out.flush()?;

    let failed: Vec<&str> = lines
        .iter()
        .filter(|l| !l.passed)
        .map(|l| l.file.as_str())
        .collect();
    if failed.is_empty() {
        log::info!("{} instance(s) verified", lines.len());
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "{} of {} instance(s) failed: {}",
            failed.len(),
            lines.len(),
            failed.join(", ")
        )))
    }
}
