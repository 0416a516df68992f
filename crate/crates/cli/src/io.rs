//! File helpers shared by the subcommands.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use satforge_core::cnf::{parse_dimacs_with, ParseMode};
use satforge_core::generate::dataset::read_manifest;
use satforge_core::{Assignment, BenchmarkProfile, CnfFormula, Label, ManifestRow};
use serde::Deserialize;

use crate::error::{CliError, Result};

pub fn read_formula(path: &Path, mode: ParseMode) -> Result<CnfFormula> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    let parsed = parse_dimacs_with(&bytes, mode).map_err(|e| CliError::io(path, e))?;
    for w in &parsed.warnings {
        log::warn!("{}: {w}", path.display());
    }
    Ok(parsed.formula)
}

pub fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

pub fn load_profile(path: Option<&Path>) -> Result<BenchmarkProfile> {
    match path {
        None => Ok(BenchmarkProfile::random_3sat()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| CliError::io(p, e))?;
            BenchmarkProfile::from_json(&text).map_err(|e| CliError::io(p, e))
        }
    }
}

/// Manifest rows with their files resolved against the manifest directory.
pub fn load_manifest(path: &Path) -> Result<Vec<(PathBuf, ManifestRow)>> {
    let rows = read_manifest(path).map_err(|e| CliError::Io(e.to_string()))?;
    let dir = path.parent().unwrap_or(Path::new("."));
    Ok(rows.into_iter().map(|r| (dir.join(&r.file), r)).collect())
}

/// All `.cnf` files below `dir`, sorted.
pub fn cnf_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d).map_err(|e| CliError::io(&d, e))? {
            let path = entry.map_err(|e| CliError::io(&d, e))?.path();
            if path.is_dir() {
                stack.push(path);
            } else if path.extension().is_some_and(|e| e == "cnf") {
                out.push(path);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Label from the file name or a parent directory: names starting with
/// `unsat` or `uuf` are UNSAT, names starting with `sat` or `uf` are SAT.
pub fn infer_label(path: &Path, root: &Path) -> Option<Label> {
    let rel = path.strip_prefix(root).unwrap_or(path);
    rel.components().rev().find_map(|c| {
        let name = c.as_os_str().to_str()?.to_ascii_lowercase();
        if name.starts_with("unsat") || name.starts_with("uuf") {
            Some(Label::Unsat)
        } else if name.starts_with("sat") || name.starts_with("uf") {
            Some(Label::Sat)
        } else {
            None
        }
    })
}

/// One row of a witness manifest; generated `manifest.jsonl` files qualify.
#[derive(Debug, Deserialize)]
pub struct WitnessRow {
    pub file: String,
    pub label: Label,
    #[serde(default)]
    pub witness: Option<String>,
}

/// Labels and optional witnesses keyed by canonical file path.
pub fn load_witnesses(path: &Path) -> Result<HashMap<PathBuf, (Label, Option<Assignment>)>> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let mut out = HashMap::new();
    for (i, line) in text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
    {
        let at =
            |e: &dyn std::fmt::Display| CliError::Io(format!("{}:{}: {e}", path.display(), i + 1));
        let row: WitnessRow = serde_json::from_str(line).map_err(|e| at(&e))?;
        let witness = row
            .witness
            .as_deref()
            .map(Assignment::from_bit_string)
            .transpose()
            .map_err(|e| at(&e))?;
        let file = dir.join(&row.file);
        let key = file.canonicalize().map_err(|e| CliError::io(&file, e))?;
        out.insert(key, (row.label, witness));
    }
    Ok(out)
}

pub fn parse_mode(lenient: bool) -> ParseMode {
    if lenient {
        ParseMode::Lenient
    } else {
        ParseMode::Strict
    }
}

pub fn thread_pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))
}
