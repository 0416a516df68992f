//! Dataset assembly: DIMACS files plus a JSON-lines manifest.
//!
//! Instance `i` is generated from seed `derive_seed(base_seed, i)`. Its size
//! `n` is drawn uniformly from the configured range with a generator seeded by
//! `splitmix64(seed)`, and `m = round(α·n)` unless overridden. Output depends
//! only on the arguments, never on the number of worker threads.

use std::fs;
use std::io::{self, BufRead, BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{generate, GenerateError, GeneratedInstance, GeneratorConfig, InstanceParams};
use crate::cnf::{write_dimacs, Assignment, CnfError, CnfFormula, Label};
use crate::encode::SlackVector;
use crate::profile::BenchmarkProfile;
use crate::rng::{derive_seed, seeded, splitmix64};

pub const MANIFEST_FILE: &str = "manifest.jsonl";

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("sat fraction {0} outside [0, 1]")]
    SatFraction(f64),
    #[error("empty size range {min}..={max}")]
    SizeRange { min: usize, max: usize },
    #[error("instance {index}: {source}")]
    Generate { index: usize, source: GenerateError },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}:{line}: {message}", path.display())]
    Manifest {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("failed to start worker pool: {0}")]
    Pool(String),
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> DatasetError + '_ {
    move |source| DatasetError::Io {
        path: path.to_owned(),
        source,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSpec {
    pub count: usize,
    pub sat_fraction: f64,
    pub n_min: usize,
    pub n_max: usize,
    pub base_seed: u64,
    pub m_override: Option<usize>,
    pub config: GeneratorConfig,
    /// Worker threads; `0` uses the rayon default.
    pub jobs: usize,
}

impl DatasetSpec {
    pub fn validate(&self) -> Result<(), DatasetError> {
        if !(0.0..=1.0).contains(&self.sat_fraction) {
            return Err(DatasetError::SatFraction(self.sat_fraction));
        }
        if self.n_min > self.n_max {
            return Err(DatasetError::SizeRange {
                min: self.n_min,
                max: self.n_max,
            });
        }
        Ok(())
    }

    /// Labels are spread evenly: index `i` is SAT iff `⌊(i+1)f⌋ > ⌊i f⌋`, giving
    /// `⌊count · f⌋` SAT instances in total.
    pub fn label_for(&self, index: usize) -> Label {
        let f = self.sat_fraction;
        if ((index + 1) as f64 * f).floor() > (index as f64 * f).floor() {
            Label::Sat
        } else {
            Label::Unsat
        }
    }

    pub fn instance_seed(&self, index: usize) -> u64 {
        derive_seed(self.base_seed, index as u64)
    }

    pub fn instance_size(&self, profile: &BenchmarkProfile, seed: u64) -> (usize, usize) {
        let n = seeded(splitmix64(seed)).random_range(self.n_min..=self.n_max);
        let m = self.m_override.unwrap_or_else(|| profile.clauses_for(n));
        (n, m)
    }

    pub fn build_instance(
        &self,
        profile: &BenchmarkProfile,
        index: usize,
    ) -> Result<GeneratedInstance, DatasetError> {
        let seed = self.instance_seed(index);
        let (n, m) = self.instance_size(profile, seed);
        generate(self.label_for(index), n, m, profile, seed, &self.config)
            .map_err(|source| DatasetError::Generate { index, source })
    }
}

/// One line of `manifest.jsonl`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestRow {
    /// Path of the DIMACS file relative to the manifest.
    pub file: String,
    pub label: Label,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    /// `x*` as a bit string; character `j` is the value of `x_{j+1}`.
    pub witness: String,
    pub planted_slacks: Vec<i64>,
    pub core_indices: Vec<usize>,
    pub profile_id: String,
}

impl ManifestRow {
    pub fn from_instance(inst: &GeneratedInstance, file: String) -> Self {
        ManifestRow {
            file,
            label: inst.label,
            n: inst.params.n,
            m: inst.params.m,
            seed: inst.seed,
            witness: inst.witness.to_bit_string(),
            planted_slacks: inst.planted_slacks.0.clone(),
            core_indices: inst.core_indices.clone(),
            profile_id: inst.params.profile_id.clone(),
        }
    }

    /// Reassembles the instance record around a formula read from disk.
    pub fn to_instance(&self, formula: CnfFormula) -> Result<GeneratedInstance, CnfError> {
        Ok(GeneratedInstance {
            formula,
            label: self.label,
            witness: Assignment::from_bit_string(&self.witness)?,
            planted_slacks: SlackVector(self.planted_slacks.clone()),
            core_indices: self.core_indices.clone(),
            seed: self.seed,
            params: InstanceParams {
                n: self.n,
                m: self.m,
                profile_id: self.profile_id.clone(),
            },
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("manifest rows always serialize")
    }
}

pub fn instance_file_name(label: Label, index: usize) -> String {
    format!("{label}_{index:06}.cnf")
}

/// Generates the dataset into `out_dir` and returns the manifest rows.
pub fn generate_dataset(
    spec: &DatasetSpec,
    profile: &BenchmarkProfile,
    out_dir: &Path,
) -> Result<Vec<ManifestRow>, DatasetError> {
    spec.validate()?;
    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs)
        .build()
        .map_err(|e| DatasetError::Pool(e.to_string()))?;
    let rows = pool.install(|| {
        (0..spec.count)
            .into_par_iter()
            .map(|index| {
                let inst = spec.build_instance(profile, index)?;
                let file = instance_file_name(inst.label, index);
                let path = out_dir.join(&file);
                fs::write(&path, write_dimacs(&inst.formula)).map_err(io_err(&path))?;
                Ok(ManifestRow::from_instance(&inst, file))
            })
            .collect::<Result<Vec<_>, DatasetError>>()
    })?;
    let manifest = out_dir.join(MANIFEST_FILE);
    write_manifest(&manifest, &rows)?;
    Ok(rows)
}

pub fn write_manifest(path: &Path, rows: &[ManifestRow]) -> Result<(), DatasetError> {
    let file = fs::File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    for row in rows {
        writeln!(w, "{}", row.to_json()).map_err(io_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

pub fn read_manifest(path: &Path) -> Result<Vec<ManifestRow>, DatasetError> {
    let file = fs::File::open(path).map_err(io_err(path))?;
    let mut rows = Vec::new();
    for (i, line) in io::BufReader::new(file).lines().enumerate() {
        let line = line.map_err(io_err(path))?;
        if line.trim().is_empty() {
            continue;
        }
        let row = serde_json::from_str(&line).map_err(|e| DatasetError::Manifest {
            path: path.to_owned(),
            line: i + 1,
            message: e.to_string(),
        })?;
        rows.push(row);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(count: usize, sat_fraction: f64) -> DatasetSpec {
        DatasetSpec {
            count,
            sat_fraction,
            n_min: 10,
            n_max: 20,
            base_seed: 42,
            m_override: None,
            config: GeneratorConfig::default(),
            jobs: 1,
        }
    }

    fn count_labels(s: &DatasetSpec) -> (usize, usize) {
        let sat = (0..s.count)
            .filter(|&i| s.label_for(i) == Label::Sat)
            .count();
        (sat, s.count - sat)
    }

    #[test]
    fn label_split() {
        assert_eq!(count_labels(&spec(4, 0.5)), (2, 2));
        assert_eq!(count_labels(&spec(7, 1.0)), (7, 0));
        assert_eq!(count_labels(&spec(7, 0.0)), (0, 7));
        assert_eq!(count_labels(&spec(1000, 0.3)), (300, 700));
    }

    #[test]
    fn rejects_bad_spec() {
        assert!(matches!(
            spec(1, 1.5).validate(),
            Err(DatasetError::SatFraction(_))
        ));
        let mut s = spec(1, 0.5);
        s.n_min = 30;
        assert!(matches!(s.validate(), Err(DatasetError::SizeRange { .. })));
    }

    #[test]
    fn writes_files_and_manifest() {
        let dir = tempfile::tempdir().unwrap();
        let p = BenchmarkProfile::random_3sat();
        let rows = generate_dataset(&spec(4, 0.5), &p, dir.path()).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows.iter().filter(|r| r.label == Label::Sat).count(), 2);
        for r in &rows {
            assert!(dir.path().join(&r.file).is_file());
            assert!((10..=20).contains(&r.n));
            assert_eq!(r.m, p.clauses_for(r.n));
            assert_eq!(r.witness.len(), r.n);
        }
        let back = read_manifest(&dir.path().join(MANIFEST_FILE)).unwrap();
        assert_eq!(back, rows);
        assert_eq!(rows[1].file, "sat_000001.cnf");
    }

    #[test]
    fn infeasible_instance_aborts() {
        let dir = tempfile::tempdir().unwrap();
        let mut s = spec(3, 0.0);
        s.m_override = Some(5);
        let err = generate_dataset(&s, &BenchmarkProfile::random_3sat(), dir.path()).unwrap_err();
        assert!(matches!(
            err,
            DatasetError::Generate {
                source: GenerateError::CoreExceedsClauses { .. },
                ..
            }
        ));
    }

    #[test]
    fn manifest_parse_error_reports_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join(MANIFEST_FILE);
        fs::write(&path, "{\"file\": 3}\n").unwrap();
        assert!(matches!(
            read_manifest(&path),
            Err(DatasetError::Manifest { line: 1, .. })
        ));
    }
}
