//! Solver-free generation of certified SAT and UNSAT CNF instances whose
//! clause widths, variable-occurrence skew and induced slacks follow a target
//! benchmark corpus.
//!
//! The pipeline is: parse a labeled corpus ([`cnf`]), summarize it into a
//! [`BenchmarkProfile`] ([`profile`]), plant instances against the profile
//! ([`generate`]), check them independently ([`verify`]) and export their
//! linear encodings ([`encode`]).

pub mod cnf;
pub mod encode;
pub mod generate;
pub mod profile;
pub mod rng;
pub mod verify;

pub use cnf::{
    evaluate_clause, evaluate_formula, parse_dimacs, write_dimacs, Assignment, Clause, CnfError,
    CnfFormula, Evaluation, Label, Lit, Var,
};
pub use encode::export::GraphRecord;
pub use encode::{
    encode_augmented, encode_cnf, induced_slack, AugmentedSystem, LinearSystem, SlackVector,
};
pub use generate::{
    generate, generate_dataset, generate_sat, generate_unsat, DatasetSpec, GenerateError,
    GeneratedInstance, GeneratorConfig, ManifestRow,
};
pub use profile::{
    profile_corpus, BenchmarkProfile, LabeledCorpusEntry, ProfileError, ProfileOptions,
};
pub use verify::{
    brute_force_label, detect_core, verify_witness, BruteForceResult, VerifyFailure, VerifyReport,
};
