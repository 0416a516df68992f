use std::path::PathBuf;

use satforge_core::generate::dataset::DatasetError;
use satforge_core::generate::DEFAULT_W_MAX;
use satforge_core::{generate_dataset, DatasetSpec, GeneratorConfig, Label};

use crate::error::{CliError, Result};
use crate::io;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Output directory for DIMACS files and manifest.jsonl.
    #[arg(short, long)]
    pub out: PathBuf,
    /// Profile JSON; defaults to uniform random 3-SAT at the phase transition.
    #[arg(long)]
    pub profile: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    #[arg(long, default_value_t = 0.5)]
    pub sat_fraction: f64,
    /// Smallest variable count (default: profile size range).
    #[arg(long)]
    pub n_min: Option<usize>,
    /// Largest variable count (default: profile size range).
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Fixed clause count instead of round(alpha * n).
    #[arg(long)]
    pub m_override: Option<usize>,
    /// Resample planted clauses that repeat an earlier clause.
    #[arg(long)]
    pub dedupe: bool,
    /// Keep core variables out of UNSAT filler clauses.
    #[arg(long)]
    pub exclude_core_vars: bool,
    #[arg(long, default_value_t = DEFAULT_W_MAX)]
    pub w_max: usize,
    /// Worker threads (0: all cores). Output does not depend on it.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

pub fn run(args: Args) -> Result<()> {
    let profile = io::load_profile(args.profile.as_deref())?;
    let spec = DatasetSpec {
        count: args.count,
        sat_fraction: args.sat_fraction,
        n_min: args.n_min.unwrap_or(profile.size_range.n_min),
        n_max: args.n_max.unwrap_or(profile.size_range.n_max),
        base_seed: args.seed,
        m_override: args.m_override,
        config: GeneratorConfig {
            w_max: args.w_max,
            dedupe: args.dedupe,
            exclude_core_vars: args.exclude_core_vars,
            ..GeneratorConfig::default()
        },
        jobs: args.jobs,
    };
    let rows = generate_dataset(&spec, &profile, &args.out).map_err(|e| match e {
        DatasetError::Io { .. } => CliError::Io(e.to_string()),
        _ => CliError::Usage(e.to_string()),
    })?;
    let sat = rows.iter().filter(|r| r.label == Label::Sat).count();
    log::info!(
        "wrote {} instances ({sat} SAT, {} UNSAT) to {}",
        rows.len(),
        rows.len() - sat,
        args.out.display()
    );
    Ok(())
}
