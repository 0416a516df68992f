use std::path::PathBuf;

use rayon::prelude::*;
use satforge_core::{profile_corpus, LabeledCorpusEntry, ProfileOptions};

use crate::error::{CliError, Result};
use crate::io;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Directory searched recursively for `.cnf` files.
    pub corpus: PathBuf,
    /// Output profile JSON.
    #[arg(short, long)]
    pub out: PathBuf,
    /// JSON-lines manifest of {file, label, witness?} rows, paths relative
    /// to the manifest. Files without a row get their label from their name.
    #[arg(long)]
    pub witnesses: Option<PathBuf>,
    /// Accept header mismatches and repeated literals with warnings.
    #[arg(long)]
    pub lenient: bool,
    /// Local-search budget for entries without a witness.
    #[arg(long, default_value_t = 100_000)]
    pub max_flips: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (0: all cores).
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

pub fn run(args: Args) -> Result<()> {
    let files = io::cnf_files(&args.corpus)?;
    if files.is_empty() {
        return Err(CliError::Usage(format!(
            "no .cnf files under {}",
            args.corpus.display()
        )));
    }
    let witnesses = match &args.witnesses {
        Some(p) => io::load_witnesses(p)?,
        None => Default::default(),
    };
    let mode = io::parse_mode(args.lenient);
    let pool = io::thread_pool(args.jobs)?;
    let entries = pool.install(|| {
        files
            .par_iter()
            .map(|path| {
                let formula = io::read_formula(path, mode)?;
                let known = path
                    .canonicalize()
                    .ok()
                    .and_then(|c| witnesses.get(&c).cloned());
                let (label, witness) = match known {
                    Some(lw) => lw,
                    None => (
                        io::infer_label(path, &args.corpus).ok_or_else(|| {
                            CliError::Usage(format!(
                                "{}: no label in the witness manifest and none in the file name",
                                path.display()
                            ))
                        })?,
                        None,
                    ),
                };
                Ok(LabeledCorpusEntry {
                    formula,
                    label,
                    witness,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let missing = entries.iter().filter(|e| e.witness.is_none()).count();
    if missing > 0 {
        log::info!(
            "{missing} of {} entries have no witness; searching for assignments with local search",
            entries.len()
        );
    }
    let options = ProfileOptions {
        max_flips: args.max_flips,
        seed: args.seed,
    };
    let profile = pool
        .install(|| profile_corpus(&entries, &options))
        .map_err(|e| CliError::Usage(e.to_string()))?;
    io::write_file(&args.out, profile.to_json() + "\n")?;
    log::info!(
        "profiled {} files: dominant width {}, alpha {:.3}, id {}",
        entries.len(),
        profile.dominant_width,
        profile.alpha,
        profile.profile_id()
    );
    Ok(())
}
