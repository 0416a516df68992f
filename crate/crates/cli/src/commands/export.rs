use std::path::PathBuf;

use rayon::prelude::*;
use satforge_core::cnf::ParseMode;
use satforge_core::{Assignment, GraphRecord};

use crate::error::{CliError, Result};
use crate::io;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Binary,
}

#[derive(Debug, clap::Args)]
pub struct Args {
    /// manifest.jsonl written by `generate`.
    pub manifest: PathBuf,
    #[arg(short, long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads (0: all cores).
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

pub fn run(args: Args) -> Result<()> {
    let rows = io::load_manifest(&args.manifest)?;
    let ext = match args.format {
        Format::Json => "json",
        Format::Binary => "bin",
    };
    let pool = io::thread_pool(args.jobs)?;
    pool.install(|| {
        rows.par_iter().try_for_each(|(path, row)| {
            let formula = io::read_formula(path, ParseMode::Strict)?;
            let x = Assignment::from_bit_string(&row.witness).map_err(|e| CliError::io(path, e))?;
            let graph = GraphRecord::build(&formula, row.label, Some(&x));
            let stem = path.file_stem().expect("manifest files have names");
            let target = args.out.join(stem).with_extension(ext);
            match args.format {
                Format::Json => io::write_file(&target, graph.to_json() + "\n"),
                Format::Binary => io::write_file(&target, graph.to_binary()),
            }
        })
    })?;
    log::info!("exported {} graph(s) to {}", rows.len(), args.out.display());
    Ok(())
}
