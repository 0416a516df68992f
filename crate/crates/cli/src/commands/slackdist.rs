use std::fmt::Write;
use std::path::PathBuf;

use rayon::prelude::*;
use satforge_core::cnf::ParseMode;
use satforge_core::profile::{entry_slack_histogram, total_variation, SlackHistogram};
use satforge_core::{induced_slack, Label, LabeledCorpusEntry, ProfileOptions};

use crate::error::{CliError, Result};
use crate::io;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// A generated manifest.jsonl (slacks under x*, core clauses excluded) or
    /// a corpus directory (slacks under witnesses or local-search assignments).
    pub input: PathBuf,
    /// Output CSV: label,width,slack,count,frequency,target.
    #[arg(short, long)]
    pub out: PathBuf,
    /// Profile to compare against; fills the target column and prints the
    /// total-variation distance per label and width.
    #[arg(long)]
    pub profile: Option<PathBuf>,
    /// Corpus mode: witness manifest as for `profile`.
    #[arg(long)]
    pub witnesses: Option<PathBuf>,
    #[arg(long)]
    pub lenient: bool,
    #[arg(long, default_value_t = 100_000)]
    pub max_flips: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (0: all cores).
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

fn merge_all(parts: Vec<SlackHistogram>) -> SlackHistogram {
    let mut total = SlackHistogram::default();
    for h in &parts {
        total.merge(h);
    }
    total
}

fn dataset_histogram(args: &Args) -> Result<SlackHistogram> {
    let rows = io::load_manifest(&args.input)?;
    let parts = rows
        .par_iter()
        .map(|(path, row)| {
            let formula = io::read_formula(path, ParseMode::Strict)?;
            let inst = row
                .to_instance(formula)
                .map_err(|e| CliError::io(path, e))?;
            let s =
                induced_slack(&inst.formula, &inst.witness).map_err(|e| CliError::io(path, e))?;
            let mut h = SlackHistogram::default();
            for i in inst.filler_indices() {
                if s.0[i] >= 0 {
                    h.record(
                        inst.label,
                        inst.formula.clauses()[i].width(),
                        s.0[i] as usize,
                    );
                } else {
                    log::warn!(
                        "{}: clause {i} is violated by x* and not a core clause",
                        path.display()
                    );
                }
            }
            Ok(h)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(merge_all(parts))
}

fn corpus_histogram(args: &Args) -> Result<SlackHistogram> {
    let witnesses = match &args.witnesses {
        Some(p) => io::load_witnesses(p)?,
        None => Default::default(),
    };
    let files = io::cnf_files(&args.input)?;
    let options = ProfileOptions {
        max_flips: args.max_flips,
        seed: args.seed,
    };
    let mode = io::parse_mode(args.lenient);
    let parts = files
        .par_iter()
        .enumerate()
        .map(|(index, path)| {
            let formula = io::read_formula(path, mode)?;
            let (label, witness) = match path
                .canonicalize()
                .ok()
                .and_then(|c| witnesses.get(&c).cloned())
            {
                Some(lw) => lw,
                None => (
                    io::infer_label(path, &args.input).ok_or_else(|| {
                        CliError::Usage(format!("{}: cannot tell its label", path.display()))
                    })?,
                    None,
                ),
            };
            let entry = LabeledCorpusEntry {
                formula,
                label,
                witness,
            };
            entry_slack_histogram(&entry, index, &options).map_err(|e| CliError::io(path, e))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(merge_all(parts))
}

pub fn run(args: Args) -> Result<()> {
    let profile = args
        .profile
        .as_deref()
        .map(|p| io::load_profile(Some(p)))
        .transpose()?;
    let pool = io::thread_pool(args.jobs)?;
    let hist = pool.install(|| {
        if args.input.is_dir() {
            corpus_histogram(&args)
        } else {
            dataset_histogram(&args)
        }
    })?;

    let mut csv = String::from("label,width,slack,count,frequency,target\n");
    let mut summary = String::from("label,width,clauses,tv\n");
    for label in [Label::Sat, Label::Unsat] {
        for (&k, counts) in hist.counts(label) {
            let total: u64 = counts.iter().sum();
            let observed = hist.distribution(label, k).unwrap_or_default();
            let target = profile.as_ref().and_then(|p| p.slack_dist(label).get(&k));
            for (s, &c) in counts.iter().enumerate() {
                let t = target
                    .map(|t| format!("{:.6}", t.get(s).unwrap_or(&0.0)))
                    .unwrap_or_default();
                writeln!(
                    csv,
                    "{label},{k},{s},{c},{:.6},{t}",
                    observed.get(s).unwrap_or(&0.0)
                )
                .unwrap();
            }
            if let Some(t) = target {
                writeln!(
                    summary,
                    "{label},{k},{total},{:.6}",
                    total_variation(&observed, t)
                )
                .unwrap();
            }
        }
    }
    io::write_file(&args.out, csv)?;
    if profile.is_some() {
        print!("{summary}");
    }
    Ok(())
}
