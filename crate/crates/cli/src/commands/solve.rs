use std::path::PathBuf;
use std::process::ExitCode;

use satforge_core::verify::{brute_force_label, DEFAULT_CAP};
use satforge_core::BruteForceResult;

use crate::io;

#[derive(Debug, clap::Args)]
pub struct Args {
    pub file: PathBuf,
    /// Refuse formulas with more variables than this.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    pub cap: usize,
}

/// Competition-style output and exit status, so the command can stand in
/// for an external solver.
pub fn run(args: Args) -> ExitCode {
    let formula = match io::read_formula(&args.file, io::parse_mode(false)) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    match brute_force_label(&formula, args.cap) {
        Ok(BruteForceResult::Sat(x)) => {
            println!("s SATISFIABLE");
            let mut line = String::from("v");
            for (j, &v) in x.values().iter().enumerate() {
                line.push_str(if v { " " } else { " -" });
                line.push_str(&(j + 1).to_string());
            }
            println!("{line} 0");
            ExitCode::from(10)
        }
        Ok(BruteForceResult::Unsat) => {
            println!("s UNSATISFIABLE");
            ExitCode::from(20)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
