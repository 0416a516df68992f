use std::path::PathBuf;
use std::time::Duration;

use satforge_bench::{
    emit_csv, emit_table, fit_scaling, run_table, BenchConfig, Method, SolverCommand,
    SCALING_SIZES, TABLE_SIZES,
};

use crate::error::{CliError, Result};
use crate::io;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Sizes {
    /// The ten phase-transition sizes from n = 15 to n = 1000.
    Table,
    /// n in {100, 200, 500, 1000, 2000, 5000} with m = round(alpha * n).
    Scaling,
}

#[derive(Debug, clap::Args)]
pub struct Args {
    #[arg(long, value_enum, default_value_t = Sizes::Table)]
    pub sizes: Sizes,
    /// Explicit variable counts (m = round(alpha * n)); overrides --sizes.
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values = ["naive", "solver_loop", "ours"])]
    pub methods: Vec<String>,
    #[arg(long, default_value_t = 200)]
    pub reps: usize,
    #[arg(long, default_value_t = 10)]
    pub warmup: usize,
    /// Per-repetition timeout in seconds for the baselines.
    #[arg(long, default_value_t = 30.0)]
    pub timeout: f64,
    /// Solver command line; the instance path is appended.
    #[arg(long, env = "SATFORGE_SOLVER")]
    pub solver: Option<String>,
    /// Profile for the planted generator; baselines use uniform 3-SAT.
    #[arg(long)]
    pub profile: Option<PathBuf>,
    /// Also write the records as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Threads for repetitions; 1 keeps timings free of contention.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

pub fn run(args: Args) -> Result<()> {
    let profile = io::load_profile(args.profile.as_deref())?;
    let methods = args
        .methods
        .iter()
        .map(|m| m.parse::<Method>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    if args.reps == 0 || args.timeout.is_nan() || args.timeout <= 0.0 {
        return Err(CliError::Usage(
            "--reps and --timeout must be positive".into(),
        ));
    }
    let sizes: Vec<(usize, usize)> = if !args.n.is_empty() {
        args.n
            .iter()
            .map(|&n| (n, profile.clauses_for(n)))
            .collect()
    } else {
        match args.sizes {
            Sizes::Table => TABLE_SIZES.to_vec(),
            Sizes::Scaling => SCALING_SIZES
                .iter()
                .map(|&n| (n, profile.clauses_for(n)))
                .collect(),
        }
    };
    let solver = match args
        .solver
        .as_deref()
        .map(str::trim)
        .filter(|s| !s.is_empty())
    {
        Some(line) => {
            let cmd = SolverCommand::parse(line).expect("nonempty command line");
            if !cmd.is_available() {
                log::warn!(
                    "solver {} not found; its column is marked unavailable",
                    cmd.program.display()
                );
            }
            Some(cmd)
        }
        None => {
            if methods.contains(&Method::SolverLoop) {
                log::info!("no solver configured (--solver or SATFORGE_SOLVER); timing naive and ours only");
            }
            None
        }
    };
    let config = BenchConfig {
        reps: args.reps,
        warmup: args.warmup,
        timeout: Duration::from_secs_f64(args.timeout),
        seed: args.seed,
        jobs: args.jobs,
        ..BenchConfig::default()
    };
    let records = run_table(&sizes, &methods, &profile, solver.as_ref(), &config)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    print!("{}", emit_table(&records));
    for method in Method::ALL {
        let own: Vec<_> = records
            .iter()
            .filter(|r| r.method == method)
            .cloned()
            .collect();
        if let Ok(fit) = fit_scaling(&own) {
            println!(
                "scaling {method}: median_ms ~ m^{:.3} (r^2 = {:.3}, {} sizes)",
                fit.slope,
                fit.r2,
                own.iter().filter(|r| r.median_ms.is_some()).count()
            );
        }
    }
    if let Some(path) = &args.csv {
        io::write_file(path, emit_csv(&records))?;
    }
    Ok(())
}
