use std::path::PathBuf;
use std::process::ExitCode;

use chaoskit_cli::{emit_report, run_suite, CliError, Format, RunConfig, Suite};
use clap::Parser;

/// Runs a verification suite and writes its report.
#[derive(Debug, Parser)]
#[command(name = "chaoskit", version)]
struct Args {
    /// Suite to run; falls back to `suite` in the config file.
    suite: Option<Suite>,
    /// TOML run configuration. Built-in defaults when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Monte-Carlo path count.
    #[arg(long)]
    paths: Option<usize>,
    /// Parent of the run directories.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "both")]
    format: Format,
    /// Worker threads for the Monte-Carlo fan-out. Does not change any result.
    #[arg(long, env = "CHAOSKIT_THREADS")]
    threads: Option<usize>,
}

fn run(args: Args) -> Result<bool, CliError> {
    let mut cfg = match &args.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(n) = args.paths {
        cfg.n_paths = n;
    }
    if let Some(o) = args.out {
        cfg.out_dir = o;
    }
    let suite = args.suite.or(cfg.suite).ok_or_else(|| {
        CliError::Config("no suite given on the command line or in the config".into())
    })?;
    if let Some(t) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }
    let records = run_suite(&cfg, suite)?;
    let artifacts = emit_report(&records, &cfg, suite.name(), args.format)?;
    for r in records.iter().filter(|r| !r.passed()) {
        eprintln!(
            "FAIL {} value={} expected={} tol={}",
            r.check_id, r.value, r.expected, r.tolerance
        );
    }
    println!("{}", artifacts.summary);
    println!("report: {}", artifacts.dir.display());
    Ok(artifacts.summary.all_passed())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Args::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
