use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use refrig::cli::{
    cmd_figure, cmd_report, cmd_sweep, cmd_validate, load_config, CliError, CommandOutput,
    OutputOptions, EXIT_CONFIG,
};

/// Autonomous quantum absorption refrigerator simulator.
///
/// Exit codes: 0 ok, 1 usage/config error, 2 out-of-window result,
/// 3 validation failure.
#[derive(Parser)]
#[command(name = "refrig", version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON run configuration (see the crate docs for the schema).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Directory for CSV/JSON (and SVG with --svg) outputs. Paths inside the
    /// config take precedence. Without either, the CSV goes to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for sweeps (default: REFRIG_JOBS or all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Also render an SVG plot next to the CSV/JSON outputs.
    #[arg(long, global = true)]
    svg: bool,
}

#[derive(Subcommand)]
enum Command {
    /// One performance row at the config's parameters.
    ///
    /// Table columns are the metrics in alphabetical order.
    Report,
    /// Evaluate the config's sweep axes on a row-major grid.
    ///
    /// Columns: sweep axes first (declaration order), then metrics
    /// alphabetically. Out-of-window rows are flagged, not dropped.
    Sweep,
    /// Reproduce a hard-coded figure grid: fig2, fig4a, fig4b, fig4c, fig5.
    Figure { name: String },
    /// Run the invariant suite (method equivalence, oracle agreement, bound
    /// checks, TUR) at the config's parameters.
    Validate,
}

fn require_config(path: &Option<PathBuf>) -> Result<refrig::cli::RunConfig, CliError> {
    let path = path
        .as_ref()
        .ok_or_else(|| CliError::Config("this command needs --config FILE".into()))?;
    load_config(path)
}

fn run(cli: &Cli) -> Result<CommandOutput, CliError> {
    if let Some(jobs) = cli.jobs.or_else(|| {
        std::env::var("REFRIG_JOBS").ok().and_then(|v| v.parse().ok())
    }) {
        // ignore the error if a pool already exists (e.g. repeated in-process runs)
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    let opts = OutputOptions { out_dir: cli.out.clone(), svg: cli.svg };
    match &cli.command {
        Command::Report => cmd_report(&require_config(&cli.config)?, &opts),
        Command::Sweep => cmd_sweep(&require_config(&cli.config)?, &opts),
        Command::Figure { name } => cmd_figure(name, &opts),
        Command::Validate => cmd_validate(&require_config(&cli.config)?, &opts),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap's help/version "errors" are normal output
            if e.use_stderr() {
                eprintln!("{e}");
                return ExitCode::from(EXIT_CONFIG as u8);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(&cli) {
        Ok(out) => {
            for line in &out.summary {
                eprintln!("{line}");
            }
            for file in &out.files {
                eprintln!("wrote {}", file.display());
            }
            if out.stdout_csv {
                print!("{}", out.table.to_csv());
            }
            ExitCode::from(out.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CONFIG as u8)
        }
    }
}
