use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gapweak_cli::config::parse_offsets;
use gapweak_cli::{
    cmd_bench, cmd_constellations, cmd_gaps, cmd_selberg, cmd_verify, write_table, CliError,
    ExperimentConfig, Table,
};

/// Prime-gap weakness experiments.
#[derive(Parser)]
#[command(name = "gapweak", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Experiment config file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; defaults to `output_dir` from the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides `mc_seed`.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Gap distribution statistics per window.
    Gaps(Common),
    /// Constellation counts and singular series.
    Constellations {
        #[command(flatten)]
        common: Common,
        /// Offset tuple such as `0,2,6`; repeatable, replaces the config list.
        #[arg(long)]
        offsets: Vec<String>,
    },
    /// Local and Selberg weakness of the configured patterns.
    Selberg(Common),
    /// Sequential and wheel successor-search accounting.
    Bench(Common),
    /// Recompute a golden directory and compare.
    Verify {
        /// Directory holding `experiment.conf` and the expected CSV files.
        golden_dir: PathBuf,
    },
}

fn load(common: &Common) -> Result<ExperimentConfig, CliError> {
    let mut cfg = ExperimentConfig::load(&common.config)?;
    if let Some(seed) = common.seed {
        cfg.mc_seed = seed;
    }
    Ok(cfg)
}

fn emit(common: &Common, cfg: &ExperimentConfig, table: Table) -> Result<(), CliError> {
    let dir = common.out.as_deref().unwrap_or(Path::new(&cfg.output_dir));
    let path = write_table(cfg, &table, dir)?;
    println!("{} ({} rows)", path.display(), table.rows.len());
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Gaps(c) => {
            let cfg = load(&c)?;
            emit(&c, &cfg, cmd_gaps(&cfg)?)?;
        }
        Command::Constellations { common, offsets } => {
            let cfg = load(&common)?;
            let tuples = offsets
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    parse_offsets(s).ok_or_else(|| CliError::Config {
                        origin: "--offsets".into(),
                        line: i + 1,
                        field: "offsets".into(),
                        message: format!("bad offsets {s:?}"),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            let over = (!tuples.is_empty()).then_some(tuples.as_slice());
            emit(&common, &cfg, cmd_constellations(&cfg, over)?)?;
        }
        Command::Selberg(c) => {
            let cfg = load(&c)?;
            emit(&c, &cfg, cmd_selberg(&cfg)?)?;
        }
        Command::Bench(c) => {
            let cfg = load(&c)?;
            emit(&c, &cfg, cmd_bench(&cfg)?)?;
        }
        Command::Verify { golden_dir } => {
            let report = cmd_verify(&golden_dir)?;
            println!("{report}");
            if !report.passed() {
                return Ok(ExitCode::from(2));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
