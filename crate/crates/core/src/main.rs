use clap::{Parser, Subcommand, ValueEnum};
use smoothlab::lab::{self, report, ExperimentConfig, CATALOG};
use std::path::PathBuf;
use std::process::ExitCode;

/// Numerical experiments on moduli of smoothness, summation methods and K-functionals.
#[derive(Parser)]
#[command(name = "smoothlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Test-function corpus.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
    /// Run the experiment described by a JSON config and write its rows as CSV.
    Run {
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        resolution: Option<usize>,
        /// Output file; defaults to the config's `output`, then stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-emit a rows CSV as sorted CSV or log-log plot data.
    Report {
        rows: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CorpusAction {
    List,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Plotdata,
}

const EXIT_CONFIG: u8 = 2;
const EXIT_FLAGGED: u8 = 3;

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), ExitCode> {
    match out {
        Some(path) => report::write_report(path, text).map_err(|e| fail(&e.to_string(), EXIT_CONFIG)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn fail(msg: &str, code: u8) -> ExitCode {
    eprintln!("smoothlab: {msg}");
    ExitCode::from(code)
}

fn run(cli: Cli) -> Result<(), ExitCode> {
    match cli.command {
        Command::Corpus { action: CorpusAction::List } => {
            for e in CATALOG {
                println!("{:<28} d={}  {}", e.syntax, e.dim, e.about);
            }
            Ok(())
        }
        Command::Run { config, seed, resolution, out } => {
            let mut cfg = ExperimentConfig::load(&config).map_err(|e| fail(&e.to_string(), EXIT_CONFIG))?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if resolution.is_some() {
                cfg.resolution = resolution;
            }
            let rows = lab::run_experiment(&cfg).map_err(|e| fail(&e.to_string(), EXIT_CONFIG))?;
            let text = report::to_csv(&rows).map_err(|e| fail(&e.to_string(), EXIT_CONFIG))?;
            let out = out.or_else(|| cfg.output.as_ref().map(PathBuf::from));
            emit(&text, out.as_ref())?;
            let bad = rows.iter().filter(|r| r.is_failure()).count();
            if bad > 0 {
                return Err(fail(&format!("{bad} of {} rows failed or were flagged", rows.len()), EXIT_FLAGGED));
            }
            Ok(())
        }
        Command::Report { rows, format, out } => {
            let text = std::fs::read_to_string(&rows)
                .map_err(|e| fail(&format!("cannot read {}: {e}", rows.display()), EXIT_CONFIG))?;
            let rows = report::from_csv(&text).map_err(|e| fail(&e.to_string(), EXIT_CONFIG))?;
            let text = match format {
                Format::Csv => report::to_csv(&rows),
                Format::Plotdata => report::to_plotdata(&rows),
            }
            .map_err(|e| fail(&e.to_string(), EXIT_CONFIG))?;
            emit(&text, out.as_ref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("SMOOTHLAB_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => code,
    }
}
