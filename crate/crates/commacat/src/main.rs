use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use commacat::{doc, fixture, read_document, read_report, replay, run_document, Document, Error};
use commacat_core::Limits;

#[derive(Parser)]
#[command(
    name = "commacat",
    version,
    about = "Exact verification over triangular matrix algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a document and run its tasks.
    Run {
        /// Document path; omit when using --fixture.
        #[arg(required_unless_present = "fixture", conflicts_with = "fixture")]
        doc: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Built-in corpus: a2 or dual-numbers.
        #[arg(long)]
        fixture: Option<String>,
        /// Only run tasks with this name; may be repeated.
        #[arg(long = "task")]
        tasks: Vec<String>,
        #[arg(long, env = "COMMACAT_MAX_DIM")]
        max_dim: Option<usize>,
        #[arg(long)]
        iso_cap: Option<usize>,
    },
    /// Check every invariant of a document, or replay a report's certificates.
    Validate {
        #[arg(required_unless_present = "fixture", conflicts_with = "fixture")]
        doc: Option<PathBuf>,
        #[arg(long)]
        fixture: Option<String>,
        /// Treat the input as a report and re-check its certificates.
        #[arg(long, conflicts_with = "fixture")]
        certificate: bool,
    },
    /// Print a built-in corpus as a canonical document.
    Fixture { name: String },
}

fn load(doc: Option<PathBuf>, fixture_name: Option<String>) -> Result<Document, Error> {
    match (doc, fixture_name) {
        (_, Some(name)) => fixture::fixture(&name),
        (Some(path), None) => read_document(&path),
        (None, None) => unreachable!("clap requires one of them"),
    }
}

fn execute(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Run {
            doc,
            format,
            fixture,
            tasks,
            max_dim,
            iso_cap,
        } => {
            let document = load(doc, fixture)?;
            let mut limits = Limits::default();
            if let Some(d) = max_dim {
                limits.max_dim = d;
            }
            if let Some(c) = iso_cap {
                limits.iso_cap = c;
            }
            let report = run_document(&document, &tasks, limits)?;
            match format {
                Format::Json => print!("{}", report.to_json()),
                Format::Text => print!("{}", report.to_text()),
            }
            Ok(())
        }
        Command::Validate {
            doc: Some(path),
            certificate: true,
            ..
        } => {
            let report = read_report(&path)?;
            let summary = replay(&report);
            if summary.ok() {
                println!("{} certificates confirmed", summary.confirmed);
                Ok(())
            } else {
                Err(Error::Invalid(commacat::Violations(summary.failures)))
            }
        }
        Command::Validate { doc, fixture, .. } => {
            let document = load(doc, fixture)?;
            doc::validate(&document)?;
            println!("valid");
            Ok(())
        }
        Command::Fixture { name } => {
            print!("{}", fixture::fixture(&name)?.to_canonical());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
