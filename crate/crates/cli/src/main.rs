use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use utk_core::corpus::{check_sources, run_corpus};
use utk_core::kernel::normalize_at;
use utk_core::print::pretty_print;
use utk_core::report::Report;
use utk_core::syntax::{Context, Term};

#[derive(Parser)]
#[command(name = "utk", version, about = "Check and normalize type theory files, run the corpus and the cubical model")]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check files in order, as one program.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Check files, then print the normal form of one definition.
    Normalize {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long = "def")]
        def: String,
    },
    /// Check every file in the corpus manifest and the theorem table.
    Corpus {
        #[arg(long, default_value = "corpus")]
        dir: PathBuf,
    },
    /// Run the exhaustive checks of the cubical model.
    ModelSelftest {
        #[arg(long, default_value_t = utk_core::model::MAX_DIM)]
        max_dim: usize,
        /// Table file of extra cubical sets, used as further bases.
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
}

fn read_files(files: &[PathBuf]) -> Result<Vec<(String, String)>, String> {
    files
        .iter()
        .map(|f| {
            fs::read_to_string(f)
                .map(|s| (f.display().to_string(), s))
                .map_err(|e| format!("cannot read {}: {e}", f.display()))
        })
        .collect()
}

fn emit(report: &Report, json: bool) -> ExitCode {
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("utk: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Check { files } => {
            let files = match read_files(&files) {
                Ok(f) => f,
                Err(e) => return usage_error(e),
            };
            let (_, report) = check_sources(files.iter().map(|(f, s)| (f.as_str(), s.as_str())));
            emit(&report, cli.json)
        }
        Command::Normalize { files, def } => {
            let files = match read_files(&files) {
                Ok(f) => f,
                Err(e) => return usage_error(e),
            };
            let (scope, report) = check_sources(files.iter().map(|(f, s)| (f.as_str(), s.as_str())));
            let Some(entry) = scope.get(&def) else {
                if !report.pass {
                    return emit(&report, cli.json);
                }
                return usage_error(format!("no declaration named `{def}`"));
            };
            let term = entry
                .body_term
                .clone()
                .unwrap_or_else(|| Term::constant(&def));
            match normalize_at(&scope, &Context::new(), &term, &entry.ty_term) {
                Ok(nf) => {
                    let text = pretty_print(&nf, &[]).expect("normal forms are closed");
                    if cli.json {
                        let v = serde_json::json!({ "name": def, "normal_form": text });
                        println!("{v:#}");
                    } else {
                        println!("{text}");
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    let mut r = Report::new();
                    r.fail(def, e, None);
                    emit(&r, cli.json)
                }
            }
        }
        Command::Corpus { dir } => match run_corpus(&dir) {
            Ok((_, report)) => emit(&report, cli.json),
            Err(e) => usage_error(format!("cannot read corpus in {}: {e}", dir.display())),
        },
        Command::ModelSelftest { max_dim, fixtures } => {
            let extra = match fixtures.map(fs::read_to_string).transpose() {
                Ok(x) => x,
                Err(e) => return usage_error(format!("cannot read fixtures: {e}")),
            };
            match utk_core::model::selftest::run(max_dim, extra.as_deref()) {
                Ok(report) => emit(&report, cli.json),
                Err(e) => usage_error(e),
            }
        }
    }
}
