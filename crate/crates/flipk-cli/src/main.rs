//! `flipk`: exact K-theory of flip crossed products from the command line.
//!
//! Exit codes: 0 on success, 1 on an internal assertion failure or failing
//! self-checks, 2 on schema violations or unusable input.

use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use flipk::sweep::map_cases;
use flipk::{flip_crossed, flipcalc, verify};
use flipk_cli::report::{
    self, render_blocks_text, render_check_text, render_kdata_text, render_report_text, BlocksOut,
    CheckOut, KDataDocOut, ReportOut, SelfcheckOut,
};
use flipk_cli::schema::{InputError, KDataDocument};

#[derive(Parser)]
#[command(
    name = "flipk",
    version,
    about = "K-theory of the flip crossed product of a tensor square, computed exactly from K-data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Text,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// Compute K-groups and dual action of the flip crossed product
    Compute {
        /// K-data document (JSON)
        #[arg(long)]
        input: Option<PathBuf>,
        /// Directory of documents to evaluate (concurrently)
        #[arg(long)]
        batch: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// List the building blocks of the input K-data
    Decompose {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        batch: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Graded Kunneth pairing of two K-data documents
    Kunneth {
        #[arg(long)]
        input: PathBuf,
        /// Second operand
        #[arg(long)]
        b: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Run the verification sweeps (elementary divisors, oracles,
    /// decomposition invariance, normal-form contracts)
    Selfcheck {
        /// Upper bound of the elementary-divisor sweep
        #[arg(long, default_value_t = 1000)]
        max_n: u64,
        /// Seed for the randomized sweeps
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match panic::catch_unwind(AssertUnwindSafe(|| run(cli.command))) {
        Ok(Ok(code)) => code,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(_) => {
            eprintln!("error: internal assertion failure");
            ExitCode::from(1)
        }
    }
}

fn emit_json<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string(value).expect("report serialization is infallible")
    );
}

/// Loads every *.json document of a directory, sorted by file name.
fn load_batch(dir: &Path) -> Result<Vec<(String, KDataDocument)>, InputError> {
    let entries = std::fs::read_dir(dir)
        .map_err(|e| InputError(format!("{}: {e}", dir.display())))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
        .collect();
    paths.sort();
    let mut docs = Vec::with_capacity(paths.len());
    for path in paths {
        let file = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        docs.push((file, KDataDocument::load(&path)?));
    }
    Ok(docs)
}

fn gather_inputs(
    input: Option<PathBuf>,
    batch: Option<PathBuf>,
) -> Result<Vec<(String, KDataDocument)>, InputError> {
    match (input, batch) {
        (Some(path), None) => {
            let file = path
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default();
            Ok(vec![(file, KDataDocument::load(&path)?)])
        }
        (None, Some(dir)) => load_batch(&dir),
        (Some(_), Some(_)) => Err(InputError(
            "--input and --batch are mutually exclusive".into(),
        )),
        (None, None) => Err(InputError("one of --input or --batch is required".into())),
    }
}

#[derive(Serialize)]
struct BatchEntry<T> {
    file: String,
    report: T,
}

fn run(command: Command) -> Result<ExitCode, InputError> {
    match command {
        Command::Compute {
            input,
            batch,
            format,
        } => {
            let single = batch.is_none();
            let docs = gather_inputs(input, batch)?;
            let reports = map_cases(&docs, |(file, doc)| {
                (file.clone(), doc.clone(), flip_crossed(&doc.to_kdata()))
            });
            match format {
                Format::Text => {
                    for (i, (file, doc, report)) in reports.iter().enumerate() {
                        if !single {
                            if i > 0 {
                                println!();
                            }
                            println!("== {file}");
                        }
                        print!("{}", render_report_text(report, doc.name.as_deref()));
                    }
                }
                Format::Machine if single => {
                    let (_, doc, report) = &reports[0];
                    emit_json(&ReportOut::new(report, doc.name.as_deref()));
                }
                Format::Machine => {
                    let out: Vec<BatchEntry<ReportOut>> = reports
                        .iter()
                        .map(|(file, doc, report)| BatchEntry {
                            file: file.clone(),
                            report: ReportOut::new(report, doc.name.as_deref()),
                        })
                        .collect();
                    emit_json(&out);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Decompose {
            input,
            batch,
            format,
        } => {
            let single = batch.is_none();
            let docs = gather_inputs(input, batch)?;
            let lists = map_cases(&docs, |(file, doc)| {
                (
                    file.clone(),
                    doc.clone(),
                    flipcalc::decompose(&doc.to_kdata()),
                )
            });
            match format {
                Format::Text => {
                    for (i, (file, doc, blocks)) in lists.iter().enumerate() {
                        if !single {
                            if i > 0 {
                                println!();
                            }
                            println!("== {file}");
                        }
                        print!("{}", render_blocks_text(blocks, doc.name.as_deref()));
                    }
                }
                Format::Machine => {
                    let outs: Vec<BatchEntry<BlocksOut>> = lists
                        .iter()
                        .map(|(file, doc, blocks)| BatchEntry {
                            file: file.clone(),
                            report: BlocksOut {
                                schema: report::BLOCKS_SCHEMA.to_owned(),
                                name: doc.name.clone(),
                                blocks: blocks.iter().map(Into::into).collect(),
                                note: blocks
                                    .is_empty()
                                    .then(|| report::KK_TRIVIAL_NOTE.to_owned()),
                            },
                        })
                        .collect();
                    if single {
                        emit_json(&outs[0].report);
                    } else {
                        emit_json(&outs);
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Kunneth { input, b, format } => {
            let first = KDataDocument::load(&input)?;
            let second = KDataDocument::load(&b)?;
            let result = first.to_kdata().kunneth(&second.to_kdata());
            match format {
                Format::Text => print!("{}", render_kdata_text(&result)),
                Format::Machine => emit_json(&KDataDocOut {
                    schema: report::KDATA_SCHEMA.to_owned(),
                    k0: (&result.k0).into(),
                    k1: (&result.k1).into(),
                }),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Selfcheck {
            max_n,
            seed,
            format,
        } => {
            if max_n < 1 {
                return Err(InputError("--max-n must be at least 1".into()));
            }
            let checks = vec![
                verify::check_lemma_ed(max_n),
                verify::check_oracle_agreement(30, 200, seed),
                verify::decomposition_invariance_sweep(200, 1000, seed),
                verify::check_snf_contracts(1000, seed),
            ];
            let passed = checks.iter().all(|c| c.passed());
            match format {
                Format::Text => {
                    println!("seed: {seed}");
                    for check in &checks {
                        print!("{}", render_check_text(check));
                    }
                    let total: usize = checks.iter().map(|c| c.cases_run).sum();
                    if passed {
                        println!("all checks passed ({total} cases)");
                    } else {
                        let failed: usize = checks.iter().map(|c| c.failures.len()).sum();
                        println!("{failed} case(s) failed");
                    }
                }
                Format::Machine => {
                    emit_json(&SelfcheckOut {
                        schema: report::SELFCHECK_SCHEMA.to_owned(),
                        max_n,
                        seed,
                        checks: checks.iter().map(CheckOut::from).collect(),
                        passed,
                    });
                }
            }
            Ok(if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}
