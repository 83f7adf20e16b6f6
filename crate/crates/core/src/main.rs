//! Command-line front end: run checks from definition files, classify tensor
//! pairs, build Poisson-Nijenhuis hierarchies, and verify the whole identity
//! catalog over the built-in examples.
//!
//! Exit codes: 0 all checks passed, 1 failed checks, 2 parse error,
//! 3 not-applicable results under --strict.

use bigbracket::catalog::builtin_examples;
use bigbracket::defn::{SetupDefinition, Task};
use bigbracket::identities::{Bounds, IDENTITY_IDS};
use bigbracket::report::{run_setup, tensor_forms, Report, RunOptions};
use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "bigbracket",
    about = "Exact supergeometric calculus for (pre-)Courant algebroids",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(clap::Args, Clone, Copy)]
struct CommonOpts {
    /// Bound for the deformation depth k
    #[arg(long, default_value_t = 3)]
    max_k: u32,
    /// Bound for the power indices m, n, s, t
    #[arg(long, default_value_t = 3)]
    max_n: u32,
    /// Worker threads for the identity harness
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Treat not-applicable results as an error (exit code 3)
    #[arg(long)]
    strict: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run the tasks in a definition file
    Check {
        file: PathBuf,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Classify a tensor pair from a definition file
    Classify {
        file: PathBuf,
        /// Name of the Nijenhuis-role tensor
        #[arg(long, default_value = "I")]
        first: String,
        /// Name of the deforming/Poisson-role tensor
        #[arg(long, default_value = "J")]
        second: String,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Build the Poisson-Nijenhuis hierarchy for a pair from a file
    Hierarchy {
        file: PathBuf,
        /// Name of the Poisson tensor
        #[arg(long, default_value = "J")]
        poisson: String,
        /// Name of the Nijenhuis tensor
        #[arg(long, default_value = "I")]
        nijenhuis: String,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Run the full identity catalog T-01..T-21 over the built-in examples
    VerifyAll {
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// List or dump the built-in examples
    Examples {
        /// Print the definition text of one example
        #[arg(long)]
        dump: Option<String>,
    },
}

fn bounds_of(opts: &CommonOpts) -> Bounds {
    Bounds {
        k: opts.max_k,
        m: opts.max_n,
        n: opts.max_n,
        s: opts.max_n,
        t: opts.max_n,
    }
}

fn emit_report(report: &Report, format: Format) {
    match format {
        Format::Json => print!("{}", report.to_json()),
        Format::Text => print!("{}", report.to_text()),
    }
}

fn exit_for(reports: &[Report], strict: bool) -> ExitCode {
    if reports.iter().any(|r| r.has_failures()) {
        ExitCode::from(1)
    } else if strict && reports.iter().any(|r| r.has_not_applicable()) {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    }
}

fn load(file: &PathBuf) -> Result<SetupDefinition, String> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| format!("cannot read {}: {e}", file.display()))?;
    SetupDefinition::parse(&text).map_err(|e| e.to_string())
}

fn run() -> Result<ExitCode, (u8, String)> {
    let cli = Cli::parse();
    match cli.command {
        Command::Check { file, opts } => {
            let def = load(&file).map_err(|e| (2, e))?;
            let built = def.build().map_err(|e| (2, e.to_string()))?;
            let run_opts = RunOptions {
                bounds: bounds_of(&opts),
                jobs: opts.jobs,
            };
            let report = run_setup(&built, &tensor_forms(&def), &run_opts)
                .map_err(|e| (1, e.to_string()))?;
            emit_report(&report, opts.format);
            Ok(exit_for(&[report], opts.strict))
        }
        Command::Classify {
            file,
            first,
            second,
            opts,
        } => {
            let def = load(&file).map_err(|e| (2, e))?;
            let mut built = def.build().map_err(|e| (2, e.to_string()))?;
            built.tasks = vec![Task::Classify {
                i: first,
                j: second,
            }];
            let run_opts = RunOptions {
                bounds: bounds_of(&opts),
                jobs: opts.jobs,
            };
            let report = run_setup(&built, &tensor_forms(&def), &run_opts)
                .map_err(|e| (1, e.to_string()))?;
            emit_report(&report, opts.format);
            Ok(exit_for(&[report], opts.strict))
        }
        Command::Hierarchy {
            file,
            poisson,
            nijenhuis,
            opts,
        } => {
            let def = load(&file).map_err(|e| (2, e))?;
            let mut built = def.build().map_err(|e| (2, e.to_string()))?;
            built.tasks = vec![Task::Hierarchy {
                j: poisson,
                i: nijenhuis,
                n: Some(opts.max_n),
                k: Some(opts.max_k),
            }];
            let run_opts = RunOptions {
                bounds: bounds_of(&opts),
                jobs: opts.jobs,
            };
            let report = run_setup(&built, &tensor_forms(&def), &run_opts)
                .map_err(|e| (1, e.to_string()))?;
            emit_report(&report, opts.format);
            Ok(exit_for(&[report], opts.strict))
        }
        Command::VerifyAll { opts } => {
            let defs = builtin_examples().map_err(|e| (2, e.to_string()))?;
            let run_opts = RunOptions {
                bounds: bounds_of(&opts),
                jobs: opts.jobs,
            };
            let mut reports = Vec::new();
            for def in &defs {
                let mut built = def.build().map_err(|e| (2, e.to_string()))?;
                // the full catalog, plus the example's own regression
                // tasks; unbound identity tasks from the file would repeat
                // the catalog sweep and are dropped
                let mut tasks: Vec<Task> = IDENTITY_IDS
                    .iter()
                    .map(|id| Task::Identity {
                        id: id.to_string(),
                        i: None,
                        j: None,
                        bounds: Default::default(),
                    })
                    .collect();
                tasks.extend(built.tasks.iter().filter(|t| {
                    !matches!(
                        t,
                        Task::Identity { i: None, j: None, bounds, .. } if bounds.is_empty()
                    )
                }).cloned());
                built.tasks = tasks;
                let report = run_setup(&built, &tensor_forms(def), &run_opts)
                    .map_err(|e| (1, e.to_string()))?;
                emit_report(&report, opts.format);
                reports.push(report);
            }
            let passed: usize = reports.iter().map(|r| r.summary.passed).sum();
            let failed: usize = reports.iter().map(|r| r.summary.failed).sum();
            let na: usize = reports.iter().map(|r| r.summary.not_applicable).sum();
            if matches!(opts.format, Format::Text) {
                println!("verify-all: {passed} passed, {failed} failed, {na} not-applicable");
            }
            Ok(exit_for(&reports, opts.strict))
        }
        Command::Examples { dump } => {
            match dump {
                Some(name) => {
                    let found = bigbracket::catalog::builtin_texts()
                        .into_iter()
                        .find(|(n, _)| *n == name);
                    match found {
                        Some((_, text)) => print!("{text}"),
                        None => return Err((2, format!("no builtin example named '{name}'"))),
                    }
                }
                None => {
                    for (name, _) in bigbracket::catalog::builtin_texts() {
                        println!("{name}");
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
