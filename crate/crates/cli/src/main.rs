use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use voalab_core::harness::{dims_report, eval, run_suites};
use voalab_core::{parse_element, Error, EvalOp, GradedReport, OutputFormat, Suite, SuiteConfig};

/// Resource cap on span bases, overriding the config file.
const MAX_BASIS_ENV: &str = "VOALAB_MAX_BASIS";

#[derive(Parser)]
#[command(name = "voalab", version, about = "Exact checks for the lattice realization of affine sl2 at level -4/3")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one or more suites (`all` runs every suite).
    Verify {
        #[arg(required = true)]
        suites: Vec<String>,
        #[command(flatten)]
        opts: Opts,
    },
    /// Print the dimension tables.
    Dims {
        #[command(flatten)]
        opts: Opts,
    },
    /// Apply an operation to an element and print the result.
    Eval {
        element: String,
        /// e.g. `expMode:-6g,0`, `affine:f,1`, `heisenberg:d,-1`, `screening:Qt`, `weight`
        #[arg(long)]
        op: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Opts {
    /// TOML file with any subset of the config fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    weight_cutoff: Option<i64>,
    #[arg(long)]
    mode_cutoff: Option<u32>,
    #[arg(long)]
    s_range: Option<i64>,
    #[arg(long)]
    kernel_cutoff: Option<i64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    pool_size: Option<usize>,
    /// Run suites and their inner loops in parallel.
    #[arg(long)]
    parallel: bool,
    /// Include wall-clock timings (output is then no longer reproducible).
    #[arg(long)]
    timing: bool,
}

impl Opts {
    fn config(&self) -> Result<SuiteConfig, Error> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text =
                    std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
                toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
            }
            None => SuiteConfig::default(),
        };
        if let Ok(cap) = std::env::var(MAX_BASIS_ENV) {
            cfg.max_basis = cap.parse().map_err(|_| Error::Config(format!("{MAX_BASIS_ENV}={cap} is not a count")))?;
        }
        if let Some(f) = self.format {
            cfg.output_format = match f {
                Format::Text => OutputFormat::Text,
                Format::Json => OutputFormat::Json,
            };
        }
        cfg.weight_cutoff = self.weight_cutoff.unwrap_or(cfg.weight_cutoff);
        cfg.mode_cutoff = self.mode_cutoff.unwrap_or(cfg.mode_cutoff);
        cfg.s_range = self.s_range.unwrap_or(cfg.s_range);
        cfg.kernel_cutoff = self.kernel_cutoff.unwrap_or(cfg.kernel_cutoff);
        cfg.random_seed = self.seed.unwrap_or(cfg.random_seed);
        cfg.pool_size = self.pool_size.unwrap_or(cfg.pool_size);
        cfg.parallel |= self.parallel;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Writes to stdout; a closed pipe is not an error.
fn print(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn usage_error(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(2)
}

fn emit(mut reports: Vec<GradedReport>, cfg: &SuiteConfig, timing: bool) -> ExitCode {
    if !timing {
        for r in &mut reports {
            r.timing_ms = None;
        }
    }
    match cfg.output_format {
        OutputFormat::Json => {
            let text = if reports.len() == 1 {
                serde_json::to_string_pretty(&reports[0])
            } else {
                serde_json::to_string_pretty(&reports)
            };
            print(&text.expect("reports serialize"));
        }
        OutputFormat::Text => {
            let blocks: Vec<String> = reports.iter().map(ToString::to_string).collect();
            print(&blocks.join("\n\n"));
        }
    }
    if reports.iter().all(GradedReport::passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify { suites, opts } => {
            let cfg = match opts.config() {
                Ok(c) => c,
                Err(e) => return usage_error(e),
            };
            let mut chosen = Vec::new();
            for name in &suites {
                if name == "all" {
                    chosen.extend(Suite::ALL);
                    continue;
                }
                match name.parse::<Suite>() {
                    Ok(s) => chosen.push(s),
                    Err(e) => return usage_error(e),
                }
            }
            emit(run_suites(&chosen, &cfg), &cfg, opts.timing)
        }
        Command::Dims { opts } => {
            let cfg = match opts.config() {
                Ok(c) => c,
                Err(e) => return usage_error(e),
            };
            emit(vec![dims_report(&cfg)], &cfg, opts.timing)
        }
        Command::Eval { element, op } => {
            let parsed = parse_element(&element).and_then(|v| Ok((v, op.parse::<EvalOp>()?)));
            let (v, op) = match parsed {
                Ok(x) => x,
                Err(e) => return usage_error(e),
            };
            match eval(&op, &v) {
                Ok(out) => {
                    print(&out);
                    ExitCode::SUCCESS
                }
                Err(e) => usage_error(e),
            }
        }
    }
}
