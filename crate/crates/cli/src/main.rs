use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use sonine_cli::{emit_report, run_suite, Format, SuiteConfig};
use sonine_core::identities::IdentityId;

#[derive(Parser)]
#[command(name = "sonine", version, about = "Numerical verification of Bessel and Laguerre identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks of a suite config and write a report.
    Verify {
        #[arg(long)]
        config: PathBuf,
        /// Report path; stdout when absent (and not set in the config).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        tol_abs: Option<f64>,
        #[arg(long)]
        tol_rel: Option<f64>,
    },
    /// Print the identity ids accepted in configs.
    ListIdentities,
}

const EXIT_CONFIG: u8 = 2;

fn verify(
    config: PathBuf,
    out: Option<PathBuf>,
    format: Option<Format>,
    tol_abs: Option<f64>,
    tol_rel: Option<f64>,
) -> anyhow::Result<ExitCode> {
    let mut cfg = match SuiteConfig::load(&config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(ExitCode::from(EXIT_CONFIG));
        }
    };
    if let Some(v) = tol_abs {
        cfg.tolerances.abs = v;
    }
    if let Some(v) = tol_rel {
        cfg.tolerances.rel = v;
    }
    let configured = cfg.output.clone().unwrap_or_default();
    let format = format.unwrap_or(configured.format);
    let out = out.or(configured.path);
    if let Err(e) = cfg.validate() {
        eprintln!("error: {e}");
        return Ok(ExitCode::from(EXIT_CONFIG));
    }

    let report = run_suite(&cfg);
    let bytes = emit_report(&report, format);
    match &out {
        Some(path) => fs::write(path, &bytes).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(&bytes).context("writing report")?,
    }
    let s = report.summary;
    eprintln!(
        "total {} passed {} failed {} conjecture-passed {} errored {}",
        s.total, s.passed, s.failed, s.conjecture_passed, s.errored
    );
    Ok(ExitCode::from(report.exit_code() as u8))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify {
            config,
            out,
            format,
            tol_abs,
            tol_rel,
        } => verify(config, out, format, tol_abs, tol_rel),
        Command::ListIdentities => {
            let mut out = std::io::stdout().lock();
            for id in IdentityId::ALL {
                // A closed pipe (`| head`) just ends the listing.
                if writeln!(out, "{:<20} {}", id.as_str(), id.summary()).is_err() {
                    break;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        ExitCode::from(1)
    })
}
