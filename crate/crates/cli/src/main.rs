//! `shadowsum`: quantum invariants of 3-manifolds from shadows and surgery links.

mod commands;
mod config;
mod record;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Family, Ranges, Span};
use config::RunConfig;
use record::{ErrorRecord, Sink};

#[derive(Parser)]
#[command(name = "shadowsum", version, about, long_about = None)]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a shadow or framed-link file (kind detected from its top-level key).
    Invariant {
        file: PathBuf,
        /// Signature of the 4-manifold, overriding the shadow's own data.
        #[arg(long, allow_hyphen_values = true)]
        sigma: Option<i64>,
    },
    /// Sweep a family over parameter ranges, one record per tuple.
    Table {
        #[arg(value_enum)]
        family: Family,
        /// Levels, `a:b` inclusive [default: the value of --r].
        #[arg(long, allow_hyphen_values = true)]
        r_range: Option<Span>,
        /// Framings or gleams.
        #[arg(long, allow_hyphen_values = true, default_value = "-3:3")]
        n_range: Span,
        /// Genera or numbers of summands.
        #[arg(long, allow_hyphen_values = true, default_value = "0:5")]
        g_range: Span,
    },
    /// Run the identity suite and report what each check certifies.
    Selftest {
        /// Largest sum of the labels on open ends.
        #[arg(long, default_value_t = 8)]
        max_label_sum: u32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = &cli.config;
    if let Some(n) = cfg.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            return report(ErrorRecord::io(format!("cannot start {n} worker threads: {e}"), None));
        }
    }
    let mut sink = Sink::new(cfg.format);
    let outcome = match &cli.command {
        Command::Invariant { file, sigma } => commands::invariant(cfg, file, *sigma, &mut sink).map(|_| true),
        Command::Table {
            family,
            r_range,
            n_range,
            g_range,
        } => {
            let ranges = Ranges {
                r: *r_range,
                n: *n_range,
                g: *g_range,
            };
            commands::table(cfg, *family, &ranges, &mut sink).map(|_| true)
        }
        Command::Selftest { max_label_sum } => commands::selftest(cfg, *max_label_sum, &mut sink),
    };
    sink.finish();
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        // a failed identity check is an internal assertion
        Ok(false) => ExitCode::from(4),
        Err(e) => report(e),
    }
}

fn report(e: ErrorRecord) -> ExitCode {
    eprintln!("{}", serde_json::to_string(&serde_json::json!({ "error": &e })).expect("records serialize"));
    ExitCode::from(e.exit_code)
}
