use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use resurgence_cli::{emit, parse_config, run, Overrides};

/// Runs a resurgence job and writes its report.
#[derive(Parser, Debug)]
#[command(name = "resurgence", version)]
struct Args {
    /// Job description, TOML or JSON.
    #[arg(long)]
    config: PathBuf,
    /// Report file (json) or directory (csv); stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_parser = ["json", "csv"])]
    format: Option<String>,
    #[arg(long)]
    window: Option<u64>,
    #[arg(long)]
    cutoff: Option<u64>,
    #[arg(long)]
    kmax: Option<u64>,
    #[arg(long)]
    horizon: Option<u64>,
    /// Print the normalized config instead of running it.
    #[arg(long)]
    normalize: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let text = match std::fs::read_to_string(&args.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {}: {e}", args.config.display());
            return ExitCode::from(2);
        }
    };
    let cfg = match parse_config(&text) {
        Ok(c) => c,
        Err(errs) => {
            for e in errs {
                eprintln!("{e}");
            }
            return ExitCode::from(2);
        }
    };
    if args.normalize {
        print!("{}", cfg.to_toml());
        return ExitCode::SUCCESS;
    }
    let ov = Overrides { window: args.window, cutoff: args.cutoff, kmax: args.kmax, horizon: args.horizon };
    let report = match run(&cfg, &ov) {
        Ok(r) => r,
        Err(errs) => {
            for e in errs {
                eprintln!("{e}");
            }
            return ExitCode::from(2);
        }
    };
    let format = args.format.or(cfg.output.format.clone()).unwrap_or_else(|| "json".into());
    let out = args.out.or(cfg.output.path.as_ref().map(PathBuf::from));
    if let Err(e) = emit::write(&report, &format, out.as_deref()) {
        eprintln!("cannot write report: {e}");
        return ExitCode::from(2);
    }
    for t in report.tasks.iter().filter(|t| t.status == "error") {
        eprintln!("task {} ({}) failed: {}", t.index, t.op, t.error.as_deref().unwrap_or(""));
    }
    if report.failed() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
