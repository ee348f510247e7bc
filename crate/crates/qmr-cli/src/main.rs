use clap::Parser;
use qmr_cli::config::{parse_config, Workflow};
use qmr_cli::runner::{run, RunError};
use qmr_cli::validate;
use std::path::PathBuf;

/// Quasi-Minnaert resonance sweeps for a hard elastic unit-ball inclusion.
#[derive(Parser)]
#[command(name = "qmr", version, disable_help_subcommand = true)]
struct Cli {
    /// Workflow: localization, resonance, stress, design, or validate.
    workflow: String,

    /// Path to a flat key=value experiment config.
    #[arg(long)]
    config: PathBuf,

    /// Output CSV path; overrides any `out` key in the config. Defaults
    /// to stdout.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Worker threads for the (omega, n) sweep. Output order is
    /// deterministic regardless.
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let cli = Cli::parse();
    let workflow: Workflow = match cli.workflow.parse() {
        Ok(w) => w,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let text = match std::fs::read_to_string(&cli.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read config {}: {e}", cli.config.display());
            return 2;
        }
    };
    let cfg = match parse_config(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    // The positional argument is authoritative; a `workflow` key in the
    // config only documents intent.
    if workflow == Workflow::Validate {
        return if validate::run_all() { 0 } else { 3 };
    }

    let csv = match run(workflow, &cfg, cli.threads) {
        Ok(csv) => csv,
        Err(e) => {
            eprintln!("error: {}", e.message());
            return e.exit_code();
        }
    };

    let out = cli.out.or_else(|| cfg.out.as_ref().map(PathBuf::from));
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, csv) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return RunError::Io(String::new()).exit_code();
            }
        }
        None => print!("{csv}"),
    }
    0
}
