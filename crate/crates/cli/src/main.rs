use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use coarsekit_cli::{parse_input_with_cap, run_command, Command, ExportKind, Options};

/// Exact computations on metrics and coarse structure of finite and lattice groups.
#[derive(Debug, Parser)]
#[command(name = "coarsekit", version)]
struct Args {
    command: Command,
    /// Problem file in CGK format.
    input: PathBuf,
    /// Write report.txt and exports into this directory instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Exports to produce.
    #[arg(long, value_delimiter = ',')]
    export: Vec<ExportKind>,
    /// Overrides the radius parameter `M`, or the ball radius for lattice domains.
    #[arg(long)]
    radius: Option<String>,
    /// Enumeration cap on element counts.
    #[arg(long, default_value_t = coarsekit::group::DEFAULT_CAP)]
    cap: usize,
    /// Overrides the `bound` parameter.
    #[arg(long)]
    bound: Option<String>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let started = Instant::now();
    let text = match std::fs::read_to_string(&args.input) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", args.input.display());
            return ExitCode::from(2);
        }
    };
    let spec = match parse_input_with_cap(&text, args.cap) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {}: {e}", args.input.display());
            return ExitCode::from(2);
        }
    };
    let opts = Options {
        radius: args.radius,
        cap: args.cap,
        bound: args.bound,
    };
    let run = match run_command(&spec, args.command, &opts) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = run.full_report().to_text();
    let stem = args.command.name();
    let mut requested = run.exports.iter().filter(|e| args.export.contains(&e.kind));
    match &args.out {
        Some(dir) => {
            let write = |name: String, body: &str| {
                std::fs::write(dir.join(&name), body).map_err(|e| format!("{}: {e}", dir.join(name).display()))
            };
            let result = std::fs::create_dir_all(dir)
                .map_err(|e| format!("{}: {e}", dir.display()))
                .and_then(|_| write("report.txt".into(), &text))
                .and_then(|_| {
                    requested.try_for_each(|e| write(format!("{stem}.{}", e.kind.extension()), &e.contents))
                });
            if let Err(e) = result {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        }
        None => {
            print!("{text}");
            for e in requested {
                println!("=== {stem}.{} ===", e.kind.extension());
                print!("{}", e.contents);
            }
        }
    }
    eprintln!("elapsed: {:.3}s", started.elapsed().as_secs_f64());
    if run.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
