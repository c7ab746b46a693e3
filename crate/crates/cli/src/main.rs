use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use czest_cli::{load_scenario, metrics_path, parse_methods, run_scenario, Overrides};
use czest_core::mixmono::FamilyStrategy;

#[derive(Parser)]
#[command(
    name = "estimate",
    version,
    about = "Guaranteed set-membership state estimation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write metrics, sets and polygons.
    Run {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Comma-separated list of RRSR, D-RRSR, D-ZB, D-CZ, COMB.
        #[arg(long)]
        methods: Option<String>,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Monte-Carlo samples per volume estimate.
        #[arg(long)]
        samples: Option<usize>,
        /// canonical, canonical+K, exhaustive or adaptive.
        #[arg(long)]
        family: Option<FamilyStrategy>,
    },
    /// Validate a scenario without running it.
    Check {
        #[arg(long)]
        scenario: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            scenario,
            out,
            methods,
            steps,
            seed,
            samples,
            family,
        } => {
            let methods = match methods.as_deref().map(parse_methods).transpose() {
                Ok(m) => m,
                Err(e) => {
                    eprintln!("error: --methods: {e}");
                    return ExitCode::from(2);
                }
            };
            let overrides = Overrides {
                methods,
                steps,
                seed,
                samples,
                family,
            };
            run_scenario(&scenario, &out, &overrides).map(|r| {
                println!(
                    "wrote {} rows to {}",
                    r.rows.len(),
                    metrics_path(&out).display()
                );
            })
        }
        Command::Check { scenario } => load_scenario(&scenario, &Overrides::default()).map(|s| {
            println!("ok: model {}, {} steps, methods {}", s.model, s.steps, {
                let names: Vec<String> = s.methods.iter().map(ToString::to_string).collect();
                names.join(",")
            });
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
