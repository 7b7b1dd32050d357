use std::path::PathBuf;
use std::process::ExitCode;

use bamsim::cli::{cmd_compare, cmd_gen_trace, cmd_run, cmd_validate, render_compare, ModelSelector, RunConfig};
use bamsim::Error;
use clap::{Args, Parser, Subcommand};

/// Bandwidth allocation model simulator for a single DS-TE link.
#[derive(Parser)]
#[command(name = "bamsim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a scenario and write time series, events and summaries.
    Run(RunArgs),
    /// Like `run`, plus a compare.csv against the first model.
    Compare(RunArgs),
    /// Write the scenario's workload trace.
    GenTrace {
        #[arg(long)]
        scenario: String,
        #[arg(long)]
        seed: Option<u64>,
        /// Output file; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a scenario file and print its parameters.
    Validate {
        #[arg(long)]
        scenario: String,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Preset name (scenario01, scenario02) or path to a JSON scenario.
    #[arg(long)]
    scenario: String,
    /// mam, rdm, alloctc, all, or a comma-separated list.
    #[arg(long, default_value = "all")]
    model: ModelSelector,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 1)]
    repetitions: u32,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

impl RunArgs {
    fn config(self) -> RunConfig {
        RunConfig {
            scenario: self.scenario,
            models: self.model,
            out_dir: self.out,
            seed: self.seed,
            repetitions: self.repetitions,
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("bamsim: {e}");
            match e {
                Error::InvariantViolation { .. } => ExitCode::from(3),
                Error::Usage(_) => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}

fn execute(command: Command) -> bamsim::Result<()> {
    match command {
        Command::Run(args) => {
            let report = cmd_run(&args.config())?;
            for rep in &report.repetitions {
                for r in &rep.runs {
                    let t = r.summary.total();
                    println!(
                        "{} seed={} {}: granted {} blocked {} preempted {} traffic {} Mbps",
                        rep.dir.display(),
                        rep.seed,
                        r.model,
                        t.granted,
                        t.blocked,
                        t.preempted,
                        t.granted_traffic
                    );
                }
            }
        }
        Command::Compare(args) => {
            let (report, tables) = cmd_compare(&args.config())?;
            for (rep, rows) in report.repetitions.iter().zip(&tables) {
                println!("{} (seed {})", rep.dir.display(), rep.seed);
                print!("{}", render_compare(rows));
            }
        }
        Command::GenTrace { scenario, seed, out } => {
            let trace = cmd_gen_trace(&scenario, seed, out.as_deref())?;
            if let Some(path) = out {
                let fp = trace.fingerprint();
                eprintln!("{} requests, seed {}, sha256 {}", trace.len(), fp.seed, fp.digest);
                eprintln!("wrote {}", path.display());
            }
        }
        Command::Validate { scenario } => {
            let s = cmd_validate(&scenario)?;
            let cfg = s.class_config();
            let bcs: Vec<String> = cfg.bc.iter().map(ToString::to_string).collect();
            let models: Vec<String> = s.models.iter().map(ToString::to_string).collect();
            println!("{}: ok", s.name());
            println!("  link capacity {} Mbps, BC = ({})", cfg.link_capacity, bcs.join(", "));
            println!("  models {}", models.join(", "));
            println!("  {} LSPs, seed {}", s.spec.total_lsps, s.spec.seed);
        }
    }
    Ok(())
}
