use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use torusflux::harness::{self, Config};

#[derive(Parser)]
#[command(
    name = "torusflux",
    about = "Periodic-domain laboratory for a regularized compressible viscous fluid model",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a single run from a config file
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (overrides config and TORUSFLUX_OUT)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Monitor record stride
        #[arg(long)]
        stride: Option<usize>,
        /// Overwrite a non-empty output directory
        #[arg(long)]
        force: bool,
    },
    /// Execute the sweep cross-product declared in the config
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker pool size
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        stride: Option<usize>,
        #[arg(long)]
        force: bool,
    },
    /// Recompute the report files from persisted snapshots
    Analyze {
        /// Output directory of a previous run or sweep
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the pressure-law certification suite for the configured law
    CertifyLaw {
        #[arg(long)]
        config: PathBuf,
    },
}

fn load_config(
    path: &PathBuf,
    out: Option<PathBuf>,
    stride: Option<usize>,
    workers: Option<usize>,
    force: bool,
) -> torusflux::Result<Config> {
    let text = std::fs::read_to_string(path)?;
    let (mut cfg, warnings) = Config::parse(&text)?;
    cfg.apply_env(|k| std::env::var(k).ok())?;
    if let Some(o) = out {
        cfg.output.dir = o.display().to_string();
    }
    if let Some(s) = stride {
        cfg.monitors.stride = s;
    }
    if let Some(w) = workers {
        cfg.sweep.workers = w;
    }
    if force {
        cfg.output.force = true;
    }
    for w in warnings {
        eprintln!("warning: {w}");
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, out, stride, force } => {
            load_config(&config, out, stride, None, force).and_then(|cfg| {
                let res = harness::run_single(&cfg)?;
                println!(
                    "run {} finished: t = {}, steps = {}, mass = {}",
                    res.point.id,
                    res.outcome.final_state.t,
                    res.outcome.steps,
                    res.outcome.final_state.rho.integral()
                );
                if let Some(f) = &res.outcome.failure {
                    eprintln!("partial trajectory: {f}");
                }
                for w in &res.outcome.warnings {
                    eprintln!("warning: {w}");
                }
                println!("outputs in {}", cfg.output.dir);
                Ok(())
            })
        }
        Command::Sweep { config, out, workers, stride, force } => {
            load_config(&config, out, stride, workers, force).and_then(|cfg| {
                let report = harness::run_sweep(&cfg)?;
                println!("sweep finished: {} run(s)", report.summary.len());
                for row in &report.summary {
                    println!(
                        "  {}: mass loss {}, energy(T) {}{}",
                        row.point.id,
                        harness::fmt_f64(row.mass_loss),
                        harness::fmt_f64(row.energy_final),
                        row.failure
                            .as_ref()
                            .map(|f| format!(" [FAILED: {f}]"))
                            .unwrap_or_default()
                    );
                }
                println!("outputs in {}", cfg.output.dir);
                Ok(())
            })
        }
        Command::Analyze { out } => harness::analyze(&out).map(|report| {
            println!(
                "report regenerated in {} ({} run(s))",
                out.display(),
                report.summary.len()
            );
        }),
        Command::CertifyLaw { config } => {
            let run = || -> torusflux::Result<harness::CertificationOutcome> {
                let text = std::fs::read_to_string(&config)?;
                let (cfg, _) = Config::parse(&text)?;
                harness::certify_law(&cfg.law.build()?)
            };
            match run() {
                Ok(outcome) => {
                    print!("{}", outcome.render());
                    return if outcome.all_passed() {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::FAILURE
                    };
                }
                Err(e) => Err(e),
            }
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
