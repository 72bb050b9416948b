//! `qnd` — model evaluation, click-stream simulation, correlation analysis
//! and scenario reports for cavity-assisted nondestructive photon detection.
//!
//! Exit codes: 0 success, 2 configuration error, 3 infeasible model.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qnd_cli::config::RunConfig;
use qnd_cli::scenario::{self, Scenario, ScenarioName};
use qnd_core::analysis::{summarize, SummaryInputs};
use qnd_core::sim::simulate;
use qnd_core::Error;

#[derive(Parser)]
#[command(name = "qnd", version, about = "Nondestructive photon detection toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Configuration file (flat key=value with [section] headers).
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Override the simulation seed.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, value_name = "DIR", default_value = "out")]
    out: PathBuf,
    /// Override the number of experimental cycles.
    #[arg(long, value_name = "N")]
    cycles: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form model queries.
    Model {
        #[command(subcommand)]
        action: ModelAction,
    },
    /// Generate a click stream (`clicks.csv` + `clicks.meta`).
    Simulate {
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Estimate g²(τ), fit it and summarize a recorded stream.
    Analyze {
        /// Click-stream CSV (a sidecar `.meta` file must sit next to it).
        input: PathBuf,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Run a canned scenario: fig2a, fig2b, fig3, fig4, figS2, projection,
    /// custom.
    Scenario {
        name: String,
        #[command(flatten)]
        opts: CommonOpts,
    },
}

#[derive(Subcommand)]
enum ModelAction {
    /// Print the derived model quantities for a configuration.
    Eval {
        #[command(flatten)]
        opts: CommonOpts,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Parse { .. } | Error::Parameter { .. } => 2,
        Error::Infeasible { .. } | Error::Domain { .. } => 3,
        _ => 1,
    }
}

fn load_config(opts: &CommonOpts, base: Option<RunConfig>) -> Result<RunConfig, Error> {
    let mut cfg = match base {
        Some(cfg) => {
            let mut cfg = cfg;
            if let Some(path) = &opts.config {
                let text = std::fs::read_to_string(path)?;
                cfg.apply_text(&text)?;
            }
            cfg.finalize()?;
            cfg
        }
        None => RunConfig::load(opts.config.as_deref())?,
    };
    if let Some(seed) = opts.seed {
        cfg.sim.seed = seed;
    }
    if let Some(cycles) = opts.cycles {
        cfg.sim.n_cycles = cycles;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Model {
            action: ModelAction::Eval { opts },
        } => {
            let cfg = load_config(&opts, None)?;
            let mut text = String::new();
            for (k, v) in scenario::model_report(&cfg)? {
                text.push_str(&format!("{k} = {v}\n"));
            }
            print!("{text}");
            Ok(())
        }
        Command::Simulate { opts } => {
            let cfg = load_config(&opts, None)?;
            let sim_cfg = cfg.build_simulation()?;
            let stream = simulate(&sim_cfg)?;
            std::fs::create_dir_all(&opts.out)?;
            let base = opts.out.join("clicks");
            qnd_core::io::write_stream(&stream, &base)?;
            std::fs::write(opts.out.join("manifest.txt"), cfg.manifest())?;
            println!(
                "wrote {} events to {}",
                stream.events.len(),
                base.with_extension("csv").display()
            );
            Ok(())
        }
        Command::Analyze { input, opts } => {
            let cfg = load_config(&opts, None)?;
            let stream = qnd_core::io::read_stream(&strip_csv(&input))?;
            let mut inputs = SummaryInputs::new(cfg.arrival_rate_per_us(), cfg.chain.q_s);
            inputs.correlation = cfg.analysis;
            let summary = summarize(&stream, &inputs)?;
            std::fs::create_dir_all(&opts.out)?;
            let hist = &summary.histogram;
            let mut text = String::from("tau_us,g2,err\n");
            for (i, c) in hist.bin_centers_us().iter().enumerate() {
                text.push_str(&format!("{c},{},{}\n", hist.g2[i], hist.err[i]));
            }
            std::fs::write(opts.out.join("histogram.csv"), text)?;
            let kv = scenario::summary_kv(&summary);
            std::fs::write(opts.out.join("summary.txt"), &kv)?;
            print!("{kv}");
            Ok(())
        }
        Command::Scenario { name, opts } => {
            let name: ScenarioName = name.parse().map_err(|msg| Error::Parse {
                line: 0,
                msg,
            })?;
            let cfg = load_config(&opts, Some(scenario::preset(name)))?;
            let out_dir = opts.out.join(name.as_str());
            let files = scenario::run_scenario(&Scenario {
                name,
                config: cfg,
                out_dir,
            })?;
            for f in files {
                println!("wrote {}", f.display());
            }
            Ok(())
        }
    }
}

/// `analyze` takes the CSV path; the stream reader wants the base path.
fn strip_csv(path: &Path) -> PathBuf {
    if path.extension().is_some_and(|e| e == "csv") {
        path.with_extension("")
    } else {
        path.to_path_buf()
    }
}
