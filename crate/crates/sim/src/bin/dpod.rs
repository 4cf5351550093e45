use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dpod_sim::config::{parse_snr_range, Preset, SimConfig};
use dpod_sim::model_io::{save_models, ModelBody, SavedModel};
use dpod_sim::sim::{run_sweep, train_all, Scenario};
use dpod_sim::{selftest, SimResult};

#[derive(Parser)]
#[command(name = "dpod", version, about = "DFT-s-OFDM link simulation with receiver-side PA post-distortion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train the configured compensators and run a BER sweep.
    Simulate {
        #[arg(long)]
        config: Option<PathBuf>,
        /// table1, desk or desk-fading; overrides the preset named in the config.
        #[arg(long)]
        preset: Option<String>,
        /// SNR grid in dB as lo:step:hi.
        #[arg(long)]
        snr: Option<String>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Comma-separated algorithm ids.
        #[arg(long, value_delimiter = ',')]
        algorithms: Option<Vec<String>>,
        /// CSV output; standard output if omitted.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Append to an existing CSV.
        #[arg(long)]
        append: bool,
    },
    /// Train the configured compensators and save them as JSON.
    Train {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        model_out: PathBuf,
    },
    /// Run the built-in property checks.
    Selftest,
}

fn load(config: Option<PathBuf>, preset: Option<String>) -> SimResult<SimConfig> {
    let preset = preset.as_deref().map(Preset::parse).transpose()?;
    match config {
        Some(path) => SimConfig::load(&path, preset),
        None => {
            let cfg = preset.unwrap_or(Preset::Desk).config();
            cfg.validate()?;
            Ok(cfg)
        }
    }
}

fn run(cli: Cli) -> SimResult<bool> {
    match cli.command {
        Command::Simulate {
            config,
            preset,
            snr,
            trials,
            seed,
            algorithms,
            output,
            append,
        } => {
            let mut cfg = load(config, preset)?;
            if let Some(s) = snr {
                cfg.sweep.snr_db = parse_snr_range(&s)?;
            }
            if let Some(t) = trials {
                cfg.sweep.trials = t;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(ids) = algorithms {
                cfg.select_algorithms(&ids)?;
            }
            if output.is_some() {
                cfg.output = output;
            }
            cfg.append |= append;
            cfg.validate()?;
            let result = run_sweep(&cfg)?;
            if cfg.output.is_none() {
                print!("{}", result.to_csv(true));
            }
            Ok(true)
        }
        Command::Train {
            config,
            preset,
            model_out,
        } => {
            let cfg = load(config, preset)?;
            let scn = Scenario::new(cfg)?;
            let models = train_all(&scn)?;
            let saved: Vec<SavedModel> = scn
                .cfg
                .algorithms
                .iter()
                .zip(&models)
                .filter_map(|(a, m)| {
                    m.as_ref().map(|m| SavedModel {
                        id: a.id.clone(),
                        placement: a.placement,
                        body: ModelBody::from_model(m),
                    })
                })
                .collect();
            save_models(&model_out, &saved)?;
            eprintln!("wrote {} models to {}", saved.len(), model_out.display());
            Ok(true)
        }
        Command::Selftest => {
            let mut ok = true;
            for c in selftest::run_all() {
                match c.outcome {
                    Ok(()) => println!("ok    {}", c.name),
                    Err(e) => {
                        ok = false;
                        println!("FAIL  {}: {e}", c.name);
                    }
                }
            }
            Ok(ok)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
