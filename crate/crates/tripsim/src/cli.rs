//! Command-line surface. Every subcommand lowers to an [`ExperimentConfig`].

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::commands;
use crate::config::{
    ClassifyParams, ExperimentConfig, NoiseSweepParams, ParadoxParams, SurfaceParams, TablesParams,
    TeleportParams, TwirlParams, SEED_ENV,
};
use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(
    name = "tripsim",
    version,
    about = "Tripartite entanglement and teleportation simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format: json or csv.
    #[arg(long, global = true)]
    pub out: Option<String>,
    /// Write the artifact here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// RNG seed; TRIPSIM_SEED takes precedence.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// GHZ correlators and the local hidden-variable contradiction.
    Paradox(ParadoxParams),
    /// Branch-by-branch run of one teleportation protocol.
    Teleport(TeleportParams),
    /// Input-averaged fidelity of GHZ-measurement teleportation over both angles.
    FidelitySurface(SurfaceParams),
    /// Monte-Carlo twirl convergence towards the Werner or isotropic state.
    Twirl(TwirlParams),
    /// SLOCC class of a three-qubit pure state.
    Classify(ClassifyParams),
    /// Average fidelity under Kraus noise on the channel qubits.
    NoiseSweep(NoiseSweepParams),
    /// GHZ-EPR relay amplitudes and corrections against simulation.
    Tables(TablesParams),
    /// Run an experiment described by a JSON config file.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

impl Cli {
    /// The experiment this invocation asks for, plus the directory relative
    /// paths inside it resolve against.
    pub fn into_config(self, seed_env: Option<&str>) -> CliResult<(ExperimentConfig, PathBuf)> {
        let (mut config, base) = match self.command {
            Command::Paradox(p) => (ExperimentConfig::new("paradox", &p)?, PathBuf::from(".")),
            Command::Teleport(p) => (ExperimentConfig::new("teleport", &p)?, PathBuf::from(".")),
            Command::FidelitySurface(p) => (
                ExperimentConfig::new("fidelity-surface", &p)?,
                PathBuf::from("."),
            ),
            Command::Twirl(p) => (ExperimentConfig::new("twirl", &p)?, PathBuf::from(".")),
            Command::Classify(p) => (ExperimentConfig::new("classify", &p)?, PathBuf::from(".")),
            Command::NoiseSweep(p) => (
                ExperimentConfig::new("noise-sweep", &p)?,
                PathBuf::from("."),
            ),
            Command::Tables(p) => (ExperimentConfig::new("tables", &p)?, PathBuf::from(".")),
            Command::Run { config } => {
                let text = std::fs::read_to_string(&config).map_err(|e| {
                    CliError::config(format!("cannot read {}: {e}", config.display()))
                })?;
                let base = config
                    .parent()
                    .map(Path::to_path_buf)
                    .unwrap_or_else(|| PathBuf::from("."));
                (ExperimentConfig::from_json(&text)?, base)
            }
        };
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(out) = self.out {
            config.output.format = Some(out);
        }
        if let Some(path) = self.output {
            config.output.path = Some(path);
        }
        config.apply_seed_env(seed_env)?;
        Ok((config, base))
    }
}

/// Runs an invocation end to end and returns the rendered artifact, also
/// writing it to the configured path if there is one.
pub fn run(cli: Cli) -> CliResult<Option<String>> {
    let seed_env = std::env::var(SEED_ENV).ok();
    let (config, base) = cli.into_config(seed_env.as_deref())?;
    let format = config.format()?;
    let artifact = commands::execute(&config, &base)?;
    let text = artifact.render(format)?;
    match &config.output.path {
        Some(path) => {
            std::fs::write(path, text)?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}
