//! Experiment configuration: one command, its parameters, a seed and an
//! output destination. Command-line flags and config files both end up here.

use std::f64::consts::FRAC_PI_4;
use std::path::PathBuf;

use clap::Args;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};
use crate::format::Format;

/// Environment variable that overrides any configured seed.
pub const SEED_ENV: &str = "TRIPSIM_SEED";

pub const COMMANDS: &[&str] = &[
    "paradox",
    "teleport",
    "fidelity-surface",
    "twirl",
    "classify",
    "noise-sweep",
    "tables",
];

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    pub format: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: String,
    #[serde(default)]
    pub params: Map<String, Value>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: OutputSpec,
}

impl ExperimentConfig {
    pub fn new<P: Serialize>(command: &str, params: &P) -> CliResult<Self> {
        let Value::Object(params) = serde_json::to_value(params)? else {
            unreachable!("parameter structs serialize to objects")
        };
        Ok(Self {
            command: command.to_owned(),
            params,
            seed: 0,
            output: OutputSpec::default(),
        })
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        let config: Self = serde_json::from_str(text)?;
        if !COMMANDS.contains(&config.command.as_str()) {
            return Err(CliError::config(format!(
                "unknown command {:?}",
                config.command
            )));
        }
        Ok(config)
    }

    /// Applies `TRIPSIM_SEED` when set.
    pub fn apply_seed_env(&mut self, value: Option<&str>) -> CliResult<()> {
        if let Some(v) = value {
            self.seed = v.trim().parse().map_err(|_| {
                CliError::config(format!("{SEED_ENV}={v:?} is not a 64-bit unsigned integer"))
            })?;
        }
        Ok(())
    }

    /// The requested format, or the command's natural one.
    pub fn format(&self) -> CliResult<Format> {
        match &self.output.format {
            Some(f) => f.parse(),
            None if matches!(self.command.as_str(), "fidelity-surface" | "noise-sweep") => {
                Ok(Format::Csv)
            }
            None => Ok(Format::Json),
        }
    }
}

/// Deserializes `params`, rejecting keys the parameter struct does not
/// define. Missing keys take their defaults.
pub fn parse_params<P>(params: &Map<String, Value>) -> CliResult<P>
where
    P: Serialize + DeserializeOwned + Default,
{
    let Value::Object(known) = serde_json::to_value(P::default())? else {
        unreachable!("parameter structs serialize to objects")
    };
    if let Some(unknown) = params.keys().find(|k| !known.contains_key(*k)) {
        let mut names: Vec<&String> = known.keys().collect();
        names.sort();
        return Err(CliError::config(format!(
            "unknown parameter {unknown:?}; expected one of {names:?}"
        )));
    }
    Ok(serde_json::from_value(Value::Object(params.clone()))?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(default)]
pub struct ProtocolArgs {
    /// ghz-epr, ghz-meas, epr-via-ghz, ghz-via-3epr or w-channel.
    #[arg(long, default_value = "ghz-meas")]
    pub protocol: String,
    /// Channel angle; the relay-measurement angle for ghz-epr. Defaults to π/4.
    #[arg(long)]
    pub theta: Option<f64>,
    /// GHZ-measurement angle (ghz-meas). Defaults to π/4.
    #[arg(long = "theta-m")]
    pub theta_m: Option<f64>,
    /// Second and third pair angles (ghz-via-3epr). Default to `theta`.
    #[arg(long)]
    pub theta2: Option<f64>,
    #[arg(long)]
    pub theta3: Option<f64>,
    /// Real W-channel amplitudes on |100>, |010>, |001>; normalized on use.
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
}

impl Default for ProtocolArgs {
    fn default() -> Self {
        Self {
            protocol: "ghz-meas".into(),
            theta: None,
            theta_m: None,
            theta2: None,
            theta3: None,
            a: None,
            b: None,
            c: None,
        }
    }
}

/// Input qubit `√x |0⟩ + e^{iφ} √(1−x) |1⟩`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(default)]
pub struct InputArgs {
    /// Population x = |c0|^2 of the input qubit.
    #[arg(long, default_value_t = 0.5)]
    pub population: f64,
    /// Relative phase of the input qubit.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phase: f64,
}

impl Default for InputArgs {
    fn default() -> Self {
        Self {
            population: 0.5,
            phase: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(default)]
pub struct ParadoxParams {
    /// Angle of the GHZ-type state cos θ|000> + sin θ|111>.
    #[arg(long, default_value_t = FRAC_PI_4)]
    pub theta: f64,
}

impl Default for ParadoxParams {
    fn default() -> Self {
        Self { theta: FRAC_PI_4 }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(default)]
pub struct TeleportParams {
    #[command(flatten)]
    #[serde(flatten)]
    pub protocol: ProtocolArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub input: InputArgs,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(default)]
pub struct SurfaceParams {
    /// Points per angle axis over [0, π/2].
    #[arg(long, default_value_t = 21)]
    pub grid: usize,
    /// Gauss-Legendre nodes in the input population.
    #[arg(long, default_value_t = 64)]
    pub population_nodes: usize,
    /// Equally spaced nodes in the input phase.
    #[arg(long, default_value_t = 32)]
    pub phase_nodes: usize,
}

impl Default for SurfaceParams {
    fn default() -> Self {
        Self {
            grid: 21,
            population_nodes: 64,
            phase_nodes: 32,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(default)]
pub struct TwirlParams {
    /// werner (U⊗U) or isotropic (U⊗U*).
    #[arg(long, default_value = "werner")]
    pub family: String,
    /// Local dimension.
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// product: |0,1> for werner, |0,0> for isotropic. family: the family
    /// member with parameter `value`.
    #[arg(long, default_value = "product")]
    pub input: String,
    #[arg(long, default_value_t = 0.7)]
    pub value: f64,
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
    /// Record the trace distance every this many samples.
    #[arg(long, default_value_t = 100)]
    pub every: usize,
}

impl Default for TwirlParams {
    fn default() -> Self {
        Self {
            family: "werner".into(),
            d: 2,
            input: "product".into(),
            value: 0.7,
            samples: 2000,
            every: 100,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(default)]
pub struct ClassifyParams {
    /// JSON file holding eight amplitudes, either as a bare array or under
    /// "amplitudes"; each entry is a real number or [re, im].
    #[arg(long)]
    pub state: Option<PathBuf>,
    /// Inline amplitudes (config files only).
    #[arg(skip)]
    pub amplitudes: Option<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(default)]
pub struct NoiseSweepParams {
    #[command(flatten)]
    #[serde(flatten)]
    pub protocol: ProtocolArgs,
    /// bitflip, phaseflip, depolarizing or amplitude-damping.
    #[arg(long, default_value = "bitflip")]
    pub channel: String,
    /// Channel qubits hit by the noise, comma separated. Empty means every
    /// channel qubit.
    #[arg(long, value_delimiter = ',')]
    pub target: Vec<usize>,
    /// start:stop:step, or a comma-separated list of values.
    #[arg(long, default_value = "0:1:0.05")]
    pub grid: String,
    /// Monte-Carlo input samples.
    #[arg(long, default_value_t = 256)]
    pub samples: usize,
    /// Use the population/phase quadrature instead of sampling.
    #[arg(long)]
    pub quadrature: bool,
    #[arg(long, default_value_t = 16)]
    pub population_nodes: usize,
    #[arg(long, default_value_t = 16)]
    pub phase_nodes: usize,
}

impl Default for NoiseSweepParams {
    fn default() -> Self {
        Self {
            protocol: ProtocolArgs::default(),
            channel: "bitflip".into(),
            target: Vec::new(),
            grid: "0:1:0.05".into(),
            samples: 256,
            quadrature: false,
            population_nodes: 16,
            phase_nodes: 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(default)]
pub struct TablesParams {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: InputArgs,
    /// Relay-measurement angle.
    #[arg(long, default_value_t = FRAC_PI_4)]
    pub theta: f64,
    /// corrected or original.
    #[arg(long, default_value = "corrected")]
    pub version: String,
}

impl Default for TablesParams {
    fn default() -> Self {
        Self {
            input: InputArgs::default(),
            theta: FRAC_PI_4,
            version: "corrected".into(),
        }
    }
}

/// Parses `start:stop:step` or `v1,v2,...`.
pub fn parse_grid(spec: &str) -> CliResult<Vec<f64>> {
    let bad = || {
        CliError::config(format!(
            "invalid grid {spec:?}; expected start:stop:step or a comma-separated list"
        ))
    };
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [start, stop, step] => {
            let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
            if !step.is_finite()
                || step <= 0.0
                || stop < start
                || !start.is_finite()
                || !stop.is_finite()
            {
                return Err(bad());
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            Ok((0..count).map(|k| start + k as f64 * step).collect())
        }
        [list] => list.split(',').map(num).collect(),
        _ => Err(bad()),
    }
}
