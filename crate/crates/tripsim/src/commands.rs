//! Command implementations. Each takes resolved parameters and a seed and
//! returns an [`Artifact`].

use std::f64::consts::FRAC_PI_4;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use tripsim_core::bases::{ghz_basis, GhzLabel, WChannelSpec};
use tripsim_core::classify::{classify_detailed, EntClass};
use tripsim_core::noise::{sweep_point, ChannelFamily, InputAveraging};
use tripsim_core::nonlocality::ghz_paradox;
use tripsim_core::quadrature::InputQuadrature;
use tripsim_core::teleport::ghz_epr::{table_rows, TableVersion};
use tripsim_core::teleport::ghz_meas::closed_form_average_fidelity;
use tripsim_core::teleport::{
    input_averaged_fidelity, FidelitySurface, Protocol, ProtocolKind, TeleportReport,
};
use tripsim_core::twirl::{
    isotropic, isotropic_invariant, werner, werner_invariant, IsotropicParams, TwirlKind, Twirler,
    WernerParams,
};
use tripsim_core::{DensityOp, InputQubit, StateVector, C64, TOLERANCE};

use crate::config::{
    parse_grid, parse_params, ClassifyParams, ExperimentConfig, InputArgs, NoiseSweepParams,
    ParadoxParams, ProtocolArgs, SurfaceParams, TablesParams, TeleportParams, TwirlParams,
};
use crate::error::{CliError, CliResult};
use crate::format::{complex, complex_list, Artifact, Cell, Table};

/// Runs the configured command. Relative state paths resolve against `base`.
pub fn execute(config: &ExperimentConfig, base: &Path) -> CliResult<Artifact> {
    let p = &config.params;
    match config.command.as_str() {
        "paradox" => paradox(&parse_params(p)?),
        "teleport" => teleport(&parse_params(p)?),
        "fidelity-surface" => fidelity_surface(&parse_params(p)?),
        "twirl" => twirl(&parse_params(p)?, config.seed),
        "classify" => classify(&parse_params(p)?, base),
        "noise-sweep" => noise_sweep(&parse_params(p)?, config.seed),
        "tables" => tables(&parse_params(p)?),
        other => Err(CliError::config(format!("unknown command {other:?}"))),
    }
}

fn params_json<P: serde::Serialize>(p: &P) -> CliResult<Value> {
    Ok(serde_json::to_value(p)?)
}

pub fn paradox(params: &ParadoxParams) -> CliResult<Artifact> {
    let state = ghz_basis(params.theta, GhzLabel::new(0, 0, 0)?);
    state_check(&state)?;
    let r = ghz_paradox(&state)?;
    let body = json!({
        "params": params_json(params)?,
        "expectations": {"XYY": r.xyy, "YXY": r.yxy, "YYX": r.yyx, "XXX": r.xxx},
        "lhv_product": r.lhv_product,
        "contradiction": r.contradiction,
    });
    let mut table = Table::new(vec!["observable", "expectation"]);
    for (name, v) in [
        ("XYY", r.xyy),
        ("YXY", r.yxy),
        ("YYX", r.yyx),
        ("XXX", r.xxx),
        ("LHV_XXX", r.lhv_product),
    ] {
        table.push(vec![name.into(), v.into()]);
    }
    Ok(Artifact::new("paradox", body, table))
}

fn state_check(s: &StateVector) -> CliResult<()> {
    let norm: f64 = s.amplitudes().iter().map(|a| a.norm_sqr()).sum();
    if (norm - 1.0).abs() > TOLERANCE {
        return Err(CliError::Invariant {
            name: "states are normalized",
            detail: format!("norm² = {norm}"),
        });
    }
    Ok(())
}

/// Builds a protocol, refusing parameters the protocol does not take.
pub fn build_protocol(args: &ProtocolArgs) -> CliResult<Protocol> {
    let kind: ProtocolKind = args.protocol.parse().map_err(|_| {
        let names: Vec<&str> = ProtocolKind::ALL.iter().map(|k| k.name()).collect();
        CliError::config(format!(
            "unknown protocol {:?}; expected one of {names:?}",
            args.protocol
        ))
    })?;
    let given = [
        ("theta", args.theta),
        ("theta_m", args.theta_m),
        ("theta2", args.theta2),
        ("theta3", args.theta3),
        ("a", args.a),
        ("b", args.b),
        ("c", args.c),
    ];
    let accepted: &[&str] = match kind {
        ProtocolKind::GhzEpr | ProtocolKind::EprViaGhz => &["theta"],
        ProtocolKind::GhzMeasurement => &["theta", "theta_m"],
        ProtocolKind::GhzVia3Epr => &["theta", "theta2", "theta3"],
        ProtocolKind::WChannel => &["a", "b", "c"],
    };
    if let Some((name, _)) = given
        .iter()
        .find(|(n, v)| v.is_some() && !accepted.contains(n))
    {
        return Err(CliError::config(format!(
            "parameter {name} does not apply to protocol {kind}"
        )));
    }
    let theta = args.theta.unwrap_or(FRAC_PI_4);
    let protocol = match kind {
        ProtocolKind::GhzEpr => Protocol::ghz_epr(theta)?,
        ProtocolKind::GhzMeasurement => {
            Protocol::ghz_measurement(theta, args.theta_m.unwrap_or(FRAC_PI_4))?
        }
        ProtocolKind::EprViaGhz => Protocol::epr_via_ghz(theta)?,
        ProtocolKind::GhzVia3Epr => Protocol::ghz_via_3epr([
            theta,
            args.theta2.unwrap_or(theta),
            args.theta3.unwrap_or(theta),
        ])?,
        ProtocolKind::WChannel => {
            let amp = |x: Option<f64>| C64::new(x.unwrap_or(1.0), 0.0);
            Protocol::w_channel(WChannelSpec::normalized(
                amp(args.a),
                amp(args.b),
                amp(args.c),
            )?)?
        }
    };
    Ok(protocol)
}

fn input_qubit(args: &InputArgs) -> CliResult<InputQubit> {
    Ok(InputQubit::from_population_phase(
        args.population,
        args.phase,
    )?)
}

fn input_json(q: &InputQubit) -> Value {
    json!({"c0": complex(q.c0()), "c1": complex(q.c1())})
}

fn check_completeness(report: &TeleportReport) -> CliResult<()> {
    let total = report.total_probability();
    if (total - 1.0).abs() > TOLERANCE {
        return Err(CliError::Invariant {
            name: "branch probabilities sum to 1",
            detail: format!("sum = {total}"),
        });
    }
    let gap = (report.avg_fidelity - report.avg_fidelity_unnormalized).abs();
    if gap > TOLERANCE {
        return Err(CliError::Invariant {
            name: "normalized and unnormalized fidelity accountings agree",
            detail: format!("difference = {gap:e}"),
        });
    }
    Ok(())
}

pub fn teleport(params: &TeleportParams) -> CliResult<Artifact> {
    let protocol = build_protocol(&params.protocol)?;
    let input = input_qubit(&params.input)?;
    let report = protocol.run(&input)?;
    check_completeness(&report)?;

    let mut table = Table::new(vec!["label", "p", "correction", "fidelity", "success"]);
    let branches: Vec<Value> = report
        .branches
        .iter()
        .map(|b| {
            let label = b.label_string();
            let correction = b.correction.to_string();
            table.push(vec![
                label.clone().into(),
                b.probability.into(),
                correction.clone().into(),
                b.fidelity.into(),
                b.success.into(),
            ]);
            json!({
                "label": label,
                "p": b.probability,
                "correction": correction,
                "fidelity": b.fidelity,
                "success": b.success,
            })
        })
        .collect();
    let body = json!({
        "protocol": protocol.kind().name(),
        "params": params_json(params)?,
        "input": input_json(&input),
        "branches": branches,
        "avg_fidelity": report.avg_fidelity,
        "avg_fidelity_unnormalized": report.avg_fidelity_unnormalized,
        "success_probability": report.success_probability,
        "success_fidelity": report.success_fidelity,
        "total_probability": report.total_probability(),
    });
    Ok(Artifact::new("teleport", body, table))
}

pub fn fidelity_surface(params: &SurfaceParams) -> CliResult<Artifact> {
    if params.grid < 2 {
        return Err(CliError::config("grid needs at least 2 points per axis"));
    }
    let quadrature = InputQuadrature::new(params.population_nodes, params.phase_nodes)?;
    let grid = FidelitySurface::angle_grid(params.grid);
    let values: Vec<Vec<f64>> = grid
        .par_iter()
        .map(|&theta| {
            grid.iter()
                .map(|&phi| {
                    input_averaged_fidelity(&Protocol::ghz_measurement(theta, phi)?, &quadrature)
                })
                .collect::<Result<Vec<f64>, _>>()
        })
        .collect::<Result<_, _>>()?;

    let mut table = Table::new(vec!["theta", "phi", "avg_fidelity", "closed_form"]);
    let mut worst: f64 = 0.0;
    let mut closed = Vec::with_capacity(grid.len());
    for (row, &theta) in values.iter().zip(&grid) {
        let mut closed_row = Vec::with_capacity(grid.len());
        for (&v, &phi) in row.iter().zip(&grid) {
            let c = closed_form_average_fidelity(theta, phi);
            worst = worst.max((v - c).abs());
            closed_row.push(c);
            table.push(vec![theta.into(), phi.into(), v.into(), c.into()]);
        }
        closed.push(closed_row);
    }
    let body = json!({
        "params": params_json(params)?,
        "theta_grid": grid,
        "phi_grid": grid,
        "values": values,
        "closed_form": closed,
        "max_closed_form_deviation": worst,
    });
    Ok(Artifact::new("fidelity-surface", body, table))
}

pub fn twirl(params: &TwirlParams, seed: u64) -> CliResult<Artifact> {
    let kind = match params.family.as_str() {
        "werner" => TwirlKind::Werner,
        "isotropic" => TwirlKind::Isotropic,
        other => {
            return Err(CliError::config(format!(
                "unknown twirl family {other:?} (werner or isotropic)"
            )))
        }
    };
    if params.d < 2 {
        return Err(CliError::config("d must be at least 2"));
    }
    if params.samples == 0 || params.every == 0 {
        return Err(CliError::config("samples and every must be positive"));
    }
    let rho = match (params.input.as_str(), kind) {
        ("product", TwirlKind::Werner) => basis_density(params.d, 1)?,
        ("product", TwirlKind::Isotropic) => basis_density(params.d, 0)?,
        ("family", TwirlKind::Werner) => werner(WernerParams::new(params.d, params.value)?),
        ("family", TwirlKind::Isotropic) => {
            isotropic(IsotropicParams::new(params.d, params.value)?)
        }
        (other, _) => {
            return Err(CliError::config(format!(
                "unknown twirl input {other:?} (product or family)"
            )))
        }
    };
    let invariant = match kind {
        TwirlKind::Werner => werner_invariant(&rho)?,
        TwirlKind::Isotropic => isotropic_invariant(&rho)?,
    };
    let target = kind.fixed_point(&rho)?;
    let mut twirler = Twirler::new(kind, &rho)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut table = Table::new(vec!["samples", "trace_distance"]);
    let mut history = Vec::new();
    for s in 1..=params.samples {
        twirler.step(&mut rng);
        if s % params.every == 0 || s == params.samples {
            let d = twirler.mean().trace_distance(&target)?;
            table.push(vec![s.into(), d.into()]);
            history.push(json!({"samples": s, "trace_distance": d}));
        }
    }
    let final_distance = twirler.mean().trace_distance(&target)?;
    let body = json!({
        "family": params.family,
        "d": params.d,
        "params": params_json(params)?,
        "seed": seed,
        "invariant": invariant,
        "trace_distance_history": history,
        "final_trace_distance": final_distance,
    });
    Ok(Artifact::new("twirl", body, table))
}

/// `|k⟩⟨k|` on `C^d ⊗ C^d`.
fn basis_density(d: usize, k: usize) -> CliResult<DensityOp> {
    let mut ket = vec![C64::new(0.0, 0.0); d * d];
    ket[k] = C64::new(1.0, 0.0);
    Ok(DensityOp::from_ket(&ket)?)
}

/// Accepts a bare amplitude array or `{"amplitudes": [...]}`; entries are
/// real numbers or `[re, im]` pairs.
pub fn parse_amplitudes(doc: &Value) -> CliResult<Vec<C64>> {
    let list = match doc {
        Value::Array(a) => a,
        Value::Object(m) => match m.get("amplitudes") {
            Some(Value::Array(a)) => a,
            _ => {
                return Err(CliError::config(
                    "state object needs an \"amplitudes\" array",
                ))
            }
        },
        _ => return Err(CliError::config("state must be an array of amplitudes")),
    };
    list.iter()
        .map(|v| match v {
            Value::Number(n) => Ok(C64::new(n.as_f64().unwrap_or(f64::NAN), 0.0)),
            Value::Array(p) if p.len() == 2 => match (p[0].as_f64(), p[1].as_f64()) {
                (Some(re), Some(im)) => Ok(C64::new(re, im)),
                _ => Err(CliError::config(format!("amplitude {v} is not [re, im]"))),
            },
            _ => Err(CliError::config(format!(
                "amplitude {v} is neither a number nor [re, im]"
            ))),
        })
        .collect()
}

pub fn classify(params: &ClassifyParams, base: &Path) -> CliResult<Artifact> {
    let doc = match (&params.state, &params.amplitudes) {
        (Some(path), None) => {
            let path = base.join(path);
            let text = std::fs::read_to_string(&path)
                .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str(&text)?
        }
        (None, Some(inline)) => inline.clone(),
        (Some(_), Some(_)) => {
            return Err(CliError::config(
                "give either state or amplitudes, not both",
            ))
        }
        (None, None) => return Err(CliError::config("classify needs --state FILE")),
    };
    let amplitudes = parse_amplitudes(&doc)?;
    if amplitudes.len() != 8 {
        return Err(CliError::config(format!(
            "expected 8 amplitudes, got {}",
            amplitudes.len()
        )));
    }
    let state = StateVector::new(amplitudes)?;
    let c = classify_detailed(&state)?;
    let d = &c.diagnostics;
    let partition = match c.class {
        EntClass::Biseparable(p) => Some(p.as_str()),
        _ => None,
    };
    let body = json!({
        "amplitudes": complex_list(state.amplitudes()),
        "class": c.class.to_string(),
        "partition": partition,
        "borderline": c.borderline,
        "diagnostics": {
            "single_qubit_purities": d.single_qubit_purities,
            "pair_concurrences": d.pair_concurrences,
            "three_tangle": d.three_tangle,
        },
    });
    let mut table = Table::new(vec![
        "class",
        "borderline",
        "purity_a",
        "purity_b",
        "purity_c",
        "concurrence_ab",
        "concurrence_ac",
        "concurrence_bc",
        "three_tangle",
    ]);
    let mut row: Vec<Cell> = vec![c.class.to_string().into(), c.borderline.into()];
    row.extend(d.single_qubit_purities.iter().map(|&x| Cell::from(x)));
    row.extend(d.pair_concurrences.iter().map(|&x| Cell::from(x)));
    row.push(d.three_tangle.into());
    table.push(row);
    Ok(Artifact::new("classify", body, table))
}

pub fn noise_sweep(params: &NoiseSweepParams, seed: u64) -> CliResult<Artifact> {
    let protocol = build_protocol(&params.protocol)?;
    let family: ChannelFamily = params.channel.parse().map_err(|_| {
        let names: Vec<&str> = ChannelFamily::ALL.iter().map(|f| f.name()).collect();
        CliError::config(format!(
            "unknown channel {:?}; expected one of {names:?}",
            params.channel
        ))
    })?;
    let targets: Vec<usize> = if params.target.is_empty() {
        protocol.channel_qubits().collect()
    } else {
        params.target.clone()
    };
    let grid = parse_grid(&params.grid)?;
    let averaging = if params.quadrature {
        InputAveraging::Quadrature(InputQuadrature::new(
            params.population_nodes,
            params.phase_nodes,
        )?)
    } else {
        InputAveraging::MonteCarlo {
            samples: params.samples,
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inputs = averaging.resolve(&mut rng)?;
    let points = grid
        .par_iter()
        .map(|&p| sweep_point(&protocol, family, &targets, p, &inputs))
        .collect::<Result<Vec<_>, _>>()?;

    let mut table = Table::new(vec!["p", "avg_fidelity"]);
    for pt in &points {
        table.push(vec![pt.p.into(), pt.avg_fidelity.into()]);
    }
    let body = json!({
        "protocol": protocol.kind().name(),
        "channel": family.name(),
        "targets": targets,
        "params": params_json(params)?,
        "seed": seed,
        "averaging": if params.quadrature { "quadrature" } else { "monte-carlo" },
        "input_count": inputs.len(),
        "points": points.iter().map(|pt| json!({"p": pt.p, "avg_fidelity": pt.avg_fidelity})).collect::<Vec<_>>(),
    });
    Ok(Artifact::new("noise-sweep", body, table))
}

/// Largest deviation allowed between the corrected tables and simulation.
const TABLE_TOLERANCE: f64 = 1e-12;

pub fn tables(params: &TablesParams) -> CliResult<Artifact> {
    let version = match params.version.as_str() {
        "corrected" => TableVersion::Corrected,
        "original" => TableVersion::Original,
        other => {
            return Err(CliError::config(format!(
                "unknown table version {other:?} (corrected or original)"
            )))
        }
    };
    let input = input_qubit(&params.input)?;
    let rows = table_rows(version, &input, params.theta)?;

    let mut table = Table::new(vec![
        "m",
        "n",
        "j",
        "correction",
        "eta_deviation",
        "receiver_deviation",
        "corrected_deviation",
        "probability",
        "fidelity",
    ]);
    let mut entries = Vec::with_capacity(rows.len());
    let mut worst: f64 = 0.0;
    for r in &rows {
        // A correct correction leaves twice the input amplitudes up to a
        // global phase; compare after removing that phase.
        let corrected_deviation =
            phase_aligned_deviation(&r.corrected_simulated, &input, r.probability);
        worst = worst.max(r.eta_deviation()).max(r.charlie_deviation());
        table.push(vec![
            r.m.into(),
            r.n.into(),
            r.j.into(),
            r.correction.to_string().into(),
            r.eta_deviation().into(),
            r.charlie_deviation().into(),
            corrected_deviation.into(),
            r.probability.into(),
            r.fidelity.into(),
        ]);
        entries.push(json!({
            "m": r.m,
            "n": r.n,
            "j": r.j,
            "eta_table": complex_list(&r.eta_table),
            "eta_simulated": complex_list(&r.eta_simulated),
            "receiver_table": complex_list(&r.charlie_table),
            "receiver_simulated": complex_list(&r.charlie_simulated),
            "correction": r.correction.to_string(),
            "corrected_simulated": complex_list(&r.corrected_simulated),
            "eta_deviation": r.eta_deviation(),
            "receiver_deviation": r.charlie_deviation(),
            "corrected_deviation": corrected_deviation,
            "probability": r.probability,
            "fidelity": r.fidelity,
        }));
    }
    if version == TableVersion::Corrected && worst > TABLE_TOLERANCE {
        return Err(CliError::Invariant {
            name: "simulated amplitudes reproduce the corrected tables",
            detail: format!("max deviation {worst:e}"),
        });
    }
    let body = json!({
        "params": params_json(params)?,
        "input": input_json(&input),
        "version": params.version,
        "rows": entries,
        "max_deviation": worst,
    });
    Ok(Artifact::new("tables", body, table))
}

/// Distance between `amplitudes` and the input scaled to the branch norm,
/// after removing a global phase.
fn phase_aligned_deviation(amplitudes: &[C64; 2], input: &InputQubit, probability: f64) -> f64 {
    let scale = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if probability < tripsim_core::DEGENERATE_PROBABILITY || scale == 0.0 {
        return 0.0;
    }
    let target = input.amplitudes();
    let overlap: C64 = target
        .iter()
        .zip(amplitudes)
        .map(|(t, a)| t.conj() * a)
        .sum();
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    target
        .iter()
        .zip(amplitudes)
        .map(|(t, a)| (t * phase * scale - a).norm())
        .fold(0.0, f64::max)
}
