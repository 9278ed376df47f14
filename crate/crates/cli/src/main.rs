use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use spinboson::circuit::{build_ansatz, build_trotter, count_cx, run_statevector};
use spinboson::exact::ExactPropagator;
use spinboson::experiments::reference::{self, DepthTable};
use spinboson::experiments::{
    extrapolate_advantage, fit_depths, noise_sweep, resource_counts, trotter_depth_search, write_suite, DepthSearchOptions, ExtrapolationParams,
    NoiseSweepOptions, RegimeFits, SearchMode,
};
use spinboson::model::{build_hamiltonian, initial_state, spin_orientation, SpinBosonSpec};
use spinboson::noise::{readout_calibration, DeviceNoiseParams, Eta, NoisyConfig, ScaledNoiseModel, ShotSampler};
use spinboson::variational::{propagate_variational, Backend, IntegratorConfig};
use spinboson::{infidelity, Error, Result};

mod output;

use output::{Format, Table};

#[derive(Parser)]
#[command(name = "spinboson", version, about = "Variational and Trotter time evolution of the spin-boson model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Model JSON file, or an inline JSON object.
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    depth: Option<usize>,
    /// Noise reduction factor, a positive number or `inf`. Omit for the statevector backend.
    #[arg(long)]
    eta: Option<String>,
    #[arg(long)]
    shots: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10.0)]
    t_final: f64,
    /// Output directory; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Device noise JSON; defaults to the built-in device averages.
    #[arg(long)]
    noise: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the variational equations of motion.
    EvolveVar {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        no_mitigate: bool,
    },
    /// Gate-level Trotter circuit at fixed depth on a time grid.
    EvolveTrotter {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0.1)]
        dt: f64,
    },
    /// Smallest Trotter depth meeting each infidelity threshold.
    DepthSearch {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', default_values_t = vec![1e-2, 1e-3, 1e-4])]
        thresholds: Vec<f64>,
        #[arg(long, value_enum, default_value_t = Mode::Grid)]
        mode: Mode,
        #[arg(long, default_value_t = 10_000)]
        ceiling: usize,
    },
    /// Noisy trajectories over several η values and seeds.
    NoiseSweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', default_values_t = vec!["1".to_string(), "2".to_string(), "10".to_string(), "inf".to_string()])]
        etas: Vec<String>,
        #[arg(long, value_delimiter = ',', default_values_t = vec![11u64, 23, 37])]
        seeds: Vec<u64>,
        #[arg(long)]
        no_mitigate: bool,
    },
    /// Linear depth fits and the large-system extrapolation.
    FitExtrapolate {
        #[command(flatten)]
        common: Common,
        /// CSV with columns regime,kind,n_q,depth (kind: trotter or variational).
        /// The published tables are used when absent.
        #[arg(long)]
        depths: Option<PathBuf>,
        #[arg(long, default_value_t = 120.0)]
        target_nq: f64,
        #[arg(long, default_value_t = 100)]
        n_t: usize,
    },
    /// Parameter, circuit and gate counts for one system.
    ResourceEstimate {
        #[command(flatten)]
        common: Common,
    },
    /// Readout confusion matrix and its mitigation on sampled calibration states.
    ReadoutCalib {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 3)]
        n_qubits: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Grid,
    Restart,
}

fn load_model(common: &Common) -> Result<SpinBosonSpec> {
    let src = common.model.as_deref().ok_or_else(|| Error::Contract("--model is required".into()))?;
    let spec = if src.trim_start().starts_with('{') { SpinBosonSpec::from_json_str(src)? } else { SpinBosonSpec::from_json_file(Path::new(src))? };
    for note in spec.range_notes() {
        eprintln!("note: {note}");
    }
    Ok(spec)
}

fn device(common: &Common) -> Result<DeviceNoiseParams> {
    match &common.noise {
        Some(p) => DeviceNoiseParams::from_json_file(p),
        None => Ok(DeviceNoiseParams::default()),
    }
}

fn depth(common: &Common) -> Result<usize> {
    match common.depth {
        Some(0) => Err(Error::Contract("depth must be at least 1".into())),
        Some(d) => Ok(d),
        None => Ok(1),
    }
}

fn parse_eta(s: &str) -> Result<Eta> {
    s.parse()
}

fn evolve_var(common: &Common, no_mitigate: bool) -> Result<()> {
    let spec = load_model(common)?;
    let d = depth(common)?;
    let (backend, config) = match &common.eta {
        None => (Backend::Statevector, IntegratorConfig::statevector(common.t_final)),
        Some(e) => {
            let model = ScaledNoiseModel::new(device(common)?, parse_eta(e)?)?;
            for w in &model.warnings {
                eprintln!("warning: {w}");
            }
            let sampler = ShotSampler { shots: Some(common.shots.unwrap_or(spinboson::noise::DEFAULT_SHOTS)), seed: common.seed };
            (Backend::Noisy(NoisyConfig { model, sampler, mitigate: !no_mitigate }), IntegratorConfig::noisy(common.t_final))
        }
    };
    let mut record = match propagate_variational(&spec, d, &config, &backend) {
        Ok(r) => r,
        Err(Error::Propagation { t, source, partial }) => {
            eprintln!("propagation stopped at t = {t}: {source}");
            emit_record(common, &partial)?;
            return Err(Error::Propagation { t, source, partial });
        }
        Err(e) => return Err(e),
    };
    record.label = format!("evolve-var d={d}");
    emit_record(common, &record)
}

fn emit_record(common: &Common, record: &spinboson::variational::TrajectoryRecord) -> Result<()> {
    match common.format {
        Format::Json => {
            let text = serde_json::to_string_pretty(record)?;
            output::emit(common.out.as_deref(), "trajectory.json", &text)
        }
        Format::Csv => {
            let mut buf = Vec::new();
            record.write_csv(&mut buf)?;
            output::emit(common.out.as_deref(), "trajectory.csv", &String::from_utf8_lossy(&buf))?;
            if let Some(dir) = &common.out {
                std::fs::write(dir.join("summary.json"), record.summary_json()?)?;
            }
            Ok(())
        }
    }
}

fn evolve_trotter(common: &Common, dt: f64) -> Result<()> {
    let spec = load_model(common)?;
    let d = depth(common)?;
    if !(dt > 0.0) {
        return Err(Error::Contract("dt must be positive".into()));
    }
    let model = build_hamiltonian(&spec)?;
    let exact = ExactPropagator::restricted(&model.hamiltonian, model.layout.physical_basis())?;
    let psi0 = initial_state(&spec, &model.layout)?;
    let mut table = Table::new(&["t", "p_z", "p_z_exact", "infidelity"]);
    let n_points = (common.t_final / dt + 1e-9).floor() as usize;
    for i in 0..=n_points {
        let t = i as f64 * dt;
        let psi = run_statevector(&build_trotter(&spec, t, d)?, &[])?;
        let reference = exact.propagate(&psi0, t)?;
        table.push(vec![
            t,
            spin_orientation(&psi, model.n_qubits)?,
            spin_orientation(&reference, model.n_qubits)?,
            infidelity(&psi, &reference)?,
        ]);
    }
    table.emit(common.out.as_deref(), "trotter", common.format)
}

fn depth_search(common: &Common, thresholds: &[f64], mode: Mode, ceiling: usize) -> Result<()> {
    let spec = load_model(common)?;
    let options = DepthSearchOptions {
        t_final: common.t_final,
        ceiling,
        mode: match mode {
            Mode::Grid => SearchMode::Grid,
            Mode::Restart => SearchMode::Restart,
        },
        ..Default::default()
    };
    let results = thresholds.iter().map(|&eps| trotter_depth_search(&spec, eps, &options)).collect::<Result<Vec<_>>>()?;
    match common.format {
        Format::Json => output::emit(common.out.as_deref(), "depths.json", &serde_json::to_string_pretty(&results)?),
        Format::Csv => {
            let mut table = Table::new(&["M", "n_max", "epsilon", "delta", "n_qubits", "eps_thresh", "final_depth", "checks"]);
            for r in &results {
                table.push(vec![r.m as f64, r.n_max as f64, r.epsilon, r.delta, r.n_qubits as f64, r.eps_thresh, r.final_depth as f64, r.checks as f64]);
            }
            table.emit(common.out.as_deref(), "depths", Format::Csv)
        }
    }
}

fn sweep(common: &Common, etas: &[String], seeds: &[u64], no_mitigate: bool) -> Result<()> {
    let spec = load_model(common)?;
    let etas = etas.iter().map(|s| parse_eta(s)).collect::<Result<Vec<_>>>()?;
    let options = NoiseSweepOptions {
        depth: depth(common)?,
        shots: Some(common.shots.unwrap_or(spinboson::noise::DEFAULT_SHOTS)),
        seeds: seeds.to_vec(),
        device: device(common)?,
        mitigate: !no_mitigate,
        config: IntegratorConfig::noisy(common.t_final),
    };
    let result = noise_sweep(&spec, &etas, &options)?;
    for run in &result.runs {
        if let Err(e) = &run.outcome {
            eprintln!("run {} failed: {e}", run.label);
        }
    }
    if let Some(dir) = &common.out {
        write_suite(&result.runs, &dir.join("runs"))?;
    }
    match common.format {
        Format::Json => output::emit(common.out.as_deref(), "sweep.json", &serde_json::to_string_pretty(&result.rows)?),
        Format::Csv => {
            let mut out = String::from("eta,n_runs,n_failed,mean_final_infidelity,std_final_infidelity,mean_trajectory_infidelity,mean_function_calls\n");
            for r in &result.rows {
                out += &format!(
                    "{},{},{},{},{},{},{}\n",
                    r.eta, r.n_runs, r.n_failed, r.mean_final_infidelity, r.std_final_infidelity, r.mean_trajectory_infidelity, r.mean_function_calls
                );
            }
            output::emit(common.out.as_deref(), "sweep.csv", &out)
        }
    }
}

/// Depth points per regime: `(regime, trotter columns, variational points)`.
type RegimePoints = Vec<(String, Vec<Vec<(f64, f64)>>, Vec<(f64, f64)>)>;

fn published_points() -> RegimePoints {
    [reference::DEPTHS_BIASED, reference::DEPTHS_TUNNELING]
        .iter()
        .map(|t: &DepthTable| {
            let trotter = (0..3).map(|c| reference::column_points(t, c)).collect();
            (format!("eps{}_delta{}", t.epsilon, t.delta), trotter, reference::column_points(t, 3))
        })
        .collect()
}

fn read_points(path: &Path) -> Result<RegimePoints> {
    let mut reader = csv::Reader::from_path(path)?;
    let mut regimes: RegimePoints = Vec::new();
    for row in reader.records() {
        let row = row?;
        let field = |i: usize| row.get(i).ok_or_else(|| Error::Contract(format!("depth file row has {} fields, expected 4", row.len())));
        let regime = field(0)?.to_string();
        let kind = field(1)?;
        let parse = |s: &str| s.trim().parse::<f64>().map_err(|_| Error::Contract(format!("not a number: {s:?}")));
        let point = (parse(field(2)?)?, parse(field(3)?)?);
        let idx = match regimes.iter().position(|r| r.0 == regime) {
            Some(i) => i,
            None => {
                regimes.push((regime, vec![Vec::new()], Vec::new()));
                regimes.len() - 1
            }
        };
        match kind {
            "trotter" => regimes[idx].1[0].push(point),
            "variational" => regimes[idx].2.push(point),
            other => return Err(Error::Contract(format!("unknown depth kind {other:?}"))),
        }
    }
    Ok(regimes)
}

fn fit_extrapolate(common: &Common, depths: Option<&Path>, target_nq: f64, n_t: usize) -> Result<()> {
    let points = match depths {
        Some(p) => read_points(p)?,
        None => published_points(),
    };
    let mut fits = RegimeFits::default();
    let mut rows = Vec::new();
    for (regime, trotter, var) in &points {
        for (i, col) in trotter.iter().enumerate() {
            if col.is_empty() {
                continue;
            }
            let f = fit_depths(col)?;
            rows.push(serde_json::json!({"regime": regime, "kind": "trotter", "column": i, "fit": f}));
            if i + 1 == trotter.len() {
                fits.trotter.push(f);
            }
        }
        if !var.is_empty() {
            let f = fit_depths(var)?;
            rows.push(serde_json::json!({"regime": regime, "kind": "variational", "fit": f}));
            fits.variational.push(f);
        }
    }
    let params = ExtrapolationParams { target_nq, n_t, t_final: common.t_final, ..Default::default() };
    let report = extrapolate_advantage(&fits, &params)?;
    let text = serde_json::to_string_pretty(&serde_json::json!({"fits": rows, "extrapolation": report}))?;
    output::emit(common.out.as_deref(), "extrapolation.json", &text)
}

fn resource_estimate(common: &Common) -> Result<()> {
    let spec = load_model(common)?;
    let d = depth(common)?;
    let counts = resource_counts(spec.m, spec.n_max, d);
    let cost = count_cx(&build_ansatz(&spec, d)?, true);
    let value = serde_json::json!({
        "M": spec.m,
        "n_max": spec.n_max,
        "depth": d,
        "counts": counts,
        "circuit": {"n_cx": cost.n_cx, "n_cx_linear_topology": cost.n_cx_linear_topology, "two_qubit_depth": cost.two_qubit_depth},
    });
    match common.format {
        Format::Json => output::emit(common.out.as_deref(), "resources.json", &serde_json::to_string_pretty(&value)?),
        Format::Csv => {
            let mut table = Table::new(&["M", "n_max", "depth", "n_theta", "n_q", "n_h", "n_dtheta", "n_cx", "n_cx_circuit", "n_cx_linear_topology", "two_qubit_depth"]);
            table.push(
                [spec.m, spec.n_max, d, counts.n_theta, counts.n_q, counts.n_h, counts.n_dtheta, counts.n_cx, cost.n_cx, cost.n_cx_linear_topology, cost.two_qubit_depth]
                    .map(|v| v as f64)
                    .to_vec(),
            );
            table.emit(common.out.as_deref(), "resources", Format::Csv)
        }
    }
}

fn readout_calib(common: &Common, n_qubits: usize) -> Result<()> {
    let eta = parse_eta(common.eta.as_deref().unwrap_or("1"))?;
    let readout = ScaledNoiseModel::new(device(common)?, eta)?.readout();
    let calib = readout_calibration(n_qubits, &readout)?;
    let sampler = ShotSampler { shots: Some(common.shots.unwrap_or(spinboson::noise::DEFAULT_SHOTS)), seed: common.seed };
    let mut table = Table::new(&["state", "p_correct", "observed", "mitigated", "sigma"]);
    for j in 0..calib.ncols() {
        let probs: Vec<f64> = calib.column(j).iter().copied().collect();
        let observed = sampler.estimate(&probs, j as u64);
        let mitigated = readout.mitigate(&observed)?;
        let shots = sampler.shots.unwrap_or(1) as f64;
        table.push(vec![j as f64, probs[j], observed[j], mitigated[j], (probs[j] * (1.0 - probs[j]) / shots).sqrt()]);
    }
    table.emit(common.out.as_deref(), "readout", common.format)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::EvolveVar { common, no_mitigate } => evolve_var(&common, no_mitigate),
        Command::EvolveTrotter { common, dt } => evolve_trotter(&common, dt),
        Command::DepthSearch { common, thresholds, mode, ceiling } => depth_search(&common, &thresholds, mode, ceiling),
        Command::NoiseSweep { common, etas, seeds, no_mitigate } => sweep(&common, &etas, &seeds, no_mitigate),
        Command::FitExtrapolate { common, depths, target_nq, n_t } => fit_extrapolate(&common, depths.as_deref(), target_nq, n_t),
        Command::ResourceEstimate { common } => resource_estimate(&common),
        Command::ReadoutCalib { common, n_qubits } => readout_calib(&common, n_qubits),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_contract() {
                ExitCode::from(2)
            } else if e.is_capacity() {
                ExitCode::from(3)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
