use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::SpinBosonSpec;
use crate::noise::{DeviceNoiseParams, Eta, NoisyConfig, ScaledNoiseModel, ShotSampler};
use crate::variational::{propagate_variational, Backend, IntegratorConfig, TrajectoryRecord, TrajectorySummary};

#[derive(Debug, Clone)]
pub struct SuiteJob {
    pub label: String,
    pub spec: SpinBosonSpec,
    pub depth: usize,
    pub backend: Backend,
    pub config: IntegratorConfig,
}

#[derive(Debug)]
pub struct SuiteRun {
    pub label: String,
    pub spec: SpinBosonSpec,
    pub depth: usize,
    pub outcome: Result<TrajectoryRecord>,
}

impl SuiteRun {
    pub fn record(&self) -> Option<&TrajectoryRecord> {
        self.outcome.as_ref().ok()
    }
}

/// Row of the suite summary; failed runs keep their error text.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteSummaryRow {
    pub label: String,
    pub m: usize,
    pub n_max: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub depth: usize,
    pub summary: Option<TrajectorySummary>,
    pub error: Option<String>,
}

pub fn run_label(spec: &SpinBosonSpec, depth: usize, backend: &str) -> String {
    format!("M{}_n{}_eps{}_delta{}_d{}_{}", spec.m, spec.n_max, spec.epsilon, spec.delta, depth, backend)
}

/// Every (spec, depth, backend) combination, in that nesting order.
pub fn suite_jobs(specs: &[SpinBosonSpec], depths: &[usize], backends: &[(String, Backend)], config: &IntegratorConfig) -> Vec<SuiteJob> {
    let mut jobs = Vec::new();
    for spec in specs {
        for &depth in depths {
            for (name, backend) in backends {
                jobs.push(SuiteJob { label: run_label(spec, depth, name), spec: spec.clone(), depth, backend: backend.clone(), config: config.clone() });
            }
        }
    }
    jobs
}

/// Runs jobs in parallel. A failing run is reported in its slot; the others proceed.
pub fn run_jobs(jobs: Vec<SuiteJob>) -> Vec<SuiteRun> {
    jobs.into_par_iter()
        .map(|job| {
            let outcome = propagate_variational(&job.spec, job.depth, &job.config, &job.backend).map(|mut r| {
                r.label = job.label.clone();
                r
            });
            SuiteRun { label: job.label, spec: job.spec, depth: job.depth, outcome }
        })
        .collect()
}

pub fn run_trajectory_suite(specs: &[SpinBosonSpec], depths: &[usize], backends: &[(String, Backend)], config: &IntegratorConfig) -> Vec<SuiteRun> {
    run_jobs(suite_jobs(specs, depths, backends, config))
}

pub fn summarize(runs: &[SuiteRun]) -> Vec<SuiteSummaryRow> {
    runs.iter()
        .map(|r| SuiteSummaryRow {
            label: r.label.clone(),
            m: r.spec.m,
            n_max: r.spec.n_max,
            epsilon: r.spec.epsilon,
            delta: r.spec.delta,
            depth: r.depth,
            summary: r.record().map(TrajectoryRecord::summary),
            error: r.outcome.as_ref().err().map(ToString::to_string),
        })
        .collect()
}

/// One CSV per successful run plus `summary.json`.
pub fn write_suite(runs: &[SuiteRun], dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    for run in runs {
        if let Some(rec) = run.record() {
            rec.save_csv(&dir.join(format!("{}.csv", run.label)))?;
        }
    }
    std::fs::write(dir.join("summary.json"), serde_json::to_string_pretty(&summarize(runs))?)?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSweepOptions {
    pub depth: usize,
    pub shots: Option<usize>,
    pub seeds: Vec<u64>,
    pub device: DeviceNoiseParams,
    pub mitigate: bool,
    pub config: IntegratorConfig,
}

impl Default for NoiseSweepOptions {
    fn default() -> Self {
        Self {
            depth: 1,
            shots: Some(crate::noise::DEFAULT_SHOTS),
            seeds: vec![11, 23, 37],
            device: DeviceNoiseParams::default(),
            mitigate: true,
            config: IntegratorConfig::noisy(10.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseSweepRow {
    pub eta: String,
    pub n_runs: usize,
    pub n_failed: usize,
    pub mean_final_infidelity: f64,
    pub std_final_infidelity: f64,
    /// Infidelity averaged over the accepted steps, then over seeds.
    pub mean_trajectory_infidelity: f64,
    pub mean_function_calls: f64,
}

#[derive(Debug)]
pub struct NoiseSweep {
    pub rows: Vec<NoiseSweepRow>,
    pub runs: Vec<SuiteRun>,
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() > 1 { xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    (mean, var.sqrt())
}

/// Noisy trajectories for every (η, seed); rows are in the order of `etas`.
pub fn noise_sweep(spec: &SpinBosonSpec, etas: &[Eta], options: &NoiseSweepOptions) -> Result<NoiseSweep> {
    let mut jobs = Vec::new();
    for &eta in etas {
        let model = ScaledNoiseModel::new(options.device.clone(), eta)?;
        for &seed in &options.seeds {
            let sampler = ShotSampler { shots: options.shots, seed };
            let backend = Backend::Noisy(NoisyConfig { model: model.clone(), sampler, mitigate: options.mitigate });
            jobs.push(SuiteJob {
                label: run_label(spec, options.depth, &format!("eta{eta}_seed{seed}")),
                spec: spec.clone(),
                depth: options.depth,
                backend,
                config: options.config.clone(),
            });
        }
    }
    let runs = run_jobs(jobs);
    let per_eta = options.seeds.len();
    let rows = etas
        .iter()
        .zip(runs.chunks(per_eta.max(1)))
        .map(|(eta, chunk)| {
            let ok: Vec<&TrajectoryRecord> = chunk.iter().filter_map(SuiteRun::record).collect();
            let finals: Vec<f64> = ok.iter().map(|r| r.final_infidelity()).collect();
            let traj: Vec<f64> = ok.iter().map(|r| r.infidelity.iter().sum::<f64>() / r.infidelity.len().max(1) as f64).collect();
            let calls: Vec<f64> = ok.iter().map(|r| r.n_function_calls as f64).collect();
            let (mean, std) = mean_std(&finals);
            NoiseSweepRow {
                eta: eta.to_string(),
                n_runs: chunk.len(),
                n_failed: chunk.len() - ok.len(),
                mean_final_infidelity: mean,
                std_final_infidelity: std,
                mean_trajectory_infidelity: mean_std(&traj).0,
                mean_function_calls: mean_std(&calls).0,
            }
        })
        .collect();
    Ok(NoiseSweep { rows, runs })
}
