use serde::{Deserialize, Serialize};

use crate::circuit::{build_ansatz_on, count_cx, LayerOrder};
use crate::error::{Error, Result};
use crate::experiments::fit::FitResult;
use crate::model::{term_count, Layout, SpinBosonSpec};

const SECONDS_PER_YEAR: f64 = 365.25 * 24.0 * 3600.0;

/// Count formulas for a variational run of depth `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceCounts {
    pub n_theta: usize,
    /// Qubits including the Hadamard-test ancilla.
    pub n_q: usize,
    pub n_h: usize,
    pub n_dtheta: usize,
    /// Asymptotic CNOT estimate d·(M·n_max)², the linear-topology bound.
    pub n_cx: usize,
}

pub fn resource_counts(m: usize, n_max: usize, d: usize) -> ResourceCounts {
    let mn = m * n_max;
    ResourceCounts {
        n_theta: 2 * d * (mn + 1),
        n_q: m * (n_max + 1) + 2,
        n_h: term_count(m, n_max),
        n_dtheta: d * (5 * mn + 2),
        n_cx: d * mn * mn,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtrapolationParams {
    pub target_nq: f64,
    pub m: usize,
    pub n_max: usize,
    pub gate_time_2q: f64,
    pub eps: f64,
    pub t_final: f64,
    pub n_t: usize,
}

impl Default for ExtrapolationParams {
    fn default() -> Self {
        Self { target_nq: 120.0, m: 12, n_max: 9, gate_time_2q: 100e-9, eps: 1e-4, t_final: 10.0, n_t: 100 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResourceEstimate {
    pub label: String,
    pub depth: usize,
    pub n_theta: usize,
    pub n_q: usize,
    pub n_h: usize,
    pub n_dtheta: usize,
    pub n_cx: usize,
    /// CNOTs of the generated circuit, all-to-all connectivity.
    pub n_cx_circuit: usize,
    /// The same with the N_q swap overhead.
    pub n_cx_linear_topology: usize,
    pub two_qubit_depth: usize,
    pub n_shots: f64,
    pub n_circ_per_step: f64,
    pub n_t: usize,
    pub n_circ_total: f64,
    /// Duration of one circuit execution in seconds.
    pub circuit_time: f64,
    pub wall_time_trotter: f64,
    pub wall_time_variational: f64,
}

impl ResourceEstimate {
    pub fn wall_time_years(&self) -> f64 {
        self.wall_time_variational / SECONDS_PER_YEAR
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdvantageReport {
    pub params: ExtrapolationParams,
    pub trotter_depth_raw: f64,
    pub variational_depth_raw: f64,
    pub trotter: ResourceEstimate,
    pub variational: ResourceEstimate,
    /// Logarithmic shot count and circuits linear in the parameter count.
    pub variational_improved: ResourceEstimate,
}

/// Fits needed by [`extrapolate_advantage`], one per regime.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct RegimeFits {
    pub trotter: Vec<FitResult>,
    pub variational: Vec<FitResult>,
}

/// Per-layer cost of the generated circuit: CNOTs, serial two-qubit depth of
/// the first layer and the increment each further layer adds once layers overlap.
#[derive(Debug, Clone, Copy)]
struct LayerCost {
    n_cx: usize,
    first_depth: usize,
    step_depth: usize,
    n_qubits: usize,
}

impl LayerCost {
    fn measure(m: usize, n_max: usize) -> Result<Self> {
        let spec = SpinBosonSpec::resonant(m, n_max, 0.0, 1.0, 0.5);
        let layout = Layout { m, n_max, ancilla: false };
        let order = LayerOrder::default();
        let one = count_cx(&build_ansatz_on(&spec, 1, &order, &layout)?, false);
        let two = count_cx(&build_ansatz_on(&spec, 2, &order, &layout)?, false);
        Ok(Self {
            n_cx: one.n_cx,
            first_depth: one.two_qubit_depth,
            step_depth: two.two_qubit_depth - one.two_qubit_depth,
            n_qubits: layout.n_qubits(),
        })
    }

    fn depth(&self, d: usize) -> usize {
        self.first_depth + d.saturating_sub(1) * self.step_depth
    }
}

fn mean_prediction(fits: &[FitResult], x: f64) -> Result<f64> {
    if fits.is_empty() {
        return Err(Error::structural("no fit available for extrapolation"));
    }
    Ok(fits.iter().map(|f| f.predict(x)).sum::<f64>() / fits.len() as f64)
}

pub fn extrapolate_advantage(fits: &RegimeFits, params: &ExtrapolationParams) -> Result<AdvantageReport> {
    if !(params.eps > 0.0 && params.eps < 1.0) || !(params.gate_time_2q > 0.0) {
        return Err(Error::contract("eps must lie in (0, 1) and the gate time must be positive"));
    }
    let (m, n) = (params.m, params.n_max);
    let trotter_raw = mean_prediction(&fits.trotter, params.target_nq)?;
    let var_raw = mean_prediction(&fits.variational, params.target_nq)?;
    let d_trot = trotter_raw.ceil().max(1.0) as usize;
    let d_var = var_raw.ceil().max(1.0) as usize;

    let cost = LayerCost::measure(m, n)?;
    let trotter_time = cost.depth(d_trot) as f64 * params.gate_time_2q;
    let var_time = cost.depth(d_var) as f64 * params.gate_time_2q;

    let base = |label: &str, d: usize| {
        let c = resource_counts(m, n, d);
        let n_cx_circuit = d * cost.n_cx;
        ResourceEstimate {
            label: label.to_string(),
            depth: d,
            n_theta: c.n_theta,
            n_q: c.n_q,
            n_h: c.n_h,
            n_dtheta: c.n_dtheta,
            n_cx: c.n_cx,
            n_cx_circuit,
            n_cx_linear_topology: n_cx_circuit * cost.n_qubits,
            two_qubit_depth: cost.depth(d),
            n_shots: 1.0,
            n_circ_per_step: 1.0,
            n_t: 1,
            n_circ_total: 1.0,
            circuit_time: 0.0,
            wall_time_trotter: trotter_time,
            wall_time_variational: 0.0,
        }
    };

    let mut trotter = base("trotter", d_trot);
    trotter.n_q -= 1;
    trotter.n_theta = 0;
    trotter.n_dtheta = 0;
    trotter.circuit_time = trotter_time;

    let mut variational = base("variational", d_var);
    let nd = variational.n_dtheta as f64;
    let nh = variational.n_h as f64;
    variational.circuit_time = var_time;
    variational.n_shots = 1.0 / (params.eps * params.eps);
    variational.n_circ_per_step = variational.n_shots * (nd * nd + nh * nd);
    variational.n_t = params.n_t;
    variational.n_circ_total = params.n_t as f64 * variational.n_circ_per_step;
    variational.wall_time_variational = variational.n_circ_total * var_time;

    let mut improved = variational.clone();
    improved.label = "variational-improved".into();
    improved.n_shots = (1.0 / params.eps).ln();
    improved.n_circ_per_step = improved.n_shots * (nd + nh * nd);
    improved.n_circ_total = params.n_t as f64 * improved.n_circ_per_step;
    improved.wall_time_variational = improved.n_circ_total * var_time;

    Ok(AdvantageReport {
        params: *params,
        trotter_depth_raw: trotter_raw,
        variational_depth_raw: var_raw,
        trotter,
        variational,
        variational_improved: improved,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_for_small_system() {
        let c = resource_counts(1, 1, 1);
        assert_eq!((c.n_theta, c.n_q, c.n_h, c.n_dtheta, c.n_cx), (4, 4, 9, 7, 1));
    }

    #[test]
    fn missing_fit_is_structural() {
        let fits = RegimeFits { trotter: vec![], variational: vec![FitResult { p1: 0.0, p0: 1.0, residual: 0.0 }] };
        assert!(matches!(extrapolate_advantage(&fits, &ExtrapolationParams::default()), Err(Error::Structural(_))));
    }

    #[test]
    fn serial_depth_is_affine_in_layers() {
        let cost = LayerCost::measure(2, 2).unwrap();
        let (d1, d3) = (cost.depth(1), cost.depth(3));
        let spec = SpinBosonSpec::resonant(2, 2, 0.0, 1.0, 0.5);
        let layout = Layout { m: 2, n_max: 2, ancilla: false };
        let full = count_cx(&build_ansatz_on(&spec, 3, &LayerOrder::default(), &layout).unwrap(), false);
        assert_eq!(full.two_qubit_depth, d3);
        assert!(d3 > d1);
    }
}
