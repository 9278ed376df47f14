//! McLachlan equations of motion for the ansatz parameters and their
//! adaptive integration.

mod integrator;
mod record;

use std::cell::{Cell, RefCell};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circuit::{apply_gate, apply_generator, build_ansatz, run_statevector, AngleBinding, ParamCircuit};
use crate::error::{Error, Result};
use crate::exact::ExactPropagator;
use crate::model::{build_hamiltonian, initial_state, spin_orientation, SpinBosonSpec};
use crate::noise::{NoisyConfig, NoisyEvaluator};
use crate::pauli::PauliSum;
use crate::state::{expectation, inner, infidelity, StateVector};

pub use integrator::{dormand_prince, RhsFailure, StepControl, StepStats};
pub use record::{TrajectoryRecord, TrajectorySummary};

/// `M theta_dot = V` at one parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct McLachlanSystem {
    pub m_matrix: DMatrix<f64>,
    pub v_vector: DVector<f64>,
    pub include_global_phase: bool,
    /// `<H>` at the parameter point, as seen by the backend.
    pub energy: f64,
}

impl McLachlanSystem {
    pub fn max_asymmetry(&self) -> f64 {
        let m = &self.m_matrix;
        let n = m.nrows();
        let mut a: f64 = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                a = a.max((m[(i, j)] - m[(j, i)]).abs());
            }
        }
        a
    }

    pub fn min_eigenvalue(&self) -> f64 {
        if self.m_matrix.is_empty() {
            return 0.0;
        }
        let sym = (&self.m_matrix + self.m_matrix.transpose()) * 0.5;
        SymmetricEigen::new(sym).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Per-occurrence derivative states `d|Phi>/d(angle of gate p) * multiplier`,
/// i.e. the circuit with `-i m/2 G` inserted after gate `p`, plus `|Phi>`.
pub fn occurrence_states(circuit: &ParamCircuit, params: &[f64]) -> Result<(StateVector, Vec<(usize, Vec<Complex64>)>)> {
    circuit.check_params(params)?;
    let n = circuit.n_qubits();
    let mut owner = vec![None; circuit.gates().len()];
    for (id, occ) in circuit.occurrence_map().iter().enumerate() {
        for &p in occ {
            owner[p] = Some(id);
        }
    }
    let mut main = StateVector::zero(n).into_amplitudes();
    let mut branches: Vec<(usize, Vec<Complex64>)> = Vec::with_capacity(circuit.n_occurrences());
    for (p, g) in circuit.gates().iter().enumerate() {
        let angle = g.angle(params);
        apply_gate(&mut main, g, angle, 0, false);
        for (_, b) in branches.iter_mut() {
            apply_gate(b, g, angle, 0, false);
        }
        if let (Some(id), Some(AngleBinding::Param { multiplier, .. })) = (owner[p], g.binding) {
            let mut b = main.clone();
            apply_generator(&mut b, g);
            let s = Complex64::new(0.0, -multiplier / 2.0);
            b.iter_mut().for_each(|a| *a *= s);
            branches.push((id, b));
        }
    }
    Ok((StateVector::from_raw(n, main), branches))
}

/// Derivative of the circuit output with respect to each logical parameter,
/// summed over its occurrences.
pub fn gradient_states(circuit: &ParamCircuit, params: &[f64]) -> Result<(StateVector, Vec<(usize, Vec<Complex64>)>)> {
    let (phi, occ) = occurrence_states(circuit, params)?;
    let dim = phi.dim();
    let mut grads: Vec<(usize, Vec<Complex64>)> = (0..circuit.n_params()).map(|i| (i, vec![Complex64::new(0.0, 0.0); dim])).collect();
    for (id, b) in occ {
        for (g, x) in grads[id].1.iter_mut().zip(&b) {
            *g += x;
        }
    }
    Ok((phi, grads))
}

/// Builds `M` and `V` from the derivative states.
pub fn assemble_from_states(phi: &StateVector, grads: &[(usize, Vec<Complex64>)], h: &PauliSum, include_global_phase: bool) -> Result<McLachlanSystem> {
    if h.n_qubits() != phi.n_qubits() {
        return Err(Error::structural("Hamiltonian and circuit registers differ"));
    }
    let n = grads.len();
    let h_phi = h.apply(phi.amplitudes())?;
    let energy = inner(phi.amplitudes(), &h_phi).re;
    let a: Vec<Complex64> = grads.iter().map(|(_, d)| inner(d, phi.amplitudes())).collect();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut v = inner(&grads[i].1, &grads[j].1);
            if include_global_phase {
                v += a[i] * a[j];
            }
            m[(i, j)] = v.re;
            m[(j, i)] = v.re;
        }
    }
    let v = DVector::from_iterator(
        n,
        grads.iter().zip(&a).map(|((_, d), ai)| {
            let mut x = inner(d, &h_phi);
            if include_global_phase {
                x -= ai * energy;
            }
            x.im
        }),
    );
    Ok(McLachlanSystem { m_matrix: m, v_vector: v, include_global_phase, energy })
}

pub fn assemble_mclachlan(circuit: &ParamCircuit, params: &[f64], h: &PauliSum, include_global_phase: bool) -> Result<McLachlanSystem> {
    let (phi, grads) = gradient_states(circuit, params)?;
    assemble_from_states(&phi, &grads, h, include_global_phase)
}

/// Pseudo-inverse solve in the eigenbasis of the symmetrized M, dropping
/// eigenvalues at or below `svd_cutoff`. M is a Gram matrix, so negative
/// eigenvalues of a sampled estimate are noise and are dropped with the rest;
/// for positive semidefinite input this is the SVD pseudo-inverse.
pub fn solve_parameters(system: &McLachlanSystem, svd_cutoff: f64) -> Result<Vec<f64>> {
    let n = system.v_vector.len();
    if system.m_matrix.nrows() != n || system.m_matrix.ncols() != n {
        return Err(Error::structural("M and V sizes differ"));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let sym = (&system.m_matrix + system.m_matrix.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    if eig.eigenvalues.iter().all(|&s| s <= svd_cutoff) {
        return Err(Error::StalledManifold { singular_values: eig.eigenvalues.iter().copied().collect(), cutoff: svd_cutoff });
    }
    let mut out = DVector::zeros(n);
    for (k, &s) in eig.eigenvalues.iter().enumerate() {
        if s > svd_cutoff {
            let v = eig.eigenvectors.column(k);
            out += v * (v.dot(&system.v_vector) / s);
        }
    }
    Ok(out.iter().copied().collect())
}

/// A source of McLachlan systems.
pub trait Evaluator: Send + Sync {
    fn n_params(&self) -> usize;

    /// `call_index` numbers right-hand-side evaluations so that stochastic
    /// backends can derive reproducible random streams.
    fn assemble(&self, params: &[f64], call_index: u64) -> Result<McLachlanSystem>;
}

/// Exact overlaps from statevector simulation.
#[derive(Debug, Clone)]
pub struct StatevectorEvaluator {
    pub circuit: ParamCircuit,
    pub hamiltonian: PauliSum,
    pub include_global_phase: bool,
}

impl Evaluator for StatevectorEvaluator {
    fn n_params(&self) -> usize {
        self.circuit.n_params()
    }

    fn assemble(&self, params: &[f64], _call_index: u64) -> Result<McLachlanSystem> {
        assemble_mclachlan(&self.circuit, params, &self.hamiltonian, self.include_global_phase)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub svd_cutoff: f64,
    pub t_final: f64,
    pub include_global_phase: bool,
    /// Defaults to `1e-3 * t_final`.
    pub first_step: Option<f64>,
    /// Defaults to `0.1 * t_final`.
    pub max_step: Option<f64>,
}

impl IntegratorConfig {
    pub fn statevector(t_final: f64) -> Self {
        Self { abs_tol: 1e-6, rel_tol: 1e-3, svd_cutoff: 1e-6, t_final, include_global_phase: true, first_step: None, max_step: None }
    }

    pub fn noisy(t_final: f64) -> Self {
        Self { abs_tol: 1e-3, rel_tol: 1e-3, svd_cutoff: 1e-3, ..Self::statevector(t_final) }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("abs_tol", self.abs_tol), ("rel_tol", self.rel_tol), ("svd_cutoff", self.svd_cutoff)] {
            if !(v > 0.0) {
                return Err(Error::contract(format!("{name} must be positive")));
            }
        }
        if !(self.t_final >= 0.0) || !self.t_final.is_finite() {
            return Err(Error::contract("t_final must be finite and non-negative"));
        }
        Ok(())
    }

    fn step_control(&self) -> StepControl {
        let t = self.t_final.max(f64::MIN_POSITIVE);
        StepControl {
            abs_tol: self.abs_tol,
            rel_tol: self.rel_tol,
            first_step: self.first_step.unwrap_or(1e-3 * t),
            max_step: self.max_step.unwrap_or(0.1 * t),
        }
    }
}

/// Which evaluator drives the equations of motion.
#[derive(Debug, Clone, PartialEq)]
pub enum Backend {
    Statevector,
    Noisy(NoisyConfig),
}

/// Integrates the ansatz parameters from zero and monitors the ideal circuit
/// state against exact evolution at every accepted step.
pub fn propagate_variational(spec: &SpinBosonSpec, depth: usize, config: &IntegratorConfig, backend: &Backend) -> Result<TrajectoryRecord> {
    let circuit = build_ansatz(spec, depth)?;
    let model = build_hamiltonian(spec)?;
    match backend {
        Backend::Statevector => {
            let ev = StatevectorEvaluator { circuit: circuit.clone(), hamiltonian: model.hamiltonian.clone(), include_global_phase: config.include_global_phase };
            propagate_with(spec, &circuit, &ev, config)
        }
        Backend::Noisy(noisy) => {
            let ev = NoisyEvaluator::new(spec, depth, noisy.clone(), config.include_global_phase)?;
            propagate_with(spec, &circuit, &ev, config)
        }
    }
}

/// Integration loop shared by all backends. `circuit` is the ideal ansatz
/// used for monitoring; the evaluator must use the same parameterization.
pub fn propagate_with(spec: &SpinBosonSpec, circuit: &ParamCircuit, evaluator: &dyn Evaluator, config: &IntegratorConfig) -> Result<TrajectoryRecord> {
    config.validate()?;
    if evaluator.n_params() != circuit.n_params() {
        return Err(Error::structural("evaluator and circuit parameter counts differ"));
    }
    let model = build_hamiltonian(spec)?;
    let exact = ExactPropagator::restricted(&model.hamiltonian, model.layout.physical_basis())?;
    let psi0 = initial_state(spec, &model.layout)?;

    let mut record = TrajectoryRecord::default();
    let calls = Cell::new(0u64);
    // The last right-hand side of an accepted step is evaluated at the new point.
    let last_system: RefCell<Option<McLachlanSystem>> = RefCell::new(None);
    let mut monitor_error: Option<Error> = None;

    let rhs = |_t: f64, theta: &[f64]| -> Result<Vec<f64>> {
        let sys = evaluator.assemble(theta, calls.get())?;
        calls.set(calls.get() + 1);
        let out = solve_parameters(&sys, config.svd_cutoff)?;
        *last_system.borrow_mut() = Some(sys);
        Ok(out)
    };
    let on_accept = |t: f64, theta: &[f64]| {
        if monitor_error.is_some() {
            return;
        }
        let step = || -> Result<(f64, f64, f64)> {
            let phi = run_statevector(circuit, theta)?;
            let ex = exact.propagate(&psi0, t)?;
            Ok((spin_orientation(&phi, phi.n_qubits())?, infidelity(&phi, &ex)?, expectation(&model.hamiltonian, &phi)?))
        };
        match step() {
            Ok((pz, inf, e)) => {
                record.times.push(t);
                record.params.push(theta.to_vec());
                record.p_z.push(pz);
                record.infidelity.push(inf);
                record.energy.push(e);
                if let Some(sys) = last_system.borrow().as_ref() {
                    record.m_min_eigenvalue.push(sys.min_eigenvalue());
                    record.m_asymmetry.push(sys.max_asymmetry());
                }
            }
            Err(e) => monitor_error = Some(e),
        }
    };
    let result = dormand_prince(rhs, 0.0, &vec![0.0; circuit.n_params()], config.t_final, &config.step_control(), on_accept);
    match result {
        Ok((_, stats)) => {
            record.n_function_calls = stats.n_function_calls;
            record.accepted = stats.accepted;
            record.rejected = stats.rejected;
            if let Some(e) = monitor_error {
                return Err(e);
            }
            Ok(record)
        }
        Err(RhsFailure { t, error, stats }) => {
            record.n_function_calls = stats.n_function_calls;
            record.accepted = stats.accepted;
            record.rejected = stats.rejected;
            Err(Error::Propagation { t, source: Box::new(error), partial: Box::new(record) })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Gate, GateKind};

    #[test]
    fn identity_m_returns_v() {
        let sys = McLachlanSystem { m_matrix: DMatrix::identity(3, 3), v_vector: DVector::from_vec(vec![1.0, -2.0, 0.5]), include_global_phase: true, energy: 0.0 };
        let x = solve_parameters(&sys, 1e-6).unwrap();
        assert_eq!(x, vec![1.0, -2.0, 0.5]);
    }

    #[test]
    fn null_direction_is_zeroed() {
        let sys = McLachlanSystem { m_matrix: DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]), v_vector: DVector::from_vec(vec![1.0, 0.0]), include_global_phase: true, energy: 0.0 };
        let x = solve_parameters(&sys, 1e-6).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-15 && x[1].abs() < 1e-15);
    }

    #[test]
    fn all_small_singular_values_stall() {
        let sys = McLachlanSystem { m_matrix: DMatrix::from_element(2, 2, 1e-9), v_vector: DVector::from_vec(vec![1.0, 0.0]), include_global_phase: true, energy: 0.0 };
        assert!(matches!(solve_parameters(&sys, 1e-6), Err(Error::StalledManifold { .. })));
    }

    #[test]
    fn rz_generator_on_plus_state() {
        let gates = vec![Gate::fixed(GateKind::H, vec![0]), Gate::rotation(GateKind::Rz, vec![0], AngleBinding::Param { id: 0, multiplier: 1.0 })];
        let c = ParamCircuit::new(1, gates, 1, vec![]).unwrap();
        let theta = 0.7;
        let (phi, grads) = gradient_states(&c, &[theta]).unwrap();
        let a = phi.amplitudes();
        let want = [a[0] * Complex64::new(0.0, -0.5), a[1] * Complex64::new(0.0, 0.5)];
        for (g, w) in grads[0].1.iter().zip(want) {
            assert!((g - w).norm() < 1e-15);
        }
    }

    #[test]
    fn occurrence_count_matches_formula() {
        for (m, n, d) in [(1, 1, 1), (1, 3, 2), (2, 1, 2)] {
            let c = build_ansatz(&SpinBosonSpec::resonant(m, n, 0.0, 1.0, 0.5), d).unwrap();
            let (_, occ) = occurrence_states(&c, &vec![0.1; c.n_params()]).unwrap();
            assert_eq!(occ.len(), d * (5 * m * n + 2));
        }
    }
}
