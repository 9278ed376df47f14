use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circuit::{trotter_terms, LayerOrder};
use crate::error::{Error, Result};
use crate::exact::ExactPropagator;
use crate::model::{build_hamiltonian, initial_state, SpinBosonSpec};
use crate::pauli::PauliMasks;
use crate::state::{infidelity, StateVector};

/// One Trotter layer as a product of Pauli exponentials, applied directly to
/// amplitudes. Equivalent to the gate-level Trotter circuit up to a global phase.
#[derive(Debug, Clone)]
pub struct TrotterProduct {
    n_qubits: usize,
    terms: Vec<(f64, PauliMasks)>,
}

impl TrotterProduct {
    pub fn new(spec: &SpinBosonSpec, order: &LayerOrder) -> Result<Self> {
        let terms = trotter_terms(spec, order)?;
        Ok(Self { n_qubits: spec.layout().n_qubits(), terms: terms.iter().map(|t| (t.coefficient.re, t.masks())).collect() })
    }

    /// Applies `depth` layers of step `tau`.
    pub fn evolve(&self, psi: &StateVector, tau: f64, depth: usize) -> StateVector {
        let mut amps = psi.amplitudes().to_vec();
        let rotations: Vec<(f64, f64)> = self.terms.iter().map(|(c, _)| (c * tau).sin_cos()).collect();
        for _ in 0..depth {
            for ((_, m), &(s, c)) in self.terms.iter().zip(&rotations) {
                apply_pauli_rotation(&mut amps, m, c, s);
            }
        }
        StateVector::from_raw(self.n_qubits, amps)
    }
}

/// `psi <- (cos - i sin P) psi` for a Hermitian Pauli string.
fn apply_pauli_rotation(amps: &mut [Complex64], m: &PauliMasks, c: f64, s: f64) {
    let mis = Complex64::new(0.0, -s);
    if m.x_mask == 0 {
        let plus = Complex64::new(c, -s);
        let minus = Complex64::new(c, s);
        for (j, a) in amps.iter_mut().enumerate() {
            let (_, ph) = m.act(j);
            *a *= if ph.re > 0.0 { plus } else { minus };
        }
        return;
    }
    let top = 1usize << (usize::BITS - 1 - m.x_mask.leading_zeros());
    for j in 0..amps.len() {
        if j & top != 0 {
            continue;
        }
        let (k, ph_j) = m.act(j);
        let (_, ph_k) = m.act(k);
        let (a, b) = (amps[j], amps[k]);
        amps[j] = a * c + mis * ph_k * b;
        amps[k] = b * c + mis * ph_j * a;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchMode {
    /// Walk a fixed time grid; at each point the circuit is `depth` steps of
    /// `t / depth`, and `depth` grows until the point passes. Depth never shrinks.
    Grid,
    /// For each candidate depth, step through `T / depth` increments and start
    /// over with one more layer at the first breach.
    Restart,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepthSearchOptions {
    pub t_final: f64,
    /// Spacing of the checkpoint grid in [`SearchMode::Grid`].
    pub dt: f64,
    pub ceiling: usize,
    pub mode: SearchMode,
    pub order: LayerOrder,
}

impl Default for DepthSearchOptions {
    fn default() -> Self {
        Self { t_final: 10.0, dt: 0.1, ceiling: 10_000, mode: SearchMode::Grid, order: LayerOrder::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepthSearchResult {
    pub m: usize,
    pub n_max: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub n_qubits: usize,
    pub eps_thresh: f64,
    pub final_depth: usize,
    /// Times at which the depth was raised, with the depth that then passed.
    pub depth_schedule: Vec<(f64, usize)>,
    pub checks: usize,
}

/// Smallest Trotter depth keeping the infidelity below `eps_thresh` up to `t_final`.
pub fn trotter_depth_search(spec: &SpinBosonSpec, eps_thresh: f64, options: &DepthSearchOptions) -> Result<DepthSearchResult> {
    if !(eps_thresh > 0.0) {
        return Err(Error::contract("threshold must be positive"));
    }
    if !(options.dt > 0.0) || !(options.t_final > 0.0) {
        return Err(Error::contract("time grid must be positive"));
    }
    let model = build_hamiltonian(spec)?;
    let exact = ExactPropagator::restricted(&model.hamiltonian, model.layout.physical_basis())?;
    let psi0 = initial_state(spec, &model.layout)?;
    let product = TrotterProduct::new(spec, &options.order)?;
    let mut result = DepthSearchResult {
        m: spec.m,
        n_max: spec.n_max,
        epsilon: spec.epsilon,
        delta: spec.delta,
        n_qubits: model.n_qubits,
        eps_thresh,
        final_depth: 1,
        depth_schedule: Vec::new(),
        checks: 0,
    };
    let mut depth = 1usize;
    let check = |t: f64, d: usize, reference: &StateVector, result: &mut DepthSearchResult| -> Result<bool> {
        result.checks += 1;
        Ok(infidelity(&product.evolve(&psi0, t / d as f64, d), reference)? <= eps_thresh)
    };
    match options.mode {
        SearchMode::Grid => {
            let n_points = (options.t_final / options.dt + 1e-9).floor() as usize;
            for i in 0..n_points {
                let t = options.dt + i as f64 * options.dt;
                let reference = exact.propagate(&psi0, t)?;
                let before = depth;
                while !check(t, depth, &reference, &mut result)? {
                    depth += 1;
                    if depth > options.ceiling {
                        return Err(Error::SearchAbort { depth, ceiling: options.ceiling, t });
                    }
                }
                if depth != before {
                    result.depth_schedule.push((t, depth));
                }
            }
        }
        SearchMode::Restart => 'outer: loop {
            let tau = options.t_final / depth as f64;
            let mut psi = psi0.clone();
            for s in 1..=depth {
                psi = product.evolve(&psi, tau, 1);
                result.checks += 1;
                let t = tau * s as f64;
                if infidelity(&psi, &exact.propagate(&psi0, t)?)? > eps_thresh {
                    depth += 1;
                    if depth > options.ceiling {
                        return Err(Error::SearchAbort { depth, ceiling: options.ceiling, t });
                    }
                    result.depth_schedule.push((t, depth));
                    continue 'outer;
                }
            }
            break;
        },
    }
    result.final_depth = depth;
    Ok(result)
}
