//! McLachlan systems estimated from noisy Hadamard tests.
//!
//! Every element reduces to `Re<A|B>` for two branches of the ansatz that
//! differ by Pauli insertions. The branches are entangled with an ancilla in
//! `|+>`: insertions for `<A|` are controlled on the ancilla being 0, those
//! for `|B>` on it being 1, and a final Hadamard turns `Re<A|B>` into the
//! ancilla's `<Z>`. Gates after the last insertion act identically on both
//! branches and are dropped.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use super::density::{check_capacity, run_gates};
use super::readout::{sample_expectation, MeasurementOptions, ShotSampler};
use super::ScaledNoiseModel;
use crate::circuit::{build_ansatz_on, AngleBinding, Gate, GateKind, LayerOrder, ParamCircuit};
use crate::error::{Error, Result};
use crate::model::{build_hamiltonian_on, SpinBosonSpec};
use crate::pauli::{Pauli, PauliSum};
use crate::state::DensityMatrix;
use crate::variational::{Evaluator, McLachlanSystem};

/// Noise, shot budget and mitigation for the noisy backend.
#[derive(Debug, Clone, PartialEq)]
pub struct NoisyConfig {
    pub model: ScaledNoiseModel,
    pub sampler: ShotSampler,
    pub mitigate: bool,
}

impl NoisyConfig {
    pub fn measurement(&self) -> MeasurementOptions {
        MeasurementOptions { readout: self.model.readout(), mitigate: self.mitigate }
    }
}

#[derive(Debug, Clone)]
struct Occurrence {
    pos: usize,
    id: usize,
    multiplier: f64,
    generator: Vec<(usize, Pauli)>,
}

type Insertion = (usize, u8, Vec<(usize, Pauli)>);

#[derive(Debug, Clone)]
pub struct NoisyEvaluator {
    circuit: ParamCircuit,
    hamiltonian: PauliSum,
    occurrences: Vec<Occurrence>,
    ancilla: usize,
    config: NoisyConfig,
    include_global_phase: bool,
}

impl NoisyEvaluator {
    pub fn new(spec: &SpinBosonSpec, depth: usize, config: NoisyConfig, include_global_phase: bool) -> Result<Self> {
        let layout = spec.layout().with_ancilla();
        check_capacity(layout.n_qubits())?;
        let circuit = build_ansatz_on(spec, depth, &LayerOrder::default(), &layout)?;
        let hamiltonian = build_hamiltonian_on(spec, layout)?.hamiltonian;
        let mut occurrences = Vec::with_capacity(circuit.n_occurrences());
        for (pos, g) in circuit.gates().iter().enumerate() {
            if let Some(AngleBinding::Param { id, multiplier }) = g.binding {
                let p = g.kind.generator().expect("rotations have generators");
                occurrences.push(Occurrence { pos, id, multiplier, generator: g.qubits.iter().map(|&q| (q, p)).collect() });
            }
        }
        Ok(Self { circuit, hamiltonian, occurrences, ancilla: layout.n_qubits() - 1, config, include_global_phase })
    }

    /// Ansatz on the register including the idle ancilla.
    pub fn circuit(&self) -> &ParamCircuit {
        &self.circuit
    }

    /// Hadamard-test circuits per right-hand-side evaluation.
    pub fn circuits_per_evaluation(&self) -> usize {
        let k = self.occurrences.len();
        k * (k - 1) / 2 + k + k * self.hamiltonian.terms().len()
    }

    fn controlled(&self, out: &mut Vec<(Gate, f64)>, branch: u8, paulis: &[(usize, Pauli)]) {
        let a = self.ancilla;
        let x = (Gate::fixed(GateKind::X, vec![a]), 0.0);
        if branch == 0 {
            out.push(x.clone());
        }
        for &(q, p) in paulis {
            let cx = (Gate::fixed(GateKind::Cnot, vec![a, q]), 0.0);
            match p {
                Pauli::X => out.push(cx),
                Pauli::Z => {
                    out.push((Gate::fixed(GateKind::H, vec![q]), 0.0));
                    out.push(cx);
                    out.push((Gate::fixed(GateKind::H, vec![q]), 0.0));
                }
                Pauli::Y => {
                    out.push((Gate::rotation(GateKind::Rz, vec![q], AngleBinding::Fixed(-FRAC_PI_2)), -FRAC_PI_2));
                    out.push(cx);
                    out.push((Gate::rotation(GateKind::Rz, vec![q], AngleBinding::Fixed(FRAC_PI_2)), FRAC_PI_2));
                }
                Pauli::I => {}
            }
        }
        if branch == 0 {
            out.push(x);
        }
    }

    /// Gates `0..end` with insertions after given positions, then `tail` on branch 1.
    fn hadamard_test(&self, params: &[f64], insertions: &[Insertion], end: usize, tail: &[(usize, Pauli)]) -> Vec<(Gate, f64)> {
        let h = (Gate::fixed(GateKind::H, vec![self.ancilla]), 0.0);
        let mut out = vec![h.clone()];
        for (p, g) in self.circuit.gates()[..end].iter().enumerate() {
            out.push((g.clone(), g.angle(params)));
            for (at, branch, paulis) in insertions {
                if *at == p {
                    self.controlled(&mut out, *branch, paulis);
                }
            }
        }
        if !tail.is_empty() {
            self.controlled(&mut out, 1, tail);
        }
        out.push(h);
        out
    }

    fn ancilla_z(&self, gates: &[(Gate, f64)], stream: u64) -> Result<f64> {
        let mut rho = DensityMatrix::zero(self.circuit.n_qubits());
        run_gates(&mut rho, gates, &self.config.model);
        let bit = 1usize << self.ancilla;
        let p0: f64 = rho.diagonal().iter().enumerate().filter(|(j, _)| j & bit == 0).map(|(_, p)| p).sum();
        let est = self.config.measurement().measure(vec![p0, 1.0 - p0], &self.config.sampler, stream)?;
        Ok(est[0] - est[1])
    }
}

impl Evaluator for NoisyEvaluator {
    fn n_params(&self) -> usize {
        self.circuit.n_params()
    }

    fn assemble(&self, params: &[f64], call_index: u64) -> Result<McLachlanSystem> {
        self.circuit.check_params(params)?;
        let occ = &self.occurrences;
        let k = occ.len();
        let n_gates = self.circuit.gates().len();
        let terms = self.hamiltonian.terms();

        enum Job {
            Pair(usize, usize),
            Phase(usize),
            Energy(usize, usize),
        }
        let mut jobs = Vec::new();
        for a in 0..k {
            for b in a + 1..k {
                jobs.push(Job::Pair(a, b));
            }
            jobs.push(Job::Phase(a));
            for h in 0..terms.len() {
                jobs.push(Job::Energy(a, h));
            }
        }
        let base = call_index << 20;
        let values: Vec<f64> = jobs
            .par_iter()
            .enumerate()
            .map(|(i, job)| {
                let gates = match *job {
                    Job::Pair(a, b) => self.hadamard_test(
                        params,
                        &[(occ[a].pos, 0, occ[a].generator.clone()), (occ[b].pos, 1, occ[b].generator.clone())],
                        occ[b].pos + 1,
                        &[],
                    ),
                    Job::Phase(a) => self.hadamard_test(params, &[(occ[a].pos, 0, occ[a].generator.clone())], occ[a].pos + 1, &[]),
                    Job::Energy(a, h) => {
                        let tail: Vec<(usize, Pauli)> = terms[h].axes.iter().enumerate().filter(|(_, &p)| p != Pauli::I).map(|(q, &p)| (q, p)).collect();
                        self.hadamard_test(params, &[(occ[a].pos, 0, occ[a].generator.clone())], n_gates, &tail)
                    }
                };
                self.ancilla_z(&gates, base + i as u64)
            })
            .collect::<Result<_>>()?;

        let mut overlap = DMatrix::<f64>::zeros(k, k);
        let mut r = vec![0.0; k];
        let mut hw = vec![0.0; k];
        for (job, v) in jobs.iter().zip(&values) {
            match *job {
                Job::Pair(a, b) => {
                    overlap[(a, b)] = *v;
                    overlap[(b, a)] = *v;
                }
                Job::Phase(a) => r[a] = *v,
                Job::Energy(a, h) => hw[a] += terms[h].coefficient.re * v,
            }
        }
        let offset = self.hamiltonian.identity_offset().re;
        let energy = if self.include_global_phase {
            let mut rho = DensityMatrix::zero(self.circuit.n_qubits());
            let gates: Vec<(Gate, f64)> = self.circuit.gates().iter().map(|g| (g.clone(), g.angle(params))).collect();
            run_gates(&mut rho, &gates, &self.config.model);
            sample_expectation(&self.hamiltonian, &rho, &self.config.sampler, &self.config.measurement(), base | 1 << 19)?
        } else {
            f64::NAN
        };

        let n = self.circuit.n_params();
        let mut m = DMatrix::zeros(n, n);
        let mut v = DVector::zeros(n);
        let mut s = vec![0.0; n];
        for a in 0..k {
            let (ia, ma) = (occ[a].id, occ[a].multiplier);
            for b in 0..k {
                let w = if a == b { 1.0 } else { overlap[(a, b)] };
                m[(ia, occ[b].id)] += ma * occ[b].multiplier / 4.0 * w;
            }
            s[ia] += ma / 2.0 * r[a];
            let mut x = hw[a] + offset * r[a];
            if self.include_global_phase {
                x -= r[a] * energy;
            }
            v[ia] += ma / 2.0 * x;
        }
        if self.include_global_phase {
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] -= s[i] * s[j];
                }
            }
        }
        if values.iter().any(|x| !x.is_finite()) {
            return Err(Error::contract("non-finite Hadamard-test estimate"));
        }
        Ok(McLachlanSystem { m_matrix: m, v_vector: v, include_global_phase: self.include_global_phase, energy })
    }
}
