use num_complex::Complex64;

use super::ScaledNoiseModel;
use crate::circuit::{apply_gate, AngleBinding, Gate, GateKind, ParamCircuit};
use crate::error::{Error, Result};
use crate::state::DensityMatrix;

/// Largest register the dense density-matrix simulator accepts.
pub const MAX_DENSITY_QUBITS: usize = 12;

fn unitary(data: &mut [Complex64], n: usize, gate: &Gate, angle: f64) {
    apply_gate(data, gate, angle, n, false);
    apply_gate(data, gate, angle, 0, true);
}

fn noise_after(data: &mut [Complex64], n: usize, qubits: &[usize], model: &ScaledNoiseModel, length_ns: f64) {
    for ch in model.gate_channels(qubits.len(), length_ns) {
        ch.apply(data, n, qubits);
    }
}

/// Applies one gate and its noise. `Rz` is a frame change and stays ideal;
/// `Rzz` is executed as CNOT, Rz, CNOT.
pub(crate) fn apply_noisy_gate(data: &mut [Complex64], n: usize, gate: &Gate, angle: f64, model: &ScaledNoiseModel) {
    let noiseless = model.is_noiseless();
    match gate.kind {
        GateKind::Rz => unitary(data, n, gate, angle),
        GateKind::Rzz if !noiseless => {
            let (a, b) = (gate.qubits[0], gate.qubits[1]);
            let cx = Gate::fixed(GateKind::Cnot, vec![a, b]);
            unitary(data, n, &cx, 0.0);
            noise_after(data, n, &cx.qubits, model, model.base.gate_len_2q);
            unitary(data, n, &Gate::rotation(GateKind::Rz, vec![b], AngleBinding::Fixed(angle)), angle);
            unitary(data, n, &cx, 0.0);
            noise_after(data, n, &cx.qubits, model, model.base.gate_len_2q);
        }
        _ => {
            unitary(data, n, gate, angle);
            if !noiseless {
                let len = if gate.kind.arity() == 2 { model.base.gate_len_2q } else { model.base.gate_len_1q };
                noise_after(data, n, &gate.qubits, model, len);
            }
        }
    }
}

pub(crate) fn check_capacity(n: usize) -> Result<()> {
    if n > MAX_DENSITY_QUBITS {
        return Err(Error::Capacity(format!("{n} qubits exceed the density-matrix limit of {MAX_DENSITY_QUBITS}")));
    }
    Ok(())
}

/// Runs `gates` with their resolved angles on `rho`.
pub(crate) fn run_gates(rho: &mut DensityMatrix, gates: &[(Gate, f64)], model: &ScaledNoiseModel) {
    let n = rho.n_qubits();
    let data = rho.data_mut();
    for (g, angle) in gates {
        apply_noisy_gate(data, n, g, *angle, model);
    }
}

/// Noisy execution from `|0...0><0...0|`, each gate followed by its channels.
pub fn run_density_matrix(circuit: &ParamCircuit, params: &[f64], model: &ScaledNoiseModel) -> Result<DensityMatrix> {
    check_capacity(circuit.n_qubits())?;
    circuit.check_params(params)?;
    let mut rho = DensityMatrix::zero(circuit.n_qubits());
    let n = rho.n_qubits();
    let data = rho.data_mut();
    for g in circuit.gates() {
        apply_noisy_gate(data, n, g, g.angle(params), model);
    }
    Ok(rho)
}
