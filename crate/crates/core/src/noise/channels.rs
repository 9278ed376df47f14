use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::pauli::Pauli;
use crate::state::DensityMatrix;

pub type Kraus = Vec<DMatrix<Complex64>>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Channel {
    /// `rho -> (1 - lambda) rho + lambda I/d ⊗ Tr_s(rho)` on the gate's qubits.
    Depolarizing { lambda: f64 },
    /// Amplitude damping `gamma` with off-diagonals scaled by `coherence`,
    /// applied to each of the gate's qubits.
    Thermal { gamma: f64, coherence: f64 },
}

impl Channel {
    pub fn apply(&self, data: &mut [Complex64], n_qubits: usize, qubits: &[usize]) {
        match *self {
            Channel::Depolarizing { lambda } => apply_depolarizing(data, n_qubits, qubits, lambda),
            Channel::Thermal { gamma, coherence } => {
                for &q in qubits {
                    apply_thermal(data, n_qubits, q, gamma, coherence);
                }
            }
        }
    }

    pub fn apply_to(&self, rho: &mut DensityMatrix, qubits: &[usize]) {
        let n = rho.n_qubits();
        self.apply(rho.data_mut(), n, qubits);
    }

    /// Kraus operators on the gate's qubits (tensor products for thermal noise).
    pub fn kraus(&self, arity: usize) -> Kraus {
        match *self {
            Channel::Depolarizing { lambda } => depolarizing_kraus(lambda, arity),
            Channel::Thermal { gamma, coherence } => {
                let single = thermal_kraus(gamma, coherence);
                let mut ops: Kraus = vec![DMatrix::identity(1, 1)];
                for _ in 0..arity {
                    ops = single.iter().flat_map(|k| ops.iter().map(move |o| k.kronecker(o))).collect();
                }
                ops
            }
        }
    }
}

/// Depolarizing strength whose average gate infidelity equals `error` on
/// `arity` qubits: `lambda = error * d / (d - 1)`.
pub fn depolarizing_parameter(error: f64, arity: usize) -> f64 {
    let d = (1usize << arity) as f64;
    error * d / (d - 1.0)
}

pub fn depolarizing_kraus(lambda: f64, arity: usize) -> Kraus {
    let d2 = 1usize << (2 * arity);
    let mut ops = Vec::with_capacity(d2);
    for code in 0..d2 {
        let mut m = DMatrix::identity(1, 1);
        for q in 0..arity {
            let p = Pauli::ALL[(code >> (2 * q)) & 3];
            let pm = p.matrix();
            let pm = DMatrix::from_row_slice(2, 2, &[pm[0][0], pm[0][1], pm[1][0], pm[1][1]]);
            m = pm.kronecker(&m);
        }
        let w = if code == 0 { 1.0 - lambda * (d2 - 1) as f64 / d2 as f64 } else { lambda / d2 as f64 };
        ops.push(m * Complex64::new(w.sqrt(), 0.0));
    }
    ops
}

/// Amplitude damping followed by the pure dephasing that brings the
/// coherence factor to `coherence`. Requires `coherence <= sqrt(1 - gamma)`.
pub fn thermal_kraus(gamma: f64, coherence: f64) -> Kraus {
    let c = |x: f64| Complex64::new(x, 0.0);
    let keep = (1.0 - gamma).sqrt();
    let ratio = if keep > 0.0 { (coherence / keep).min(1.0) } else { 0.0 };
    let phase = 1.0 - ratio * ratio;
    let a0 = DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(keep)]);
    let a1 = DMatrix::from_row_slice(2, 2, &[c(0.0), c(gamma.sqrt()), c(0.0), c(0.0)]);
    let p0 = DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c((1.0 - phase).sqrt())]);
    let p1 = DMatrix::from_row_slice(2, 2, &[c(0.0), c(0.0), c(0.0), c(phase.sqrt())]);
    vec![&p0 * &a0, &p0 * &a1, &p1 * &a0, &p1 * &a1]
}

pub fn apply_depolarizing(data: &mut [Complex64], n: usize, qubits: &[usize], lambda: f64) {
    let dim = 1usize << n;
    let ds = 1usize << qubits.len();
    let spread = |k: usize| qubits.iter().enumerate().fold(0, |acc, (i, &q)| acc | (((k >> i) & 1) << q));
    let offsets: Vec<usize> = (0..ds).map(spread).collect();
    let mask = offsets[ds - 1];
    let keep = Complex64::new(1.0 - lambda, 0.0);
    let mix = lambda / ds as f64;
    for r in (0..dim).filter(|r| r & mask == 0) {
        for c in (0..dim).filter(|c| c & mask == 0) {
            let tr: Complex64 = offsets.iter().map(|&o| data[((r | o) << n) | (c | o)]).sum();
            for &o1 in &offsets {
                for &o2 in &offsets {
                    let idx = ((r | o1) << n) | (c | o2);
                    data[idx] *= keep;
                    if o1 == o2 {
                        data[idx] += tr * mix;
                    }
                }
            }
        }
    }
}

pub fn apply_thermal(data: &mut [Complex64], n: usize, q: usize, gamma: f64, coherence: f64) {
    let dim = 1usize << n;
    let m = 1usize << q;
    for r in (0..dim).filter(|r| r & m == 0) {
        for c in (0..dim).filter(|c| c & m == 0) {
            let i00 = (r << n) | c;
            let i01 = (r << n) | (c | m);
            let i10 = ((r | m) << n) | c;
            let i11 = ((r | m) << n) | (c | m);
            let p11 = data[i11];
            data[i00] += p11 * gamma;
            data[i11] = p11 * (1.0 - gamma);
            data[i01] *= coherence;
            data[i10] *= coherence;
        }
    }
}
