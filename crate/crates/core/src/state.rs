//! Pure and mixed register states.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{PauliSum, HERMITICITY_TOL, NORM_TOL};

/// Imaginary parts of expectation values below this are discarded.
pub const EXPECTATION_IMAG_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Computational basis state `|index>`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::structural(format!("basis index {index} outside {n_qubits}-qubit register")));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amplitudes })
    }

    pub fn zero(n_qubits: usize) -> Self {
        Self::basis(n_qubits, 0).expect("index 0 always fits")
    }

    /// Wraps amplitudes, requiring a power-of-two length and unit norm.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n_qubits = register_size(amplitudes.len())?;
        let s = Self { n_qubits, amplitudes };
        if (s.norm() - 1.0).abs() > NORM_TOL {
            return Err(Error::contract(format!("state norm {} is not 1", s.norm())));
        }
        Ok(s)
    }

    /// Normalizes arbitrary amplitudes.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let n_qubits = register_size(amplitudes.len())?;
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::contract("cannot normalize the zero vector"));
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Ok(Self { n_qubits, amplitudes })
    }

    pub(crate) fn from_raw(n_qubits: usize, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << n_qubits);
        Self { n_qubits, amplitudes }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::structural(format!("inner product of {}- and {}-dim states", self.dim(), other.dim())));
        }
        Ok(inner(&self.amplitudes, &other.amplitudes))
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Ket label of a basis index, highest qubit first.
    pub fn ket_label(n_qubits: usize, index: usize) -> String {
        (0..n_qubits).rev().map(|q| if index >> q & 1 == 1 { '1' } else { '0' }).collect()
    }
}

pub(crate) fn register_size(len: usize) -> Result<usize> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::structural(format!("length {len} is not a power of two")));
    }
    Ok(len.trailing_zeros() as usize)
}

#[inline]
pub(crate) fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `|<a|b>|`, invariant under global phases of either state.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm().min(1.0))
}

/// `1 - |<a|b>|`.
pub fn infidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok((1.0 - fidelity(a, b)?).max(0.0))
}

/// Dense density matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    data: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn from_pure(state: &StateVector) -> Self {
        let dim = state.dim();
        let a = state.amplitudes();
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                data[r * dim + c] = a[r] * a[c].conj();
            }
        }
        Self { n_qubits: state.n_qubits(), data }
    }

    pub fn zero(n_qubits: usize) -> Self {
        Self::from_pure(&StateVector::zero(n_qubits))
    }

    /// Validates Hermiticity, unit trace and positivity.
    pub fn from_matrix(m: &DMatrix<Complex64>) -> Result<Self> {
        let n_qubits = register_size(m.nrows())?;
        if m.nrows() != m.ncols() {
            return Err(Error::structural("density matrix must be square"));
        }
        let dim = m.nrows();
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(m[(r, c)]);
            }
        }
        let rho = Self { n_qubits, data };
        rho.validate()?;
        Ok(rho)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim() + c]
    }

    pub(crate) fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        let dim = self.dim();
        DMatrix::from_row_slice(dim, dim, &self.data)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.get(i, i).re).collect()
    }

    pub fn max_hermiticity_error(&self) -> f64 {
        let dim = self.dim();
        let mut err: f64 = 0.0;
        for r in 0..dim {
            for c in r..dim {
                err = err.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        err
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let m = self.to_matrix();
        let herm = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        SymmetricEigen::new(herm).eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_hermiticity_error() > HERMITICITY_TOL {
            return Err(Error::contract("density matrix is not Hermitian"));
        }
        if (self.trace() - 1.0).norm() > NORM_TOL {
            return Err(Error::contract(format!("density matrix trace {} != 1", self.trace())));
        }
        if self.min_eigenvalue() < -1e-9 {
            return Err(Error::contract("density matrix has a negative eigenvalue"));
        }
        Ok(())
    }

    /// `<psi|rho|psi>`.
    pub fn fidelity_with_pure(&self, psi: &StateVector) -> Result<f64> {
        if psi.dim() != self.dim() {
            return Err(Error::structural("dimension mismatch"));
        }
        let dim = self.dim();
        let a = psi.amplitudes();
        let mut acc = Complex64::new(0.0, 0.0);
        for r in 0..dim {
            let row: Complex64 = (0..dim).map(|c| self.data[r * dim + c] * a[c]).sum();
            acc += a[r].conj() * row;
        }
        Ok(acc.re)
    }
}

/// Anything an operator expectation can be taken in.
pub trait ExpectationTarget {
    fn raw_expectation(&self, op: &PauliSum) -> Result<Complex64>;
}

impl ExpectationTarget for StateVector {
    fn raw_expectation(&self, op: &PauliSum) -> Result<Complex64> {
        let h_psi = op.apply(self.amplitudes())?;
        Ok(inner(self.amplitudes(), &h_psi))
    }
}

impl ExpectationTarget for DensityMatrix {
    fn raw_expectation(&self, op: &PauliSum) -> Result<Complex64> {
        if op.n_qubits() != self.n_qubits {
            return Err(Error::structural("operator and density matrix registers differ"));
        }
        let dim = self.dim();
        // P|c^x> = ph|c>, so Tr(P rho) = sum_c ph * rho[c^x, c].
        let mut acc = op.identity_offset() * self.trace();
        for t in op.terms() {
            let masks = t.masks();
            let mut s = Complex64::new(0.0, 0.0);
            for c in 0..dim {
                let (k, ph) = masks.act(c ^ masks.x_mask);
                debug_assert_eq!(k, c);
                s += ph * self.data[(c ^ masks.x_mask) * dim + c];
            }
            acc += t.coefficient * s;
        }
        Ok(acc)
    }
}

/// `<op>` for a Hermitian operator, including its identity offset.
pub fn expectation<S: ExpectationTarget>(op: &PauliSum, state: &S) -> Result<f64> {
    op.require_hermitian()?;
    let v = state.raw_expectation(op)?;
    if v.im.abs() > EXPECTATION_IMAG_TOL * (1.0 + v.re.abs()) {
        return Err(Error::contract(format!("expectation has imaginary part {}", v.im)));
    }
    Ok(v.re)
}
