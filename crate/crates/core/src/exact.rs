//! Exact propagation by eigendecomposition, the reference for every infidelity.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{PauliSum, HERMITICITY_TOL, NORM_TOL};
use crate::state::StateVector;

#[derive(Debug, Clone)]
enum Basis {
    Real(DMatrix<f64>),
    Complex(DMatrix<Complex64>),
}

/// Caches the spectral decomposition of a Hermitian matrix so repeated
/// propagation costs two matrix-vector products.
#[derive(Debug, Clone)]
pub struct ExactPropagator {
    eigenvalues: DVector<f64>,
    basis: Basis,
    support: Option<Support>,
}

/// Invariant subspace spanned by computational basis states.
#[derive(Debug, Clone)]
struct Support {
    full_dim: usize,
    indices: Vec<usize>,
}

impl ExactPropagator {
    pub fn new(h: &DMatrix<Complex64>) -> Result<Self> {
        if h.nrows() != h.ncols() {
            return Err(Error::structural("Hamiltonian matrix must be square"));
        }
        let n = h.nrows();
        let mut herm_err: f64 = 0.0;
        let mut imag: f64 = 0.0;
        for r in 0..n {
            for c in r..n {
                herm_err = herm_err.max((h[(r, c)] - h[(c, r)].conj()).norm());
                imag = imag.max(h[(r, c)].im.abs());
            }
        }
        if herm_err > HERMITICITY_TOL {
            return Err(Error::contract(format!("matrix is not Hermitian (deviation {herm_err:e})")));
        }
        if imag == 0.0 {
            let re = h.map(|z| z.re);
            let eig = SymmetricEigen::new(re);
            Ok(Self { eigenvalues: eig.eigenvalues, basis: Basis::Real(eig.eigenvectors), support: None })
        } else {
            let eig = SymmetricEigen::new(h.clone());
            Ok(Self { eigenvalues: eig.eigenvalues, basis: Basis::Complex(eig.eigenvectors), support: None })
        }
    }

    pub fn from_pauli(h: &PauliSum) -> Result<Self> {
        h.require_hermitian()?;
        Self::new(&h.to_matrix(h.n_qubits())?)
    }

    /// Decomposes `h` only on the span of the given basis states, which `h`
    /// must leave invariant. States passed to [`propagate`](Self::propagate)
    /// must lie in that span.
    pub fn restricted(h: &PauliSum, indices: Vec<usize>) -> Result<Self> {
        h.require_hermitian()?;
        let full_dim = 1usize << h.n_qubits();
        let mut position = std::collections::HashMap::with_capacity(indices.len());
        for (i, &j) in indices.iter().enumerate() {
            if j >= full_dim || position.insert(j, i).is_some() {
                return Err(Error::structural(format!("invalid or repeated basis index {j}")));
            }
        }
        let n = indices.len();
        let mut m = DMatrix::<Complex64>::zeros(n, n);
        // Single strings may leave the span while their sum does not.
        let mut outside = std::collections::HashMap::<(usize, usize), Complex64>::new();
        for term in h.terms() {
            let masks = term.masks();
            for (col, &j) in indices.iter().enumerate() {
                let (k, ph) = masks.act(j);
                match position.get(&k) {
                    Some(&row) => m[(row, col)] += term.coefficient * ph,
                    None => *outside.entry((k, col)).or_default() += term.coefficient * ph,
                }
            }
        }
        for i in 0..n {
            m[(i, i)] += h.identity_offset();
        }
        if let Some(((k, _), _)) = outside.iter().find(|(_, v)| v.norm() > HERMITICITY_TOL) {
            return Err(Error::structural(format!("Hamiltonian couples the subspace to basis state {k}")));
        }
        let mut p = Self::new(&m)?;
        p.support = Some(Support { full_dim, indices });
        Ok(p)
    }

    /// Dimension of the register the propagator acts on.
    pub fn dim(&self) -> usize {
        self.support.as_ref().map_or(self.eigenvalues.len(), |s| s.full_dim)
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    /// `exp(-i h t) psi`.
    pub fn propagate(&self, psi: &StateVector, t: f64) -> Result<StateVector> {
        if psi.dim() != self.dim() {
            return Err(Error::structural(format!("state of dim {} vs propagator of dim {}", psi.dim(), self.dim())));
        }
        let gathered;
        let amps = match &self.support {
            None => psi.amplitudes(),
            Some(sup) => {
                gathered = sup.indices.iter().map(|&j| psi.amplitudes()[j]).collect::<Vec<_>>();
                let inside: f64 = gathered.iter().map(|a| a.norm_sqr()).sum();
                if (1.0 - inside).abs() > NORM_TOL {
                    return Err(Error::contract("state has weight outside the propagator subspace"));
                }
                &gathered[..]
            }
        };
        let n = self.eigenvalues.len();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        match &self.basis {
            Basis::Real(v) => {
                let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
                for (k, ck) in coeffs.iter_mut().enumerate() {
                    let col = v.column(k);
                    let proj: Complex64 = col.iter().zip(amps).map(|(&x, a)| a * x).sum();
                    *ck = proj * Complex64::from_polar(1.0, -self.eigenvalues[k] * t);
                }
                for (k, ck) in coeffs.iter().enumerate() {
                    for (o, &x) in out.iter_mut().zip(v.column(k).iter()) {
                        *o += ck * x;
                    }
                }
            }
            Basis::Complex(v) => {
                for k in 0..n {
                    let col = v.column(k);
                    let proj: Complex64 = col.iter().zip(amps).map(|(x, a)| x.conj() * a).sum();
                    let ck = proj * Complex64::from_polar(1.0, -self.eigenvalues[k] * t);
                    for (o, x) in out.iter_mut().zip(col.iter()) {
                        *o += ck * x;
                    }
                }
            }
        }
        if let Some(sup) = &self.support {
            let mut full = vec![Complex64::new(0.0, 0.0); sup.full_dim];
            for (&j, a) in sup.indices.iter().zip(out) {
                full[j] = a;
            }
            out = full;
        }
        Ok(StateVector::from_raw(psi.n_qubits(), out))
    }
}

/// One-shot `exp(-i h t) psi0`.
pub fn exact_propagate(h: &DMatrix<Complex64>, psi0: &StateVector, t: f64) -> Result<StateVector> {
    ExactPropagator::new(h)?.propagate(psi0, t)
}
