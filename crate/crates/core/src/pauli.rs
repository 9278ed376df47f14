//! Pauli strings and weighted sums of them.
//!
//! Qubit `q` of a register is bit `q` of a basis-state index (little-endian).
//! Labels are printed from the highest qubit down to qubit 0, so the string
//! `"XIZ"` means `Z` on qubit 0 and `X` on qubit 2.

use std::collections::HashMap;
use std::fmt;
use std::ops::Mul;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const HERMITICITY_TOL: f64 = 1e-10;
pub const NORM_TOL: f64 = 1e-10;
pub const PHASE_TOL: f64 = 1e-12;

/// Coefficients whose imaginary part is below this are treated as real.
pub const REAL_COEFF_TOL: f64 = 1e-12;

const I_UNIT: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    /// Single-qubit product `self * other = phase * result`.
    pub fn mul(self, other: Pauli) -> (Complex64, Pauli) {
        use Pauli::*;
        let one = Complex64::new(1.0, 0.0);
        match (self, other) {
            (I, p) | (p, I) => (one, p),
            (a, b) if a == b => (one, I),
            (X, Y) => (I_UNIT, Z),
            (Y, X) => (-I_UNIT, Z),
            (Y, Z) => (I_UNIT, X),
            (Z, Y) => (-I_UNIT, X),
            (Z, X) => (I_UNIT, Y),
            (X, Z) => (-I_UNIT, Y),
            _ => unreachable!(),
        }
    }

    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let z = Complex64::new(0.0, 0.0);
        let o = Complex64::new(1.0, 0.0);
        match self {
            Pauli::I => [[o, z], [z, o]],
            Pauli::X => [[z, o], [o, z]],
            Pauli::Y => [[z, -I_UNIT], [I_UNIT, z]],
            Pauli::Z => [[o, z], [z, -o]],
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_symbol(c: char) -> Option<Pauli> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// Bit masks describing how a Pauli string acts on a basis state:
/// `P|j> = i^{n_y} (-1)^{|j & z_mask|} |j ^ x_mask>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliMasks {
    pub x_mask: usize,
    pub z_mask: usize,
    pub y_phase: Complex64,
}

impl PauliMasks {
    #[inline]
    pub fn act(&self, j: usize) -> (usize, Complex64) {
        let sign = if (j & self.z_mask).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        (j ^ self.x_mask, self.y_phase * sign)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PauliTerm {
    pub coefficient: Complex64,
    /// `axes[q]` acts on qubit `q`.
    pub axes: Vec<Pauli>,
}

impl PauliTerm {
    pub fn new(coefficient: impl Into<Complex64>, axes: Vec<Pauli>) -> Self {
        Self { coefficient: coefficient.into(), axes }
    }

    /// Term with the given single-qubit factors and identity elsewhere.
    pub fn from_sparse(coefficient: impl Into<Complex64>, n_qubits: usize, factors: &[(usize, Pauli)]) -> Self {
        let mut axes = vec![Pauli::I; n_qubits];
        for &(q, p) in factors {
            axes[q] = p;
        }
        Self::new(coefficient, axes)
    }

    /// Parses a high-to-low label such as `"XIZ"`.
    pub fn from_label(coefficient: impl Into<Complex64>, label: &str) -> Result<Self> {
        let axes = label
            .chars()
            .rev()
            .map(|c| Pauli::from_symbol(c).ok_or_else(|| Error::structural(format!("bad Pauli symbol {c:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(coefficient, axes))
    }

    pub fn n_qubits(&self) -> usize {
        self.axes.len()
    }

    pub fn is_identity(&self) -> bool {
        self.axes.iter().all(|&p| p == Pauli::I)
    }

    pub fn label(&self) -> String {
        self.axes.iter().rev().map(|p| p.symbol()).collect()
    }

    /// Qubits carrying a non-identity factor.
    pub fn support(&self) -> Vec<usize> {
        self.axes.iter().enumerate().filter(|(_, &p)| p != Pauli::I).map(|(q, _)| q).collect()
    }

    pub fn masks(&self) -> PauliMasks {
        let mut x_mask = 0;
        let mut z_mask = 0;
        let mut n_y = 0;
        for (q, p) in self.axes.iter().enumerate() {
            match p {
                Pauli::I => {}
                Pauli::X => x_mask |= 1 << q,
                Pauli::Z => z_mask |= 1 << q,
                Pauli::Y => {
                    x_mask |= 1 << q;
                    z_mask |= 1 << q;
                    n_y += 1;
                }
            }
        }
        PauliMasks { x_mask, z_mask, y_phase: I_UNIT.powi(n_y) }
    }

    /// Whether the two strings commute as operators.
    pub fn commutes_with(&self, other: &PauliTerm) -> bool {
        let anti = self
            .axes
            .iter()
            .zip(&other.axes)
            .filter(|(a, b)| **a != Pauli::I && **b != Pauli::I && a != b)
            .count();
        anti % 2 == 0
    }

    pub fn adjoint(&self) -> PauliTerm {
        PauliTerm::new(self.coefficient.conj(), self.axes.clone())
    }
}

impl Mul for &PauliTerm {
    type Output = PauliTerm;

    fn mul(self, rhs: &PauliTerm) -> PauliTerm {
        assert_eq!(self.axes.len(), rhs.axes.len(), "Pauli product over different registers");
        let mut phase = self.coefficient * rhs.coefficient;
        let axes = self
            .axes
            .iter()
            .zip(&rhs.axes)
            .map(|(&a, &b)| {
                let (ph, p) = a.mul(b);
                phase *= ph;
                p
            })
            .collect();
        PauliTerm::new(phase, axes)
    }
}

impl fmt::Display for PauliTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:+}{:+}i)*{}", self.coefficient.re, self.coefficient.im, self.label())
    }
}

/// Weighted sum of Pauli strings over a fixed register. Identity strings are
/// folded into `identity_offset`; strings with equal axes are merged.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    n_qubits: usize,
    terms: Vec<PauliTerm>,
    identity_offset: Complex64,
    index: HashMap<Vec<Pauli>, usize>,
}

impl PauliSum {
    pub fn new(n_qubits: usize) -> Self {
        Self { n_qubits, terms: Vec::new(), identity_offset: Complex64::new(0.0, 0.0), index: HashMap::new() }
    }

    pub fn from_terms(n_qubits: usize, terms: impl IntoIterator<Item = PauliTerm>) -> Result<Self> {
        let mut sum = Self::new(n_qubits);
        for t in terms {
            sum.add_term(t)?;
        }
        Ok(sum)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn identity_offset(&self) -> Complex64 {
        self.identity_offset
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty() && self.identity_offset == Complex64::new(0.0, 0.0)
    }

    pub fn add_term(&mut self, term: PauliTerm) -> Result<()> {
        if term.axes.len() != self.n_qubits {
            return Err(Error::structural(format!(
                "term {} spans {} qubits, sum spans {}",
                term.label(),
                term.axes.len(),
                self.n_qubits
            )));
        }
        if term.is_identity() {
            self.identity_offset += term.coefficient;
            return Ok(());
        }
        match self.index.get(&term.axes) {
            Some(&i) => self.terms[i].coefficient += term.coefficient,
            None => {
                self.index.insert(term.axes.clone(), self.terms.len());
                self.terms.push(term);
            }
        }
        Ok(())
    }

    pub fn add_identity(&mut self, c: impl Into<Complex64>) {
        self.identity_offset += c.into();
    }

    pub fn add_sum(&mut self, other: &PauliSum) -> Result<()> {
        self.add_scaled(other, Complex64::new(1.0, 0.0))
    }

    pub fn add_scaled(&mut self, other: &PauliSum, scale: Complex64) -> Result<()> {
        if other.n_qubits != self.n_qubits {
            return Err(Error::structural("adding PauliSums over different registers"));
        }
        for t in &other.terms {
            self.add_term(PauliTerm::new(t.coefficient * scale, t.axes.clone()))?;
        }
        self.identity_offset += other.identity_offset * scale;
        Ok(())
    }

    pub fn scaled(&self, scale: impl Into<Complex64>) -> PauliSum {
        let s = scale.into();
        let mut out = self.clone();
        for t in &mut out.terms {
            t.coefficient *= s;
        }
        out.identity_offset *= s;
        out
    }

    pub fn adjoint(&self) -> PauliSum {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.coefficient = t.coefficient.conj();
        }
        out.identity_offset = out.identity_offset.conj();
        out
    }

    /// Operator product, merged.
    pub fn multiply(&self, other: &PauliSum) -> Result<PauliSum> {
        if other.n_qubits != self.n_qubits {
            return Err(Error::structural("multiplying PauliSums over different registers"));
        }
        let n = self.n_qubits;
        let id = PauliTerm::new(1.0, vec![Pauli::I; n]);
        let lhs: Vec<PauliTerm> = self.terms.iter().cloned().chain(std::iter::once(PauliTerm::new(self.identity_offset, id.axes.clone()))).collect();
        let rhs: Vec<PauliTerm> = other.terms.iter().cloned().chain(std::iter::once(PauliTerm::new(other.identity_offset, id.axes.clone()))).collect();
        let mut out = PauliSum::new(n);
        for a in &lhs {
            for b in &rhs {
                out.add_term(a * b)?;
            }
        }
        Ok(out.pruned(0.0))
    }

    /// Drops stored terms whose coefficient magnitude is at most `tol`.
    pub fn pruned(&self, tol: f64) -> PauliSum {
        let mut out = PauliSum::new(self.n_qubits);
        for t in &self.terms {
            if t.coefficient.norm() > tol {
                out.add_term(t.clone()).expect("same register");
            }
        }
        out.identity_offset = self.identity_offset;
        out
    }

    /// All coefficients (and the offset) real within [`REAL_COEFF_TOL`].
    pub fn is_hermitian(&self) -> bool {
        self.identity_offset.im.abs() <= REAL_COEFF_TOL && self.terms.iter().all(|t| t.coefficient.im.abs() <= REAL_COEFF_TOL)
    }

    pub fn require_hermitian(&self) -> Result<()> {
        if self.is_hermitian() {
            Ok(())
        } else {
            Err(Error::contract("operator is not Hermitian"))
        }
    }

    /// Coefficient of the string with these axes (identity reads the offset).
    pub fn coefficient_of(&self, axes: &[Pauli]) -> Complex64 {
        if axes.iter().all(|&p| p == Pauli::I) {
            return self.identity_offset;
        }
        self.index.get(axes).map(|&i| self.terms[i].coefficient).unwrap_or_default()
    }

    /// Equality as operators, comparing coefficients within `tol`.
    pub fn approx_eq(&self, other: &PauliSum, tol: f64) -> bool {
        if self.n_qubits != other.n_qubits || (self.identity_offset - other.identity_offset).norm() > tol {
            return false;
        }
        let covered = |a: &PauliSum, b: &PauliSum| a.terms.iter().all(|t| (t.coefficient - b.coefficient_of(&t.axes)).norm() <= tol);
        covered(self, other) && covered(other, self)
    }

    /// `Σ_j c_j ⊗_q P_{j,q} + offset·I` as a dense `2^n × 2^n` matrix.
    pub fn to_matrix(&self, n_qubits: usize) -> Result<DMatrix<Complex64>> {
        if n_qubits != self.n_qubits {
            return Err(Error::structural(format!("PauliSum spans {} qubits, requested {}", self.n_qubits, n_qubits)));
        }
        if n_qubits > 14 {
            return Err(Error::Capacity(format!("dense matrix over {n_qubits} qubits")));
        }
        let dim = 1usize << n_qubits;
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for j in 0..dim {
            m[(j, j)] += self.identity_offset;
        }
        for t in &self.terms {
            let masks = t.masks();
            for j in 0..dim {
                let (i, ph) = masks.act(j);
                m[(i, j)] += t.coefficient * ph;
            }
        }
        Ok(m)
    }

    /// `out = self · psi` without forming the matrix.
    pub fn apply(&self, psi: &[Complex64]) -> Result<Vec<Complex64>> {
        let dim = 1usize << self.n_qubits;
        if psi.len() != dim {
            return Err(Error::structural(format!("vector of length {} on a {}-qubit operator", psi.len(), self.n_qubits)));
        }
        let mut out: Vec<Complex64> = psi.iter().map(|a| a * self.identity_offset).collect();
        for t in &self.terms {
            let masks = t.masks();
            for (j, a) in psi.iter().enumerate() {
                let (i, ph) = masks.act(j);
                out[i] += t.coefficient * ph * a;
            }
        }
        Ok(out)
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}{:+}i", self.identity_offset.re, self.identity_offset.im)?;
        for t in &self.terms {
            write!(f, " + {t}")?;
        }
        Ok(())
    }
}
