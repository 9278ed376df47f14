//! Spin-boson Hamiltonian under the one-hot boson-to-qubit mapping.
//!
//! Qubit 0 is the spin. Mode `k` owns qubits `1 + k(n_max+1) ..= (k+1)(n_max+1)`,
//! the lowest of which marks occupation 0. A mode with `m` quanta has exactly
//! the level-`m` qubit set.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliSum, PauliTerm};
use crate::state::{expectation, ExpectationTarget, StateVector};

/// Either one value shared by all modes or one value per mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModeParam {
    Uniform(f64),
    PerMode(Vec<f64>),
}

impl ModeParam {
    pub fn get(&self, k: usize) -> f64 {
        match self {
            ModeParam::Uniform(v) => *v,
            ModeParam::PerMode(v) => v[k],
        }
    }

    fn values(&self) -> Vec<f64> {
        match self {
            ModeParam::Uniform(v) => vec![*v],
            ModeParam::PerMode(v) => v.clone(),
        }
    }
}

impl Default for ModeParam {
    fn default() -> Self {
        ModeParam::Uniform(1.0)
    }
}

/// Model parameters, all in units of the mode frequency.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpinBosonSpec {
    #[serde(rename = "M")]
    pub m: usize,
    pub n_max: usize,
    #[serde(default)]
    pub omega: ModeParam,
    pub epsilon: f64,
    pub delta: f64,
    pub g: ModeParam,
}

/// Coupling range covered by the ultrastrong-coupling studies.
pub const USC_RANGE: (f64, f64) = (0.1, 1.0);

impl SpinBosonSpec {
    /// Resonant model with `omega = 1`.
    pub fn resonant(m: usize, n_max: usize, epsilon: f64, delta: f64, g: f64) -> Self {
        Self { m, n_max, omega: ModeParam::Uniform(1.0), epsilon, delta, g: ModeParam::Uniform(g) }
    }

    pub fn omega(&self, k: usize) -> f64 {
        self.omega.get(k)
    }

    pub fn g(&self, k: usize) -> f64 {
        self.g.get(k)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 1 {
            return Err(Error::contract("model needs at least one mode"));
        }
        if self.n_max < 1 {
            return Err(Error::contract("n_max must be at least 1"));
        }
        for (name, p) in [("omega", &self.omega), ("g", &self.g)] {
            if let ModeParam::PerMode(v) = p {
                if v.len() != self.m {
                    return Err(Error::contract(format!("{name} has {} entries for {} modes", v.len(), self.m)));
                }
            }
            if p.values().iter().any(|x| !x.is_finite()) {
                return Err(Error::contract(format!("{name} must be finite")));
            }
        }
        if !self.epsilon.is_finite() || !self.delta.is_finite() {
            return Err(Error::contract("epsilon and delta must be finite"));
        }
        Ok(())
    }

    /// Notes for couplings outside the ultrastrong range. Never an error.
    pub fn range_notes(&self) -> Vec<String> {
        (0..self.m)
            .filter_map(|k| {
                let ratio = self.g(k) / self.omega(k);
                (!(USC_RANGE.0..=USC_RANGE.1).contains(&ratio.abs()))
                    .then(|| format!("mode {k}: g/omega = {ratio} outside the ultrastrong range [0.1, 1]"))
            })
            .collect()
    }

    pub fn layout(&self) -> Layout {
        Layout { m: self.m, n_max: self.n_max, ancilla: false }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(s)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        Self::from_json_str(&fs::read_to_string(path)?)
    }
}

/// Qubit index assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    pub m: usize,
    pub n_max: usize,
    pub ancilla: bool,
}

impl Layout {
    pub const SPIN: usize = 0;

    pub fn with_ancilla(mut self) -> Self {
        self.ancilla = true;
        self
    }

    /// Qubit holding occupation level `n` of mode `k`.
    pub fn level(&self, k: usize, n: usize) -> usize {
        debug_assert!(k < self.m && n <= self.n_max);
        1 + k * (self.n_max + 1) + n
    }

    pub fn mode_qubits(&self, k: usize) -> std::ops::Range<usize> {
        self.level(k, 0)..self.level(k, 0) + self.n_max + 1
    }

    /// Qubits carrying the model itself.
    pub fn n_system(&self) -> usize {
        self.m * (self.n_max + 1) + 1
    }

    pub fn n_qubits(&self) -> usize {
        self.n_system() + usize::from(self.ancilla)
    }

    pub fn ancilla_qubit(&self) -> Option<usize> {
        self.ancilla.then(|| self.n_system())
    }

    /// Basis index of the one-hot encoding of spin bit and occupations.
    pub fn encode(&self, spin: usize, occupations: &[usize]) -> usize {
        occupations.iter().enumerate().fold(spin & 1, |idx, (k, &n)| idx | 1 << self.level(k, n))
    }

    /// Basis indices of all one-hot states (ancilla in |0>), ordered by
    /// spin bit and then occupations.
    pub fn physical_basis(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut occ = vec![0usize; self.m];
        loop {
            for spin in 0..2 {
                out.push(self.encode(spin, &occ));
            }
            let Some(k) = occ.iter().position(|&n| n < self.n_max) else { break };
            occ[k] += 1;
            occ[..k].iter_mut().for_each(|n| *n = 0);
        }
        out
    }

    /// Inverse of [`Layout::encode`]; `None` outside the physical subspace.
    pub fn decode(&self, index: usize) -> Option<(usize, Vec<usize>)> {
        let mut occ = Vec::with_capacity(self.m);
        for k in 0..self.m {
            let bits = (index >> self.level(k, 0)) & ((1 << (self.n_max + 1)) - 1);
            if bits.count_ones() != 1 {
                return None;
            }
            occ.push(bits.trailing_zeros() as usize);
        }
        if index >> self.n_system() != 0 {
            return None;
        }
        Some((index & 1, occ))
    }
}

/// Qubit images of the ladder operators of one mode.
#[derive(Debug, Clone)]
pub struct BosonOpDecomposition {
    pub create: PauliSum,
    pub annihilate: PauliSum,
    pub number: PauliSum,
    pub coupling_even: PauliSum,
    pub coupling_odd: PauliSum,
}

fn term(n_qubits: usize, coef: impl Into<Complex64>, factors: &[(usize, Pauli)]) -> PauliTerm {
    PauliTerm::from_sparse(coef, n_qubits, factors)
}

pub fn map_boson_ops(mode: usize, n_max: usize, layout: &Layout) -> Result<BosonOpDecomposition> {
    if n_max < 1 {
        return Err(Error::contract("n_max must be at least 1"));
    }
    if n_max != layout.n_max || mode >= layout.m {
        return Err(Error::structural(format!("mode {mode} with n_max {n_max} does not fit the layout")));
    }
    let nq = layout.n_qubits();
    let mut create = PauliSum::new(nq);
    let mut number = PauliSum::new(nq);
    let mut even = PauliSum::new(nq);
    let mut odd = PauliSum::new(nq);
    let minus_i = Complex64::new(0.0, -1.0);
    for n in 0..n_max {
        let (a, b) = (layout.level(mode, n), layout.level(mode, n + 1));
        let s = ((n + 1) as f64).sqrt();
        // sigma+_a sigma-_b = (XX - iXY + iYX + YY) / 4
        create.add_term(term(nq, s / 4.0, &[(a, Pauli::X), (b, Pauli::X)]))?;
        create.add_term(term(nq, Complex64::new(0.0, -s / 4.0), &[(a, Pauli::X), (b, Pauli::Y)]))?;
        create.add_term(term(nq, Complex64::new(0.0, s / 4.0), &[(a, Pauli::Y), (b, Pauli::X)]))?;
        create.add_term(term(nq, s / 4.0, &[(a, Pauli::Y), (b, Pauli::Y)]))?;

        let w = (n + 1) as f64 / 4.0;
        number.add_term(term(nq, w, &[(a, Pauli::Z)]))?;
        number.add_term(term(nq, -w, &[(b, Pauli::Z)]))?;
        number.add_term(term(nq, -w, &[(a, Pauli::Z), (b, Pauli::Z)]))?;
        number.add_identity(w);

        let part = if n % 2 == 0 { &mut even } else { &mut odd };
        part.add_term(term(nq, minus_i * (s / 2.0), &[(a, Pauli::X), (b, Pauli::X)]))?;
        part.add_term(term(nq, minus_i * (s / 2.0), &[(a, Pauli::Y), (b, Pauli::Y)]))?;
    }
    let annihilate = create.adjoint();
    Ok(BosonOpDecomposition { create, annihilate, number, coupling_even: even, coupling_odd: odd })
}

/// The qubit-mapped Hamiltonian and its bookkeeping.
#[derive(Debug, Clone)]
pub struct MappedModel {
    pub spec: SpinBosonSpec,
    pub hamiltonian: PauliSum,
    pub n_qubits: usize,
    /// Term count with identity strings counted per occurrence.
    pub n_h: usize,
    pub layout: Layout,
    pub notes: Vec<String>,
}

pub fn term_count(m: usize, n_max: usize) -> usize {
    7 * m * n_max + 2
}

/// `H/omega` as a Pauli sum over the model register.
pub fn build_hamiltonian(spec: &SpinBosonSpec) -> Result<MappedModel> {
    build_hamiltonian_on(spec, spec.layout())
}

/// Same as [`build_hamiltonian`] but over a caller-chosen layout, e.g. one with an ancilla.
pub fn build_hamiltonian_on(spec: &SpinBosonSpec, layout: Layout) -> Result<MappedModel> {
    spec.validate()?;
    if layout.m != spec.m || layout.n_max != spec.n_max {
        return Err(Error::structural("layout does not match the model"));
    }
    let nq = layout.n_qubits();
    let mut h = PauliSum::new(nq);
    h.add_term(term(nq, spec.epsilon / 2.0, &[(Layout::SPIN, Pauli::Z)]))?;
    h.add_term(term(nq, spec.delta, &[(Layout::SPIN, Pauli::X)]))?;
    for k in 0..spec.m {
        let ops = map_boson_ops(k, spec.n_max, &layout)?;
        h.add_scaled(&ops.number, spec.omega(k).into())?;
        let g = spec.g(k);
        for n in 0..spec.n_max {
            let (a, b) = (layout.level(k, n), layout.level(k, n + 1));
            let c = g * ((n + 1) as f64).sqrt() / 2.0;
            h.add_term(term(nq, c, &[(Layout::SPIN, Pauli::X), (a, Pauli::X), (b, Pauli::X)]))?;
            h.add_term(term(nq, c, &[(Layout::SPIN, Pauli::X), (a, Pauli::Y), (b, Pauli::Y)]))?;
        }
    }
    let h = h.pruned(0.0);
    h.require_hermitian()?;
    Ok(MappedModel {
        spec: spec.clone(),
        hamiltonian: h,
        n_qubits: nq,
        n_h: term_count(spec.m, spec.n_max),
        layout,
        notes: spec.range_notes(),
    })
}

/// Spin up, every mode in its vacuum.
pub fn initial_state(spec: &SpinBosonSpec, layout: &Layout) -> Result<StateVector> {
    if layout.m != spec.m || layout.n_max != spec.n_max {
        return Err(Error::structural("layout does not match the model"));
    }
    StateVector::basis(layout.n_qubits(), layout.encode(0, &vec![0; spec.m]))
}

/// `P_z = (<sigma^z> + 1) / 2` on the spin qubit.
pub fn spin_orientation<S: ExpectationTarget>(state: &S, n_qubits: usize) -> Result<f64> {
    let z = PauliSum::from_terms(n_qubits, [term(n_qubits, 1.0, &[(Layout::SPIN, Pauli::Z)])])?;
    Ok((expectation(&z, state)? + 1.0) / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_operator_on_occupations() {
        for n_max in [1, 3] {
            let layout = Layout { m: 1, n_max, ancilla: false };
            let ops = map_boson_ops(0, n_max, &layout).unwrap();
            for occ in 0..=n_max {
                let psi = StateVector::basis(layout.n_qubits(), layout.encode(0, &[occ])).unwrap();
                let v = expectation(&ops.number, &psi).unwrap();
                assert!((v - occ as f64).abs() < 1e-12, "n_max={n_max} occ={occ} got {v}");
            }
        }
    }

    #[test]
    fn creation_is_adjoint_of_annihilation() {
        let layout = Layout { m: 1, n_max: 3, ancilla: false };
        let ops = map_boson_ops(0, 3, &layout).unwrap();
        assert!(ops.create.approx_eq(&ops.annihilate.adjoint(), 1e-14));
    }

    #[test]
    fn quadrature_splits_into_even_and_odd() {
        let layout = Layout { m: 1, n_max: 4, ancilla: false };
        let ops = map_boson_ops(0, 4, &layout).unwrap();
        let mut lhs = ops.annihilate.clone();
        lhs.add_sum(&ops.create).unwrap();
        let lhs = lhs.scaled(Complex64::new(0.0, -1.0));
        let mut rhs = ops.coupling_even.clone();
        rhs.add_sum(&ops.coupling_odd).unwrap();
        assert!(lhs.pruned(1e-15).approx_eq(&rhs, 1e-14));
        for part in [&ops.coupling_even, &ops.coupling_odd] {
            for a in part.terms() {
                for b in part.terms() {
                    assert!(a.commutes_with(b));
                }
            }
        }
    }

    #[test]
    fn counts_follow_formulas() {
        let m = build_hamiltonian(&SpinBosonSpec::resonant(1, 1, -1.0, 0.0, 0.5)).unwrap();
        assert_eq!(m.n_h, 9);
        assert_eq!(m.n_qubits, 3);
        for (mm, n) in [(2, 4), (5, 1)] {
            assert_eq!(SpinBosonSpec::resonant(mm, n, 0.0, 1.0, 0.5).layout().n_qubits(), 11);
        }
    }

    #[test]
    fn initial_state_label() {
        let spec = SpinBosonSpec::resonant(1, 1, 0.0, 0.0, 0.5);
        let psi = initial_state(&spec, &spec.layout()).unwrap();
        let idx = psi.amplitudes().iter().position(|a| a.norm() > 0.5).unwrap();
        assert_eq!(StateVector::ket_label(3, idx), "010");
        assert!((spin_orientation(&psi, 3).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn decode_inverts_encode() {
        let layout = Layout { m: 2, n_max: 2, ancilla: false };
        for s in 0..2 {
            for a in 0..3 {
                for b in 0..3 {
                    assert_eq!(layout.decode(layout.encode(s, &[a, b])), Some((s, vec![a, b])));
                }
            }
        }
        assert_eq!(layout.decode(0), None);
    }

    #[test]
    fn json_roundtrip_and_validation() {
        let spec = SpinBosonSpec::from_json_str(r#"{"M":2,"n_max":1,"omega":1.0,"epsilon":-1,"delta":0,"g":[0.5,0.3]}"#).unwrap();
        assert_eq!(spec.g(1), 0.3);
        assert!(SpinBosonSpec::from_json_str(r#"{"M":2,"n_max":0,"epsilon":0,"delta":0,"g":0.5}"#).is_err());
        assert!(SpinBosonSpec::from_json_str(r#"{"M":2,"n_max":1,"epsilon":0,"delta":0,"g":[0.5]}"#).is_err());
        let back = SpinBosonSpec::from_json_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn weak_coupling_gets_a_note() {
        assert_eq!(SpinBosonSpec::resonant(1, 1, 0.0, 0.0, 0.05).range_notes().len(), 1);
        assert!(SpinBosonSpec::resonant(1, 1, 0.0, 0.0, 0.5).range_notes().is_empty());
    }
}
