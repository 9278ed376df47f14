//! Parameterized circuits: the Hamiltonian-variational ansatz, first-order
//! Trotter circuits built on the same skeleton, statevector execution and
//! CNOT accounting.

use std::f64::consts::FRAC_PI_2;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{self, Mat2};
use crate::model::{Layout, SpinBosonSpec};
use crate::pauli::{Pauli, PauliTerm};
use crate::state::StateVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    X,
    H,
    /// `Rx(pi/2)`, rotating the y axis onto z.
    Ydag,
    Cnot,
    Rx,
    Ry,
    Rz,
    /// `exp(-i angle/2 Z⊗Z)`, realized as CNOT-Rz-CNOT.
    Rzz,
}

impl GateKind {
    pub fn is_rotation(self) -> bool {
        matches!(self, GateKind::Rx | GateKind::Ry | GateKind::Rz | GateKind::Rzz)
    }

    pub fn arity(self) -> usize {
        match self {
            GateKind::Cnot | GateKind::Rzz => 2,
            _ => 1,
        }
    }

    pub fn cx_cost(self) -> usize {
        match self {
            GateKind::Cnot => 1,
            GateKind::Rzz => 2,
            _ => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::X => "X",
            GateKind::H => "H",
            GateKind::Ydag => "YDAG",
            GateKind::Cnot => "CNOT",
            GateKind::Rx => "RX",
            GateKind::Ry => "RY",
            GateKind::Rz => "RZ",
            GateKind::Rzz => "RZZ",
        }
    }

    /// Pauli generator of a rotation: `R(a) = exp(-i a/2 G)`.
    pub fn generator(self) -> Option<Pauli> {
        match self {
            GateKind::Rx => Some(Pauli::X),
            GateKind::Ry => Some(Pauli::Y),
            GateKind::Rz | GateKind::Rzz => Some(Pauli::Z),
            _ => None,
        }
    }
}

impl FromStr for GateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "X" => GateKind::X,
            "H" => GateKind::H,
            "YDAG" => GateKind::Ydag,
            "CNOT" => GateKind::Cnot,
            "RX" => GateKind::Rx,
            "RY" => GateKind::Ry,
            "RZ" => GateKind::Rz,
            "RZZ" => GateKind::Rzz,
            other => return Err(Error::structural(format!("unknown gate {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum AngleBinding {
    Fixed(f64),
    /// Angle `multiplier * theta[id]`.
    Param { id: usize, multiplier: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
    pub binding: Option<AngleBinding>,
}

impl Gate {
    pub fn fixed(kind: GateKind, qubits: Vec<usize>) -> Self {
        Self { kind, qubits, binding: None }
    }

    pub fn rotation(kind: GateKind, qubits: Vec<usize>, binding: AngleBinding) -> Self {
        Self { kind, qubits, binding: Some(binding) }
    }

    pub fn angle(&self, params: &[f64]) -> f64 {
        match self.binding {
            None => 0.0,
            Some(AngleBinding::Fixed(a)) => a,
            Some(AngleBinding::Param { id, multiplier }) => multiplier * params[id],
        }
    }

    fn check(&self, n_qubits: usize) -> Result<()> {
        if self.qubits.len() != self.kind.arity() {
            return Err(Error::structural(format!("{} takes {} qubits", self.kind.name(), self.kind.arity())));
        }
        if self.qubits.iter().any(|&q| q >= n_qubits) {
            return Err(Error::structural(format!("{} acts outside a {n_qubits}-qubit register", self.kind.name())));
        }
        if self.qubits.len() == 2 && self.qubits[0] == self.qubits[1] {
            return Err(Error::structural("two-qubit gate on a single qubit"));
        }
        if self.kind.is_rotation() != self.binding.is_some() {
            return Err(Error::structural(format!("{} has a wrong angle binding", self.kind.name())));
        }
        Ok(())
    }

    /// 2x2 matrix of a single-qubit gate at the given angle.
    pub fn matrix_1q(&self, angle: f64) -> Option<Mat2> {
        match self.kind {
            GateKind::X => Some(kernels::pauli_x()),
            GateKind::H => Some(kernels::hadamard()),
            GateKind::Ydag => Some(kernels::rx(FRAC_PI_2)),
            GateKind::Rx => Some(kernels::rx(angle)),
            GateKind::Ry => Some(kernels::ry(angle)),
            GateKind::Rz => Some(kernels::rz(angle)),
            GateKind::Cnot | GateKind::Rzz => None,
        }
    }
}

/// Applies `gate` to a register whose qubit `q` lives at bit `q + shift`.
/// With `conjugate`, the entry-wise conjugate of the gate is applied instead.
pub(crate) fn apply_gate(amps: &mut [Complex64], gate: &Gate, angle: f64, shift: usize, conjugate: bool) {
    let q = |i: usize| gate.qubits[i] + shift;
    match gate.kind {
        GateKind::Cnot => kernels::apply_cnot(amps, q(0), q(1)),
        GateKind::Rz => {
            let s = if conjugate { -1.0 } else { 1.0 };
            kernels::apply_diag_1q(amps, q(0), Complex64::from_polar(1.0, -s * angle / 2.0), Complex64::from_polar(1.0, s * angle / 2.0));
        }
        GateKind::Rzz => {
            let s = if conjugate { -1.0 } else { 1.0 };
            kernels::apply_parity_phase(amps, q(0), q(1), Complex64::from_polar(1.0, -s * angle / 2.0), Complex64::from_polar(1.0, s * angle / 2.0));
        }
        _ => {
            let u = gate.matrix_1q(angle).expect("single-qubit gate");
            let u = if conjugate { kernels::mat_conj(&u) } else { u };
            kernels::apply_1q(amps, q(0), &u);
        }
    }
}

/// Multiplies by the rotation generator of `gate` (a Pauli string on its qubits).
pub(crate) fn apply_generator(amps: &mut [Complex64], gate: &Gate) {
    match gate.kind {
        GateKind::Rz => kernels::apply_diag_1q(amps, gate.qubits[0], Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)),
        GateKind::Rzz => kernels::apply_parity_phase(amps, gate.qubits[0], gate.qubits[1], Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)),
        GateKind::Rx => kernels::apply_1q(amps, gate.qubits[0], &Pauli::X.matrix()),
        GateKind::Ry => kernels::apply_1q(amps, gate.qubits[0], &Pauli::Y.matrix()),
        _ => panic!("{} has no generator", gate.kind.name()),
    }
}

/// Term groups of one layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Block {
    SpinZ,
    SpinX,
    Number,
    CouplingEven,
    CouplingOdd,
}

/// Application order of the term groups inside each layer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerOrder(pub Vec<Block>);

impl Default for LayerOrder {
    fn default() -> Self {
        LayerOrder(vec![Block::CouplingEven, Block::CouplingOdd, Block::Number, Block::SpinZ, Block::SpinX])
    }
}

impl LayerOrder {
    /// Spin rotations, number blocks, then even and odd couplings.
    pub fn spin_first() -> Self {
        LayerOrder(vec![Block::SpinZ, Block::SpinX, Block::Number, Block::CouplingEven, Block::CouplingOdd])
    }

    fn validate(&self) -> Result<()> {
        for b in [Block::SpinZ, Block::SpinX, Block::Number, Block::CouplingEven, Block::CouplingOdd] {
            if self.0.iter().filter(|&&x| x == b).count() != 1 {
                return Err(Error::contract(format!("layer order must list {b:?} exactly once")));
            }
        }
        Ok(())
    }
}

/// Physical meaning of a logical ansatz parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParamRole {
    SpinZ { layer: usize },
    SpinX { layer: usize },
    Number { layer: usize, mode: usize, level: usize },
    Coupling { layer: usize, mode: usize, level: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamCircuit {
    n_qubits: usize,
    gates: Vec<Gate>,
    n_params: usize,
    occurrence_map: Vec<Vec<usize>>,
    roles: Vec<ParamRole>,
}

impl ParamCircuit {
    /// Validates gates and derives the occurrence map. `roles` may be empty.
    pub fn new(n_qubits: usize, gates: Vec<Gate>, n_params: usize, roles: Vec<ParamRole>) -> Result<Self> {
        let mut occurrence_map = vec![Vec::new(); n_params];
        for (pos, g) in gates.iter().enumerate() {
            g.check(n_qubits)?;
            if let Some(AngleBinding::Param { id, .. }) = g.binding {
                if id >= n_params {
                    return Err(Error::structural(format!("gate {pos} references parameter {id} of {n_params}")));
                }
                occurrence_map[id].push(pos);
            }
        }
        if let Some(id) = occurrence_map.iter().position(Vec::is_empty) {
            return Err(Error::structural(format!("parameter {id} drives no gate")));
        }
        if !roles.is_empty() && roles.len() != n_params {
            return Err(Error::structural("one role per parameter required"));
        }
        Ok(Self { n_qubits, gates, n_params, occurrence_map, roles })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    /// Gate positions driven by each parameter.
    pub fn occurrence_map(&self) -> &[Vec<usize>] {
        &self.occurrence_map
    }

    pub fn n_occurrences(&self) -> usize {
        self.occurrence_map.iter().map(Vec::len).sum()
    }

    pub fn roles(&self) -> &[ParamRole] {
        &self.roles
    }

    /// Replaces every parameter binding by the fixed angle it takes at `params`.
    pub fn bind(&self, params: &[f64]) -> Result<ParamCircuit> {
        self.check_params(params)?;
        let gates = self
            .gates
            .iter()
            .map(|g| match g.binding {
                Some(AngleBinding::Param { .. }) => Gate { binding: Some(AngleBinding::Fixed(g.angle(params))), ..g.clone() },
                _ => g.clone(),
            })
            .collect();
        ParamCircuit::new(self.n_qubits, gates, 0, Vec::new())
    }

    pub(crate) fn check_params(&self, params: &[f64]) -> Result<()> {
        if params.len() != self.n_params {
            return Err(Error::structural(format!("circuit takes {} parameters, got {}", self.n_params, params.len())));
        }
        Ok(())
    }

    /// Applies gates `range` to raw amplitudes.
    pub(crate) fn apply_range(&self, amps: &mut [Complex64], params: &[f64], range: std::ops::Range<usize>) {
        for g in &self.gates[range] {
            apply_gate(amps, g, g.angle(params), 0, false);
        }
    }

    /// Line-oriented text form, one gate per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("# qubits {} params {}\n", self.n_qubits, self.n_params);
        for g in &self.gates {
            out.push_str(g.kind.name());
            out.push(' ');
            let qs: Vec<String> = g.qubits.iter().map(|q| q.to_string()).collect();
            out.push_str(&qs.join(","));
            match g.binding {
                None => {}
                Some(AngleBinding::Fixed(a)) => write!(out, " {a:?}").unwrap(),
                Some(AngleBinding::Param { id, multiplier }) => write!(out, " p{id} {multiplier:?}").unwrap(),
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut header = None;
        let mut gates = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let bad = |what: &str| Error::structural(format!("line {}: {what}", lineno + 1));
            if let Some(rest) = line.strip_prefix('#') {
                let f: Vec<&str> = rest.split_whitespace().collect();
                if let ["qubits", n, "params", p] = f.as_slice() {
                    header = Some((n.parse().map_err(|_| bad("qubit count"))?, p.parse().map_err(|_| bad("parameter count"))?));
                }
                continue;
            }
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() < 2 {
                return Err(bad("expected a gate and its qubits"));
            }
            let kind: GateKind = f[0].parse()?;
            let qubits = f[1].split(',').map(|q| q.parse().map_err(|_| bad("qubit index"))).collect::<Result<Vec<usize>>>()?;
            let binding = match &f[2..] {
                [] => None,
                [a] => Some(AngleBinding::Fixed(a.parse().map_err(|_| bad("angle"))?)),
                [p, m] => Some(AngleBinding::Param {
                    id: p.strip_prefix('p').ok_or_else(|| bad("parameter id"))?.parse().map_err(|_| bad("parameter id"))?,
                    multiplier: m.parse().map_err(|_| bad("multiplier"))?,
                }),
                _ => return Err(bad("too many fields")),
            };
            gates.push(Gate { kind, qubits, binding });
        }
        let (n_qubits, n_params) = header.ok_or_else(|| Error::structural("missing '# qubits N params P' header"))?;
        ParamCircuit::new(n_qubits, gates, n_params, Vec::new())
    }
}

impl fmt::Display for ParamCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Parameters per layer: spin z, spin x, and one number and one coupling
/// parameter per (mode, level pair).
pub fn params_per_layer(m: usize, n_max: usize) -> usize {
    2 * (m * n_max + 1)
}

/// Gradient circuits per layer (parameter occurrences).
pub fn occurrences_per_layer(m: usize, n_max: usize) -> usize {
    5 * m * n_max + 2
}

struct Builder {
    gates: Vec<Gate>,
}

impl Builder {
    fn push(&mut self, kind: GateKind, qubits: &[usize]) {
        self.gates.push(Gate::fixed(kind, qubits.to_vec()));
    }

    fn rot(&mut self, kind: GateKind, qubits: &[usize], id: usize, multiplier: f64) {
        self.gates.push(Gate::rotation(kind, qubits.to_vec(), AngleBinding::Param { id, multiplier }));
    }

    /// `exp(-i (multiplier/2) theta P_0 P_1 P_2)` with each `P` in {X, Y}.
    fn three_body(&mut self, qubits: [usize; 3], axes: [Pauli; 3], id: usize, multiplier: f64) {
        for (&q, &p) in qubits.iter().zip(&axes) {
            match p {
                Pauli::X => self.push(GateKind::H, &[q]),
                Pauli::Y => self.push(GateKind::Ydag, &[q]),
                _ => {}
            }
        }
        self.push(GateKind::Cnot, &[qubits[0], qubits[1]]);
        self.push(GateKind::Cnot, &[qubits[1], qubits[2]]);
        self.rot(GateKind::Rz, &[qubits[2]], id, multiplier);
        self.push(GateKind::Cnot, &[qubits[1], qubits[2]]);
        self.push(GateKind::Cnot, &[qubits[0], qubits[1]]);
        for (&q, &p) in qubits.iter().zip(&axes) {
            match p {
                Pauli::X => self.push(GateKind::H, &[q]),
                Pauli::Y => self.gates.push(Gate::rotation(GateKind::Rx, vec![q], AngleBinding::Fixed(-FRAC_PI_2))),
                _ => {}
            }
        }
    }
}

/// State preparation followed by `depth` ansatz layers.
pub fn build_ansatz(spec: &SpinBosonSpec, depth: usize) -> Result<ParamCircuit> {
    build_ansatz_with(spec, depth, &LayerOrder::default())
}

pub fn build_ansatz_with(spec: &SpinBosonSpec, depth: usize, order: &LayerOrder) -> Result<ParamCircuit> {
    build_ansatz_on(spec, depth, order, &spec.layout())
}

/// Ansatz over an explicit layout (an ancilla, if present, stays idle).
pub fn build_ansatz_on(spec: &SpinBosonSpec, depth: usize, order: &LayerOrder, layout: &Layout) -> Result<ParamCircuit> {
    spec.validate()?;
    order.validate()?;
    if depth < 1 {
        return Err(Error::contract("depth must be at least 1"));
    }
    let (m, n_max) = (spec.m, spec.n_max);
    let per_layer = params_per_layer(m, n_max);
    let spin = Layout::SPIN;
    let mut b = Builder { gates: Vec::new() };
    for k in 0..m {
        b.push(GateKind::X, &[layout.level(k, 0)]);
    }
    let mut roles = Vec::with_capacity(per_layer * depth);
    for layer in 0..depth {
        let base = layer * per_layer;
        roles.push(ParamRole::SpinZ { layer });
        roles.push(ParamRole::SpinX { layer });
        for mode in 0..m {
            for level in 0..n_max {
                roles.push(ParamRole::Number { layer, mode, level });
            }
        }
        for mode in 0..m {
            for level in 0..n_max {
                roles.push(ParamRole::Coupling { layer, mode, level });
            }
        }
        let num_id = |k: usize, n: usize| base + 2 + k * n_max + n;
        let cpl_id = |k: usize, n: usize| base + 2 + m * n_max + k * n_max + n;
        for block in &order.0 {
            match block {
                Block::SpinZ => b.rot(GateKind::Rz, &[spin], base, 2.0),
                Block::SpinX => b.rot(GateKind::Rx, &[spin], base + 1, 2.0),
                Block::Number => {
                    for k in 0..m {
                        for n in 0..n_max {
                            let (qa, qb) = (layout.level(k, n), layout.level(k, n + 1));
                            let w = (n + 1) as f64 / 2.0;
                            b.rot(GateKind::Rz, &[qa], num_id(k, n), w);
                            b.rot(GateKind::Rz, &[qb], num_id(k, n), -w);
                            b.rot(GateKind::Rzz, &[qa, qb], num_id(k, n), -w);
                        }
                    }
                }
                Block::CouplingEven | Block::CouplingOdd => {
                    let parity = usize::from(*block == Block::CouplingOdd);
                    for k in 0..m {
                        for n in (parity..n_max).step_by(2) {
                            let qs = [spin, layout.level(k, n), layout.level(k, n + 1)];
                            let w = ((n + 1) as f64).sqrt();
                            b.three_body(qs, [Pauli::X, Pauli::X, Pauli::X], cpl_id(k, n), w);
                            b.three_body(qs, [Pauli::X, Pauli::Y, Pauli::Y], cpl_id(k, n), w);
                        }
                    }
                }
            }
        }
    }
    ParamCircuit::new(layout.n_qubits(), b.gates, per_layer * depth, roles)
}

/// Parameter values that turn the ansatz into a first-order Trotter circuit
/// with step `tau`.
pub fn trotter_parameters(spec: &SpinBosonSpec, circuit: &ParamCircuit, tau: f64) -> Vec<f64> {
    circuit
        .roles()
        .iter()
        .map(|r| match *r {
            ParamRole::SpinZ { .. } => spec.epsilon / 2.0 * tau,
            ParamRole::SpinX { .. } => spec.delta * tau,
            ParamRole::Number { mode, .. } => spec.omega(mode) * tau,
            ParamRole::Coupling { mode, .. } => spec.g(mode) * tau,
        })
        .collect()
}

/// Pauli strings of one layer in application order, weighted by their
/// Hamiltonian coefficients. A Trotter step of size `tau` is the product of
/// `exp(-i c tau P)` over this list, which is what the gate skeleton realizes.
pub fn trotter_terms(spec: &SpinBosonSpec, order: &LayerOrder) -> Result<Vec<PauliTerm>> {
    spec.validate()?;
    order.validate()?;
    let layout = spec.layout();
    let nq = layout.n_qubits();
    let spin = Layout::SPIN;
    let t = |c: f64, f: &[(usize, Pauli)]| PauliTerm::from_sparse(c, nq, f);
    let mut out = Vec::new();
    for block in &order.0 {
        match block {
            Block::SpinZ => out.push(t(spec.epsilon / 2.0, &[(spin, Pauli::Z)])),
            Block::SpinX => out.push(t(spec.delta, &[(spin, Pauli::X)])),
            Block::Number => {
                for k in 0..spec.m {
                    for n in 0..spec.n_max {
                        let (a, b) = (layout.level(k, n), layout.level(k, n + 1));
                        let w = spec.omega(k) * (n + 1) as f64 / 4.0;
                        out.push(t(w, &[(a, Pauli::Z)]));
                        out.push(t(-w, &[(b, Pauli::Z)]));
                        out.push(t(-w, &[(a, Pauli::Z), (b, Pauli::Z)]));
                    }
                }
            }
            Block::CouplingEven | Block::CouplingOdd => {
                let parity = usize::from(*block == Block::CouplingOdd);
                for k in 0..spec.m {
                    for n in (parity..spec.n_max).step_by(2) {
                        let (a, b) = (layout.level(k, n), layout.level(k, n + 1));
                        let c = spec.g(k) * ((n + 1) as f64).sqrt() / 2.0;
                        out.push(t(c, &[(spin, Pauli::X), (a, Pauli::X), (b, Pauli::X)]));
                        out.push(t(c, &[(spin, Pauli::X), (a, Pauli::Y), (b, Pauli::Y)]));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `depth` Trotter steps of size `total_time / depth`, as fixed angles.
pub fn build_trotter(spec: &SpinBosonSpec, total_time: f64, depth: usize) -> Result<ParamCircuit> {
    build_trotter_with(spec, total_time, depth, &LayerOrder::default())
}

pub fn build_trotter_with(spec: &SpinBosonSpec, total_time: f64, depth: usize, order: &LayerOrder) -> Result<ParamCircuit> {
    if total_time < 0.0 || !total_time.is_finite() {
        return Err(Error::contract("evolution time must be finite and non-negative"));
    }
    let ansatz = build_ansatz_with(spec, depth, order)?;
    let params = trotter_parameters(spec, &ansatz, total_time / depth as f64);
    ansatz.bind(&params)
}

/// Applies the circuit to `|0...0>`.
pub fn run_statevector(circuit: &ParamCircuit, params: &[f64]) -> Result<StateVector> {
    circuit.check_params(params)?;
    let mut amps = StateVector::zero(circuit.n_qubits()).into_amplitudes();
    circuit.apply_range(&mut amps, params, 0..circuit.gates().len());
    Ok(StateVector::from_raw(circuit.n_qubits(), amps))
}

/// Applies the circuit to a given state.
pub fn run_on(circuit: &ParamCircuit, params: &[f64], psi: &StateVector) -> Result<StateVector> {
    circuit.check_params(params)?;
    if psi.n_qubits() != circuit.n_qubits() {
        return Err(Error::structural("state and circuit registers differ"));
    }
    let mut amps = psi.amplitudes().to_vec();
    circuit.apply_range(&mut amps, params, 0..circuit.gates().len());
    Ok(StateVector::from_raw(circuit.n_qubits(), amps))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitCost {
    pub n_cx: usize,
    /// Worst-case swap overhead: `n_cx * n_qubits`.
    pub n_cx_linear_topology: usize,
    /// Longest chain of CNOTs under as-soon-as-possible scheduling.
    pub two_qubit_depth: usize,
}

pub fn count_cx(circuit: &ParamCircuit, assume_linear_topology: bool) -> CircuitCost {
    let n_cx: usize = circuit.gates().iter().map(|g| g.kind.cx_cost()).sum();
    let mut frontier = vec![0usize; circuit.n_qubits()];
    for g in circuit.gates() {
        let cost = g.kind.cx_cost();
        if cost == 0 {
            continue;
        }
        let start = g.qubits.iter().map(|&q| frontier[q]).max().unwrap_or(0);
        for &q in &g.qubits {
            frontier[q] = start + cost;
        }
    }
    let two_qubit_depth = frontier.into_iter().max().unwrap_or(0);
    let n_cx_linear_topology = if assume_linear_topology { n_cx * circuit.n_qubits() } else { n_cx };
    CircuitCost { n_cx, n_cx_linear_topology, two_qubit_depth }
}
