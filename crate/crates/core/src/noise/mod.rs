//! Gate-level noise: device parameters, eta scaling, channels, density-matrix
//! execution, shot sampling and readout mitigation.

mod channels;
mod density;
mod evaluator;
mod readout;

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use channels::{
    apply_depolarizing, apply_thermal, depolarizing_kraus, depolarizing_parameter, thermal_kraus, Channel, Kraus,
};
pub use density::{run_density_matrix, MAX_DENSITY_QUBITS};
pub use evaluator::{NoisyConfig, NoisyEvaluator};
pub use readout::{
    mitigate_distribution, readout_calibration, sample_counts, sample_expectation, MeasurementOptions, ReadoutModel,
    ShotSampler, DEFAULT_SHOTS,
};

/// Per-qubit device figures, times in microseconds and lengths in nanoseconds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QubitNoise {
    pub t1: f64,
    pub t2: f64,
    pub e_read: f64,
    pub e_1qg: f64,
}

/// Averaged device noise figures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviceNoiseParams {
    /// Microseconds.
    pub t1: f64,
    /// Microseconds.
    pub t2: f64,
    pub e_1qg: f64,
    pub e_2qg: f64,
    pub e_read: f64,
    /// Nanoseconds.
    pub gate_len_1q: f64,
    /// Nanoseconds.
    pub gate_len_2q: f64,
    /// Optional per-qubit table; the means above are what the simulator uses.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub qubits: Vec<QubitNoise>,
}

impl Default for DeviceNoiseParams {
    /// Mean figures of a 5-qubit superconducting device.
    fn default() -> Self {
        Self {
            t1: 122.55,
            t2: 149.53,
            e_1qg: 2.09e-4,
            e_2qg: 7.78e-3,
            e_read: 1.63e-2,
            gate_len_1q: 35.56,
            gate_len_2q: 536.89,
            qubits: Vec::new(),
        }
    }
}

impl DeviceNoiseParams {
    pub fn noiseless() -> Self {
        Self { t1: f64::INFINITY, t2: f64::INFINITY, e_1qg: 0.0, e_2qg: 0.0, e_read: 0.0, ..Self::default() }
    }

    /// Checks ranges and clamps `t2` to `2 t1`, returning a warning when it does.
    pub fn validated(mut self) -> Result<(Self, Vec<String>)> {
        let mut warnings = Vec::new();
        for (name, v) in [("t1", self.t1), ("t2", self.t2), ("gate_len_1q", self.gate_len_1q), ("gate_len_2q", self.gate_len_2q)] {
            if !(v >= 0.0) {
                return Err(Error::contract(format!("{name} must be non-negative")));
            }
        }
        for (name, v) in [("e_1qg", self.e_1qg), ("e_2qg", self.e_2qg), ("e_read", self.e_read)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::contract(format!("{name} must lie in [0, 1]")));
            }
        }
        if self.t2 > 2.0 * self.t1 {
            warnings.push(format!("t2 = {} exceeds 2 t1 = {}; clamped", self.t2, 2.0 * self.t1));
            self.t2 = 2.0 * self.t1;
        }
        for (i, q) in self.qubits.iter_mut().enumerate() {
            if q.t2 > 2.0 * q.t1 {
                warnings.push(format!("qubit {i}: t2 = {} exceeds 2 t1 = {}; clamped", q.t2, 2.0 * q.t1));
                q.t2 = 2.0 * q.t1;
            }
        }
        Ok((self, warnings))
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}

/// Noise reduction factor; `Infinite` removes every device error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Eta {
    Finite(f64),
    Infinite,
}

impl std::str::FromStr for Eta {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(Eta::Infinite),
            other => {
                let v: f64 = other.parse().map_err(|_| Error::contract(format!("eta {s:?} is neither a number nor 'inf'")))?;
                Eta::new(v)
            }
        }
    }
}

impl std::fmt::Display for Eta {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Eta::Finite(v) => write!(f, "{v}"),
            Eta::Infinite => f.write_str("inf"),
        }
    }
}

impl Eta {
    pub fn new(v: f64) -> Result<Self> {
        if v.is_infinite() && v > 0.0 {
            Ok(Eta::Infinite)
        } else if v > 0.0 {
            Ok(Eta::Finite(v))
        } else {
            Err(Error::contract("eta must be positive"))
        }
    }
}

/// Device noise reduced by `eta`: errors divided by it, coherence times
/// multiplied by it, gate lengths unchanged.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledNoiseModel {
    pub base: DeviceNoiseParams,
    pub eta: Eta,
    pub warnings: Vec<String>,
}

impl ScaledNoiseModel {
    pub fn new(base: DeviceNoiseParams, eta: Eta) -> Result<Self> {
        let (base, warnings) = base.validated()?;
        Ok(Self { base, eta, warnings })
    }

    pub fn ideal() -> Self {
        Self { base: DeviceNoiseParams::noiseless(), eta: Eta::Infinite, warnings: Vec::new() }
    }

    pub fn is_noiseless(&self) -> bool {
        self.eta == Eta::Infinite
            || (self.base.e_1qg == 0.0 && self.base.e_2qg == 0.0 && self.base.e_read == 0.0 && self.base.t1.is_infinite() && self.base.t2.is_infinite())
    }

    fn scale(&self) -> Option<f64> {
        match self.eta {
            Eta::Finite(v) => Some(v),
            Eta::Infinite => None,
        }
    }

    pub fn e_1qg(&self) -> f64 {
        self.scale().map_or(0.0, |s| self.base.e_1qg / s)
    }

    pub fn e_2qg(&self) -> f64 {
        self.scale().map_or(0.0, |s| self.base.e_2qg / s)
    }

    pub fn e_read(&self) -> f64 {
        self.scale().map_or(0.0, |s| self.base.e_read / s)
    }

    /// Microseconds.
    pub fn t1(&self) -> f64 {
        self.scale().map_or(f64::INFINITY, |s| self.base.t1 * s)
    }

    /// Microseconds.
    pub fn t2(&self) -> f64 {
        self.scale().map_or(f64::INFINITY, |s| self.base.t2 * s)
    }

    /// Channels following a gate acting on `arity` qubits for `length_ns`.
    pub fn gate_channels(&self, arity: usize, length_ns: f64) -> Vec<Channel> {
        if self.scale().is_none() {
            return Vec::new();
        }
        let mut out = Vec::new();
        let e = if arity == 1 { self.e_1qg() } else { self.e_2qg() };
        if e > 0.0 {
            out.push(Channel::Depolarizing { lambda: depolarizing_parameter(e, arity) });
        }
        let t_us = length_ns * 1e-3;
        let gamma = 1.0 - (-t_us / self.t1()).exp();
        let f = (-t_us / self.t2()).exp();
        if gamma > 0.0 || f < 1.0 {
            out.push(Channel::Thermal { gamma, coherence: f });
        }
        out
    }

    pub fn readout(&self) -> ReadoutModel {
        ReadoutModel::symmetric(self.e_read())
    }
}
