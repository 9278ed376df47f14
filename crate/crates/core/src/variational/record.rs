use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Time series produced by one propagation run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub label: String,
    pub times: Vec<f64>,
    /// One row of parameters per recorded time.
    pub params: Vec<Vec<f64>>,
    pub p_z: Vec<f64>,
    pub infidelity: Vec<f64>,
    pub energy: Vec<f64>,
    /// Smallest eigenvalue of the McLachlan matrix at each recorded time.
    pub m_min_eigenvalue: Vec<f64>,
    /// Largest `|M_ij - M_ji|` at each recorded time.
    pub m_asymmetry: Vec<f64>,
    pub n_function_calls: usize,
    pub accepted: usize,
    pub rejected: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySummary {
    pub label: String,
    pub t_final: f64,
    pub final_infidelity: f64,
    pub max_infidelity: f64,
    pub final_p_z: f64,
    pub n_function_calls: usize,
    pub accepted: usize,
    pub rejected: usize,
}

impl TrajectoryRecord {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_infidelity(&self) -> f64 {
        self.infidelity.last().copied().unwrap_or(f64::NAN)
    }

    pub fn max_infidelity(&self) -> f64 {
        self.infidelity.iter().copied().fold(0.0, f64::max)
    }

    pub fn summary(&self) -> TrajectorySummary {
        TrajectorySummary {
            label: self.label.clone(),
            t_final: self.times.last().copied().unwrap_or(0.0),
            final_infidelity: self.final_infidelity(),
            max_infidelity: self.max_infidelity(),
            final_p_z: self.p_z.last().copied().unwrap_or(f64::NAN),
            n_function_calls: self.n_function_calls,
            accepted: self.accepted,
            rejected: self.rejected,
        }
    }

    /// Columns `t, theta_0 .. theta_{n-1}, p_z, infidelity`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let n_theta = self.params.first().map_or(0, Vec::len);
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec!["t".to_string()];
        header.extend((0..n_theta).map(|i| format!("theta_{i}")));
        header.extend(["p_z".to_string(), "infidelity".to_string()]);
        out.write_record(&header)?;
        for i in 0..self.times.len() {
            let mut row = vec![self.times[i].to_string()];
            row.extend(self.params[i].iter().map(f64::to_string));
            row.push(self.p_z[i].to_string());
            row.push(self.infidelity[i].to_string());
            out.write_record(&row)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)
    }

    pub fn summary_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.summary())?)
    }
}
