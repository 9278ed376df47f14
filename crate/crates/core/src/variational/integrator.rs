//! Embedded Runge-Kutta 5(4) with Dormand-Prince coefficients.
//!
//! Step control follows the usual scheme: RMS error norm scaled by
//! `atol + rtol * max(|y|, |y_new|)`, safety factor 0.9, growth clamped to
//! `[0.2, 10]`, and first-same-as-last reuse of the final stage.

use crate::error::{Error, Result};

const C: [f64; 6] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0];
const A: [[f64; 5]; 6] = [
    [0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0],
];
const B: [f64; 6] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0];
/// Difference between the fifth- and fourth-order weights, last entry for the FSAL stage.
const E: [f64; 7] = [-71.0 / 57600.0, 0.0, 71.0 / 16695.0, -71.0 / 1920.0, 17253.0 / 339200.0, -22.0 / 525.0, 1.0 / 40.0];

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub first_step: f64,
    pub max_step: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepStats {
    pub n_function_calls: usize,
    pub accepted: usize,
    pub rejected: usize,
}

/// Failure inside the right-hand side, with the time it was requested at.
#[derive(Debug)]
pub struct RhsFailure {
    pub t: f64,
    pub error: Error,
    pub stats: StepStats,
}

/// Integrates `y' = f(t, y)` from `t0` to `t_final`, calling `on_accept` at
/// `t0` and after every accepted step. Each `on_accept` directly follows the
/// right-hand-side call at the same point.
pub fn dormand_prince<F, G>(mut f: F, t0: f64, y0: &[f64], t_final: f64, ctl: &StepControl, mut on_accept: G) -> std::result::Result<(Vec<f64>, StepStats), RhsFailure>
where
    F: FnMut(f64, &[f64]) -> Result<Vec<f64>>,
    G: FnMut(f64, &[f64]),
{
    let n = y0.len();
    let mut stats = StepStats::default();
    let mut call = |t: f64, y: &[f64], stats: &mut StepStats| {
        stats.n_function_calls += 1;
        f(t, y).map_err(|error| RhsFailure { t, error, stats: *stats })
    };
    let mut t = t0;
    let mut y = y0.to_vec();
    if t_final <= t0 {
        on_accept(t, &y);
        return Ok((y, stats));
    }
    let mut k0 = call(t, &y, &mut stats)?;
    on_accept(t, &y);
    let mut h = ctl.first_step.min(ctl.max_step).min(t_final - t0);
    let mut k = vec![vec![0.0; n]; 7];
    let mut y_stage = vec![0.0; n];
    while t < t_final {
        let mut rejected_once = false;
        loop {
            let min_step = 10.0 * f64::EPSILON * t.abs().max(1e-300);
            if h < min_step {
                return Err(RhsFailure { t, error: Error::contract(format!("step size underflow at t = {t}")), stats });
            }
            let t_new = if t + h >= t_final { t_final } else { t + h };
            let h_eff = t_new - t;
            k[0].clone_from(&k0);
            for s in 1..6 {
                for i in 0..n {
                    let mut acc = 0.0;
                    for (j, kj) in k.iter().enumerate().take(s) {
                        acc += A[s][j] * kj[i];
                    }
                    y_stage[i] = y[i] + h_eff * acc;
                }
                k[s] = call(t + C[s] * h_eff, &y_stage, &mut stats)?;
            }
            let y_new: Vec<f64> = (0..n).map(|i| y[i] + h_eff * (0..6).map(|j| B[j] * k[j][i]).sum::<f64>()).collect();
            k[6] = call(t_new, &y_new, &mut stats)?;
            let norm = if n == 0 {
                0.0
            } else {
                let sq: f64 = (0..n)
                    .map(|i| {
                        let err = h_eff * (0..7).map(|j| E[j] * k[j][i]).sum::<f64>();
                        let scale = ctl.abs_tol + ctl.rel_tol * y[i].abs().max(y_new[i].abs());
                        (err / scale).powi(2)
                    })
                    .sum();
                (sq / n as f64).sqrt()
            };
            if norm < 1.0 {
                let mut factor = if norm == 0.0 { MAX_FACTOR } else { (SAFETY * norm.powf(-0.2)).min(MAX_FACTOR) };
                if rejected_once {
                    factor = factor.min(1.0);
                }
                h = (h_eff * factor).min(ctl.max_step);
                t = t_new;
                y = y_new;
                k0 = k[6].clone();
                stats.accepted += 1;
                on_accept(t, &y);
                break;
            }
            stats.rejected += 1;
            rejected_once = true;
            h = h_eff * (SAFETY * norm.powf(-0.2)).max(MIN_FACTOR);
        }
    }
    Ok((y, stats))
}
