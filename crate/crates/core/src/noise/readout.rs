use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use super::density::check_capacity;
use crate::circuit::{apply_gate, Gate, GateKind};
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliSum};
use crate::state::DensityMatrix;

pub const DEFAULT_SHOTS: usize = 8192;

/// Independent symmetric bit flips at readout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReadoutModel {
    pub flip: f64,
}

impl ReadoutModel {
    pub fn symmetric(flip: f64) -> Self {
        Self { flip }
    }

    pub fn is_ideal(&self) -> bool {
        self.flip == 0.0
    }

    /// Pushes a distribution over `n` bits through the flips.
    pub fn corrupt(&self, probs: &mut [f64]) {
        if self.is_ideal() {
            return;
        }
        let p = self.flip;
        apply_per_bit(probs, [[1.0 - p, p], [p, 1.0 - p]]);
    }

    /// Exact inverse of [`ReadoutModel::corrupt`]; may produce negative entries.
    fn invert(&self, probs: &mut [f64]) -> Result<()> {
        if self.is_ideal() {
            return Ok(());
        }
        let p = self.flip;
        let det = 1.0 - 2.0 * p;
        if det.abs() < 1e-12 {
            return Err(Error::Mitigation(format!("flip probability {p} makes the calibration singular")));
        }
        apply_per_bit(probs, [[(1.0 - p) / det, -p / det], [-p / det, (1.0 - p) / det]]);
        Ok(())
    }

    /// Constrained inverse: the closest distribution (in least squares) that
    /// the flips map onto `observed`.
    pub fn mitigate(&self, observed: &[f64]) -> Result<Vec<f64>> {
        let mut x = observed.to_vec();
        self.invert(&mut x)?;
        if x.iter().all(|&v| v >= 0.0) {
            return Ok(normalized(x));
        }
        let apply = |v: &[f64]| {
            let mut out = v.to_vec();
            self.corrupt(&mut out);
            out
        };
        // The flip matrix is symmetric with spectral norm 1.
        Ok(fista_simplex(apply, apply, observed, project_simplex(&x), 1.0))
    }
}

fn apply_per_bit(probs: &mut [f64], m: [[f64; 2]; 2]) {
    let n = probs.len().trailing_zeros() as usize;
    for q in 0..n {
        let s = 1usize << q;
        for i in (0..probs.len()).filter(|i| i & s == 0) {
            let (a, b) = (probs[i], probs[i | s]);
            probs[i] = m[0][0] * a + m[0][1] * b;
            probs[i | s] = m[1][0] * a + m[1][1] * b;
        }
    }
}

fn normalized(mut x: Vec<f64>) -> Vec<f64> {
    let s: f64 = x.iter().sum();
    if s > 0.0 {
        x.iter_mut().for_each(|v| *v /= s);
    }
    x
}

/// Euclidean projection onto the probability simplex.
fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut css = 0.0;
    let mut theta = 0.0;
    for (i, &ui) in u.iter().enumerate() {
        css += ui;
        let t = (css - 1.0) / (i + 1) as f64;
        if ui - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

/// Accelerated projected gradient for `min |C x - y|^2` on the simplex.
fn fista_simplex<F, G>(c: F, ct: G, y: &[f64], x0: Vec<f64>, lipschitz: f64) -> Vec<f64>
where
    F: Fn(&[f64]) -> Vec<f64>,
    G: Fn(&[f64]) -> Vec<f64>,
{
    let step = 1.0 / lipschitz;
    let mut x = x0.clone();
    let mut z = x0;
    let mut t: f64 = 1.0;
    for _ in 0..5000 {
        let r: Vec<f64> = c(&z).iter().zip(y).map(|(a, b)| a - b).collect();
        let g = ct(&r);
        let x_new = project_simplex(&z.iter().zip(&g).map(|(zi, gi)| zi - step * gi).collect::<Vec<_>>());
        let t_new = (1.0 + (1.0 + 4.0 * t * t).sqrt()) / 2.0;
        let moved: f64 = x_new.iter().zip(&x).map(|(a, b)| (a - b).abs()).sum();
        z = x_new.iter().zip(&x).map(|(a, b)| a + (t - 1.0) / t_new * (a - b)).collect();
        x = x_new;
        t = t_new;
        if moved < 1e-14 {
            break;
        }
    }
    x
}

/// Column `j` is the outcome distribution when basis state `j` is prepared.
pub fn readout_calibration(n_qubits: usize, model: &ReadoutModel) -> Result<DMatrix<f64>> {
    check_capacity(n_qubits)?;
    let dim = 1usize << n_qubits;
    let mut m = DMatrix::zeros(dim, dim);
    for j in 0..dim {
        let mut col = vec![0.0; dim];
        col[j] = 1.0;
        model.corrupt(&mut col);
        m.set_column(j, &nalgebra::DVector::from_vec(col));
    }
    Ok(m)
}

/// Non-negative least-squares inverse of a general calibration matrix.
pub fn mitigate_distribution(calibration: &DMatrix<f64>, observed: &[f64]) -> Result<Vec<f64>> {
    let dim = calibration.nrows();
    if calibration.ncols() != dim || observed.len() != dim {
        return Err(Error::structural("calibration and histogram sizes differ"));
    }
    let svd = calibration.clone().svd(false, false);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if smin <= 1e-12 * smax.max(1.0) {
        return Err(Error::Mitigation(format!("calibration matrix is singular (smallest singular value {smin:e})")));
    }
    let y = nalgebra::DVector::from_column_slice(observed);
    let x = calibration.clone().lu().solve(&y).ok_or_else(|| Error::Mitigation("calibration matrix is singular".into()))?;
    let x: Vec<f64> = x.iter().copied().collect();
    if x.iter().all(|&v| v >= 0.0) {
        return Ok(normalized(x));
    }
    let c = |v: &[f64]| (calibration * nalgebra::DVector::from_column_slice(v)).iter().copied().collect::<Vec<_>>();
    let ct = |v: &[f64]| (calibration.transpose() * nalgebra::DVector::from_column_slice(v)).iter().copied().collect::<Vec<_>>();
    Ok(fista_simplex(c, ct, observed, project_simplex(&x), smax * smax))
}

/// Shot budget and seed. `shots = None` selects exact probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShotSampler {
    pub shots: Option<usize>,
    pub seed: u64,
}

impl Default for ShotSampler {
    fn default() -> Self {
        Self { shots: Some(DEFAULT_SHOTS), seed: 0 }
    }
}

impl ShotSampler {
    pub fn new(shots: usize, seed: u64) -> Self {
        Self { shots: Some(shots), seed }
    }

    pub fn analytic() -> Self {
        Self { shots: None, seed: 0 }
    }

    /// Independent generator for one measurement, keyed by `stream`.
    pub fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }

    /// Empirical distribution after `shots` draws, or `probs` itself when analytic.
    pub fn estimate(&self, probs: &[f64], stream: u64) -> Vec<f64> {
        match self.shots {
            None => probs.to_vec(),
            Some(n) => {
                let counts = sample_counts(probs, n, &mut self.rng(stream));
                counts.iter().map(|&c| c as f64 / n as f64).collect()
            }
        }
    }
}

/// Multinomial draw by sequential binomials.
pub fn sample_counts(probs: &[f64], shots: usize, rng: &mut ChaCha8Rng) -> Vec<u64> {
    let mut left = shots as u64;
    let mut mass = 1.0;
    let mut out = vec![0; probs.len()];
    for (i, &p) in probs.iter().enumerate() {
        if left == 0 {
            break;
        }
        let p = p.max(0.0);
        if i + 1 == probs.len() || mass <= p {
            out[i] = left;
            break;
        }
        let q = (p / mass).clamp(0.0, 1.0);
        let k = Binomial::new(left, q).expect("valid binomial").sample(rng);
        out[i] = k;
        left -= k;
        mass -= p;
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementOptions {
    pub readout: ReadoutModel,
    pub mitigate: bool,
}

impl MeasurementOptions {
    pub fn ideal() -> Self {
        Self { readout: ReadoutModel::symmetric(0.0), mitigate: false }
    }

    /// Corrupts, samples and optionally mitigates a distribution.
    pub fn measure(&self, mut probs: Vec<f64>, sampler: &ShotSampler, stream: u64) -> Result<Vec<f64>> {
        self.readout.corrupt(&mut probs);
        let est = sampler.estimate(&probs, stream);
        if self.mitigate {
            self.readout.mitigate(&est)
        } else {
            Ok(est)
        }
    }
}

/// Greedy partition into qubit-wise commuting groups; returns term indices
/// and the measurement basis per qubit.
pub(crate) fn qubitwise_groups(op: &PauliSum) -> Vec<(Vec<usize>, Vec<Pauli>)> {
    let mut groups: Vec<(Vec<usize>, Vec<Pauli>)> = Vec::new();
    'terms: for (i, t) in op.terms().iter().enumerate() {
        for (members, basis) in groups.iter_mut() {
            if t.axes.iter().zip(basis.iter()).all(|(&a, &b)| a == Pauli::I || b == Pauli::I || a == b) {
                for (b, &a) in basis.iter_mut().zip(&t.axes) {
                    if a != Pauli::I {
                        *b = a;
                    }
                }
                members.push(i);
                continue 'terms;
            }
        }
        groups.push((vec![i], t.axes.clone()));
    }
    groups
}

/// Rotation taking the given basis onto `Z`.
pub(crate) fn basis_change(q: usize, p: Pauli) -> Option<Gate> {
    match p {
        Pauli::X => Some(Gate::fixed(GateKind::H, vec![q])),
        Pauli::Y => Some(Gate::fixed(GateKind::Ydag, vec![q])),
        _ => None,
    }
}

/// Estimates `<op>` by measuring each qubit-wise commuting group in its own
/// basis. Group `g` draws from stream `stream + g`.
pub fn sample_expectation(op: &PauliSum, rho: &DensityMatrix, sampler: &ShotSampler, options: &MeasurementOptions, stream: u64) -> Result<f64> {
    op.require_hermitian()?;
    let n = rho.n_qubits();
    if op.n_qubits() != n {
        return Err(Error::structural("operator and state registers differ"));
    }
    let mut total = op.identity_offset().re;
    for (g, (members, basis)) in qubitwise_groups(op).into_iter().enumerate() {
        let mut rotated = rho.clone();
        for (q, &p) in basis.iter().enumerate() {
            if let Some(gate) = basis_change(q, p) {
                let data = rotated.data_mut();
                apply_gate(data, &gate, 0.0, n, false);
                apply_gate(data, &gate, 0.0, 0, true);
            }
        }
        let probs = options.measure(rotated.diagonal(), sampler, stream + g as u64)?;
        for &i in &members {
            let t = &op.terms()[i];
            let mask = t.axes.iter().enumerate().filter(|(_, &a)| a != Pauli::I).fold(0usize, |m, (q, _)| m | 1 << q);
            let ev: f64 = probs.iter().enumerate().map(|(j, p)| if (j & mask).count_ones() % 2 == 0 { *p } else { -*p }).sum();
            total += t.coefficient.re * ev;
        }
    }
    Ok(total)
}
