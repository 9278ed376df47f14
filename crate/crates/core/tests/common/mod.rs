use nalgebra::DMatrix;
use spinboson::model::SpinBosonSpec;

/// Spin-boson Hamiltonian in the product basis |s> ⊗ |n_1 .. n_M>, spin
/// index fastest. Written straight from the physical model.
pub fn fock_hamiltonian(spec: &SpinBosonSpec) -> DMatrix<f64> {
    let levels = spec.n_max + 1;
    let dim = 2 * levels.pow(spec.m as u32);
    let index = |s: usize, occ: &[usize]| s + 2 * occ.iter().rev().fold(0, |acc, &n| acc * levels + n);
    let mut h = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        let s = i % 2;
        let mut rest = i / 2;
        let occ: Vec<usize> = (0..spec.m)
            .map(|_| {
                let n = rest % levels;
                rest /= levels;
                n
            })
            .collect();
        let sz = if s == 0 { 1.0 } else { -1.0 };
        h[(i, i)] += occ.iter().enumerate().map(|(k, &n)| spec.omega(k) * n as f64).sum::<f64>() + spec.epsilon / 2.0 * sz;
        h[(index(1 - s, &occ), i)] += spec.delta;
        for k in 0..spec.m {
            let n = occ[k];
            if n < spec.n_max {
                let mut up = occ.clone();
                up[k] += 1;
                h[(index(1 - s, &up), i)] += spec.g(k) * ((n + 1) as f64).sqrt();
            }
            if n > 0 {
                let mut down = occ.clone();
                down[k] -= 1;
                h[(index(1 - s, &down), i)] += spec.g(k) * (n as f64).sqrt();
            }
        }
    }
    h
}
