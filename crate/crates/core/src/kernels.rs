//! In-place amplitude kernels over little-endian registers.
//!
//! A density matrix stored row-major over `n` qubits is a vector over `2n`
//! qubits: row bits sit above column bits. Left-multiplying by `U` on qubit `q`
//! is the kernel on bit `q + n`; right-multiplying by `U†` is the kernel with
//! `conj(U)` on bit `q`.

use num_complex::Complex64;

pub type Mat2 = [[Complex64; 2]; 2];

#[inline]
pub fn apply_1q(amps: &mut [Complex64], bit: usize, u: &Mat2) {
    let stride = 1usize << bit;
    let len = amps.len();
    let mut base = 0;
    while base < len {
        for i in base..base + stride {
            let a0 = amps[i];
            let a1 = amps[i + stride];
            amps[i] = u[0][0] * a0 + u[0][1] * a1;
            amps[i + stride] = u[1][0] * a0 + u[1][1] * a1;
        }
        base += stride << 1;
    }
}

/// Diagonal single-qubit gate `diag(d0, d1)`.
#[inline]
pub fn apply_diag_1q(amps: &mut [Complex64], bit: usize, d0: Complex64, d1: Complex64) {
    let mask = 1usize << bit;
    for (i, a) in amps.iter_mut().enumerate() {
        *a *= if i & mask == 0 { d0 } else { d1 };
    }
}

/// Diagonal two-qubit phase: `d_even` where the bits agree, `d_odd` otherwise.
#[inline]
pub fn apply_parity_phase(amps: &mut [Complex64], bit_a: usize, bit_b: usize, d_even: Complex64, d_odd: Complex64) {
    for (i, a) in amps.iter_mut().enumerate() {
        let parity = ((i >> bit_a) ^ (i >> bit_b)) & 1;
        *a *= if parity == 0 { d_even } else { d_odd };
    }
}

#[inline]
pub fn apply_cnot(amps: &mut [Complex64], control: usize, target: usize) {
    let cmask = 1usize << control;
    let tmask = 1usize << target;
    for i in 0..amps.len() {
        if i & cmask != 0 && i & tmask == 0 {
            amps.swap(i, i | tmask);
        }
    }
}

pub fn mat_conj(u: &Mat2) -> Mat2 {
    [[u[0][0].conj(), u[0][1].conj()], [u[1][0].conj(), u[1][1].conj()]]
}

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn mat_adjoint(u: &Mat2) -> Mat2 {
    [[u[0][0].conj(), u[1][0].conj()], [u[0][1].conj(), u[1][1].conj()]]
}

pub fn rx(angle: f64) -> Mat2 {
    let (s, c) = (angle / 2.0).sin_cos();
    [[Complex64::new(c, 0.0), Complex64::new(0.0, -s)], [Complex64::new(0.0, -s), Complex64::new(c, 0.0)]]
}

pub fn ry(angle: f64) -> Mat2 {
    let (s, c) = (angle / 2.0).sin_cos();
    [[Complex64::new(c, 0.0), Complex64::new(-s, 0.0)], [Complex64::new(s, 0.0), Complex64::new(c, 0.0)]]
}

pub fn rz(angle: f64) -> Mat2 {
    let z = Complex64::new(0.0, 0.0);
    [[Complex64::from_polar(1.0, -angle / 2.0), z], [z, Complex64::from_polar(1.0, angle / 2.0)]]
}

pub fn hadamard() -> Mat2 {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

pub fn pauli_x() -> Mat2 {
    let z = Complex64::new(0.0, 0.0);
    let o = Complex64::new(1.0, 0.0);
    [[z, o], [o, z]]
}
