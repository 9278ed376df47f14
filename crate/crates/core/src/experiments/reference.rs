//! Published reference values used by the reproduction checks.

/// (M, n_max) systems of the depth tables, in row order.
pub const SYSTEMS: [(usize, usize); 8] = [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (3, 1), (2, 4), (5, 1)];

pub const THRESHOLDS: [f64; 3] = [1e-2, 1e-3, 1e-4];

/// One regime of the depth tables: Trotter depths per threshold plus the
/// variational depth reaching 1e-4.
#[derive(Debug, Clone, Copy)]
pub struct DepthTable {
    pub epsilon: f64,
    pub delta: f64,
    pub trotter: [[usize; 3]; 8],
    pub variational: [usize; 8],
}

pub const DEPTHS_BIASED: DepthTable = DepthTable {
    epsilon: -1.0,
    delta: 0.0,
    trotter: [[24, 85, 276], [23, 80, 259], [23, 73, 230], [27, 98, 323], [34, 111, 356], [32, 114, 375], [39, 124, 389], [48, 157, 504]],
    variational: [1, 1, 2, 2, 3, 3, 4, 5],
};

pub const DEPTHS_TUNNELING: DepthTable = DepthTable {
    epsilon: 0.0,
    delta: 1.0,
    trotter: [[12, 45, 150], [21, 72, 232], [31, 98, 311], [18, 66, 214], [30, 102, 329], [23, 81, 263], [50, 157, 496], [31, 105, 340]],
    variational: [1, 1, 2, 1, 1, 1, 2, 1],
};

/// Linear fits (p1, p0, residual) per regime: Trotter at each threshold, then variational.
pub const FITS_BIASED: [(f64, f64, f64); 4] =
    [(2.69, 13.58, 11.89), (7.86, 53.53, 156.54), (24.39, 178.36, 1721.29), (0.46, -0.48, 0.24)];
pub const FITS_TUNNELING: [(f64, f64, f64); 4] =
    [(3.16, 5.93, 27.64), (9.64, 26.46, 218.54), (30.24, 90.28, 1893.54), (0.05, 0.90, 0.20)];

/// Integrator function calls per (ε, Δ): statevector, then η = ∞, 10, 2, 1.
pub const FUNCTION_CALLS: [((f64, f64), [usize; 5]); 3] = [
    ((0.0, 0.0), [182, 5282, 2840, 710, 506]),
    ((-1.0, 0.0), [428, 3554, 1670, 578, 482]),
    ((0.0, 1.0), [230, 9518, 1892, 890, 596]),
];

pub const COUPLING: f64 = 0.5;

pub const EXTRAPOLATED_TROTTER_DEPTH: f64 = 3400.0;
pub const EXTRAPOLATED_VARIATIONAL_DEPTH: f64 = 31.0;
pub const EXTRAPOLATED_CX_TROTTER: f64 = 1e7;
pub const EXTRAPOLATED_CX_VARIATIONAL: f64 = 1e5;
pub const EXTRAPOLATED_CIRCUITS: f64 = 1e18;
pub const EXTRAPOLATED_YEARS: f64 = 3e7;
pub const IMPROVED_CIRCUITS: f64 = 1e10;
pub const IMPROVED_YEARS: f64 = 0.3;

pub fn n_qubits(m: usize, n_max: usize) -> usize {
    m * (n_max + 1) + 1
}

/// (N_q, depth) points of one column; `column` 0..3 is a threshold, 3 is variational.
pub fn column_points(table: &DepthTable, column: usize) -> Vec<(f64, f64)> {
    SYSTEMS
        .iter()
        .enumerate()
        .map(|(i, &(m, n))| {
            let d = if column < 3 { table.trotter[i][column] } else { table.variational[i] };
            (n_qubits(m, n) as f64, d as f64)
        })
        .collect()
}
