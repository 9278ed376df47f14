use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use spinboson::circuit::{build_ansatz, build_ansatz_on, count_cx, run_statevector, LayerOrder, ParamCircuit};
use spinboson::experiments::{fit_depths, resource_counts, trotter_depth_search, DepthSearchOptions};
use spinboson::model::{build_hamiltonian, SpinBosonSpec};
use spinboson::noise::{depolarizing_kraus, thermal_kraus, DeviceNoiseParams, Eta, NoisyConfig, ReadoutModel, ScaledNoiseModel, ShotSampler};
use spinboson::variational::{assemble_mclachlan, propagate_variational, Backend, IntegratorConfig};
use spinboson::{Pauli, PauliSum, PauliTerm};

fn pauli() -> impl Strategy<Value = Pauli> {
    prop_oneof![Just(Pauli::I), Just(Pauli::X), Just(Pauli::Y), Just(Pauli::Z)]
}

fn pauli_sum(n: usize) -> impl Strategy<Value = PauliSum> {
    prop::collection::vec((prop::collection::vec(pauli(), n), -2.0..2.0f64, -2.0..2.0f64), 1..5).prop_map(move |terms| {
        PauliSum::from_terms(n, terms.into_iter().map(|(axes, re, im)| PauliTerm::new(Complex64::new(re, im), axes))).unwrap()
    })
}

fn max_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn resource_formulas_match_generated_objects(m in 1usize..4, n_max in 1usize..4, d in 1usize..4) {
        let spec = SpinBosonSpec::resonant(m, n_max, -1.0, 0.0, 0.5);
        let counts = resource_counts(m, n_max, d);
        let circuit = build_ansatz(&spec, d).unwrap();
        prop_assert_eq!(counts.n_theta, circuit.n_params());
        prop_assert_eq!(counts.n_dtheta, circuit.n_occurrences());
        let model = build_hamiltonian(&spec).unwrap();
        prop_assert_eq!(counts.n_h, model.n_h);
        prop_assert_eq!(counts.n_q, spec.layout().with_ancilla().n_qubits());
        prop_assert_eq!(counts.n_cx, d * (m * n_max).pow(2));
        let cost = count_cx(&circuit, true);
        prop_assert_eq!(cost.n_cx, 10 * d * m * n_max);
        prop_assert_eq!(cost.n_cx_linear_topology, cost.n_cx * model.n_qubits);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pauli_products_match_matrix_products(a in pauli_sum(3), b in pauli_sum(3)) {
        let ab = a.multiply(&b).unwrap();
        let dense = a.to_matrix(3).unwrap() * b.to_matrix(3).unwrap();
        prop_assert!(max_diff(&ab.to_matrix(3).unwrap(), &dense) < 1e-12);
    }

    #[test]
    fn adjoint_is_an_involution_and_matches_dense(a in pauli_sum(3)) {
        prop_assert!(a.adjoint().adjoint().approx_eq(&a, 1e-14));
        prop_assert!(max_diff(&a.adjoint().to_matrix(3).unwrap(), &a.to_matrix(3).unwrap().adjoint()) < 1e-12);
    }

    #[test]
    fn matrix_map_is_linear(a in pauli_sum(2), b in pauli_sum(2), s in -3.0..3.0f64) {
        let mut sum = a.clone();
        sum.add_scaled(&b, Complex64::new(s, 0.0)).unwrap();
        let dense = a.to_matrix(2).unwrap() + b.to_matrix(2).unwrap() * Complex64::new(s, 0.0);
        prop_assert!(max_diff(&sum.to_matrix(2).unwrap(), &dense) < 1e-12);
    }

    #[test]
    fn circuits_preserve_norm(seed in any::<u64>(), d in 1usize..3) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let spec = SpinBosonSpec::resonant(1, 2, 0.1, 0.9, 0.5);
        let circuit = build_ansatz(&spec, d).unwrap();
        let params: Vec<f64> = (0..circuit.n_params()).map(|_| rng.random_range(-4.0..4.0)).collect();
        prop_assert!((run_statevector(&circuit, &params).unwrap().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mclachlan_matrix_is_symmetric_psd(seed in any::<u64>(), gp in any::<bool>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let spec = SpinBosonSpec::resonant(2, 1, -0.4, 0.6, 0.5);
        let circuit = build_ansatz(&spec, 2).unwrap();
        let params: Vec<f64> = (0..circuit.n_params()).map(|_| rng.random_range(-3.0..3.0)).collect();
        let sys = assemble_mclachlan(&circuit, &params, &build_hamiltonian(&spec).unwrap().hamiltonian, gp).unwrap();
        prop_assert!(sys.max_asymmetry() <= 1e-12);
        prop_assert!(sys.min_eigenvalue() >= -1e-10);
    }

    #[test]
    fn kraus_sets_are_complete(lambda in 0.0..1.0f64, gamma in 0.0..1.0f64, f in 0.0..1.0f64, arity in 1usize..3) {
        let f = f * (1.0 - gamma).sqrt();
        for ops in [depolarizing_kraus(lambda, arity), thermal_kraus(gamma, f)] {
            let d = ops[0].nrows();
            let sum = ops.iter().fold(DMatrix::<Complex64>::zeros(d, d), |acc, k| acc + k.adjoint() * k);
            prop_assert!(max_diff(&sum, &DMatrix::identity(d, d)) <= 1e-12);
        }
    }

    #[test]
    fn readout_inverse_recovers_distribution(weights in prop::collection::vec(0.0..1.0f64, 8), flip in 0.0..0.2f64) {
        let total: f64 = weights.iter().sum::<f64>() + 1e-9;
        let truth: Vec<f64> = weights.iter().map(|w| (w + 1e-9 / 8.0) / total).collect();
        let model = ReadoutModel::symmetric(flip);
        let mut observed = truth.clone();
        model.corrupt(&mut observed);
        prop_assert!((observed.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let back = model.mitigate(&observed).unwrap();
        for (a, b) in back.iter().zip(&truth) {
            prop_assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn fitting_predictions_is_idempotent(points in prop::collection::vec((1u32..40, 0.0..500.0f64), 2..10)) {
        let pts: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x as f64, y)).collect();
        if let Ok(f) = fit_depths(&pts) {
            let again: Vec<(f64, f64)> = pts.iter().map(|&(x, _)| (x, f.predict(x))).collect();
            let g = fit_depths(&again).unwrap();
            prop_assert!((g.p1 - f.p1).abs() <= 1e-12 * (1.0 + f.p1.abs()));
            prop_assert!((g.p0 - f.p0).abs() <= 1e-12 * (1.0 + f.p0.abs()) * 40.0);
            prop_assert!(g.residual <= 1e-18 * (1.0 + f.p0.powi(2) + f.p1.powi(2)) * 1e6);
            prop_assert!(f.residual >= 0.0);
        }
    }

    #[test]
    fn text_format_roundtrips(m in 1usize..3, n_max in 1usize..3, d in 1usize..3) {
        let spec = SpinBosonSpec::resonant(m, n_max, 0.0, 1.0, 0.5);
        let c = build_ansatz_on(&spec, d, &LayerOrder::spin_first(), &spec.layout()).unwrap();
        let back = ParamCircuit::from_text(&c.to_text()).unwrap();
        prop_assert_eq!(back.to_text(), c.to_text());
        prop_assert_eq!(back.occurrence_map(), c.occurrence_map());
    }
}

#[test]
fn depth_is_monotone_in_threshold() {
    for (eps, delta) in [(-1.0, 0.0), (0.0, 1.0)] {
        let spec = SpinBosonSpec::resonant(1, 2, eps, delta, 0.5);
        let depths: Vec<usize> =
            [1e-2, 3e-3, 1e-3, 3e-4].iter().map(|&t| trotter_depth_search(&spec, t, &DepthSearchOptions::default()).unwrap().final_depth).collect();
        assert!(depths.windows(2).all(|w| w[0] <= w[1]), "{depths:?}");
    }
}

#[test]
fn statevector_trajectory_keeps_metric_symmetric_psd() {
    let spec = SpinBosonSpec::resonant(1, 3, 0.0, 1.0, 0.5);
    let rec = propagate_variational(&spec, 2, &IntegratorConfig::statevector(10.0), &Backend::Statevector).unwrap();
    assert!(!rec.is_empty());
    assert!(rec.m_asymmetry.iter().all(|&a| a <= 1e-12));
    assert!(rec.m_min_eigenvalue.iter().all(|&e| e >= -1e-10));
}

#[test]
fn identical_seeds_give_identical_csv() {
    let spec = SpinBosonSpec::resonant(1, 1, 0.0, 1.0, 0.5);
    let run = || {
        let model = ScaledNoiseModel::new(DeviceNoiseParams::default(), Eta::Finite(2.0)).unwrap();
        let backend = Backend::Noisy(NoisyConfig { model, sampler: ShotSampler::new(1024, 7), mitigate: true });
        let rec = propagate_variational(&spec, 1, &IntegratorConfig::noisy(0.5), &backend).unwrap();
        let mut buf = Vec::new();
        rec.write_csv(&mut buf).unwrap();
        buf
    };
    let (a, b) = (run(), run());
    assert!(!a.is_empty());
    assert_eq!(a, b);
}
