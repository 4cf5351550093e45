use dpod_core::dpod::{
    build_training_set, compensate, design_matrix, enumerate_monomials, kernel_fit, mp_design_matrix, mp_fit,
    predict_complex, volterra_fit, DegreeSet, MemorySpec, RealPredictor, Regularization, TrainingSet,
};
use dpod_core::Complex64 as C;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn d(max: usize) -> DegreeSet {
    DegreeSet::up_to(max).unwrap()
}

fn gauss(rng: &mut ChaCha8Rng, var: f64) -> C {
    let s = (var / 2.0).sqrt();
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C::new(re * s, im * s)
}

fn nmse_db(want: &[C], got: &[C]) -> f64 {
    let e: f64 = want.iter().zip(got).map(|(a, b)| (a - b).norm_sqr()).sum();
    let r: f64 = want.iter().map(|a| a.norm_sqr()).sum();
    10.0 * (e / r).log10()
}

#[test]
fn volterra_matches_pseudo_inverse() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let memory = MemorySpec::symmetric(1);
    let dim = memory.real_dim();
    let rows = 300;
    let inputs: Vec<f64> = (0..rows * dim).map(|_| rng.random_range(-1.0..1.0)).collect();
    let targets: Vec<f64> = (0..rows).map(|_| rng.random_range(-1.0..1.0)).collect();
    let ts = TrainingSet::from_rows(memory, inputs, targets.clone()).unwrap();
    let basis = enumerate_monomials(dim, d(3));
    let a = design_matrix(&ts, &basis).unwrap();
    let model = volterra_fit(&ts, basis, Regularization::Absolute(0.0)).unwrap();
    let pinv = a.pseudo_inverse(1e-12).unwrap();
    let h = pinv * DVector::from_vec(targets);
    for (x, y) in model.coefficients().iter().zip(h.iter()) {
        assert!((x - y).abs() <= 1e-9 * y.abs().max(1.0), "{x} vs {y}");
    }
}

#[test]
fn mp_matches_pseudo_inverse() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let memory = MemorySpec::symmetric(1);
    let received: Vec<C> = (0..200).map(|_| gauss(&mut rng, 0.5)).collect();
    let clean: Vec<C> = (0..200).map(|_| gauss(&mut rng, 0.5)).collect();
    let model = mp_fit(&clean, &received, &memory, d(5)).unwrap();
    let a = mp_design_matrix(&received, &memory, d(5));
    let svd = a.svd(true, true);
    let h = svd.solve(&DVector::from_column_slice(&clean), 1e-12).unwrap();
    for (x, y) in model.coefficients().iter().zip(h.iter()) {
        assert!((x - y).norm() <= 1e-9 * y.norm().max(1.0), "{x} vs {y}");
    }
}

#[test]
fn identity_models_pass_signals_through() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let memory = MemorySpec::symmetric(1);
    let clean: Vec<C> = (0..128).map(|_| gauss(&mut rng, 1.0)).collect();
    let ts = build_training_set(&clean, &clean, &memory).unwrap();
    let volterra = volterra_fit(&ts, enumerate_monomials(memory.real_dim(), d(3)), Regularization::Absolute(0.0)).unwrap();
    let kernel = kernel_fit(&ts, d(1), Regularization::TraceRelative(1e-10)).unwrap();
    for _ in 0..20 {
        let y: Vec<C> = (0..3).map(|_| gauss(&mut rng, 1.0)).collect();
        // shift 0 sits in the middle of [-1, 0, 1]
        assert!((predict_complex(&volterra, &y).unwrap() - y[1]).norm() < 1e-9);
        assert!((predict_complex(&kernel, &y).unwrap() - y[1]).norm() < 1e-6);
    }
    let out = compensate(&volterra, &clean).unwrap();
    assert!(nmse_db(&clean, &out) < -150.0);
    let zero = [C::new(0.0, 0.0); 3];
    assert_eq!(predict_complex(&volterra, &zero).unwrap(), C::new(0.0, 0.0));
    assert_eq!(predict_complex(&kernel, &zero).unwrap(), C::new(0.0, 0.0));
}

#[test]
fn inverts_a_memoryless_cubic() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let pa = |s: C| s + C::new(-0.1, 0.0) * s * s.norm_sqr();
    let make = |rng: &mut ChaCha8Rng, n: usize| -> (Vec<C>, Vec<C>) {
        let clean: Vec<C> = (0..n).map(|_| gauss(rng, 0.25)).collect();
        let received: Vec<C> = clean.iter().map(|&s| pa(s) + gauss(rng, 0.25e-5)).collect();
        (clean, received)
    };
    let memory = MemorySpec::memoryless();
    let (clean, received) = make(&mut rng, 4000);
    let ts = build_training_set(&clean, &received, &memory).unwrap();
    let volterra = volterra_fit(&ts, enumerate_monomials(2, d(5)), Regularization::TraceRelative(1e-9)).unwrap();
    let kernel = kernel_fit(&ts.subsample(1000), d(5), Regularization::TraceRelative(1e-6)).unwrap();
    let (fresh, fresh_rx) = make(&mut rng, 2000);
    assert!(nmse_db(&fresh, &fresh_rx) > -30.0);
    assert!(nmse_db(&fresh, &compensate(&volterra, &fresh_rx).unwrap()) < -40.0);
    assert!(nmse_db(&fresh, &compensate(&kernel, &fresh_rx).unwrap()) < -40.0);
}

#[test]
fn kernel_and_volterra_agree_with_tiny_lambda() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let memory = MemorySpec::new(vec![0, 1]).unwrap();
    let dim = memory.real_dim();
    let degrees = d(3);
    let basis = enumerate_monomials(dim, degrees);
    let rows = 4 * basis.len();
    let inputs: Vec<f64> = (0..rows * dim).map(|_| rng.random_range(-1.0..1.0)).collect();
    let targets: Vec<f64> = inputs
        .chunks(dim)
        .map(|y| y[0] - 0.3 * y[1] * y[2] * y[2] + 0.2 * y[3].powi(3) + 0.05 * (y[0] * 7.0).sin())
        .collect();
    let ts = TrainingSet::from_rows(memory, inputs, targets).unwrap();
    let kernel = kernel_fit(&ts, degrees, Regularization::TraceRelative(1e-10)).unwrap();
    let volterra = volterra_fit(&ts, basis, Regularization::Absolute(0.0)).unwrap();
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for _ in 0..100 {
        let y: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        let (k, v) = (kernel.predict_real(&y), volterra.predict_real(&y));
        worst = worst.max((k - v).abs());
        scale = scale.max(v.abs());
    }
    assert!(worst <= 1e-4 * scale, "{worst} vs scale {scale}");
}

#[test]
fn design_matrix_rows_are_features() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let memory = MemorySpec::memoryless();
    let inputs: Vec<f64> = (0..20).map(|_| rng.random_range(-1.0..1.0)).collect();
    let ts = TrainingSet::from_rows(memory, inputs, vec![0.0; 10]).unwrap();
    let basis = enumerate_monomials(2, d(3));
    let a = design_matrix(&ts, &basis).unwrap();
    for i in 0..10 {
        let y = ts.input(i);
        let want = [y[0], y[1], y[0].powi(3), y[0] * y[0] * y[1], y[0] * y[1] * y[1], y[1].powi(3)];
        let row = DMatrix::from_row_slice(1, 6, &want);
        assert!((a.row(i) - row).abs().max() < 1e-15);
    }
}
