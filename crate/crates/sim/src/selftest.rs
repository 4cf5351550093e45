//! Quick in-process property checks behind `dpod selftest`.

use dpod_core::dpod::{
    compensate, enumerate_monomials, kernel_fit, kernel_fit_via_projection, monomial_count, predict_complex,
    volterra_fit, DegreeSet, MemorySpec, Regularization, TrainingSet,
};
use dpod_core::gmp::{gmp_apply, CrossTerm, DiagonalTerm, GmpCoefficients};
use dpod_core::signal::{cyclic_convolve, lowpass_vector, norm, xi, SubcarrierConfig};
use dpod_core::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dft::{cyclic_convolve_fft, dft, idft};
use crate::pa::{resample_down, resample_up};
use crate::receiver::lowpass_project;

pub struct Check {
    pub name: &'static str,
    pub outcome: Result<(), String>,
}

fn random_signal(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect()
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn within(what: &str, err: f64, tol: f64) -> Result<(), String> {
    if err <= tol {
        Ok(())
    } else {
        Err(format!("{what}: {err:e} > {tol:e}"))
    }
}

fn dft_unitary(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for n in [4, 64, 4096] {
        let x = random_signal(rng, n);
        let f = dft(&x).map_err(|e| e.to_string())?;
        within("norm", (norm(&f) - norm(&x)).abs() / norm(&x), 1e-12)?;
        let back = idft(&f).map_err(|e| e.to_string())?;
        within("round trip", max_diff(&back, &x) / norm(&x), 1e-12)?;
    }
    Ok(())
}

fn convolution_paths(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let (a, b) = (random_signal(rng, 64), random_signal(rng, 64));
    let direct = cyclic_convolve(&a, &b).map_err(|e| e.to_string())?;
    let fast = cyclic_convolve_fft(&a, &b).map_err(|e| e.to_string())?;
    within("fft vs direct", max_diff(&direct, &fast), 1e-12)
}

fn circulant_lowpass(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for (n, m, gl) in [(16, 12, 2), (256, 202, 27), (64, 30, 10)] {
        let cfg = SubcarrierConfig::new(n, m, gl, n - m - gl).map_err(|e| e.to_string())?;
        let x = random_signal(rng, n);
        let via_b = cyclic_convolve_fft(&lowpass_vector(&cfg), &x).map_err(|e| e.to_string())?;
        let via_matrix = lowpass_project(&x, &cfg).map_err(|e| e.to_string())?;
        within("lowpass", max_diff(&via_b, &via_matrix), 1e-12)?;
    }
    Ok(())
}

fn xi_isometry(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let x = random_signal(rng, 33);
    within("norm", (xi(&x).norm() - norm(&x)).abs(), 1e-12)
}

fn gmp_rotation(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let mut c = || Complex64::new(rng.random_range(-0.3..0.3), rng.random_range(-0.3..0.3));
    let diagonal = vec![
        DiagonalTerm { k: 0, l: 0, coefficient: c() },
        DiagonalTerm { k: 1, l: 1, coefficient: c() },
    ];
    let cross = vec![CrossTerm { k: 1, l: 0, m: 2, coefficient: c() }];
    let g = GmpCoefficients::new(vec![0, 1], vec![0, 1], diagonal, vec![1], vec![0], vec![2], cross)
        .map_err(|e| e.to_string())?;
    let x = random_signal(rng, 40);
    let j = Complex64::new(0.0, 1.0);
    let jx: Vec<_> = x.iter().map(|v| j * v).collect();
    let rhs: Vec<_> = gmp_apply(&x, &g).iter().map(|v| j * v).collect();
    if gmp_apply(&jx, &g) == rhs {
        Ok(())
    } else {
        Err("gmp(jx) != j gmp(x)".into())
    }
}

fn random_training(rng: &mut ChaCha8Rng, memory: &MemorySpec, rows: usize) -> TrainingSet {
    let dim = memory.real_dim();
    let inputs = (0..rows * dim).map(|_| rng.random_range(-1.0..1.0)).collect();
    let targets = (0..rows).map(|_| rng.random_range(-1.0..1.0)).collect();
    TrainingSet::from_rows(memory.clone(), inputs, targets).expect("consistent sizes")
}

fn kernel_routes(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let mem = MemorySpec::symmetric(1);
    let d = DegreeSet::up_to(3).map_err(|e| e.to_string())?;
    let ts = random_training(rng, &mem, 60);
    let reg = Regularization::TraceRelative(1e-2);
    let a = kernel_fit(&ts, d, reg).map_err(|e| e.to_string())?;
    let b = kernel_fit_via_projection(&ts, d, reg).map_err(|e| e.to_string())?;
    let diff = a.beta().iter().zip(b.beta()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    within("beta", diff, 1e-10)
}

fn prediction_rotation(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let mem = MemorySpec::symmetric(1);
    let d = DegreeSet::up_to(3).map_err(|e| e.to_string())?;
    let ts = random_training(rng, &mem, 200);
    let basis = enumerate_monomials(mem.real_dim(), d);
    let model = volterra_fit(&ts, basis, Regularization::TraceRelative(1e-9)).map_err(|e| e.to_string())?;
    let j = Complex64::new(0.0, 1.0);
    for _ in 0..20 {
        let y = random_signal(rng, mem.len());
        let jy: Vec<_> = y.iter().map(|v| j * v).collect();
        let a = predict_complex(&model, &jy).map_err(|e| e.to_string())?;
        let b = j * predict_complex(&model, &y).map_err(|e| e.to_string())?;
        within("rotation", (a - b).norm() / norm(&y), 1e-13)?;
    }
    let r = random_signal(rng, 16);
    let out = compensate(&model, &r).map_err(|e| e.to_string())?;
    if out.len() != r.len() {
        return Err("compensate changed the length".into());
    }
    Ok(())
}

fn monomial_counts(_: &mut ChaCha8Rng) -> Result<(), String> {
    for (mem, want) in [(MemorySpec::memoryless(), 12), (MemorySpec::symmetric(2), 2232), (MemorySpec::one_sided(5), 4744)] {
        let d = DegreeSet::up_to(5).map_err(|e| e.to_string())?;
        let p = enumerate_monomials(mem.real_dim(), d).len();
        if p != want || monomial_count(mem.real_dim(), d) != want {
            return Err(format!("L = {}: P = {p}, expected {want}", mem.len()));
        }
    }
    Ok(())
}

fn resampling(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let x = random_signal(rng, 16);
    let up = resample_up(&x, 3).map_err(|e| e.to_string())?;
    let back = resample_down(&up, 3).map_err(|e| e.to_string())?;
    within("down(up(x))", max_diff(&back, &x), 1e-12)
}

pub fn run_all() -> Vec<Check> {
    type CheckFn = fn(&mut ChaCha8Rng) -> Result<(), String>;
    let checks: [(&'static str, CheckFn); 9] = [
        ("dft unitary and invertible", dft_unitary),
        ("fft convolution matches direct sum", convolution_paths),
        ("lowpass vector is the band projection", circulant_lowpass),
        ("xi is an isometry", xi_isometry),
        ("gmp rotation equivariance", gmp_rotation),
        ("kernel solve routes agree", kernel_routes),
        ("compensator rotation equivariance", prediction_rotation),
        ("monomial counts", monomial_counts),
        ("resampling round trip", resampling),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e1f);
    checks
        .iter()
        .map(|&(name, f)| Check {
            name,
            outcome: f(&mut rng),
        })
        .collect()
}
