use std::f64::consts::PI;

use dpod_core::qam::{qam_map, BitBlock, QamConstellation};
use dpod_core::signal::{cyclic_convolve, subcarrier_map, DomainSignal, SubcarrierConfig};
use dpod_core::Complex64 as C;
use dpod_sim::dft::{cyclic_convolve_fft, dft, idft};
use dpod_sim::waveform::{dfts_demodulate, dfts_modulate};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random(rng: &mut ChaCha8Rng, n: usize) -> Vec<C> {
    (0..n).map(|_| C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect()
}

fn norm(x: &[C]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

fn max_diff(a: &[C], b: &[C]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Unitary centered DFT matrix, `F[k][n] = N^{-1/2} exp(-2 pi j (k - N/2) n / N)`.
fn dft_matrix(n: usize) -> Vec<Vec<C>> {
    let s = 1.0 / (n as f64).sqrt();
    (0..n)
        .map(|k| {
            (0..n)
                .map(|t| C::from_polar(s, -2.0 * PI * (k as f64 - (n / 2) as f64) * t as f64 / n as f64))
                .collect()
        })
        .collect()
}

fn adjoint(m: &[Vec<C>]) -> Vec<Vec<C>> {
    (0..m[0].len()).map(|j| m.iter().map(|row| row[j].conj()).collect()).collect()
}

fn matmul(a: &[Vec<C>], b: &[Vec<C>]) -> Vec<Vec<C>> {
    a.iter()
        .map(|row| (0..b[0].len()).map(|j| row.iter().zip(b).map(|(x, r)| x * r[j]).sum()).collect())
        .collect()
}

fn apply(m: &[Vec<C>], x: &[C]) -> Vec<C> {
    m.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
}

/// `N x M` selection matrix placing the data bins after the lower guard.
fn selection(cfg: &SubcarrierConfig) -> Vec<Vec<C>> {
    let (n, m) = (cfg.fft_size(), cfg.data_size());
    (0..n)
        .map(|r| (0..m).map(|c| if r == c + cfg.lower_guard() { C::new(1.0, 0.0) } else { C::new(0.0, 0.0) }).collect())
        .collect()
}

#[test]
fn small_transform_examples() {
    let delta = [C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0)];
    let want = apply(&dft_matrix(4), &delta);
    assert!(max_diff(&dft(&delta).unwrap(), &want) < 1e-15);
    assert!(want.iter().all(|v| (v - C::new(0.5, 0.0)).norm() < 1e-15));
    let ones = [C::new(1.0, 0.0); 4];
    let dc = [C::new(0.0, 0.0), C::new(0.0, 0.0), C::new(2.0, 0.0), C::new(0.0, 0.0)];
    assert!(max_diff(&dft(&ones).unwrap(), &dc) < 1e-15);
    assert!(max_diff(&idft(&dc).unwrap(), &ones) < 1e-15);
}

#[test]
fn fft_matches_dft_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in [1, 2, 5, 8, 12, 64] {
        let x = random(&mut rng, n);
        let f = dft_matrix(n);
        assert!(max_diff(&dft(&x).unwrap(), &apply(&f, &x)) < 1e-13, "n = {n}");
        assert!(max_diff(&idft(&x).unwrap(), &apply(&adjoint(&f), &x)) < 1e-13, "n = {n}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn unitary_round_trip(seed in any::<u64>(), which in 0usize..3) {
        let n = [4, 64, 4096][which];
        let x = random(&mut ChaCha8Rng::seed_from_u64(seed), n);
        let xf = dft(&x).unwrap();
        prop_assert!((norm(&xf) - norm(&x)).abs() <= 1e-12 * norm(&x));
        prop_assert!((norm(&idft(&x).unwrap()) - norm(&x)).abs() <= 1e-12 * norm(&x));
        prop_assert!(max_diff(&idft(&xf).unwrap(), &x) <= 1e-12 * norm(&x));
    }

    #[test]
    fn fast_convolution_matches_direct_sum(seed in any::<u64>(), n in 1usize..200) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (random(&mut rng, n), random(&mut rng, n));
        let fast = cyclic_convolve_fft(&a, &b).unwrap();
        prop_assert!(max_diff(&fast, &cyclic_convolve(&a, &b).unwrap()) <= 1e-12 * (n as f64).max(1.0));
    }
}

#[test]
fn modulation_matches_matrix_product() {
    let cfg = SubcarrierConfig::new(8, 4, 2, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let forward = matmul(&matmul(&adjoint(&dft_matrix(8)), &selection(&cfg)), &dft_matrix(4));
    let backward = adjoint(&forward);
    for _ in 0..10 {
        let s_d = random(&mut rng, 4);
        let s_t = dfts_modulate(&s_d, &cfg).unwrap();
        assert!(max_diff(s_t.samples(), &apply(&forward, &s_d)) < 1e-14);
        assert!((norm(s_t.samples()) - norm(&s_d)).abs() < 1e-14);
        let x = DomainSignal::time(random(&mut rng, 8)).unwrap();
        let back = dfts_demodulate(&x, &cfg).unwrap();
        assert!(max_diff(&back, &apply(&backward, x.samples())) < 1e-14);
        assert!(norm(&back) <= norm(x.samples()) + 1e-14);
    }
}

#[test]
fn demodulation_inverts_modulation() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (n, m, lo) in [(8, 4, 2), (64, 48, 8), (1024, 768, 128), (4096, 3240, 428), (16, 16, 0)] {
        let cfg = SubcarrierConfig::new(n, m, lo, n - m - lo).unwrap();
        let s_d = random(&mut rng, m);
        let back = dfts_demodulate(&dfts_modulate(&s_d, &cfg).unwrap(), &cfg).unwrap();
        assert!(max_diff(&back, &s_d) <= 1e-12 * norm(&s_d));
    }
}

#[test]
fn full_band_tone_passes_unchanged() {
    let cfg = SubcarrierConfig::new(16, 16, 0, 0).unwrap();
    let tone: Vec<C> = (0..16).map(|t| C::from_polar(0.25, 2.0 * PI * 3.0 * t as f64 / 16.0)).collect();
    let s_t = dfts_modulate(&tone, &cfg).unwrap();
    assert!(max_diff(s_t.samples(), &tone) < 1e-15);
}

fn papr_db(x: &[C]) -> f64 {
    let peak = x.iter().map(|v| v.norm_sqr()).fold(0.0, f64::max);
    let mean = x.iter().map(|v| v.norm_sqr()).sum::<f64>() / x.len() as f64;
    10.0 * (peak / mean).log10()
}

fn percentile_99(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v[(v.len() * 99) / 100]
}

#[test]
fn precoding_lowers_papr() {
    let cfg = SubcarrierConfig::new(256, 192, 32, 32).unwrap();
    let qam = QamConstellation::new(64).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut dfts, mut ofdm) = (Vec::new(), Vec::new());
    for _ in 0..1000 {
        let bits = BitBlock((0..192 * 6).map(|_| rng.random_range(0..2u8)).collect());
        let s = qam_map(&bits, &qam).unwrap();
        dfts.push(papr_db(dfts_modulate(&s, &cfg).unwrap().samples()));
        ofdm.push(papr_db(&idft(&subcarrier_map(&s, &cfg).unwrap()).unwrap()));
    }
    let (a, b) = (percentile_99(dfts), percentile_99(ofdm));
    assert!(a + 1.0 < b, "DFT-s {a:.2} dB vs OFDM {b:.2} dB");
}
