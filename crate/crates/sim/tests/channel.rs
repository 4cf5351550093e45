use dpod_core::signal::DomainSignal;
use dpod_core::Complex64 as C;
use dpod_sim::channel::{add_awgn, apply_channel, complex_gaussian, sample_taps, ChannelRealization, NoiseSpec, PdpProfile};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random(rng: &mut ChaCha8Rng, n: usize) -> Vec<C> {
    (0..n).map(|_| C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect()
}

fn time(x: Vec<C>) -> DomainSignal {
    DomainSignal::time(x).unwrap()
}

#[test]
fn simple_channels() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let x = random(&mut rng, 16);
    let y = apply_channel(&time(x.clone()), &ChannelRealization::identity()).unwrap();
    assert_eq!(y.samples(), &x[..]);
    let delay = ChannelRealization::new(vec![C::new(0.0, 0.0), C::new(1.0, 0.0)]).unwrap();
    let y = apply_channel(&time(x.clone()), &delay).unwrap();
    for i in 0..16 {
        assert_eq!(y.samples()[i], x[(i + 15) % 16]);
    }
    assert!(ChannelRealization::new(vec![]).is_err());
    assert!(ChannelRealization::new(vec![C::new(0.0, 0.0)]).is_err());
    assert!(apply_channel(&time(x[..2].to_vec()), &ChannelRealization::new(vec![C::new(1.0, 0.0); 3]).unwrap()).is_err());
}

#[test]
fn random_channel_matches_direct_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for (n, taps) in [(8, 3), (64, 13), (100, 47)] {
        let x = random(&mut rng, n);
        let h = random(&mut rng, taps);
        let y = apply_channel(&time(x.clone()), &ChannelRealization::new(h.clone()).unwrap()).unwrap();
        for (i, got) in y.samples().iter().enumerate() {
            let mut want = C::new(0.0, 0.0);
            for (k, tap) in h.iter().enumerate() {
                want += tap * x[(i + n * 2 - k) % n];
            }
            assert!((got - want).norm() < 1e-13);
        }
        // circular convolution diagonalizes under the centered DFT
        let hf = ChannelRealization::new(h).unwrap().frequency_response(n).unwrap();
        let (xf, yf) = (dpod_sim::dft::dft(&x).unwrap(), dpod_sim::dft::dft(y.samples()).unwrap());
        for k in 0..n {
            assert!((yf[k] - hf[k] * xf[k]).norm() < 1e-11);
        }
    }
}

#[test]
fn noise_level_follows_snr() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let x = time(vec![C::new(1.0, 0.0); 64]);
    let (_, var) = add_awgn(&x, NoiseSpec::new(50.0).unwrap(), &mut rng).unwrap();
    assert!((var - 1e-5).abs() < 1e-18);
    let (clean, var) = add_awgn(&x, NoiseSpec::new(f64::INFINITY).unwrap(), &mut rng).unwrap();
    assert_eq!(var, 0.0);
    assert_eq!(clean, x);
    assert!(NoiseSpec::new(f64::NAN).is_err());

    let x = time(random(&mut rng, 1_000_000));
    let p = x.energy() / 1e6;
    let (y, var) = add_awgn(&x, NoiseSpec::new(10.0).unwrap(), &mut rng).unwrap();
    assert!((var - p / 10.0).abs() < 1e-15);
    let measured: f64 = y.samples().iter().zip(x.samples()).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>() / 1e6;
    assert!((measured / var - 1.0).abs() < 0.01, "{measured} vs {var}");
}

#[test]
fn gaussian_is_circular() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let n = 200_000;
    let z: Vec<C> = (0..n).map(|_| complex_gaussian(&mut rng, 2.0)).collect();
    let re = z.iter().map(|v| v.re * v.re).sum::<f64>() / n as f64;
    let im = z.iter().map(|v| v.im * v.im).sum::<f64>() / n as f64;
    let pseudo = z.iter().map(|v| v * v).sum::<C>() / n as f64;
    assert!((re - 1.0).abs() < 0.02 && (im - 1.0).abs() < 0.02);
    assert!(pseudo.norm() < 0.02);
}

#[test]
fn single_tap_profile_is_unit_magnitude() {
    let p = PdpProfile {
        delays: vec![0],
        powers_db: vec![3.0],
        los_k_db: Some(f64::INFINITY),
    };
    assert!(p.validate().is_err());
    let p = PdpProfile {
        delays: vec![0],
        powers_db: vec![3.0],
        los_k_db: Some(300.0),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let h = sample_taps(&p, &mut rng).unwrap();
        assert_eq!(h.taps().len(), 1);
        assert!((h.taps()[0].norm() - 1.0).abs() < 1e-12);
    }
    let bad = PdpProfile {
        delays: vec![0, 1],
        powers_db: vec![0.0],
        los_k_db: None,
    };
    assert!(bad.validate().is_err());
}

#[test]
fn sampled_taps_have_unit_average_energy() {
    let p = PdpProfile::tdl_d_like(30.72e6);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let draws = 100_000;
    let total: f64 = (0..draws)
        .map(|_| sample_taps(&p, &mut rng).unwrap().taps().iter().map(|t| t.norm_sqr()).sum::<f64>())
        .sum();
    assert!((total / draws as f64 - 1.0).abs() < 0.01);

    let rayleigh = PdpProfile {
        delays: vec![0, 2, 5],
        powers_db: vec![0.0, -3.0, -6.0],
        los_k_db: None,
    };
    let x = time(random(&mut rng, 32));
    let mut out = 0.0;
    for _ in 0..10_000 {
        out += apply_channel(&x, &sample_taps(&rayleigh, &mut rng).unwrap()).unwrap().energy();
    }
    assert!((out / 10_000.0 / x.energy() - 1.0).abs() < 0.03);
}

#[test]
fn taps_are_reproducible_from_the_seed() {
    let p = PdpProfile::tdl_d_like(122.88e6);
    let a = sample_taps(&p, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
    let b = sample_taps(&p, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
    let c = sample_taps(&p, &mut ChaCha8Rng::seed_from_u64(8)).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert_eq!(a.taps().len(), 47);
}
