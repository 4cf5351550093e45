//! Training, Monte-Carlo trials and SNR sweeps.
//!
//! Every trial draws from its own ChaCha stream, selected by
//! `(snr index, algorithm index, trial index)` under the master seed, so the
//! outcome does not depend on scheduling or thread count.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;

use dpod_core::dpod::{
    build_training_set, compensate, enumerate_monomials, kernel_fit, mp_fit_blocks, volterra_fit, Model, Regularization,
    TrainingSet,
};
use dpod_core::equalizer::EqualizerKind;
use dpod_core::gmp::{GmpCoefficients, PaConfig};
use dpod_core::qam::{qam_map, BitBlock, QamConstellation};
use dpod_core::signal::{DomainSignal, SubcarrierConfig};
use dpod_core::{Complex64, Error};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::channel::{add_awgn, apply_channel, sample_taps, ChannelRealization, NoiseSpec, PdpProfile};
use crate::config::{AlgorithmKind, AlgorithmSpec, EqualizerSpec, SimConfig};
use crate::error::{SimError, SimResult};
use crate::pa::{load_coefficients, pa_chain_with_gain};
use crate::receiver::{decide_bits, estimate_symbols, receive_to_domain, reference_signal, Placement};
use crate::waveform::dfts_modulate;

pub const CSV_HEADER: &str = "snr_db,algorithm,placement,bits,errors,ber,evm_db,trials,seed";
pub const EVM_FLOOR_DB: f64 = -200.0;

const TRAINING_STREAM: u64 = 0xffff << 48;
/// Trials are evaluated in batches of this size; the stopping rule is then
/// applied in trial order, so batching never changes the result.
const BATCH: usize = 8;

/// Stream key for one trial.
pub fn trial_stream(snr_idx: usize, alg_idx: usize, trial: usize) -> u64 {
    assert!(snr_idx < 0xffff && alg_idx < 0xffff && trial <= u32::MAX as usize);
    ((snr_idx as u64) << 48) | ((alg_idx as u64) << 32) | trial as u64
}

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `10 log10(|est - ref|^2 / |ref|^2)`, floored at -200 dB.
pub fn compute_evm(reference: &[Complex64], estimate: &[Complex64]) -> Result<f64, Error> {
    if reference.len() != estimate.len() {
        return Err(Error::LengthMismatch {
            expected: reference.len(),
            actual: estimate.len(),
        });
    }
    let r: f64 = reference.iter().map(|v| v.norm_sqr()).sum();
    if r == 0.0 {
        return Err(Error::ZeroPower);
    }
    let e: f64 = reference.iter().zip(estimate).map(|(a, b)| (a - b).norm_sqr()).sum();
    Ok(ratio_db(e, r))
}

fn ratio_db(num: f64, den: f64) -> f64 {
    if num == 0.0 {
        EVM_FLOOR_DB
    } else {
        (10.0 * (num / den).log10()).max(EVM_FLOOR_DB)
    }
}

/// Wilson score interval for `errors` out of `bits` at normal quantile `z`.
pub fn wilson_interval(errors: u64, bits: u64, z: f64) -> (f64, f64) {
    if bits == 0 {
        return (0.0, 1.0);
    }
    let n = bits as f64;
    let p = errors as f64 / n;
    let z2 = z * z;
    let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / (1.0 + z2 / n);
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Everything fixed across trials of one configuration.
pub struct Scenario {
    pub cfg: SimConfig,
    pub subcarriers: SubcarrierConfig,
    pub constellation: QamConstellation,
    pub pa: GmpCoefficients,
    pub pa_cfg: PaConfig,
    pub profile: Option<PdpProfile>,
}

/// One transmitted symbol.
pub struct Transmission {
    pub bits: BitBlock,
    pub s_d: Vec<Complex64>,
    pub s_t: DomainSignal,
}

impl Scenario {
    pub fn new(cfg: SimConfig) -> SimResult<Self> {
        cfg.validate()?;
        Ok(Self {
            subcarriers: cfg.subcarriers()?,
            constellation: QamConstellation::new(cfg.qam_order)?,
            pa: load_coefficients(&cfg.pa_model)?,
            pa_cfg: PaConfig::new(cfg.backoff_db, cfg.oversampling)?,
            profile: cfg.channel.profile(),
            cfg,
        })
    }

    pub fn transmit<R: Rng + ?Sized>(&self, rng: &mut R) -> SimResult<Transmission> {
        let n_bits = self.subcarriers.data_size() * self.constellation.bits_per_symbol();
        let bits = BitBlock((0..n_bits).map(|_| rng.random_range(0..2u8)).collect());
        let s_d = qam_map(&bits, &self.constellation)?;
        let s_t = dfts_modulate(&s_d, &self.subcarriers)?;
        Ok(Transmission { bits, s_d, s_t })
    }

    /// PA output and the real gain the receiver folds into its channel.
    pub fn amplify(&self, s_t: &DomainSignal, bypass: bool) -> SimResult<(DomainSignal, f64)> {
        if bypass {
            return Ok((s_t.clone(), 1.0));
        }
        let out = pa_chain_with_gain(s_t, &self.pa, &self.pa_cfg)?;
        Ok((out.signal, out.gain))
    }

    fn equalizer(&self, noise_var: f64) -> EqualizerKind {
        match self.cfg.equalizer {
            EqualizerSpec::Zf => EqualizerKind::ZeroForcing,
            EqualizerSpec::Lmmse => EqualizerKind::Lmmse(noise_var),
        }
    }
}

/// Clean/received pairs for one placement, one entry per training symbol.
#[derive(Debug, Clone)]
pub struct TrainingData {
    pub placement: Placement,
    pub blocks: Vec<(Vec<Complex64>, Vec<Complex64>)>,
}

impl TrainingData {
    pub fn complex_samples(&self) -> usize {
        self.blocks.iter().map(|b| b.0.len()).sum()
    }

    pub fn training_set(&self, memory: &dpod_core::dpod::MemorySpec) -> SimResult<TrainingSet> {
        let mut it = self.blocks.iter();
        let (c, r) = it.next().ok_or(Error::Empty)?;
        let mut ts = build_training_set(c, r, memory)?;
        for (c, r) in it {
            ts.extend(&build_training_set(c, r, memory)?)?;
        }
        Ok(ts)
    }
}

/// Random payloads through the PA and an AWGN channel at the training SNR,
/// received in the given placement and paired with the clean reference.
pub fn generate_training_data(scn: &Scenario, placement: Placement) -> SimResult<TrainingData> {
    let stream = TRAINING_STREAM | placement_index(placement);
    let mut rng = stream_rng(scn.cfg.seed, stream);
    let noise = NoiseSpec::new(scn.cfg.training.snr_db)?;
    let mut blocks = Vec::with_capacity(scn.cfg.training.num_symbols);
    for _ in 0..scn.cfg.training.num_symbols {
        let tx = scn.transmit(&mut rng)?;
        let (y, gain) = scn.amplify(&tx.s_t, false)?;
        let (y, var) = add_awgn(&y, noise, &mut rng)?;
        let h = ChannelRealization::identity().scaled(gain);
        let rx = receive_to_domain(&y, &h, scn.equalizer(var), placement, &scn.subcarriers)?;
        let clean = reference_signal(&tx.s_d, placement, &scn.subcarriers)?;
        blocks.push((clean.into_samples(), rx.into_samples()));
    }
    Ok(TrainingData { placement, blocks })
}

fn placement_index(p: Placement) -> u64 {
    match p {
        Placement::TimeDomainEq => 0,
        Placement::DftSDomain => 1,
    }
}

/// Fits the compensator of `alg`; `None` for the untrained kinds.
pub fn train(alg: &AlgorithmSpec, data: &TrainingData) -> SimResult<Option<Model>> {
    if data.placement != alg.placement {
        return Err(SimError::Config(format!("{}: training data is for another placement", alg.id)));
    }
    let model = match alg.kind {
        AlgorithmKind::None | AlgorithmKind::NoPa => return Ok(None),
        AlgorithmKind::Volterra => {
            let ts = data.training_set(&alg.memory)?;
            let basis = enumerate_monomials(alg.memory.real_dim(), alg.degree);
            Model::Volterra(volterra_fit(&ts, basis, Regularization::TraceRelative(alg.rho()))?)
        }
        AlgorithmKind::Kernel => {
            let ts = data.training_set(&alg.memory)?.subsample(alg.support_cap());
            Model::Kernel(kernel_fit(&ts, alg.degree, Regularization::TraceRelative(alg.rho()))?)
        }
        AlgorithmKind::Mp => {
            let blocks: Vec<(&[Complex64], &[Complex64])> =
                data.blocks.iter().map(|(c, r)| (c.as_slice(), r.as_slice())).collect();
            Model::Mp(mp_fit_blocks(&blocks, &alg.memory, alg.degree)?)
        }
    };
    Ok(Some(model))
}

/// Trains every algorithm of the scenario, sharing training data per
/// placement. Logs sample counts to stderr.
pub fn train_all(scn: &Scenario) -> SimResult<Vec<Option<Model>>> {
    let mut data: Vec<TrainingData> = Vec::new();
    for a in scn.cfg.algorithms.iter().filter(|a| a.is_trained()) {
        if !data.iter().any(|d| d.placement == a.placement) {
            let d = generate_training_data(scn, a.placement)?;
            eprintln!(
                "training data [{}]: {} complex samples, {} real rows",
                a.placement.name(),
                d.complex_samples(),
                2 * d.complex_samples()
            );
            data.push(d);
        }
    }
    scn.cfg
        .algorithms
        .par_iter()
        .map(|a| match data.iter().find(|d| d.placement == a.placement) {
            Some(d) => train(a, d),
            None => Ok(None),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub snr_db: f64,
    pub algorithm: String,
    pub placement: Placement,
    pub bits: u64,
    pub errors: u64,
    pub evm_db: f64,
    pub error_energy: f64,
    pub reference_energy: f64,
    pub seed: u64,
    pub stream: u64,
}

/// One symbol through the whole link. Deterministic in `rng`.
pub fn run_trial<R: Rng + ?Sized>(
    scn: &Scenario,
    alg: &AlgorithmSpec,
    model: Option<&Model>,
    snr_db: f64,
    rng: &mut R,
) -> SimResult<TrialRecord> {
    if alg.is_trained() && model.is_none() {
        return Err(SimError::Config(format!("{}: model not trained", alg.id)));
    }
    let tx = scn.transmit(rng)?;
    let (y, gain) = scn.amplify(&tx.s_t, alg.kind == AlgorithmKind::NoPa)?;
    let h = match &scn.profile {
        Some(p) => sample_taps(p, rng)?,
        None => ChannelRealization::identity(),
    };
    let y = apply_channel(&y, &h)?;
    let (y, var) = add_awgn(&y, NoiseSpec::new(snr_db)?, rng)?;
    let rx = receive_to_domain(&y, &h.scaled(gain), scn.equalizer(var), alg.placement, &scn.subcarriers)?;
    let out = match model {
        Some(m) => DomainSignal::new(compensate(m, rx.samples())?, rx.domain())?,
        None => rx,
    };
    let s_hat = estimate_symbols(&out, &scn.subcarriers)?;
    let decided = decide_bits(&out, &scn.subcarriers, &scn.constellation)?;
    let error_energy: f64 = s_hat.iter().zip(&tx.s_d).map(|(a, b)| (a - b).norm_sqr()).sum();
    let reference_energy: f64 = tx.s_d.iter().map(|v| v.norm_sqr()).sum();
    Ok(TrialRecord {
        snr_db,
        algorithm: alg.id.clone(),
        placement: alg.placement,
        bits: tx.bits.len() as u64,
        errors: decided.hamming_distance(&tx.bits) as u64,
        evm_db: ratio_db(error_energy, reference_energy),
        error_energy,
        reference_energy,
        seed: scn.cfg.seed,
        stream: 0,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BerPoint {
    pub snr_db: f64,
    pub algorithm: String,
    pub placement: Placement,
    pub bits: u64,
    pub errors: u64,
    pub ber: f64,
    /// Energy-averaged EVM over all trials.
    pub evm_db: f64,
    pub trials: usize,
    pub seed: u64,
}

impl BerPoint {
    pub fn aggregate(records: &[TrialRecord]) -> Option<Self> {
        let first = records.first()?;
        let bits: u64 = records.iter().map(|r| r.bits).sum();
        let errors: u64 = records.iter().map(|r| r.errors).sum();
        let e: f64 = records.iter().map(|r| r.error_energy).sum();
        let r: f64 = records.iter().map(|r| r.reference_energy).sum();
        Some(Self {
            snr_db: first.snr_db,
            algorithm: first.algorithm.clone(),
            placement: first.placement,
            bits,
            errors,
            ber: errors as f64 / bits as f64,
            evm_db: ratio_db(e, r),
            trials: records.len(),
            seed: first.seed,
        })
    }

    /// 95 % Wilson interval on the BER.
    pub fn confidence_interval(&self) -> (f64, f64) {
        wilson_interval(self.errors, self.bits, 1.959_963_984_540_054)
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.snr_db,
            self.algorithm,
            self.placement.name(),
            self.bits,
            self.errors,
            self.ber,
            self.evm_db,
            self.trials,
            self.seed
        )
    }
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub points: Vec<BerPoint>,
    pub records: Vec<TrialRecord>,
}

impl SweepResult {
    pub fn point(&self, algorithm: &str, snr_db: f64) -> Option<&BerPoint> {
        self.points.iter().find(|p| p.algorithm == algorithm && p.snr_db == snr_db)
    }

    pub fn to_csv(&self, header: bool) -> String {
        let mut s = String::new();
        if header {
            s.push_str(CSV_HEADER);
            s.push('\n');
        }
        for p in &self.points {
            s.push_str(&p.csv_row());
            s.push('\n');
        }
        s
    }

    /// Writes the CSV; with `append`, adds rows to an existing file and
    /// writes the header only if the file is empty.
    pub fn write_csv(&self, path: &Path, append: bool) -> SimResult<()> {
        let mut f = OpenOptions::new()
            .create(true)
            .write(true)
            .append(append)
            .truncate(!append)
            .open(path)
            .map_err(|e| SimError::io(path, e))?;
        let empty = f.metadata().map_err(|e| SimError::io(path, e))?.len() == 0;
        f.write_all(self.to_csv(!append || empty).as_bytes()).map_err(|e| SimError::io(path, e))
    }
}

fn stop(records: &[TrialRecord], cfg: &SimConfig) -> bool {
    let sw = &cfg.sweep;
    let n = records.len();
    if n < sw.trials {
        return false;
    }
    match sw.target_errors {
        None => true,
        Some(target) => {
            let errors: u64 = records.iter().map(|r| r.errors).sum();
            errors >= target || sw.max_trials.is_some_and(|m| n >= m)
        }
    }
}

/// Trials for one (SNR, algorithm) pair, in trial order.
pub fn run_point(
    scn: &Scenario,
    snr_idx: usize,
    alg_idx: usize,
    model: Option<&Model>,
) -> SimResult<Vec<TrialRecord>> {
    let snr = scn.cfg.sweep.snr_db[snr_idx];
    let alg = &scn.cfg.algorithms[alg_idx];
    let cap = match scn.cfg.sweep.target_errors {
        Some(_) => scn.cfg.sweep.max_trials.unwrap_or(u32::MAX as usize).max(scn.cfg.sweep.trials),
        None => scn.cfg.sweep.trials,
    };
    let mut records = Vec::new();
    let mut next = 0;
    while next < cap {
        let end = (next + BATCH).min(cap);
        let batch: Vec<SimResult<TrialRecord>> = (next..end)
            .into_par_iter()
            .map(|t| {
                let stream = trial_stream(snr_idx, alg_idx, t);
                let mut rng = stream_rng(scn.cfg.seed, stream);
                let mut r = run_trial(scn, alg, model, snr, &mut rng)?;
                r.stream = stream;
                Ok(r)
            })
            .collect();
        for r in batch {
            records.push(r?);
            if stop(&records, &scn.cfg) {
                return Ok(records);
            }
        }
        next = end;
    }
    Ok(records)
}

/// Sweeps all SNR points and algorithms with pre-trained models.
pub fn run_sweep_with(scn: &Scenario, models: &[Option<Model>]) -> SimResult<SweepResult> {
    let mut points = Vec::new();
    let mut records = Vec::new();
    for snr_idx in 0..scn.cfg.sweep.snr_db.len() {
        for (alg_idx, model) in models.iter().enumerate() {
            let recs = run_point(scn, snr_idx, alg_idx, model.as_ref())?;
            let p = BerPoint::aggregate(&recs).expect("at least one trial");
            eprintln!(
                "snr {:>6.2} dB  {:<22} ber {:.3e} ({} / {} bits, {} trials)  evm {:.2} dB",
                p.snr_db, p.algorithm, p.ber, p.errors, p.bits, p.trials, p.evm_db
            );
            points.push(p);
            records.extend(recs);
        }
    }
    Ok(SweepResult { points, records })
}

/// Trains, sweeps and, if configured, writes the CSV.
pub fn run_sweep(cfg: &SimConfig) -> SimResult<SweepResult> {
    let scn = Scenario::new(cfg.clone())?;
    let models = train_all(&scn)?;
    let result = run_sweep_with(&scn, &models)?;
    if let Some(path) = &cfg.output {
        result.write_csv(path, cfg.append)?;
    }
    Ok(result)
}
