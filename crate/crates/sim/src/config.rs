//! Experiment configuration, named presets and TOML loading.
//!
//! A config file may name a `preset`; its remaining keys override the
//! preset field by field (`training` and `sweep` merge key by key, other
//! tables and all arrays are replaced). Unknown keys are rejected.

use std::path::{Path, PathBuf};

use dpod_core::dpod::{DegreeSet, MemorySpec, DEFAULT_KERNEL_RHO};
use dpod_core::signal::SubcarrierConfig;
use serde::{Deserialize, Serialize};

use crate::channel::PdpProfile;
use crate::error::{SimError, SimResult};
use crate::receiver::Placement;

/// Relative Volterra ridge `rho tr(A^T A) / rows`; keeps the normal
/// equations well posed without visibly biasing the fit.
pub const DEFAULT_VOLTERRA_RHO: f64 = 1e-9;
pub const DEFAULT_SUPPORT_CAP: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgorithmKind {
    Volterra,
    Kernel,
    Mp,
    /// Equalization only.
    None,
    /// PA bypassed: the linear reference link.
    NoPa,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmSpec {
    pub id: String,
    pub kind: AlgorithmKind,
    pub placement: Placement,
    #[serde(default = "default_memory")]
    pub memory: MemorySpec,
    #[serde(default = "default_degree")]
    pub degree: DegreeSet,
    /// Regularization scale; defaults depend on `kind`.
    #[serde(default)]
    pub rho: Option<f64>,
    /// Kernel support-row cap; 0 keeps every row.
    #[serde(default)]
    pub support_cap: Option<usize>,
}

fn default_memory() -> MemorySpec {
    MemorySpec::memoryless()
}

fn default_degree() -> DegreeSet {
    DegreeSet::up_to(1).expect("1 is odd")
}

impl AlgorithmSpec {
    pub fn new(id: &str, kind: AlgorithmKind, placement: Placement, memory: MemorySpec, degree: usize) -> Self {
        Self {
            id: id.to_string(),
            kind,
            placement,
            memory,
            degree: DegreeSet::up_to(degree).expect("preset degrees are odd"),
            rho: None,
            support_cap: None,
        }
    }

    pub fn rho(&self) -> f64 {
        self.rho.unwrap_or(match self.kind {
            AlgorithmKind::Kernel => DEFAULT_KERNEL_RHO,
            _ => DEFAULT_VOLTERRA_RHO,
        })
    }

    pub fn support_cap(&self) -> usize {
        self.support_cap.unwrap_or(DEFAULT_SUPPORT_CAP)
    }

    pub fn is_trained(&self) -> bool {
        matches!(self.kind, AlgorithmKind::Volterra | AlgorithmKind::Kernel | AlgorithmKind::Mp)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ChannelSpec {
    Awgn {},
    Pdp {
        delays: Vec<usize>,
        powers_db: Vec<f64>,
        #[serde(default)]
        los_k_db: Option<f64>,
    },
}

impl ChannelSpec {
    pub fn profile(&self) -> Option<PdpProfile> {
        match self {
            ChannelSpec::Awgn {} => None,
            ChannelSpec::Pdp {
                delays,
                powers_db,
                los_k_db,
            } => Some(PdpProfile {
                delays: delays.clone(),
                powers_db: powers_db.clone(),
                los_k_db: *los_k_db,
            }),
        }
    }

    pub fn from_profile(p: PdpProfile) -> Self {
        ChannelSpec::Pdp {
            delays: p.delays,
            powers_db: p.powers_db,
            los_k_db: p.los_k_db,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EqualizerSpec {
    Zf,
    /// LMMSE with the noise variance known at the receiver.
    Lmmse,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainingSpec {
    pub snr_db: f64,
    pub num_symbols: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub snr_db: Vec<f64>,
    /// Trials per point, or the minimum when `target_errors` is set.
    pub trials: usize,
    /// Keep adding trials until this many bit errors are seen ...
    #[serde(default)]
    pub target_errors: Option<u64>,
    /// ... or this many trials have run.
    #[serde(default)]
    pub max_trials: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub fft_size: usize,
    pub data_size: usize,
    pub lower_guard: usize,
    pub upper_guard: usize,
    pub qam_order: usize,
    /// `builtin:memoryless-d5`, `builtin:gmp-cross`, `builtin:linear`, or a path.
    pub pa_model: String,
    pub backoff_db: f64,
    pub oversampling: usize,
    pub channel: ChannelSpec,
    pub equalizer: EqualizerSpec,
    pub algorithms: Vec<AlgorithmSpec>,
    pub training: TrainingSpec,
    pub sweep: SweepSpec,
    pub seed: u64,
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// Append rows to an existing output file instead of overwriting.
    #[serde(default)]
    pub append: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Table1,
    Desk,
    DeskFading,
}

impl Preset {
    pub fn parse(name: &str) -> SimResult<Self> {
        match name {
            "table1" => Ok(Preset::Table1),
            "desk" => Ok(Preset::Desk),
            "desk-fading" => Ok(Preset::DeskFading),
            _ => Err(SimError::Config(format!("unknown preset {name:?} (table1, desk, desk-fading)"))),
        }
    }

    pub fn config(self) -> SimConfig {
        match self {
            Preset::Table1 => table1(),
            Preset::Desk => desk(),
            Preset::DeskFading => desk_fading(),
        }
    }
}

fn all_algorithms() -> Vec<AlgorithmSpec> {
    use AlgorithmKind::*;
    use Placement::*;
    let sym = MemorySpec::symmetric(2);
    vec![
        AlgorithmSpec::new("no-pa", NoPa, TimeDomainEq, MemorySpec::memoryless(), 1),
        AlgorithmSpec::new("uncompensated", None, TimeDomainEq, MemorySpec::memoryless(), 1),
        AlgorithmSpec::new("time-volterra-nomem", Volterra, TimeDomainEq, MemorySpec::memoryless(), 5),
        AlgorithmSpec {
            // Desk-size training sets fit in one Gram matrix. lambda is a
            // per-row mean while the Gram spectrum grows with the row count,
            // so rho is scaled by 8192 / 32768 rows to match the full-size
            // regularization strength.
            support_cap: Some(0),
            rho: Some(DEFAULT_KERNEL_RHO * 0.25),
            ..AlgorithmSpec::new("time-kernel-sym", Kernel, TimeDomainEq, sym.clone(), 5)
        },
        AlgorithmSpec::new("time-volterra-sym", Volterra, TimeDomainEq, sym.clone(), 5),
        AlgorithmSpec::new("dfts-volterra-sym", Volterra, DftSDomain, sym.clone(), 5),
        AlgorithmSpec::new("time-mp-asym", Mp, TimeDomainEq, MemorySpec::one_sided(5), 5),
        AlgorithmSpec::new("time-mp-sym", Mp, TimeDomainEq, sym, 5),
    ]
}

fn mp_comparison_algorithms() -> Vec<AlgorithmSpec> {
    use AlgorithmKind::*;
    use Placement::*;
    let sym = MemorySpec::symmetric(2);
    vec![
        AlgorithmSpec::new("no-pa", NoPa, TimeDomainEq, MemorySpec::memoryless(), 1),
        AlgorithmSpec::new("uncompensated", None, TimeDomainEq, MemorySpec::memoryless(), 1),
        AlgorithmSpec::new("time-volterra-sym", Volterra, TimeDomainEq, sym.clone(), 5),
        AlgorithmSpec::new("time-mp-asym", Mp, TimeDomainEq, MemorySpec::one_sided(5), 5),
        AlgorithmSpec::new("time-mp-sym", Mp, TimeDomainEq, sym, 5),
    ]
}

/// Full-size parameters: N = 4096, M = 3240, 256-QAM, 6 dB backoff, U = 3.
pub fn table1() -> SimConfig {
    SimConfig {
        fft_size: 4096,
        data_size: 3240,
        lower_guard: 428,
        upper_guard: 428,
        qam_order: 256,
        pa_model: "builtin:gmp-cross".into(),
        backoff_db: 6.0,
        oversampling: 3,
        channel: ChannelSpec::from_profile(PdpProfile::tdl_d_like(122.88e6)),
        equalizer: EqualizerSpec::Zf,
        algorithms: mp_comparison_algorithms(),
        training: TrainingSpec {
            snr_db: 50.0,
            num_symbols: 4,
        },
        sweep: SweepSpec {
            snr_db: (0..=8).map(|i| 20.0 + 2.0 * i as f64).collect(),
            trials: 20,
            target_errors: None,
            max_trials: None,
        },
        seed: 1,
        output: None,
        append: false,
    }
}

/// Reduced size for quick runs: N = 1024, M = 768, 64-QAM, memoryless PA,
/// AWGN.
pub fn desk() -> SimConfig {
    SimConfig {
        fft_size: 1024,
        data_size: 768,
        lower_guard: 128,
        upper_guard: 128,
        qam_order: 64,
        pa_model: "builtin:memoryless-d5".into(),
        backoff_db: 6.0,
        oversampling: 3,
        channel: ChannelSpec::Awgn {},
        equalizer: EqualizerSpec::Zf,
        algorithms: all_algorithms(),
        training: TrainingSpec {
            snr_db: 50.0,
            num_symbols: 4,
        },
        sweep: SweepSpec {
            snr_db: vec![17.0, 19.0, 21.0, 23.0, 25.0],
            trials: 4,
            target_errors: None,
            max_trials: None,
        },
        seed: 1,
        output: None,
        append: false,
    }
}

/// Desk size with the cross-term GMP and block fading.
pub fn desk_fading() -> SimConfig {
    SimConfig {
        pa_model: "builtin:gmp-cross".into(),
        channel: ChannelSpec::from_profile(PdpProfile::tdl_d_like(30.72e6)),
        algorithms: mp_comparison_algorithms(),
        sweep: SweepSpec {
            snr_db: vec![18.0, 21.0, 24.0, 27.0, 30.0],
            ..desk().sweep
        },
        ..desk()
    }
}

impl SimConfig {
    pub fn subcarriers(&self) -> SimResult<SubcarrierConfig> {
        Ok(SubcarrierConfig::new(self.fft_size, self.data_size, self.lower_guard, self.upper_guard)?)
    }

    pub fn validate(&self) -> SimResult<()> {
        self.subcarriers()?;
        dpod_core::gmp::PaConfig::new(self.backoff_db, self.oversampling)?;
        dpod_core::qam::QamConstellation::new(self.qam_order)?;
        if let Some(p) = self.channel.profile() {
            p.validate()?;
            if p.max_delay() >= self.fft_size {
                return Err(SimError::Config("channel longer than the FFT size".into()));
            }
        }
        if self.algorithms.is_empty() {
            return Err(SimError::Config("no algorithms selected".into()));
        }
        for (i, a) in self.algorithms.iter().enumerate() {
            if self.algorithms[..i].iter().any(|b| b.id == a.id) {
                return Err(SimError::Config(format!("duplicate algorithm id {:?}", a.id)));
            }
            if a.rho().is_nan() || a.rho() < 0.0 || (a.kind == AlgorithmKind::Kernel && a.rho() == 0.0) {
                return Err(SimError::Config(format!("{}: invalid rho {}", a.id, a.rho())));
            }
        }
        if self.training.num_symbols == 0 {
            return Err(SimError::Config("training needs at least one symbol".into()));
        }
        if self.sweep.snr_db.is_empty() || self.sweep.trials == 0 {
            return Err(SimError::Config("sweep needs at least one SNR point and one trial".into()));
        }
        if self.sweep.snr_db.iter().any(|s| s.is_nan()) {
            return Err(SimError::Config("NaN SNR".into()));
        }
        Ok(())
    }

    /// Restricts the algorithm list to the given ids, in the given order.
    pub fn select_algorithms(&mut self, ids: &[String]) -> SimResult<()> {
        let mut picked = Vec::with_capacity(ids.len());
        for id in ids {
            let a = self
                .algorithms
                .iter()
                .find(|a| &a.id == id)
                .ok_or_else(|| SimError::Config(format!("unknown algorithm {id:?}")))?;
            picked.push(a.clone());
        }
        self.algorithms = picked;
        Ok(())
    }

    /// Parses TOML text over `base`, or over the preset the text names.
    pub fn from_toml_str(text: &str, base: Option<Preset>) -> SimResult<Self> {
        let mut user: toml::Table = text.parse()?;
        let preset = match user.remove("preset") {
            Some(toml::Value::String(name)) => Preset::parse(&name)?,
            Some(_) => return Err(SimError::Config("preset must be a string".into())),
            None => base.unwrap_or(Preset::Desk),
        };
        let preset = base.unwrap_or(preset);
        let mut merged = toml::Table::try_from(preset.config()).map_err(|e| SimError::Config(e.to_string()))?;
        for (k, v) in user {
            match (merged.get_mut(&k), v) {
                (Some(toml::Value::Table(dst)), toml::Value::Table(src)) if k == "training" || k == "sweep" => {
                    dst.extend(src);
                }
                (_, v) => {
                    merged.insert(k, v);
                }
            }
        }
        let cfg: SimConfig = merged.try_into()?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path, base: Option<Preset>) -> SimResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| SimError::io(path, e))?;
        Self::from_toml_str(&text, base)
    }
}

/// Parses `lo:step:hi` (inclusive) or a single value.
pub fn parse_snr_range(s: &str) -> SimResult<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| SimError::Config(format!("bad SNR value {t:?}")));
    match parts.as_slice() {
        [v] => Ok(vec![num(v)?]),
        [lo, step, hi] => {
            let (lo, step, hi) = (num(lo)?, num(step)?, num(hi)?);
            if step.is_nan() || step <= 0.0 || hi < lo {
                return Err(SimError::Config(format!("bad SNR range {s:?}")));
            }
            let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
            Ok((0..count).map(|i| lo + step * i as f64).collect())
        }
        _ => Err(SimError::Config(format!("SNR range must be lo:step:hi, got {s:?}"))),
    }
}
