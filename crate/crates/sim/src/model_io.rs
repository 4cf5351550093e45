//! JSON persistence of trained compensators.
//!
//! ```json
//! { "version": 1, "models": [
//!   { "id": "time-volterra-sym", "placement": "time-domain-eq",
//!     "kind": "volterra", "memory": [-2,-1,0,1,2], "degree": 5,
//!     "basis_order": "graded-lex-sorted-index-tuples",
//!     "ridge": 1.2e-9, "coefficients": [ ... ] } ] }
//! ```
//!
//! Kernel models store `lambda`, the support rows flattened row-major and
//! `beta`; MP models store complex coefficients as `[re, im]` pairs,
//! degree-major.

use std::path::Path;

use dpod_core::dpod::{DegreeSet, KernelModel, MemorySpec, Model, MpModel, VolterraModel, BASIS_ORDER_TAG};
use dpod_core::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{SimError, SimResult};
use crate::receiver::Placement;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub version: u32,
    pub models: Vec<SavedModel>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SavedModel {
    pub id: String,
    pub placement: Placement,
    #[serde(flatten)]
    pub body: ModelBody,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ModelBody {
    Volterra {
        memory: MemorySpec,
        degree: DegreeSet,
        basis_order: String,
        ridge: f64,
        coefficients: Vec<f64>,
    },
    Kernel {
        memory: MemorySpec,
        degree: DegreeSet,
        lambda: f64,
        supports: Vec<f64>,
        beta: Vec<f64>,
    },
    Mp {
        memory: MemorySpec,
        degree: DegreeSet,
        coefficients: Vec<[f64; 2]>,
    },
}

impl ModelBody {
    pub fn from_model(m: &Model) -> Self {
        match m {
            Model::Volterra(v) => ModelBody::Volterra {
                memory: v.memory().clone(),
                degree: v.degrees(),
                basis_order: BASIS_ORDER_TAG.to_string(),
                ridge: v.ridge(),
                coefficients: v.coefficients().to_vec(),
            },
            Model::Kernel(k) => ModelBody::Kernel {
                memory: k.memory().clone(),
                degree: k.degrees(),
                lambda: k.lambda(),
                supports: k.supports().to_vec(),
                beta: k.beta().to_vec(),
            },
            Model::Mp(p) => ModelBody::Mp {
                memory: p.memory().clone(),
                degree: p.degrees(),
                coefficients: p.coefficients().iter().map(|c| [c.re, c.im]).collect(),
            },
        }
    }

    pub fn to_model(&self) -> SimResult<Model> {
        Ok(match self {
            ModelBody::Volterra {
                memory,
                degree,
                basis_order,
                coefficients,
                ..
            } => {
                if basis_order != BASIS_ORDER_TAG {
                    return Err(SimError::Config(format!("unsupported basis order {basis_order:?}")));
                }
                Model::Volterra(VolterraModel::from_parts(memory.clone(), *degree, coefficients.clone())?)
            }
            ModelBody::Kernel {
                memory,
                degree,
                lambda,
                supports,
                beta,
            } => Model::Kernel(KernelModel::from_parts(memory.clone(), *degree, *lambda, supports.clone(), beta.clone())?),
            ModelBody::Mp {
                memory,
                degree,
                coefficients,
            } => Model::Mp(MpModel::from_parts(
                memory.clone(),
                *degree,
                coefficients.iter().map(|c| Complex64::new(c[0], c[1])).collect(),
            )?),
        })
    }
}

pub fn save_models(path: &Path, models: &[SavedModel]) -> SimResult<()> {
    let file = ModelFile {
        version: FORMAT_VERSION,
        models: models.to_vec(),
    };
    let text = serde_json::to_string_pretty(&file)?;
    std::fs::write(path, text).map_err(|e| SimError::io(path, e))
}

pub fn load_models(path: &Path) -> SimResult<ModelFile> {
    let text = std::fs::read_to_string(path).map_err(|e| SimError::io(path, e))?;
    let file: ModelFile = serde_json::from_str(&text)?;
    if file.version != FORMAT_VERSION {
        return Err(SimError::Config(format!("model file version {} (expected {FORMAT_VERSION})", file.version)));
    }
    Ok(file)
}
