//! Bundled example divisors, stored as JSON.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groebner::{log_derivations, LogBasisError};
use crate::logder::{saito_frame, Derivation, SaitoFailure, SaitoFrame};
use crate::parse::{parse_operator, parse_polynomial, ParseError};
use crate::poly::{Polynomial, VarTable};
use crate::error::VarError;

const BUNDLED: &[&str] = &[
    include_str!("../manifests/normal-crossing-1.json"),
    include_str!("../manifests/normal-crossing-2.json"),
    include_str!("../manifests/normal-crossing-3.json"),
    include_str!("../manifests/cusp.json"),
    include_str!("../manifests/three-lines.json"),
    include_str!("../manifests/moving-four-lines.json"),
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub vars: String,
    pub divisor: String,
    /// Vector fields written as operators; computed when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
}

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("unknown example '{0}'")]
    Unknown(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Vars(#[from] VarError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("basis element {0} is not a vector field")]
    NotVectorField(usize),
    #[error(transparent)]
    Saito(#[from] SaitoFailure),
    #[error(transparent)]
    Basis(#[from] LogBasisError),
}

pub fn bundled() -> Vec<Manifest> {
    BUNDLED
        .iter()
        .map(|s| serde_json::from_str(s).expect("bundled manifests are valid"))
        .collect()
}

pub fn by_name(name: &str) -> Result<Manifest, ManifestError> {
    bundled()
        .into_iter()
        .find(|m| m.name == name)
        .ok_or_else(|| ManifestError::Unknown(name.to_string()))
}

impl Manifest {
    pub fn from_json(s: &str) -> Result<Self, ManifestError> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn var_table(&self) -> Result<VarTable, ManifestError> {
        Ok(VarTable::parse_list(&self.vars)?)
    }

    pub fn divisor(&self, vars: &VarTable) -> Result<Polynomial, ManifestError> {
        Ok(parse_polynomial(&self.divisor, vars)?)
    }

    /// The recorded basis checked with Saito's criterion, or one found by
    /// the syzygy search.
    pub fn frame(&self) -> Result<(VarTable, SaitoFrame), ManifestError> {
        let vars = self.var_table()?;
        let f = self.divisor(&vars)?;
        let frame = match &self.basis {
            Some(src) => {
                let mut basis = Vec::with_capacity(src.len());
                for (i, s) in src.iter().enumerate() {
                    let op = parse_operator(s, &vars)?;
                    basis.push(Derivation::from_diffop(&op).ok_or(ManifestError::NotVectorField(i))?);
                }
                saito_frame(&f, &basis)?
            }
            None => log_derivations(&f)?.frame,
        };
        Ok((vars, frame))
    }
}
