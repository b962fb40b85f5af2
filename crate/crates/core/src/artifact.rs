//! On-disk forms: a JSON artifact per constructed code and CSV catalogs.

use std::io::Write;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::families::{CatalogEntry, Construction, Family};
use crate::gf::{FieldContext, FieldElement, GfError};
use crate::grs::{GrsCode, GrsError, QuantumParams};

#[derive(Debug, Error)]
pub enum ArtifactError {
    #[error("malformed artifact: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("artifact field is invalid: {0}")]
    Field(#[from] GfError),
    #[error("artifact code is invalid: {0}")]
    Code(#[from] GrsError),
    #[error("artifact declares n = {declared} but lists {actual} locators")]
    LengthMismatch { declared: usize, actual: usize },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
    pub e: u32,
    /// Monic modulus of F_{q^2} over F_p, constant term first.
    pub modulus: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeSpec {
    pub n: usize,
    pub k: usize,
    pub locators: Vec<FieldElement>,
    pub multipliers: Vec<FieldElement>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionSpec {
    pub family: Family,
    pub case: u8,
    pub h: u64,
    pub r: u64,
    pub t: u64,
    pub coset_exponents: Vec<u64>,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeArtifact {
    pub field: FieldSpec,
    pub code: CodeSpec,
    pub construction: ConstructionSpec,
    pub quantum: QuantumParams,
}

impl CodeArtifact {
    pub fn from_construction(c: &Construction) -> Result<Self, GrsError> {
        let ctx = c.code.ctx();
        Ok(CodeArtifact {
            field: FieldSpec {
                p: ctx.p() as u64,
                e: ctx.e(),
                modulus: ctx.modulus().to_vec(),
            },
            code: CodeSpec {
                n: c.code.n(),
                k: c.code.k(),
                locators: c.code.locators().to_vec(),
                multipliers: c.code.multipliers().to_vec(),
            },
            construction: ConstructionSpec {
                family: c.params.family,
                case: c.params.case,
                h: c.params.h,
                r: c.params.r,
                t: c.params.t,
                coset_exponents: c.params.coset_exponents.clone(),
                seed: c.seed,
            },
            quantum: c.code.quantum_params()?,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("artifact is always serializable") + "\n"
    }

    pub fn parse(text: &str) -> Result<Self, ArtifactError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Rebuilds the field and the code exactly as stored.
    pub fn rebuild(&self, table_budget: u64) -> Result<GrsCode, ArtifactError> {
        let ctx = FieldContext::from_modulus(self.field.p, self.field.e, &self.field.modulus, table_budget)?;
        if self.code.locators.len() != self.code.n {
            return Err(ArtifactError::LengthMismatch {
                declared: self.code.n,
                actual: self.code.locators.len(),
            });
        }
        Ok(GrsCode::new(
            Arc::new(ctx),
            self.code.locators.clone(),
            self.code.multipliers.clone(),
            self.code.k,
        )?)
    }
}

pub const CSV_HEADER: [&str; 11] = [
    "q",
    "family",
    "case",
    "h",
    "r",
    "k",
    "n",
    "nq_k",
    "d",
    "congruence_class",
    "provenance",
];

/// One row per entry; provenance tags are joined with ';'.
pub fn write_catalog_csv<W: Write>(entries: &[CatalogEntry], out: W) -> Result<(), ArtifactError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for e in entries {
        w.write_record([
            e.q.to_string(),
            e.family.number().to_string(),
            e.case.to_string(),
            e.h.to_string(),
            e.r.to_string(),
            e.k.to_string(),
            e.n.to_string(),
            e.quantum.k.to_string(),
            e.quantum.d.to_string(),
            e.congruence_class.clone(),
            e.provenance.join(";"),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}
