//! Reference computations that share no logic with the closed forms:
//! index sets by enumerating exponent pairs, minimum distance by enumerating
//! messages, and a combined verification report.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::families::SIndexSet;
use crate::gf::FieldElement;
use crate::grs::{binomial, GrsCode, MdsMode, QuantumParams, EXHAUSTIVE_MDS_BUDGET};

/// Message enumeration is refused beyond this many messages.
pub const MIN_DISTANCE_BUDGET: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("2h = {two_h} does not divide q^2 - 1 for q = {q}")]
    BadModulus { q: u64, two_h: u64 },
    #[error("enumeration needs {needed} messages, budget is {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
}

/// Residues s ∈ [0, 2h) and every (i, j) ∈ [0, k)^2 with
/// q·i + j + shift ≡ s·m (mod q^2 - 1).
pub fn brute_force_s_set(
    q: u64,
    h: u64,
    k: u64,
    shift: u64,
) -> Result<BTreeMap<u64, Vec<(u64, u64)>>, OracleError> {
    let order = q * q - 1;
    if h == 0 || order % (2 * h) != 0 {
        return Err(OracleError::BadModulus { q, two_h: 2 * h });
    }
    let m = order / (2 * h);
    let mut hits: BTreeMap<u64, Vec<(u64, u64)>> = BTreeMap::new();
    for i in 0..k {
        for j in 0..k {
            let e = (q * i + j + shift) % order;
            if e % m == 0 {
                hits.entry(e / m).or_default().push((i, j));
            }
        }
    }
    Ok(hits)
}

/// True iff the closed form lists exactly the enumerated residues and each
/// residue's enumerated pairs are exactly its closed-form witness.
pub fn s_set_agrees(closed: &SIndexSet, brute: &BTreeMap<u64, Vec<(u64, u64)>>) -> bool {
    closed.values.iter().eq(brute.keys())
        && brute
            .iter()
            .all(|(s, pairs)| closed.witnesses.get(s).is_some_and(|w| pairs.as_slice() == [*w]))
}

/// Minimum Hamming weight over all nonzero codewords, by evaluating every
/// message polynomial at the locators and scaling by the multipliers.
pub fn exhaustive_min_distance(code: &GrsCode) -> Result<usize, OracleError> {
    let ctx = code.ctx();
    let size = ctx.order() as u64 + 1;
    let k = code.k();
    let needed = size.checked_pow(k as u32).unwrap_or(u64::MAX);
    if needed > MIN_DISTANCE_BUDGET {
        return Err(OracleError::BudgetExceeded {
            needed,
            budget: MIN_DISTANCE_BUDGET,
        });
    }
    let element = |idx: u64| {
        if idx == 0 {
            FieldElement::Zero
        } else {
            FieldElement::Pow(idx as u32 - 1)
        }
    };
    let mut digits = vec![0u64; k];
    let mut best = code.n();
    for _ in 1..needed {
        for d in digits.iter_mut() {
            *d += 1;
            if *d < size {
                break;
            }
            *d = 0;
        }
        let coeffs: Vec<FieldElement> = digits.iter().map(|&d| element(d)).collect();
        let weight = code
            .locators()
            .iter()
            .zip(code.multipliers())
            .filter(|(&a, &v)| {
                let f = coeffs.iter().rev().fold(ctx.zero(), |acc, &c| ctx.add(ctx.mul(acc, a), c));
                !ctx.mul(v, f).is_zero()
            })
            .count();
        best = best.min(weight);
    }
    Ok(best)
}

/// How [`full_verify`] checks the MDS property.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MdsPolicy {
    /// Exhaustive when within budget, otherwise sampled.
    Auto { trials: u64, seed: u64 },
    Exhaustive,
    Sampled { trials: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "lowercase")]
pub enum MdsReport {
    Full { checked: u64, failing: Option<Vec<usize>> },
    Sampled { trials: u64, seed: u64, failing: Option<Vec<usize>> },
    Skipped { reason: String },
}

impl MdsReport {
    pub fn failing(&self) -> Option<&[usize]> {
        match self {
            MdsReport::Full { failing, .. } | MdsReport::Sampled { failing, .. } => failing.as_deref(),
            MdsReport::Skipped { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub power_sums_pass: bool,
    /// First (i, j) with a nonzero Hermitian power sum.
    pub power_sum_witness: Option<(usize, usize)>,
    pub gram_pass: bool,
    /// First nonzero entry of G·(G^(q))ᵀ.
    pub gram_witness: Option<(usize, usize)>,
    pub mds: MdsReport,
    /// Exhaustive minimum distance, when within budget.
    pub min_distance: Option<usize>,
    /// Minimum distance equals n - k + 1 (true when not enumerated).
    pub min_distance_pass: bool,
    pub computed: Option<QuantumParams>,
    pub claimed: Option<QuantumParams>,
    pub params_match: bool,
    pub singleton_pass: bool,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.power_sums_pass
            && self.gram_pass
            && self.mds.failing().is_none()
            && self.min_distance_pass
            && self.params_match
            && self.singleton_pass
    }
}

/// Runs every check on `code` and compares with `claimed` parameters.
pub fn full_verify(code: &GrsCode, claimed: Option<QuantumParams>, mds: MdsPolicy) -> VerificationReport {
    let mut notes = Vec::new();
    let power_sum_witness = code.first_nonvanishing_power_sum();
    let gram_witness = code.gram_witness();

    let (n, k) = (code.n() as u64, code.k() as u64);
    let mode = match mds {
        MdsPolicy::Auto { trials, seed } => {
            if binomial(n, k) <= EXHAUSTIVE_MDS_BUDGET {
                MdsMode::Exhaustive
            } else {
                MdsMode::Sampled { trials, seed }
            }
        }
        MdsPolicy::Exhaustive => MdsMode::Exhaustive,
        MdsPolicy::Sampled { trials, seed } => MdsMode::Sampled { trials, seed },
    };
    let mds = match code.mds_check(mode) {
        Ok(outcome) => match outcome.mode {
            MdsMode::Exhaustive => MdsReport::Full {
                checked: outcome.checked,
                failing: outcome.failing,
            },
            MdsMode::Sampled { trials, seed } => MdsReport::Sampled {
                trials,
                seed,
                failing: outcome.failing,
            },
        },
        Err(e) => {
            notes.push(format!("MDS check skipped: {e}"));
            MdsReport::Skipped { reason: e.to_string() }
        }
    };

    let min_distance = exhaustive_min_distance(code).ok();
    let computed = match code.quantum_params() {
        Ok(p) => Some(p),
        Err(e) => {
            notes.push(e.to_string());
            None
        }
    };
    let singleton_pass = computed.is_some_and(|p| p.is_mds());
    let params_match = match (claimed, computed) {
        (Some(c), Some(p)) => c == p,
        (None, _) => true,
        (Some(_), None) => false,
    };
    let min_distance_pass = min_distance.map_or(true, |d| d == code.n() - code.k() + 1);
    if !min_distance_pass {
        notes.push("minimum distance differs from n-k+1".into());
    }

    VerificationReport {
        power_sums_pass: power_sum_witness.is_none(),
        power_sum_witness,
        gram_pass: gram_witness.is_none(),
        gram_witness,
        mds,
        min_distance,
        min_distance_pass,
        computed,
        claimed,
        params_match,
        singleton_pass,
        notes,
    }
}
