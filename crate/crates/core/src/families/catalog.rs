use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{prime_power, FieldContext, GfError, DEFAULT_TABLE_BUDGET};
use crate::grs::{QuantumParams, DEFAULT_MDS_TRIALS};
use crate::oracle::{full_verify, MdsPolicy, VerificationReport};

use super::{construct, kmax, validate, Family, FamilyError, ParamsRequest};

/// Divisibility class of a length n relative to q ± 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceClass {
    pub label: String,
    /// Full modulus (q+1 or q-1) divides n or n-1.
    pub full_modulus: bool,
}

impl CongruenceClass {
    /// n ≡ 0 or 1 modulo (q+1)/2 or (q-1)/2.
    pub fn in_half_modulus_class(&self) -> bool {
        self.label != "none"
    }
}

/// The strongest of "(q±1) | n or n-1", "(q±1)/2 | n or n-1".
pub fn congruence_class(n: u64, q: u64) -> CongruenceClass {
    let mut best: Option<(u64, String, bool)> = None;
    for (target, name) in [(n.saturating_sub(1), "(n-1)"), (n, "n")] {
        for (modulus, mname) in [(q + 1, "(q+1)"), (q - 1, "(q-1)")] {
            let (eff, label, full) = if target % modulus == 0 {
                (modulus, format!("{mname} | {name}"), true)
            } else if target % (modulus / 2) == 0 {
                (modulus / 2, format!("{mname} ∤ {name}, {mname}/2 | {name}"), false)
            } else {
                continue;
            };
            if best.as_ref().map_or(true, |b| eff > b.0) {
                best = Some((eff, label, full));
            }
        }
    }
    match best {
        Some((_, label, full_modulus)) => CongruenceClass { label, full_modulus },
        None => CongruenceClass {
            label: "none".into(),
            full_modulus: false,
        },
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CatalogOptions {
    pub qmax: u64,
    pub seed: u64,
    pub mds_trials: u64,
    pub table_budget: u64,
    /// Run the full oracle verification on every construction. When off,
    /// only the power-sum check done by `construct` guards each row.
    pub verify: bool,
}

impl Default for CatalogOptions {
    fn default() -> Self {
        CatalogOptions {
            qmax: 13,
            seed: 0,
            mds_trials: DEFAULT_MDS_TRIALS,
            table_budget: DEFAULT_TABLE_BUDGET,
            verify: true,
        }
    }
}

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("q = {q}: {source}")]
    Field { q: u64, source: GfError },
    #[error("{family} case {case} q={q} h={h} r={r}: {source}")]
    Construction {
        family: Family,
        case: u8,
        q: u64,
        h: u64,
        r: u64,
        source: FamilyError,
    },
    #[error("{family} case {case} q={q} h={h} r={r} failed verification: {report:?}")]
    Verification {
        family: Family,
        case: u8,
        q: u64,
        h: u64,
        r: u64,
        report: Box<VerificationReport>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub q: u64,
    pub family: Family,
    pub case: u8,
    pub h: u64,
    pub r: u64,
    /// Classical dimension; for propagated rows, that of the parent minus one.
    pub k: u64,
    pub n: u64,
    pub quantum: QuantumParams,
    pub congruence_class: String,
    pub provenance: Vec<String>,
    pub propagated: bool,
    /// Length outside the n ≡ 0, 1 (mod q ± 1) classes.
    pub new_length: bool,
    /// d > q/2 + 1.
    pub large_distance: bool,
}

fn tag(family: Family, case: u8) -> String {
    format!("{family}.{case}")
}

fn entry(q: u64, family: Family, case: u8, h: u64, r: u64, k: u64, quantum: QuantumParams, propagated: bool) -> CatalogEntry {
    let n = quantum.n as u64;
    let class = congruence_class(n, q);
    let base = tag(family, case);
    CatalogEntry {
        q,
        family,
        case,
        h,
        r,
        k,
        n,
        quantum,
        new_length: !class.full_modulus,
        congruence_class: class.label,
        provenance: vec![if propagated { format!("propagate({base})") } else { base }],
        propagated,
        large_distance: 2 * quantum.d as u64 > q + 2,
    }
}

struct Job {
    ctx: Arc<FieldContext>,
    request: ParamsRequest,
    q: u64,
}

/// Verified rows, plus the instances that could not be built or verified.
#[derive(Debug, Default)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
    pub skipped: Vec<CatalogError>,
}

/// Every construction for odd prime powers q ≤ `qmax`, built at the largest
/// admissible k and verified before it is listed, plus propagated rows for
/// the families with a zero locator. Rows sharing (q, n, k) are merged.
pub fn catalog(opts: &CatalogOptions) -> Result<Catalog, CatalogError> {
    let mut jobs = Vec::new();
    for q in (3..=opts.qmax).step_by(2) {
        let Some((p, e)) = prime_power(q) else { continue };
        let ctx = Arc::new(
            FieldContext::with_budget(p, e, opts.table_budget).map_err(|source| CatalogError::Field { q, source })?,
        );
        for family in Family::ALL {
            for h in family.admissible_h(q) {
                for &case in family.cases() {
                    for r in family.r_range(case, h).expect("listed case").0 {
                        let bound = kmax(family, case, q, h, r).expect("admissible instance");
                        if bound.value < 1 {
                            continue;
                        }
                        jobs.push(Job {
                            ctx: ctx.clone(),
                            q,
                            request: ParamsRequest {
                                family,
                                case,
                                h,
                                r,
                                k: bound.value as u64,
                                coset_exponents: None,
                            },
                        });
                    }
                }
            }
        }
    }

    let results: Vec<Result<Vec<CatalogEntry>, CatalogError>> = jobs
        .par_iter()
        .map(|job| {
            let ParamsRequest { family, case, h, r, k, .. } = job.request;
            let q = job.q;
            let fail = |source| CatalogError::Construction {
                family,
                case,
                q,
                h,
                r,
                source,
            };
            let params = validate(job.ctx.clone(), &job.request).map_err(fail)?;
            let built = construct(&params, opts.seed).map_err(fail)?;
            let quantum = if opts.verify {
                let report = full_verify(
                    &built.code,
                    None,
                    MdsPolicy::Auto {
                        trials: opts.mds_trials,
                        seed: opts.seed,
                    },
                );
                match report.computed {
                    Some(qp) if report.all_pass() => qp,
                    _ => {
                        return Err(CatalogError::Verification {
                            family,
                            case,
                            q,
                            h,
                            r,
                            report: Box::new(report),
                        })
                    }
                }
            } else {
                built.code.quantum_params().map_err(|e| fail(e.into()))?
            };
            let mut rows = vec![entry(q, family, case, h, r, k, quantum, false)];
            if family.has_zero_locator() && quantum.d > 2 {
                let child = quantum.propagate().expect("verified MDS parameters");
                rows.push(entry(q, family, case, h, r, k - 1, child, true));
            }
            Ok(rows)
        })
        .collect();
    let mut skipped = Vec::new();
    let mut all: Vec<CatalogEntry> = Vec::new();
    for r in results {
        match r {
            Ok(rows) => all.extend(rows),
            Err(e) => skipped.push(e),
        }
    }

    let mut merged: BTreeMap<(u64, u64, u64), CatalogEntry> = BTreeMap::new();
    all.sort_by_key(sort_key);
    for e in all {
        match merged.get_mut(&(e.q, e.n, e.k)) {
            Some(kept) => {
                for p in e.provenance {
                    if !kept.provenance.contains(&p) {
                        kept.provenance.push(p);
                    }
                }
            }
            None => {
                merged.insert((e.q, e.n, e.k), e);
            }
        }
    }
    let mut out: Vec<CatalogEntry> = merged.into_values().collect();
    out.sort_by_key(sort_key);
    Ok(Catalog { entries: out, skipped })
}

fn sort_key(e: &CatalogEntry) -> (u64, u64, u64, Family, u8, u64, u64, bool) {
    (e.q, e.n, e.k, e.family, e.case, e.h, e.r, e.propagated)
}
