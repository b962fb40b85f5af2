//! Closed-form index sets: the residues s ∈ [0, 2h) with q·i + j + shift = s·m
//! for some 0 ≤ i, j < k, together with the (i, j) pair hitting each one.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{Bound, ConstructionParams, Family};

/// One of the six index-set lemmas: one per family, F3 and F4 have two parts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IndexLemma {
    pub family: Family,
    pub part: u8,
}

impl IndexLemma {
    pub fn all() -> Vec<IndexLemma> {
        [(Family::F1, 1), (Family::F2, 1), (Family::F3, 1), (Family::F3, 2), (Family::F4, 1), (Family::F4, 2)]
            .into_iter()
            .map(|(family, part)| IndexLemma { family, part })
            .collect()
    }

    /// Admissible t for this lemma at the given h.
    pub fn t_range(self, h: u64) -> std::ops::RangeInclusive<u64> {
        match (self.family, self.part) {
            (Family::F1, _) | (Family::F3, 1) | (Family::F4, 1) => 0..=h / 2 - 1,
            _ => 1..=h / 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SIndexSet {
    pub shift: u64,
    pub values: BTreeSet<u64>,
    pub witnesses: BTreeMap<u64, (u64, u64)>,
}

/// Upper bound on k under which the lemma's candidate list is exact.
pub fn lemma_k_bound(lemma: IndexLemma, q: u64, h: u64, t: u64) -> Option<Bound> {
    let d = lemma.family.quotient(q, h)? as i64;
    let (h, t) = (h as i64, t as i64);
    let twice = match (lemma.family, lemma.part) {
        (Family::F1, 1) => (h + 2 * t + 1) * d + 1,
        (Family::F2, 1) => (h + 2 * t) * d,
        (Family::F3, 1) => (h + 2 * t + 1) * d - 3,
        (Family::F3, 2) => (h + 2 * t) * d - 2,
        (Family::F4, 1) => (h + 2 * t + 1) * d - 3,
        (Family::F4, 2) => (h + 2 * t) * d - 4,
        _ => return None,
    };
    Some(Bound::from_twice(twice))
}

/// {a, a+2, ..., ≤ b}; empty when a > b.
fn progression(a: i64, b: i64) -> impl Iterator<Item = i64> {
    (a..=b).step_by(2)
}

/// The lemma's residue list at full strength (k at its bound).
fn candidates(lemma: IndexLemma, h: u64, t: u64) -> BTreeSet<u64> {
    let (h, t) = (h as i64, t as i64);
    let mut out: BTreeSet<i64> = BTreeSet::new();
    match (lemma.family, lemma.part) {
        (Family::F1, _) => {
            out.insert(0);
            out.extend(progression(1, 2 * t - 1));
            out.extend(progression(h + 1, h + 2 * t - 1));
            out.extend(progression(2, h + 2 * t));
        }
        (Family::F2, _) => {
            out.extend(progression(2, 2 * t - 2));
            out.extend(progression(h + 2, h + 2 * t - 2));
            out.extend(progression(1, h + 2 * t - 1));
        }
        (Family::F3, part) => {
            out.insert(0);
            out.extend(progression(1, h - 1));
            let widen = if part == 1 { 0 } else { 2 };
            out.extend(progression(h - 2 * t + widen, h + 2 * t - widen));
            out.extend(progression(2 * h - 2 * t + 1, h + 2 * t - 1));
        }
        (Family::F4, part) => {
            out.extend(progression(2, h - 2));
            out.extend(progression(h - 2 * t + 1, h + 2 * t - 1));
            let widen = if part == 1 { 0 } else { 2 };
            out.extend(progression(2 * h - 2 * t + widen, h + 2 * t - widen));
        }
    }
    out.into_iter().map(|s| s as u64).collect()
}

/// The unique (i, j), 0 ≤ j < q, with q·i + j + shift = s·m.
fn witness(family: Family, q: u64, h: u64, s: u64) -> Option<(u64, u64)> {
    let d = family.quotient(q, h)? as i64;
    let (q, h, s) = (q as i64, h as i64, s as i64);
    let tau = (d - 1) / 2;
    let (i, j) = match family {
        Family::F1 if s % 2 == 0 => (s * d / 2, s * d / 2),
        Family::F1 if s < h => ((s * d - 1) / 2, ((h + s) * d + 1) / 2),
        Family::F1 => ((s * d + 1) / 2, ((s - h) * d - 1) / 2),
        Family::F2 if s % 2 == 1 => ((s - 1) * d / 2 + tau, (s - 1) * d / 2 + tau),
        Family::F2 if s <= h => (s * d / 2 - 1, (h + s) * d / 2),
        Family::F2 => (s * d / 2, (s - h) * d / 2 - 1),
        Family::F3 if s == 0 => (0, 0),
        Family::F3 if s % 2 == 0 => (s * d / 2 - 1, (2 * h - s) * d / 2 - 1),
        Family::F3 if s < h => ((s * d - 1) / 2, (q - s * d) / 2),
        Family::F3 => ((s * d - 3) / 2, ((3 * h - s) * d - 3) / 2),
        Family::F4 if s % 2 == 1 => ((s * d - 3) / 2, ((2 * h - s) * d - 3) / 2),
        Family::F4 if s < h => (s * d / 2 - 1, (q - 1) / 2 - s * d / 2),
        Family::F4 => (s * d / 2 - 2, (3 * h - s) * d / 2 - 2),
    };
    (i >= 0 && j >= 0).then_some((i as u64, j as u64))
}

/// Index set of a lemma at (h, t) restricted to pairs with max(i, j) < k.
pub fn closed_form_s_set(lemma: IndexLemma, q: u64, h: u64, t: u64, k: u64) -> Option<SIndexSet> {
    lemma.family.quotient(q, h)?;
    let shift = lemma.family.shift(q);
    let mut witnesses = BTreeMap::new();
    for s in candidates(lemma, h, t) {
        let (i, j) = witness(lemma.family, q, h, s)?;
        if i < k && j < k {
            witnesses.insert(s, (i, j));
        }
    }
    Some(SIndexSet {
        shift,
        values: witnesses.keys().copied().collect(),
        witnesses,
    })
}

/// Index set for a validated construction at its own k.
pub fn s_set(params: &ConstructionParams) -> SIndexSet {
    s_set_at(params, params.k)
}

pub(crate) fn s_set_at(params: &ConstructionParams, k: u64) -> SIndexSet {
    closed_form_s_set(params.lemma, params.q, params.h, params.t, k)
        .expect("validated parameters always have a quotient")
}
