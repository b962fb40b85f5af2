//! The four coset-based constructions of Hermitian self-orthogonal GRS
//! codes over F_{q^2}.
//!
//! Throughout, q^2 - 1 = 2hm with h even, θ is the context's primitive
//! element, γ = θ^{2h} generates the order-m subgroup, α = θ^m, β = θ^{2m},
//! and ξ = θ^{-(q+1)/2}. The locators are unions of r cosets θ^{i_l}⟨γ⟩:
//!
//! | family | (q∓1)/h odd | zero locator | length     |
//! |--------|-------------|--------------|------------|
//! | F1     | (q-1)/h     | yes          | r·m + 1    |
//! | F2     | (q-1)/h     | no           | r·m        |
//! | F3     | (q+1)/h     | yes          | r·m + 1    |
//! | F4     | (q+1)/h     | no           | r·m        |
//!
//! Families without the zero locator scale coset l by the geometric
//! pattern v_l·θ^{νh}, which shifts the power-sum exponent by (q+1)/2.

mod build;
mod catalog;
mod sset;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{FieldContext, FieldElement, GfError};
use crate::grs::GrsError;
use crate::mat::MatError;

pub use build::{
    build_coefficient_matrix, build_locators, construct, Construction, SolvabilityRoute,
    DIRECT_WEIGHT_ATTEMPTS,
};
pub use catalog::{
    catalog, congruence_class, Catalog, CatalogEntry, CatalogError, CatalogOptions, CongruenceClass,
};
pub use sset::{closed_form_s_set, lemma_k_bound, s_set, IndexLemma, SIndexSet};

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("solvability route failed ({reason}) for matrix {matrix:?}")]
    SolvabilityRouteFailed {
        reason: String,
        matrix: Vec<Vec<FieldElement>>,
    },
    #[error("constructed code is not self-orthogonal at ({i}, {j})")]
    NotSelfOrthogonal { i: usize, j: usize },
    #[error(transparent)]
    Search(#[from] MatError),
    #[error(transparent)]
    Grs(#[from] GrsError),
    #[error(transparent)]
    Field(#[from] GfError),
}

fn violated(msg: impl Into<String>) -> FamilyError {
    FamilyError::HypothesisViolated(msg.into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Family {
    F1,
    F2,
    F3,
    F4,
}

impl From<Family> for u8 {
    fn from(f: Family) -> u8 {
        f.number()
    }
}

impl TryFrom<u8> for Family {
    type Error = String;

    fn try_from(n: u8) -> Result<Self, String> {
        Family::from_number(n).ok_or_else(|| format!("family must be 1..=4, got {n}"))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}", self.number())
    }
}

impl Family {
    pub const ALL: [Family; 4] = [Family::F1, Family::F2, Family::F3, Family::F4];

    pub fn number(self) -> u8 {
        match self {
            Family::F1 => 1,
            Family::F2 => 2,
            Family::F3 => 3,
            Family::F4 => 4,
        }
    }

    pub fn from_number(n: u8) -> Option<Family> {
        Family::ALL.get((n as usize).wrapping_sub(1)).copied()
    }

    pub fn has_zero_locator(self) -> bool {
        matches!(self, Family::F1 | Family::F3)
    }

    /// F1/F2 need (q-1)/h odd; F3/F4 need (q+1)/h odd.
    pub fn uses_q_minus_one(self) -> bool {
        matches!(self, Family::F1 | Family::F2)
    }

    /// Power-sum exponent shift: 0, or (q+1)/2 for the geometric multipliers.
    pub fn shift(self, q: u64) -> u64 {
        if self.has_zero_locator() {
            0
        } else {
            (q + 1) / 2
        }
    }

    pub fn cases(self) -> &'static [u8] {
        match self {
            Family::F1 => &[1, 2],
            Family::F2 => &[1],
            Family::F3 => &[1, 2],
            Family::F4 => &[1, 2, 3],
        }
    }

    /// The odd quotient (q∓1)/h, or `None` if h does not qualify.
    pub fn quotient(self, q: u64, h: u64) -> Option<u64> {
        let base = if self.uses_q_minus_one() { q - 1 } else { q + 1 };
        (h >= 2 && h % 2 == 0 && base % h == 0)
            .then(|| base / h)
            .filter(|d| d % 2 == 1 && *d >= 3)
    }

    /// Every even h with (q∓1)/h = 2τ+1, τ ≥ 1.
    pub fn admissible_h(self, q: u64) -> Vec<u64> {
        (2..=q + 1).step_by(2).filter(|&h| self.quotient(q, h).is_some()).collect()
    }

    /// Allowed r for (family, case), plus the bound text used in errors.
    pub fn r_range(self, case: u8, h: u64) -> Option<(Vec<u64>, &'static str)> {
        let odd = |r: &u64| r % 2 == 1;
        let (range, text): (Vec<u64>, _) = match (self, case) {
            (Family::F1, 1) => ((h / 2 + 1..=h).collect(), "h/2+1≤r≤h"),
            (Family::F1, 2) => ((h + 1..2 * h).filter(odd).collect(), "odd h<r<2h"),
            (Family::F2, 1) => ((h / 2 + 2..=h).collect(), "h/2+1<r≤h"),
            (Family::F3, 1) => ((h + 1..3 * h / 2).filter(odd).collect(), "odd h<r<3h/2"),
            (Family::F3, 2) => ((3 * h / 2 + 1..2 * h).filter(odd).collect(), "odd 3h/2<r<2h"),
            (Family::F4, 1) => ((h / 2..=h).collect(), "h/2≤r≤h"),
            (Family::F4, 2) => ((h + 1..3 * h / 2).filter(odd).collect(), "odd h<r<3h/2"),
            (Family::F4, 3) => ((3 * h / 2..2 * h).filter(odd).collect(), "odd 3h/2≤r<2h"),
            _ => return None,
        };
        Some((range, text))
    }

    /// Which index-set lemma the (family, case) construction relies on,
    /// and its parameter t as a function of r.
    pub fn lemma_and_t(self, case: u8, h: u64, r: u64) -> Option<(IndexLemma, u64)> {
        let lemma = |part| IndexLemma { family: self, part };
        Some(match (self, case) {
            (Family::F1, 1) => (lemma(1), 0),
            (Family::F1, 2) => (lemma(1), (r - h - 1) / 2),
            (Family::F2, 1) => (lemma(1), 1),
            (Family::F3, 1) => (lemma(2), (r - h + 1) / 2),
            (Family::F3, 2) => (lemma(1), (r - h - 1) / 2),
            (Family::F4, 1) => (lemma(1), 0),
            (Family::F4, 2) => (lemma(1), (r - h + 1) / 2),
            (Family::F4, 3) => (lemma(2), (r - h + 1) / 2),
            _ => return None,
        })
    }
}

/// An upper bound of the form (integer)/2, flagged if it is not integral.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bound {
    pub value: i64,
    pub integral: bool,
}

impl Bound {
    pub(crate) fn from_twice(twice: i64) -> Bound {
        Bound {
            value: twice.div_euclid(2),
            integral: twice % 2 == 0,
        }
    }
}

/// Largest admissible k for (family, case) at the given q, h, r.
pub fn kmax(family: Family, case: u8, q: u64, h: u64, r: u64) -> Result<Bound, FamilyError> {
    let d = family.quotient(q, h).ok_or_else(|| quotient_violation(family))? as i64;
    let (range, text) = family
        .r_range(case, h)
        .ok_or_else(|| violated(format!("{family} has no case {case}")))?;
    if !range.contains(&r) {
        return Err(violated(format!("{family} case {case} requires {text} (h = {h}, r = {r})")));
    }
    let (h, r) = (h as i64, r as i64);
    let twice = match (family, case) {
        (Family::F1, 1) => (h + 1) * d + 1,
        (Family::F1, 2) => r * d + 1,
        (Family::F2, 1) => (h + 2) * d,
        (Family::F3, 1) => (r + 1) * d - 2,
        (Family::F3, 2) => r * d - 3,
        (Family::F4, 1) => (h + 1) * d - 3,
        (Family::F4, 2) => (r + 2) * d - 3,
        (Family::F4, 3) => (r + 1) * d - 4,
        _ => unreachable!("case checked by r_range"),
    };
    Ok(Bound::from_twice(twice))
}

fn quotient_violation(family: Family) -> FamilyError {
    let base = if family.uses_q_minus_one() { "q−1" } else { "q+1" };
    violated(format!("{family} requires even h with ({base})/h = 2τ+1, τ≥1"))
}

/// What a caller asks to build; [`validate`] turns it into
/// [`ConstructionParams`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamsRequest {
    pub family: Family,
    pub case: u8,
    pub h: u64,
    pub r: u64,
    pub k: u64,
    pub coset_exponents: Option<Vec<u64>>,
}

/// A validated family instance.
#[derive(Clone, Debug)]
pub struct ConstructionParams {
    ctx: Arc<FieldContext>,
    pub family: Family,
    pub case: u8,
    pub q: u64,
    pub h: u64,
    pub tau: u64,
    pub m: u64,
    pub r: u64,
    pub t: u64,
    pub k: u64,
    pub kmax: Bound,
    pub lemma: IndexLemma,
    pub coset_exponents: Vec<u64>,
    /// Conditions the construction does not meet literally but that do not
    /// block it (non-integral bounds, matrix width ≥ q+1).
    pub warnings: Vec<String>,
}

impl ConstructionParams {
    pub fn ctx(&self) -> &Arc<FieldContext> {
        &self.ctx
    }

    /// Code length n = r·m (+1 with the zero locator).
    pub fn n(&self) -> u64 {
        self.r * self.m + u64::from(self.family.has_zero_locator())
    }

    /// Column count of the coefficient matrix.
    pub fn unknowns(&self) -> u64 {
        self.r + u64::from(self.family.has_zero_locator())
    }

    pub fn gamma(&self) -> FieldElement {
        self.ctx.theta_pow(2 * self.h as i64)
    }

    pub fn alpha(&self) -> FieldElement {
        self.ctx.theta_pow(self.m as i64)
    }

    pub fn beta(&self) -> FieldElement {
        self.ctx.theta_pow(2 * self.m as i64)
    }

    pub fn xi(&self) -> FieldElement {
        self.ctx.xi()
    }

    /// Same instance at another dimension.
    pub fn with_k(&self, k: u64) -> Result<ConstructionParams, FamilyError> {
        validate(
            self.ctx.clone(),
            &ParamsRequest {
                family: self.family,
                case: self.case,
                h: self.h,
                r: self.r,
                k,
                coset_exponents: Some(self.coset_exponents.clone()),
            },
        )
    }
}

/// Checks every hypothesis of the (family, case) construction.
pub fn validate(ctx: Arc<FieldContext>, req: &ParamsRequest) -> Result<ConstructionParams, FamilyError> {
    let q = ctx.q() as u64;
    let ParamsRequest {
        family, case, h, r, k, ..
    } = *req;
    if !family.cases().contains(&case) {
        return Err(violated(format!(
            "{family} has cases {:?}, got {case}",
            family.cases()
        )));
    }
    let quotient = family.quotient(q, h).ok_or_else(|| quotient_violation(family))?;
    let tau = (quotient - 1) / 2;
    let m = (q * q - 1) / (2 * h);
    debug_assert_eq!(2 * h * m, q * q - 1);

    let bound = kmax(family, case, q, h, r)?;
    if k < 1 || k as i64 > bound.value {
        return Err(violated(format!(
            "{family} case {case} requires 1≤k≤{} (got k = {k})",
            bound.value
        )));
    }

    let coset_exponents = match &req.coset_exponents {
        Some(c) => c.clone(),
        None => (0..r).collect(),
    };
    if coset_exponents.len() as u64 != r {
        return Err(violated(format!(
            "need r = {r} coset exponents, got {}",
            coset_exponents.len()
        )));
    }
    for modulus in [2 * h, h] {
        if modulus == h && r > h {
            continue;
        }
        let mut seen = std::collections::HashSet::new();
        for &i in &coset_exponents {
            if !seen.insert(i % modulus) {
                return Err(violated(format!(
                    "coset exponents must be distinct modulo {modulus}"
                )));
            }
        }
    }

    let (lemma, t) = family.lemma_and_t(case, h, r).expect("case validated");
    let mut warnings = Vec::new();
    if !bound.integral {
        warnings.push(format!("k bound for {family} case {case} is not an integer; floored"));
    }
    let unknowns = r + u64::from(family.has_zero_locator());
    if unknowns > q {
        warnings.push(format!(
            "coefficient matrix has {unknowns} columns, outside the n < q+1 range of the nonzero-solution lemmas"
        ));
    }

    Ok(ConstructionParams {
        ctx,
        family,
        case,
        q,
        h,
        tau,
        m,
        r,
        t,
        k,
        kmax: bound,
        lemma,
        coset_exponents,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64) -> Arc<FieldContext> {
        Arc::new(FieldContext::new(p, 1).unwrap())
    }

    fn req(family: Family, case: u8, h: u64, r: u64, k: u64) -> ParamsRequest {
        ParamsRequest {
            family,
            case,
            h,
            r,
            k,
            coset_exponents: None,
        }
    }

    #[test]
    fn kmax_examples() {
        assert_eq!(kmax(Family::F1, 1, 7, 2, 2).unwrap().value, 5);
        assert_eq!(kmax(Family::F2, 1, 13, 4, 4).unwrap().value, 9);
        assert_eq!(kmax(Family::F3, 1, 11, 4, 5).unwrap().value, 8);
        assert_eq!(kmax(Family::F4, 1, 11, 4, 4).unwrap().value, 6);
        assert_eq!(kmax(Family::F4, 3, 11, 4, 7).unwrap().value, 10);
        assert!(kmax(Family::F1, 1, 7, 2, 2).unwrap().integral);
    }

    #[test]
    fn kmax_is_integral_on_every_admissible_instance() {
        for q in [3u64, 5, 7, 9, 11, 13, 17, 19, 23, 25, 27, 29, 31, 37, 41, 43, 47, 49] {
            for family in Family::ALL {
                for h in family.admissible_h(q) {
                    for &case in family.cases() {
                        for r in family.r_range(case, h).unwrap().0 {
                            let b = kmax(family, case, q, h, r).unwrap();
                            assert!(b.integral, "{family} case {case} q={q} h={h} r={r}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn validate_examples() {
        let p = validate(ctx(7), &req(Family::F1, 1, 2, 2, 5)).unwrap();
        assert_eq!(p.kmax.value, 5);
        assert_eq!((p.m, p.tau, p.t, p.n()), (12, 1, 0, 25));
        assert_eq!(p.coset_exponents, vec![0, 1]);
        assert!(p.warnings.is_empty());

        let err = validate(ctx(7), &req(Family::F1, 1, 2, 1, 5)).unwrap_err();
        assert!(err.to_string().contains("h/2+1≤r≤h"), "{err}");

        let p = validate(ctx(11), &req(Family::F4, 3, 4, 7, 10)).unwrap();
        assert_eq!((p.kmax.value, p.n()), (10, 105));

        let err = validate(ctx(7), &req(Family::F1, 1, 2, 2, 6)).unwrap_err();
        assert!(err.to_string().contains("1≤k≤5"), "{err}");
        assert!(validate(ctx(7), &req(Family::F1, 1, 2, 2, 0)).is_err());
        // (q-1)/h = 6/6 = 1 is odd but τ = 0.
        assert!(validate(ctx(7), &req(Family::F1, 1, 6, 4, 1)).is_err());
        assert!(validate(ctx(7), &req(Family::F2, 2, 2, 2, 1)).is_err());
    }

    #[test]
    fn coset_exponent_checks() {
        let mut r = req(Family::F1, 1, 2, 2, 5);
        r.coset_exponents = Some(vec![0, 2]);
        assert!(validate(ctx(7), &r).unwrap_err().to_string().contains("modulo 2"));
        r.coset_exponents = Some(vec![1, 4]);
        assert!(validate(ctx(7), &r).is_ok());
        r.coset_exponents = Some(vec![1]);
        assert!(validate(ctx(7), &r).is_err());
    }

    #[test]
    fn derived_elements() {
        let p = validate(ctx(7), &req(Family::F1, 1, 2, 2, 5)).unwrap();
        let c = p.ctx().clone();
        assert_eq!(p.gamma(), c.theta_pow(4));
        assert_eq!(p.beta(), c.neg(c.one()));
        assert_eq!(c.pow_u(p.gamma(), p.m), c.one());
        assert_eq!(c.pow_u(p.alpha(), 2 * p.h), c.one());
        assert_eq!(c.frobenius(p.xi()), c.neg(p.xi()));
    }

    #[test]
    fn admissible_h_values() {
        assert_eq!(Family::F1.admissible_h(7), vec![2]);
        assert_eq!(Family::F1.admissible_h(13), vec![4]);
        assert!(Family::F1.admissible_h(9).is_empty());
        assert_eq!(Family::F3.admissible_h(11), vec![4]);
        assert_eq!(Family::F3.admissible_h(5), vec![2]);
        assert!(Family::F3.admissible_h(3).is_empty());
    }
}
