//! Generalized Reed–Solomon codes GRS_k(a, v) over F_{q^2}, their Hermitian
//! self-orthogonality tests, MDS checks, and the maps to quantum code
//! parameters.

use std::fmt;
use std::sync::Arc;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{FieldContext, FieldElement};
use crate::mat::Matrix;

/// Exhaustive MDS checking is refused beyond this many column subsets.
pub const EXHAUSTIVE_MDS_BUDGET: u64 = 2_000_000;
pub const DEFAULT_MDS_TRIALS: u64 = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrsError {
    #[error("{locators} locators but {multipliers} multipliers")]
    LengthMismatch { locators: usize, multipliers: usize },
    #[error("locators {first} and {second} coincide")]
    DuplicateLocator { first: usize, second: usize },
    #[error("multiplier {0} is zero")]
    ZeroMultiplier(usize),
    #[error("dimension k = {k} outside 1..={n}")]
    BadDimension { k: usize, n: usize },
    #[error("element exponent {0} out of range for this field")]
    BadElement(u32),
    #[error("exhaustive check needs {needed} subsets, budget is {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("code is not Hermitian self-orthogonal: power sum ({i}, {j}) is nonzero")]
    NotSelfOrthogonal { i: usize, j: usize },
    #[error("Hermitian construction needs n ≥ 2k (n = {n}, k = {k})")]
    DimensionTooLarge { n: usize, k: usize },
    #[error("{0} does not meet the quantum Singleton bound with equality")]
    NotMds(QuantumParams),
    #[error("{0} has distance below 2 and cannot be propagated")]
    DistanceTooSmall(QuantumParams),
}

#[derive(Clone)]
pub struct GrsCode {
    ctx: Arc<FieldContext>,
    locators: Vec<FieldElement>,
    multipliers: Vec<FieldElement>,
    k: usize,
}

impl fmt::Debug for GrsCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GRS[{}, {}] over F_{}", self.n(), self.k, self.ctx.q() * self.ctx.q())
    }
}

impl GrsCode {
    pub fn new(
        ctx: Arc<FieldContext>,
        locators: Vec<FieldElement>,
        multipliers: Vec<FieldElement>,
        k: usize,
    ) -> Result<Self, GrsError> {
        if locators.len() != multipliers.len() {
            return Err(GrsError::LengthMismatch {
                locators: locators.len(),
                multipliers: multipliers.len(),
            });
        }
        let n = locators.len();
        if k == 0 || k > n {
            return Err(GrsError::BadDimension { k, n });
        }
        for &x in locators.iter().chain(&multipliers) {
            if let FieldElement::Pow(d) = x {
                if d >= ctx.order() {
                    return Err(GrsError::BadElement(d));
                }
            }
        }
        if let Some(i) = multipliers.iter().position(|v| v.is_zero()) {
            return Err(GrsError::ZeroMultiplier(i));
        }
        // Locators are distinct iff their slots in a q^2-sized table are.
        let mut seen = vec![usize::MAX; ctx.order() as usize + 1];
        for (i, &a) in locators.iter().enumerate() {
            let slot = a.log().map_or(0, |d| d as usize + 1);
            if seen[slot] != usize::MAX {
                return Err(GrsError::DuplicateLocator {
                    first: seen[slot],
                    second: i,
                });
            }
            seen[slot] = i;
        }
        Ok(GrsCode {
            ctx,
            locators,
            multipliers,
            k,
        })
    }

    pub fn ctx(&self) -> &Arc<FieldContext> {
        &self.ctx
    }

    pub fn n(&self) -> usize {
        self.locators.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn locators(&self) -> &[FieldElement] {
        &self.locators
    }

    pub fn multipliers(&self) -> &[FieldElement] {
        &self.multipliers
    }

    /// Same code with a different dimension.
    pub fn with_dimension(&self, k: usize) -> Result<Self, GrsError> {
        GrsCode::new(self.ctx.clone(), self.locators.clone(), self.multipliers.clone(), k)
    }

    /// k×n matrix with entry (i, j) = v_j · a_j^i.
    pub fn generator_matrix(&self) -> Matrix {
        let ctx = &self.ctx;
        let entries = (0..self.k)
            .flat_map(|i| {
                self.locators
                    .iter()
                    .zip(&self.multipliers)
                    .map(move |(&a, &v)| ctx.mul(v, ctx.pow_u(a, i as u64)))
            })
            .collect();
        Matrix::new(ctx.clone(), self.k, self.n(), entries).expect("k·n entries")
    }

    /// ⟨a^{qi+j}, v^{q+1}⟩ = Σ_l a_l^{qi+j} v_l^{q+1}, with 0^0 = 1.
    pub fn hermitian_power_sum(&self, i: usize, j: usize) -> FieldElement {
        let ctx = &self.ctx;
        let exp = ctx.q() as u64 * i as u64 + j as u64;
        ctx.sum(
            self.locators
                .iter()
                .zip(&self.multipliers)
                .map(|(&a, &v)| ctx.mul(ctx.pow_u(a, exp), ctx.norm(v))),
        )
    }

    /// Lexicographically first (i, j), 0 ≤ i, j < k, whose power sum is
    /// nonzero.
    pub fn first_nonvanishing_power_sum(&self) -> Option<(usize, usize)> {
        (0..self.k)
            .flat_map(|i| (0..self.k).map(move |j| (i, j)))
            .find(|&(i, j)| !self.hermitian_power_sum(i, j).is_zero())
    }

    /// C ⊆ C^{⊥H} via the power-sum criterion.
    pub fn is_hermitian_self_orthogonal(&self) -> bool {
        self.first_nonvanishing_power_sum().is_none()
    }

    /// Independent containment test: G · (G^{(q)})ᵀ = 0. Returns the first
    /// nonzero entry of the product, if any.
    pub fn gram_witness(&self) -> Option<(usize, usize)> {
        let g = self.generator_matrix();
        let gram = g.mul(&g.conjugate().transpose()).expect("k×n by n×k");
        (0..self.k)
            .flat_map(|r| (0..self.k).map(move |c| (r, c)))
            .find(|&(r, c)| !gram.get(r, c).is_zero())
    }

    pub fn gram_check(&self) -> bool {
        self.gram_witness().is_none()
    }

    /// Every k columns of the generator matrix are independent.
    pub fn mds_check(&self, mode: MdsMode) -> Result<MdsOutcome, GrsError> {
        let g = self.generator_matrix();
        let (n, k) = (self.n(), self.k);
        match mode {
            MdsMode::Exhaustive => {
                let total = binomial(n as u64, k as u64);
                if total > EXHAUSTIVE_MDS_BUDGET {
                    return Err(GrsError::BudgetExceeded {
                        needed: total,
                        budget: EXHAUSTIVE_MDS_BUDGET,
                    });
                }
                let failing = first_singular_subset(&g, n, k, total);
                Ok(MdsOutcome {
                    mode,
                    checked: total,
                    failing,
                })
            }
            MdsMode::Sampled { trials, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let subsets: Vec<Vec<usize>> = (0..trials)
                    .map(|_| {
                        let mut s = sample(&mut rng, n, k).into_vec();
                        s.sort_unstable();
                        s
                    })
                    .collect();
                let failing = subsets
                    .par_iter()
                    .find_first(|cols| !columns_independent(&g, cols))
                    .cloned();
                Ok(MdsOutcome {
                    mode,
                    checked: trials,
                    failing,
                })
            }
        }
    }

    /// [[n, n-2k, k+1]]_q from the Hermitian construction.
    pub fn quantum_params(&self) -> Result<QuantumParams, GrsError> {
        if let Some((i, j)) = self.first_nonvanishing_power_sum() {
            return Err(GrsError::NotSelfOrthogonal { i, j });
        }
        let (n, k) = (self.n(), self.k);
        if n < 2 * k {
            return Err(GrsError::DimensionTooLarge { n, k });
        }
        Ok(QuantumParams {
            n,
            k: n - 2 * k,
            d: k + 1,
            q: self.ctx.q(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MdsMode {
    Exhaustive,
    Sampled { trials: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MdsOutcome {
    pub mode: MdsMode,
    pub checked: u64,
    /// A singular k-subset of columns, lexicographically first among those
    /// examined.
    pub failing: Option<Vec<usize>>,
}

impl MdsOutcome {
    pub fn passed(&self) -> bool {
        self.failing.is_none()
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

fn columns_independent(g: &Matrix, cols: &[usize]) -> bool {
    let ctx = g.ctx();
    let k = cols.len();
    let mut m: Vec<FieldElement> = (0..k)
        .flat_map(|r| cols.iter().map(move |&c| g.get(r, c)))
        .collect();
    for col in 0..k {
        let Some(p) = (col..k).find(|&r| !m[r * k + col].is_zero()) else {
            return false;
        };
        if p != col {
            for c in 0..k {
                m.swap(p * k + c, col * k + c);
            }
        }
        let inv = ctx.inv(m[col * k + col]).expect("nonzero pivot");
        for r in col + 1..k {
            let f = ctx.mul(m[r * k + col], inv);
            if f.is_zero() {
                continue;
            }
            for c in col..k {
                m[r * k + c] = ctx.sub(m[r * k + c], ctx.mul(f, m[col * k + c]));
            }
        }
    }
    true
}

/// Next k-combination of 0..n in lexicographic order.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let Some(i) = (0..k).rev().find(|&i| c[i] < n - k + i) else {
        return false;
    };
    c[i] += 1;
    for j in i + 1..k {
        c[j] = c[j - 1] + 1;
    }
    true
}

/// The combination of rank `idx` in lexicographic order.
fn unrank_combination(mut idx: u64, n: usize, k: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut start = 0;
    for slot in 0..k {
        let mut x = start;
        loop {
            let rest = binomial((n - x - 1) as u64, (k - slot - 1) as u64);
            if idx < rest {
                break;
            }
            idx -= rest;
            x += 1;
        }
        out.push(x);
        start = x + 1;
    }
    out
}

fn first_singular_subset(g: &Matrix, n: usize, k: usize, total: u64) -> Option<Vec<usize>> {
    const CHUNK: u64 = 4096;
    let chunks = total.div_ceil(CHUNK);
    (0..chunks).into_par_iter().find_map_first(|chunk| {
        let start = chunk * CHUNK;
        let end = (start + CHUNK).min(total);
        let mut comb = unrank_combination(start, n, k);
        for _ in start..end {
            if !columns_independent(g, &comb) {
                return Some(comb);
            }
            if !next_combination(&mut comb, n) {
                break;
            }
        }
        None
    })
}

/// Parameters [[n, k, d]]_q of a q-ary quantum code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuantumParams {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub q: u32,
}

impl fmt::Display for QuantumParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{},{}]]_{}", self.n, self.k, self.d, self.q)
    }
}

impl QuantumParams {
    /// 2d = n - k + 2.
    pub fn is_mds(&self) -> bool {
        self.n + 2 >= self.k && 2 * self.d == self.n + 2 - self.k
    }

    /// [[n, n-2k, k+1]] -> [[n-1, n-2k+1, k]].
    pub fn propagate(&self) -> Result<QuantumParams, GrsError> {
        if !self.is_mds() {
            return Err(GrsError::NotMds(*self));
        }
        if self.d < 2 {
            return Err(GrsError::DistanceTooSmall(*self));
        }
        Ok(QuantumParams {
            n: self.n - 1,
            k: self.k + 1,
            d: self.d - 1,
            q: self.q,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f49() -> Arc<FieldContext> {
        Arc::new(FieldContext::new(7, 1).unwrap())
    }

    fn exps(v: &[u32]) -> Vec<FieldElement> {
        v.iter().map(|&d| FieldElement::Pow(d)).collect()
    }

    #[test]
    fn validation() {
        let ctx = f49();
        assert!(matches!(
            GrsCode::new(ctx.clone(), exps(&[1, 2]), exps(&[0]), 1),
            Err(GrsError::LengthMismatch { .. })
        ));
        assert_eq!(
            GrsCode::new(ctx.clone(), exps(&[1, 1]), exps(&[0, 0]), 1).unwrap_err(),
            GrsError::DuplicateLocator { first: 0, second: 1 }
        );
        assert_eq!(
            GrsCode::new(
                ctx.clone(),
                vec![FieldElement::Zero, FieldElement::Zero],
                exps(&[0, 0]),
                1
            )
            .unwrap_err(),
            GrsError::DuplicateLocator { first: 0, second: 1 }
        );
        assert_eq!(
            GrsCode::new(ctx.clone(), exps(&[1, 2]), vec![FieldElement::ONE, FieldElement::Zero], 1)
                .unwrap_err(),
            GrsError::ZeroMultiplier(1)
        );
        assert!(matches!(
            GrsCode::new(ctx.clone(), exps(&[1, 2]), exps(&[0, 0]), 3),
            Err(GrsError::BadDimension { .. })
        ));
        assert_eq!(
            GrsCode::new(ctx, exps(&[48]), exps(&[0]), 1).unwrap_err(),
            GrsError::BadElement(48)
        );
    }

    #[test]
    fn generator_matrix_examples() {
        let ctx = f49();
        let code = GrsCode::new(ctx.clone(), exps(&[3, 9, 27]), exps(&[5, 6, 7]), 1).unwrap();
        assert_eq!(code.generator_matrix().row(0), exps(&[5, 6, 7]).as_slice());

        let code = GrsCode::new(ctx.clone(), vec![FieldElement::Zero, FieldElement::ONE], exps(&[0, 0]), 2)
            .unwrap();
        let g = code.generator_matrix();
        assert_eq!(g, Matrix::from_ints(ctx.clone(), &[&[1, 1], &[0, 1]]).unwrap());

        let code = GrsCode::new(ctx, exps(&[1, 4, 9, 16]), exps(&[2, 3, 5, 7]), 4).unwrap();
        assert_eq!(code.generator_matrix().rank(), 4);
    }

    #[test]
    fn norm_cancellation_instance() {
        // Exhaustive search over F_49 for a 2-position code with v = (x, x)
        // and locators (c, -c) whose (0,0) power sum vanishes. Since
        // v_l^{q+1} is identical in both slots the sum is 2·N(x) ≠ 0, so the
        // search must instead find a pair (x, y) with N(x) + N(y) = 0.
        let ctx = f49();
        let c = ctx.theta_pow(5);
        let mut found = None;
        'outer: for x in 0..48 {
            for y in 0..48 {
                let code = GrsCode::new(
                    ctx.clone(),
                    vec![c, ctx.neg(c)],
                    exps(&[x, y]),
                    1,
                )
                .unwrap();
                if code.hermitian_power_sum(0, 0).is_zero() {
                    found = Some((x, y));
                    break 'outer;
                }
            }
        }
        let (x, y) = found.expect("norms cancel for some pair");
        assert_eq!(
            ctx.add(ctx.norm(FieldElement::Pow(x)), ctx.norm(FieldElement::Pow(y))),
            FieldElement::Zero
        );
        let same = GrsCode::new(ctx.clone(), vec![c, ctx.neg(c)], exps(&[x, x]), 1).unwrap();
        assert!(!same.hermitian_power_sum(0, 0).is_zero());
    }

    #[test]
    fn characteristic_kills_norm_one_sums() {
        // Seven multipliers of norm 1 sum to 7 = 0 in characteristic 7.
        let ctx = f49();
        let locs: Vec<_> = (0..7).map(|d| ctx.theta_pow(d)).collect();
        let mults: Vec<_> = (0..7).map(|d| ctx.theta_pow(6 * d)).collect();
        assert!(mults.iter().all(|&v| ctx.norm(v) == ctx.one()));
        let code = GrsCode::new(ctx, locs, mults, 1).unwrap();
        assert!(code.hermitian_power_sum(0, 0).is_zero());
        assert!(code.is_hermitian_self_orthogonal());
        assert!(code.gram_check());
        assert_eq!(code.quantum_params().unwrap(), QuantumParams { n: 7, k: 5, d: 2, q: 7 });
    }

    #[test]
    fn power_sum_origin_is_in_subfield() {
        let ctx = f49();
        let code = GrsCode::new(ctx.clone(), exps(&[1, 2, 3]), exps(&[4, 11, 30]), 2).unwrap();
        assert!(ctx.in_base_field(code.hermitian_power_sum(0, 0)));
    }

    #[test]
    fn k1_failure_at_origin() {
        let ctx = f49();
        let code = GrsCode::new(ctx, exps(&[1, 2]), exps(&[0, 0]), 1).unwrap();
        assert_eq!(code.first_nonvanishing_power_sum(), Some((0, 0)));
        assert_eq!(code.gram_witness(), Some((0, 0)));
        assert_eq!(
            code.quantum_params().unwrap_err(),
            GrsError::NotSelfOrthogonal { i: 0, j: 0 }
        );
    }

    #[test]
    fn mds_examples() {
        let ctx = f49();
        let code = GrsCode::new(ctx.clone(), exps(&[1, 2, 3]), exps(&[0, 5, 9]), 3).unwrap();
        let out = code.mds_check(MdsMode::Exhaustive).unwrap();
        assert!(out.passed());
        assert_eq!(out.checked, 1);

        let locs: Vec<_> = (0..12).map(|d| ctx.theta_pow(d)).collect();
        let code = GrsCode::new(ctx.clone(), locs, exps(&[0; 12]), 4).unwrap();
        assert!(code.mds_check(MdsMode::Exhaustive).unwrap().passed());
        let sampled = code
            .mds_check(MdsMode::Sampled { trials: 500, seed: 3 })
            .unwrap();
        assert!(sampled.passed());
        assert_eq!(sampled.checked, 500);

        let locs: Vec<_> = (0..48).map(|d| ctx.theta_pow(d)).collect();
        let big = GrsCode::new(ctx, locs, exps(&[0; 48]), 10).unwrap();
        assert!(matches!(
            big.mds_check(MdsMode::Exhaustive),
            Err(GrsError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn repeated_locator_column_is_found() {
        // Bypass validation to inject proportional columns 1 and 3.
        let ctx = f49();
        let code = GrsCode {
            ctx: ctx.clone(),
            locators: exps(&[1, 2, 3, 2]),
            multipliers: exps(&[0, 0, 0, 7]),
            k: 2,
        };
        let out = code.mds_check(MdsMode::Exhaustive).unwrap();
        assert_eq!(out.failing, Some(vec![1, 3]));
    }

    #[test]
    fn combination_ranking() {
        let mut c = vec![0, 1, 2];
        let mut idx = 0;
        loop {
            assert_eq!(unrank_combination(idx, 6, 3), c);
            idx += 1;
            if !next_combination(&mut c, 6) {
                break;
            }
        }
        assert_eq!(idx, binomial(6, 3));
        assert_eq!(binomial(25, 5), 53130);
        assert_eq!(binomial(3, 5), 0);
    }

    #[test]
    fn quantum_maps() {
        let p = QuantumParams { n: 25, k: 15, d: 6, q: 7 };
        assert!(p.is_mds());
        let next = p.propagate().unwrap();
        assert_eq!(next, QuantumParams { n: 24, k: 16, d: 5, q: 7 });
        assert!(next.is_mds());

        let p = QuantumParams { n: 10, k: 8, d: 2, q: 7 };
        assert_eq!(p.propagate().unwrap(), QuantumParams { n: 9, k: 9, d: 1, q: 7 });
        let bottom = QuantumParams { n: 9, k: 9, d: 1, q: 7 };
        assert_eq!(bottom.propagate(), Err(GrsError::DistanceTooSmall(bottom)));
        let not_mds = QuantumParams { n: 25, k: 15, d: 5, q: 7 };
        assert_eq!(not_mds.propagate(), Err(GrsError::NotMds(not_mds)));
        assert_eq!(p.to_string(), "[[10,8,2]]_7");
    }
}
