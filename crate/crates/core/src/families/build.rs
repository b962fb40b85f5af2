use serde::{Deserialize, Serialize};

use crate::gf::FieldElement;
use crate::grs::GrsCode;
use crate::mat::{find_all_nonzero, find_all_nonzero_with, MatError, Matrix};

use super::sset::s_set_at;
use super::{ConstructionParams, FamilyError};

/// How the multiplier system was shown to have a solution in (F_q^*)^n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolvabilityRoute {
    /// No conditions: every vector works.
    Unconstrained,
    /// F_q-valued matrix whose rank survives deleting any column.
    RankCondition,
    /// Matrix row-equivalent to its Frobenius conjugate.
    RowEquivalence,
    /// The coset system has no all-nonzero F_q solution; one weight per
    /// locator was solved for directly from the power-sum conditions.
    DirectWeights,
}

/// Random draws for the per-locator fallback search.
pub const DIRECT_WEIGHT_ATTEMPTS: u64 = 2_000_000;

#[derive(Clone, Debug)]
pub struct Construction {
    pub params: ConstructionParams,
    pub code: GrsCode,
    pub matrix: Matrix,
    pub route: SolvabilityRoute,
    /// The F_q^* kernel vector the multipliers were derived from: one entry
    /// per unknown of `matrix`, or per locator for [`SolvabilityRoute::DirectWeights`].
    pub solution: Vec<FieldElement>,
    pub seed: u64,
}

/// Zero (families with it), then θ^{i_l}·γ^ν for each coset and ν < m.
pub fn build_locators(params: &ConstructionParams) -> Vec<FieldElement> {
    let ctx = params.ctx();
    let mut out = Vec::with_capacity(params.n() as usize);
    if params.family.has_zero_locator() {
        out.push(ctx.zero());
    }
    for &i in &params.coset_exponents {
        for nu in 0..params.m {
            out.push(ctx.theta_pow((i + 2 * params.h * nu) as i64));
        }
    }
    out
}

/// One row per residue the multipliers must annihilate, taken at the
/// largest admissible k so that one code serves every smaller k.
///
/// With the zero locator the first column is its unknown and the s = 0
/// condition reads u_0 + Σ u_l = 0. Without it, the column for coset l
/// carries α^{i_l s}·ξ^{i_l}.
pub fn build_coefficient_matrix(params: &ConstructionParams) -> Matrix {
    let ctx = params.ctx();
    let alpha = params.alpha();
    let xi = params.xi();
    let index_set = s_set_at(params, params.kmax.value as u64);
    let mut rows = Vec::new();
    for &s in &index_set.values {
        let mut row = Vec::with_capacity(params.unknowns() as usize);
        if params.family.has_zero_locator() {
            row.push(if s == 0 { ctx.one() } else { ctx.zero() });
        }
        for &i in &params.coset_exponents {
            let entry = ctx.pow_u(alpha, i * s);
            row.push(if params.family.has_zero_locator() {
                entry
            } else {
                ctx.mul(entry, ctx.pow_u(xi, i))
            });
        }
        rows.push(row);
    }
    Matrix::from_rows(ctx.clone(), params.unknowns() as usize, rows).expect("rows have equal width")
}

/// Builds the Hermitian self-orthogonal GRS code of a validated instance.
pub fn construct(params: &ConstructionParams, seed: u64) -> Result<Construction, FamilyError> {
    let ctx = params.ctx().clone();
    let matrix = build_coefficient_matrix(params);

    let route = if matrix.rows() == 0 {
        SolvabilityRoute::Unconstrained
    } else if matrix.entries().iter().all(|&x| ctx.in_base_field(x)) {
        if !matrix.rank_survives_column_deletion()? {
            return Err(FamilyError::SolvabilityRouteFailed {
                reason: "rank drops when a column is deleted".into(),
                matrix: matrix.to_grid(),
            });
        }
        SolvabilityRoute::RankCondition
    } else {
        if !matrix.row_equivalent(&matrix.conjugate())? {
            return Err(FamilyError::SolvabilityRouteFailed {
                reason: "matrix is not row-equivalent to its conjugate".into(),
                matrix: matrix.to_grid(),
            });
        }
        SolvabilityRoute::RowEquivalence
    };

    let basis = matrix.base_field_solutions();
    let locators = build_locators(params);
    let (route, solution, multipliers) = match find_all_nonzero(&ctx, &basis, seed) {
        Ok(sol) => {
            let solution = sol.into_inner();
            let multipliers = coset_multipliers(params, &solution)?;
            (route, solution, multipliers)
        }
        Err(MatError::NotFound { .. }) => {
            let solution = direct_weights(params, &locators, seed)?;
            let multipliers = solution
                .iter()
                .map(|&w| ctx.solve_norm(w))
                .collect::<Result<Vec<_>, _>>()?;
            (SolvabilityRoute::DirectWeights, solution, multipliers)
        }
        Err(e) => return Err(e.into()),
    };

    let code = GrsCode::new(ctx, locators, multipliers, params.k as usize)?;
    if let Some((i, j)) = code.first_nonvanishing_power_sum() {
        return Err(FamilyError::NotSelfOrthogonal { i, j });
    }
    Ok(Construction {
        params: params.clone(),
        code,
        matrix,
        route,
        solution,
        seed,
    })
}

/// Multipliers from a coset-level solution u: v^{q+1} = u on each coset,
/// with m·u_0 for the zero locator and the θ^{νh} pattern without it.
fn coset_multipliers(params: &ConstructionParams, solution: &[FieldElement]) -> Result<Vec<FieldElement>, FamilyError> {
    let ctx = params.ctx();
    let m = params.m as usize;
    let mut multipliers = Vec::with_capacity(params.n() as usize);
    let coset_solution = if params.family.has_zero_locator() {
        let scaled = ctx.mul(solution[0], ctx.from_int(params.m as i64));
        multipliers.push(ctx.solve_norm(scaled)?);
        &solution[1..]
    } else {
        solution
    };
    for &u in coset_solution {
        let v = ctx.solve_norm(u)?;
        if params.family.has_zero_locator() {
            multipliers.extend(std::iter::repeat_n(v, m));
        } else {
            multipliers.extend((0..params.m).map(|nu| ctx.mul(v, ctx.theta_pow((nu * params.h) as i64))));
        }
    }
    Ok(multipliers)
}

/// Weights w ∈ (F_q^*)^n with Σ_l a_l^{qi+j} w_l = 0 for all i, j < kmax.
fn direct_weights(
    params: &ConstructionParams,
    locators: &[FieldElement],
    seed: u64,
) -> Result<Vec<FieldElement>, FamilyError> {
    let ctx = params.ctx();
    let order = ctx.order() as u64;
    let k = params.kmax.value as u64;
    let exponents: std::collections::BTreeSet<u64> =
        (0..k).flat_map(|i| (0..k).map(move |j| (params.q * i + j) % order)).collect();
    let rows = exponents
        .iter()
        .map(|&e| locators.iter().map(|&a| ctx.pow_u(a, e)).collect())
        .collect();
    let system = Matrix::from_rows(ctx.clone(), locators.len(), rows)?;
    let basis = system.base_field_solutions();
    Ok(find_all_nonzero_with(ctx, &basis, seed, DIRECT_WEIGHT_ATTEMPTS)?.into_inner())
}
