use std::sync::Arc;

use qmds::families::{
    build_coefficient_matrix, closed_form_s_set, construct, kmax, lemma_k_bound, s_set, validate, Family,
    IndexLemma, ParamsRequest,
};
use qmds::gf::{prime_power, FieldContext, FieldElement};
use qmds::grs::GrsCode;
use qmds::oracle::{brute_force_s_set, full_verify, MdsPolicy};

fn field(q: u64) -> Arc<FieldContext> {
    let (p, e) = prime_power(q).unwrap();
    Arc::new(FieldContext::new(p, e).unwrap())
}

fn request(family: Family, case: u8, h: u64, r: u64, k: u64) -> ParamsRequest {
    ParamsRequest {
        family,
        case,
        h,
        r,
        k,
        coset_exponents: None,
    }
}

/// (q, family, case, h, r, kmax) for every admissible instance.
fn instances(qmax: u64) -> Vec<(u64, Family, u8, u64, u64, u64)> {
    let mut out = Vec::new();
    for q in (3..=qmax).step_by(2).filter(|&q| prime_power(q).is_some()) {
        for family in Family::ALL {
            for h in family.admissible_h(q) {
                for &case in family.cases() {
                    for r in family.r_range(case, h).unwrap().0 {
                        let top = kmax(family, case, q, h, r).unwrap().value;
                        if top >= 1 {
                            out.push((q, family, case, h, r, top as u64));
                        }
                    }
                }
            }
        }
    }
    out
}

#[test]
fn construction_is_deterministic_per_seed() {
    let p = validate(field(11), &request(Family::F3, 1, 4, 5, 8)).unwrap();
    let a = construct(&p, 42).unwrap();
    let b = construct(&p, 42).unwrap();
    assert_eq!(a.code.multipliers(), b.code.multipliers());
    assert_eq!(a.code.locators(), b.code.locators());
}

#[test]
fn f3_even_block_is_every_second_residue() {
    // q = 11, h = 4, t = 1: enumeration hits s = 4, which a step-4
    // progression {2, 6} would miss.
    let lemma = IndexLemma {
        family: Family::F3,
        part: 1,
    };
    let k = lemma_k_bound(lemma, 11, 4, 1).unwrap().value as u64;
    let brute = brute_force_s_set(11, 4, k, 0).unwrap();
    assert!(brute.contains_key(&4));
    let step_four: Vec<u64> = (2..=6).step_by(4).collect();
    assert!(!step_four.contains(&4));
    assert!(closed_form_s_set(lemma, 11, 4, 1, k).unwrap().values.contains(&4));
}

#[test]
fn f4_case_two_includes_the_upper_even_block() {
    // q = 11, h = 4, r = 5 (t = 1): s = 2h - 2t = 6 must be annihilated too.
    let p = validate(field(11), &request(Family::F4, 2, 4, 5, 9)).unwrap();
    let brute = brute_force_s_set(11, 4, 9, 6).unwrap();
    assert!(brute.contains_key(&6));
    assert!(s_set(&p).values.contains(&6));
    assert_eq!(build_coefficient_matrix(&p).rows(), s_set(&p).values.len());
    let c = construct(&p, 0).unwrap();
    assert!(c.code.is_hermitian_self_orthogonal());
}

#[test]
fn largest_k_keeps_every_candidate_residue() {
    for (q, family, case, h, r, top) in instances(49) {
        let (lemma, t) = family.lemma_and_t(case, h, r).unwrap();
        let full = closed_form_s_set(lemma, q, h, t, u64::MAX).unwrap();
        let at_top = closed_form_s_set(lemma, q, h, t, top).unwrap();
        assert_eq!(full.values, at_top.values, "{family} case {case} q={q} h={h} r={r}");
    }
}

#[test]
fn every_small_instance_verifies() {
    for (q, family, case, h, r, top) in instances(11) {
        let p = validate(field(q), &request(family, case, h, r, top)).unwrap();
        let c = construct(&p, 3).unwrap();
        let report = full_verify(&c.code, None, MdsPolicy::Auto { trials: 2000, seed: 3 });
        assert!(report.all_pass(), "{family} case {case} q={q} h={h} r={r}: {report:?}");
        assert_eq!(c.code.n() as u64, p.n());
    }
}

#[test]
fn corrupted_multiplier_yields_a_witness() {
    let p = validate(field(7), &request(Family::F1, 1, 2, 2, 5)).unwrap();
    let c = construct(&p, 0).unwrap();
    let mut mult = c.code.multipliers().to_vec();
    mult[3] = match mult[3] {
        FieldElement::Pow(d) => FieldElement::Pow((d + 1) % 48),
        FieldElement::Zero => unreachable!(),
    };
    let bad = GrsCode::new(c.code.ctx().clone(), c.code.locators().to_vec(), mult, 5).unwrap();
    let report = full_verify(&bad, c.code.quantum_params().ok(), MdsPolicy::Exhaustive);
    assert!(!report.all_pass());
    assert!(report.power_sum_witness.is_some());
    assert!(report.gram_witness.is_some());
    assert!(!report.params_match);
}

#[test]
fn composite_field_instances_construct() {
    // q = 9 and q = 25 exercise extension fields of F_p.
    for q in [9u64, 25] {
        for (qq, family, case, h, r, top) in instances(q) {
            if qq != q {
                continue;
            }
            let p = validate(field(q), &request(family, case, h, r, top)).unwrap();
            let c = construct(&p, 0).unwrap();
            assert!(c.code.gram_check(), "{family} case {case} q={q} h={h} r={r}");
        }
    }
}
