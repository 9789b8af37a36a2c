use std::sync::Arc;

use stablequartic::finite_field::FiniteField;
use stablequartic::poly::MultiPoly;
use stablequartic::reduction::*;

fn ternary(k: &Arc<FiniteField>, terms: &[([u32; 3], i64)]) -> FfForm {
    MultiPoly::from_terms(3, k.zero(), terms.iter().map(|(e, c)| (*e, k.from_int(*c))))
}

/// The reduced model of the Klein quartic at 7.
fn klein_reduction() -> (Arc<FiniteField>, ReducedModel) {
    let k = FiniteField::prime_field(7).unwrap();
    let q = ternary(&k, &[([2, 0, 0], 1), ([0, 2, 0], 1), ([0, 0, 2], 1)]);
    let g = ternary(&k, &[([2, 2, 0], -1), ([0, 2, 2], -1), ([2, 0, 2], -1)]);
    (k, ReducedModel { q, g })
}

#[test]
fn klein_reduced_model_is_good() {
    let (k, m) = klein_reduction();
    let cert = check_good(&m).unwrap();
    assert!(!cert.gram_det.is_zero());
    let h = hyperelliptic_reduction(&m, &cert);
    assert_eq!(h.branch_degrees.iter().sum::<usize>(), 8);
    let target = BinaryForm::from_ints(&k, &[1, 0, 0, 0, 14, 0, 0, 0, 1]);
    assert_eq!(octic_equivalent(&h.octic, &target), Ok(true));
    let count = point_count(&h.octic);
    assert!(satisfies_weil_bound(&h.octic, count));
}

#[test]
fn conic_through_a_scanned_point() {
    let (k, m) = klein_reduction();
    let phi = parametrize_conic(&m.q).unwrap();
    assert!(m.q.compose(&phi).is_zero());
    for s in k.elements() {
        for t in [k.one(), k.zero()] {
            if s.is_zero() && t.is_zero() {
                continue;
            }
            let pt: Vec<_> = phi.iter().map(|c| c.eval(&[s.clone(), t.clone(), k.zero()])).collect();
            assert!(pt.iter().any(|c| !c.is_zero()));
            assert!(m.q.eval(&pt).is_zero());
        }
    }
}

#[test]
fn failures_are_tagged() {
    let (k, m) = klein_reduction();
    let rank_one = ReducedModel { q: ternary(&k, &[([2, 0, 0], 1)]), g: m.g.clone() };
    assert_eq!(check_good(&rank_one).unwrap_err(), ReductionError::DegenerateConic);
    let multiple = ReducedModel { q: m.q.clone(), g: m.q.mul(&ternary(&k, &[([1, 1, 0], 1)])) };
    assert!(matches!(check_good(&multiple), Err(ReductionError::IdenticallyZeroPullback) | Err(ReductionError::NonTransverse)));
    // a fourfold line meets the conic in two points of multiplicity four
    let fourfold = ReducedModel { q: m.q.clone(), g: ternary(&k, &[([4, 0, 0], 1)]) };
    assert_eq!(check_good(&fourfold).unwrap_err(), ReductionError::NonTransverse);
}
