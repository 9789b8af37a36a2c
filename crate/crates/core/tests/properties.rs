mod common;

use std::sync::Arc;

use common::level_13_tower;
use proptest::prelude::*;
use stablequartic::finite_field::{FfElem, FiniteField};
use stablequartic::padic::{FieldContext, PadicElement};
use stablequartic::poly::MultiPoly;
use stablequartic::reduction::*;

fn tower() -> Arc<FieldContext> {
    level_13_tower(14)
}

fn element(k: &Arc<FieldContext>, coords: &[i64], shift: i64) -> PadicElement {
    let rows: Vec<Vec<i64>> = coords.chunks(2).map(|c| c.to_vec()).collect();
    PadicElement::from_basis_coords(k, &rows).shift(shift)
}

fn coords() -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(0i64..13 * 13, 14)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn ring_laws(a in coords(), b in coords(), c in coords(), s in 0i64..4) {
        let k = tower();
        let (x, y, z) = (element(&k, &a, s), element(&k, &b, 0), element(&k, &c, 1));
        prop_assert!(x.mul(&y.add(&z)).sub(&x.mul(&y).add(&x.mul(&z))).is_zero());
        prop_assert!(x.mul(&y).mul(&z).sub(&x.mul(&y.mul(&z))).is_zero());
        if let (Some(vx), Some(vy)) = (x.valuation(), y.valuation()) {
            prop_assert_eq!(x.mul(&y).valuation(), Some(vx + vy));
            prop_assert!(x.mul(&y).div(&y).unwrap().sub(&x).is_zero());
        }
    }

    #[test]
    fn digits_roundtrip(a in coords(), s in -3i64..5) {
        let k = tower();
        let x = element(&k, &a, s);
        let back = PadicElement::from_digits(&k, &x.to_digits()).unwrap();
        prop_assert!(back.eq_at_precision(&x));
        prop_assert_eq!(back.to_digits(), x.to_digits());
    }

    #[test]
    fn precision_is_never_invented(a in coords(), b in coords(), pa in 3i64..14, pb in 3i64..14) {
        let k = tower();
        let x = element(&k, &a, 0).with_precision(pa);
        let y = element(&k, &b, 1).with_precision(pb);
        prop_assert!(x.add(&y).abs_precision() <= pa.min(pb));
        let bound = (x.val_bound() + pb).min(y.val_bound() + pa);
        prop_assert!(x.mul(&y).abs_precision() <= bound);
    }

    #[test]
    fn reduction_is_a_homomorphism(a in coords(), b in coords()) {
        let k = tower();
        let (x, y) = (element(&k, &a, 0), element(&k, &b, 0));
        let (xb, yb) = (x.residue().unwrap(), y.residue().unwrap());
        prop_assert_eq!(x.add(&y).residue().unwrap(), xb.add(&yb));
        prop_assert_eq!(x.mul(&y).residue().unwrap(), xb.mul(&yb));
    }
}

fn f13() -> Arc<FiniteField> {
    FiniteField::prime_field(13).unwrap()
}

/// `c · Π (z_i x − x_i z)` over eight distinct points of `P¹(F_13)`, with
/// point 13 standing for `(1 : 0)`.
fn split_octic(k: &Arc<FiniteField>, points: &[u64], c: i64) -> BinaryForm {
    let mut coeffs = vec![k.from_int(c)];
    for &p in points {
        let (xi, zi) = if p == 13 { (k.one(), k.zero()) } else { (k.from_int(p as i64), k.one()) };
        // multiply by zi·x − xi·z; coeffs[i] on x^i z^(deg−i)
        let mut next = vec![k.zero(); coeffs.len() + 1];
        for (i, a) in coeffs.iter().enumerate() {
            next[i + 1] = next[i + 1].add(&a.mul(&zi));
            next[i] = next[i].sub(&a.mul(&xi));
        }
        coeffs = next;
    }
    BinaryForm::new(coeffs)
}

fn mobius(k: &Arc<FiniteField>, m: [i64; 4]) -> [[FfElem; 2]; 2] {
    [[k.from_int(m[0]), k.from_int(m[1])], [k.from_int(m[2]), k.from_int(m[3])]]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn octic_equivalence_is_mobius_invariant(
        points in proptest::sample::subsequence((0u64..14).collect::<Vec<_>>(), 8),
        c in 1i64..13,
        m in proptest::array::uniform4(0i64..13).prop_filter("invertible", |m| (m[0] * m[3] - m[1] * m[2]).rem_euclid(13) != 0),
    ) {
        let k = f13();
        let f = split_octic(&k, &points, c);
        prop_assert!(f.is_squarefree());
        let g = f.transform(&mobius(&k, m));
        prop_assert_eq!(octic_equivalent(&f, &g), Ok(true));
        prop_assert_eq!(octic_equivalent(&g, &f), Ok(true));
        prop_assert_eq!(point_count(&f), point_count(&g));
        prop_assert!(satisfies_weil_bound(&g, point_count(&g)));
    }

    #[test]
    fn conic_parametrizations_lie_on_the_conic(q in proptest::array::uniform6(0i64..13)) {
        let k = f13();
        let mons = [[2, 0, 0], [1, 1, 0], [1, 0, 1], [0, 2, 0], [0, 1, 1], [0, 0, 2]];
        let form: FfForm = MultiPoly::from_terms(3, k.zero(), mons.iter().zip(q).map(|(e, c)| (*e, k.from_int(c))));
        if is_nondegenerate(&form) {
            let phi = parametrize_conic(&form).unwrap();
            prop_assert!(form.compose(&phi).is_zero());
            prop_assert!(phi.iter().any(|c| !c.is_zero()));
        } else {
            prop_assert_eq!(parametrize_conic(&form).unwrap_err(), ReductionError::DegenerateConic);
        }
    }
}

#[test]
fn equivalence_separates_the_two_examples() {
    let k = f13();
    let g = BinaryForm::from_ints(&k, &[1, 0, 0, 0, 0, 0, 0, 0, 1]);
    let h = BinaryForm::from_ints(&k, &[-1, 0, 0, 0, 0, 0, 0, 1, 0]);
    assert_eq!(octic_equivalent(&g, &g), Ok(true));
    assert_eq!(octic_equivalent(&g, &h), Ok(false));
}
