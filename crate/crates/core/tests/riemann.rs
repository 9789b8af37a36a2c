mod common;

use std::collections::HashSet;
use std::sync::Arc;

use common::*;
use stablequartic::aronhold::SyzygyTable;
use stablequartic::bitangents::*;
use stablequartic::padic::FieldContext;
use stablequartic::riemann::*;

struct Setup {
    lines: Vec<Bitangent>,
    table: SyzygyTable,
    f: KQuartic,
}

fn setup(q: &Quartic, k: &Arc<FieldContext>, guard: i64) -> Setup {
    let set = solve_bitangents(q, k, &SolveOptions { guard, ..Default::default() }).unwrap();
    assert_eq!(set.lines.len(), 28);
    let table = SyzygyTable::build(&set.lines, guard);
    Setup { lines: set.lines, table, f: to_field_quartic(k, q) }
}

fn check_table_and_toggle(s: &Setup, guard: i64, expected_s: i64) {
    let order: [usize; 7] = s.table.find_aronhold().unwrap().try_into().unwrap();
    let frame = build_frame(&s.lines, order, &s.f, guard).unwrap();
    let found: HashSet<usize> = TableLine::all().into_iter().map(|name| locate_table_line(&frame, name, &s.lines, guard).unwrap()).collect();
    assert_eq!(found.len(), 28, "the table names every bitangent once");

    let r = relabel_aronhold(frame, &s.lines, &s.table, &s.f, guard).unwrap();
    assert!(matches!(r.frame.case, ValuationCase::Positive { column: 0, rows: [0, 2], .. }));
    let t = toggle_model(&r.frame, &s.f, guard).unwrap();
    let n = s.f.zero_elem().ctx().precision();
    assert_eq!(t.s, expected_s);
    assert!(t.v_u.iter().all(|&v| v >= 0));
    assert!(t.v_u[0] >= t.v0);
    assert_eq!(t.twice_det_val, -2 * t.v0);
    assert!(t.residual_val >= n - guard);
    assert_eq!(poly_min_val(&t.q), 0);
    assert_eq!(poly_min_val(&t.g0), 0);
}

#[test]
fn klein_at_7() {
    let k = klein_tower(60);
    check_table_and_toggle(&setup(&klein(), &k, 8), 8, 6);
}

#[test]
fn level_13_example() {
    let k = level_13_tower(56);
    let s = setup(&level_13(), &k, 8);
    check_table_and_toggle(&s, 8, 3);
}

#[test]
fn pinned_signs_must_reproduce_the_quartic() {
    let k = level_13_tower(28);
    let guard = 6;
    let s = setup(&level_13(), &k, guard);
    let order: [usize; 7] = s.table.find_aronhold().unwrap().try_into().unwrap();
    let mut frame = build_frame(&s.lines, order, &s.f, guard).unwrap();
    assert!(frame.eta.is_some());
    let fm = s.f.substitute(&frame.m);
    let n = k.precision();
    let mut good = Vec::new();
    for pattern in 0..8u8 {
        let signs: [i8; 3] = std::array::from_fn(|i| if pattern & (4 >> i) != 0 { -1 } else { 1 });
        let (_, r) = signed_frame(&frame, signs, &fm).unwrap();
        if r >= n - guard {
            good.push(signs);
        }
    }
    assert!(!good.is_empty());
    assert_eq!(frame.signs, Some(good[0]));
    for pattern in 0..8u8 {
        let signs: [i8; 3] = std::array::from_fn(|i| if pattern & (4 >> i) != 0 { -1 } else { 1 });
        let res = pin_signs(&mut frame, signs, &s.f, guard);
        assert_eq!(res.is_ok(), good.contains(&signs));
    }
    assert!(pin_signs(&mut frame, [1, 0, 1], &s.f, guard).is_err());
}

#[test]
fn fermat_at_5_stays_in_the_unit_case() {
    let irr: Vec<i64> = stablequartic::finite_field::find_irreducible(5, 4).iter().map(|&x| x as i64).collect();
    let spec = stablequartic::padic::TowerSpec { p: 5, unram_poly: irr, eis_poly: vec![vec![-5, 0, 0, 0], vec![1, 0, 0, 0]] };
    let k = FieldContext::new(spec, 12).unwrap();
    let s = setup(&fermat(), &k, 3);
    for set in s.table.aronhold_sets().into_iter().take(20) {
        let order: [usize; 7] = set.try_into().unwrap();
        assert_eq!(frame_case(&s.lines, order).unwrap(), ValuationCase::AllZero);
    }
}
