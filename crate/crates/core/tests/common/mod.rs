#![allow(dead_code)]

use std::sync::Arc;

use stablequartic::bitangents::Quartic;
use stablequartic::padic::{FieldContext, TowerSpec};
use stablequartic::poly::MultiPoly;
use stablequartic::ring::rat;

pub fn quartic(terms: &[([u32; 3], i64)]) -> Quartic {
    MultiPoly::from_terms(3, rat(0), terms.iter().map(|(e, c)| (*e, rat(*c))))
}

pub fn klein() -> Quartic {
    quartic(&[([3, 1, 0], 1), ([0, 3, 1], 1), ([1, 0, 3], 1)])
}

pub fn fermat() -> Quartic {
    quartic(&[([4, 0, 0], 1), ([0, 4, 0], 1), ([0, 0, 4], 1)])
}

/// The modular curve example at 13.
pub fn level_13() -> Quartic {
    quartic(&[
        ([3, 1, 0], 1),
        ([3, 0, 1], 1),
        ([2, 2, 0], -2),
        ([2, 1, 1], -1),
        ([1, 3, 0], 1),
        ([1, 2, 1], -1),
        ([1, 1, 2], 2),
        ([1, 0, 3], -1),
        ([0, 2, 2], -2),
        ([0, 1, 3], 3),
    ])
}

pub fn q29() -> Arc<FieldContext> {
    FieldContext::new(TowerSpec { p: 29, unram_poly: vec![0, 1], eis_poly: vec![vec![-29], vec![1]] }, 12).unwrap()
}

/// `π^12 = −7`.
pub fn klein_tower(n: i64) -> Arc<FieldContext> {
    let mut eis = vec![vec![0]; 13];
    eis[0] = vec![7];
    eis[12] = vec![1];
    FieldContext::new(TowerSpec { p: 7, unram_poly: vec![0, 1], eis_poly: eis }, n).unwrap()
}

pub fn level_13_tower(n: i64) -> Arc<FieldContext> {
    let eis = [7488, 11544, 6474, 2886, 1560, 546, 78, 1].iter().map(|&c| vec![c, 0]).collect();
    FieldContext::new(TowerSpec { p: 13, unram_poly: vec![2, 12, 1], eis_poly: eis }, n).unwrap()
}
