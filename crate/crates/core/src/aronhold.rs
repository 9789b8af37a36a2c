//! Syzygetic triples and Aronhold sets among the 28 bitangents.
//!
//! Three bitangents are syzygetic when a conic `Q` satisfies
//! `Q·C ≥ D_1 + D_2 + D_3` for their contact divisors. On each line `β` the
//! divisor `D_β` is cut out by the binary quadratic stored with the
//! bitangent, so the condition is that `Q|β` is a multiple of it: two
//! linear equations in the six coefficients of `Q` per line. The triple is
//! syzygetic iff the resulting 6 × 6 system has a nonzero solution.

use serde::{Deserialize, Serialize};

use crate::bitangents::Bitangent;
use crate::linalg::Matrix;
use crate::padic::PadicElement;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AronholdError {
    #[error("expected 28 bitangents, got {0}")]
    Incomplete(usize),
    #[error("no Aronhold set found at precision")]
    NotFound,
    #[error("pinned set is not an Aronhold set: triple {0:?} is syzygetic")]
    PinnedSyzygetic([usize; 3]),
    #[error("pinned set must have 7 distinct indices below 28")]
    BadPinned,
}

/// Seven bitangent indices, every three azygetic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AronholdCandidate {
    pub indices: Vec<usize>,
}

/// Coefficients of the quadratic monomials `x1², x1x2, x1x3, x2², x2x3, x3²`
/// after composing with `Φ`, as `(s², st, t²)` triples.
fn restricted_monomials(bt: &Bitangent) -> Vec<[PadicElement; 3]> {
    let phi = &bt.param;
    let mut out = Vec::with_capacity(6);
    for i in 0..3 {
        for j in i..3 {
            let a = phi[i][0].mul(&phi[j][0]);
            let b = phi[i][0].mul(&phi[j][1]).add(&phi[i][1].mul(&phi[j][0]));
            let c = phi[i][1].mul(&phi[j][1]);
            out.push([a, b, c]);
        }
    }
    out
}

/// The two rows `Q|β ∧ h_β = 0` contributed by one bitangent, each scaled
/// to be primitive.
pub fn conic_condition_rows(bt: &Bitangent) -> [Vec<PadicElement>; 2] {
    let h = &bt.quad;
    let mons = restricted_monomials(bt);
    // 2 × 2 minors of [A B C; h0 h1 h2] through the unit coordinate of h
    let piv = crate::bitangents::pivot_index(h);
    let pairs: [(usize, usize); 2] = match piv {
        0 => [(0, 1), (0, 2)],
        1 => [(0, 1), (1, 2)],
        _ => [(0, 2), (1, 2)],
    };
    pairs.map(|(u, w)| {
        let row: Vec<PadicElement> = mons.iter().map(|m| m[u].mul(&h[w]).sub(&m[w].mul(&h[u]))).collect();
        crate::bitangents::make_primitive(&row)
    })
}

/// The 6 × 6 conic-condition matrix of a triple.
pub fn syzygy_matrix(b1: &Bitangent, b2: &Bitangent, b3: &Bitangent) -> Matrix<PadicElement> {
    let mut rows = Vec::with_capacity(6);
    for b in [b1, b2, b3] {
        let [r1, r2] = conic_condition_rows(b);
        rows.push(r1);
        rows.push(r2);
    }
    Matrix::from_rows(rows)
}

/// Whether the three contact divisors lie on a conic at precision.
pub fn is_syzygetic(b1: &Bitangent, b2: &Bitangent, b3: &Bitangent, guard: i64) -> bool {
    syzygy_matrix(b1, b2, b3).det().is_negligible(guard)
}

/// Syzygy verdicts for all triples of a list of bitangents.
#[derive(Clone, Debug)]
pub struct SyzygyTable {
    n: usize,
    syzygetic: Vec<bool>,
}

impl SyzygyTable {
    pub fn build(lines: &[Bitangent], guard: i64) -> Self {
        let n = lines.len();
        let mut syzygetic = vec![false; n * n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let s = is_syzygetic(&lines[i], &lines[j], &lines[k], guard);
                    for (a, b, c) in [(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)] {
                        syzygetic[(a * n + b) * n + c] = s;
                    }
                }
            }
        }
        Self { n, syzygetic }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn is_syzygetic(&self, i: usize, j: usize, k: usize) -> bool {
        self.syzygetic[(i * self.n + j) * self.n + k]
    }

    /// Number of syzygetic unordered triples of distinct indices.
    pub fn syzygetic_count(&self) -> usize {
        let n = self.n;
        let mut count = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    count += self.is_syzygetic(i, j, k) as usize;
                }
            }
        }
        count
    }

    fn extends(&self, set: &[usize], b: usize) -> bool {
        set.iter().enumerate().all(|(x, &i)| set[x + 1..].iter().all(|&j| !self.is_syzygetic(i, j, b)))
    }

    /// Depth-first search for an azygetic 7-set, trying candidates in
    /// index order after the starting pair `(0, 1)` and then any pair.
    pub fn find_aronhold(&self) -> Option<Vec<usize>> {
        let n = self.n;
        for a in 0..n {
            for b in (a + 1)..n {
                let mut set = vec![a, b];
                if self.dfs(&mut set, 0) {
                    return Some(set);
                }
            }
        }
        None
    }

    fn dfs(&self, set: &mut Vec<usize>, from: usize) -> bool {
        if set.len() == 7 {
            return true;
        }
        for b in from..self.n {
            if set.contains(&b) || !self.extends(set, b) {
                continue;
            }
            set.push(b);
            if self.dfs(set, b + 1) {
                return true;
            }
            set.pop();
        }
        false
    }

    /// Number of 7-subsets all of whose triples are azygetic.
    pub fn count_aronhold(&self) -> usize {
        let mut set = Vec::with_capacity(7);
        self.count_from(&mut set, 0)
    }

    fn count_from(&self, set: &mut Vec<usize>, from: usize) -> usize {
        if set.len() == 7 {
            return 1;
        }
        let mut total = 0;
        for b in from..self.n {
            if self.n - b < 7 - set.len() {
                break;
            }
            if self.extends(set, b) {
                set.push(b);
                total += self.count_from(set, b + 1);
                set.pop();
            }
        }
        total
    }

    /// All azygetic 7-subsets, in lexicographic order.
    pub fn aronhold_sets(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut set = Vec::with_capacity(7);
        self.collect_from(&mut set, 0, &mut out);
        out
    }

    fn collect_from(&self, set: &mut Vec<usize>, from: usize, out: &mut Vec<Vec<usize>>) {
        if set.len() == 7 {
            out.push(set.clone());
            return;
        }
        for b in from..self.n {
            if self.n - b < 7 - set.len() {
                break;
            }
            if self.extends(set, b) {
                set.push(b);
                self.collect_from(set, b + 1, out);
                set.pop();
            }
        }
    }

    /// The syzygetic triples inside a proposed set, if any.
    pub fn syzygetic_triples_in(&self, set: &[usize]) -> Vec<[usize; 3]> {
        let mut out = Vec::new();
        for x in 0..set.len() {
            for y in (x + 1)..set.len() {
                for z in (y + 1)..set.len() {
                    if self.is_syzygetic(set[x], set[y], set[z]) {
                        out.push([set[x], set[y], set[z]]);
                    }
                }
            }
        }
        out
    }
}

fn require_complete(lines: &[Bitangent]) -> Result<(), AronholdError> {
    if lines.len() != 28 {
        return Err(AronholdError::Incomplete(lines.len()));
    }
    Ok(())
}

pub fn find_aronhold(lines: &[Bitangent], guard: i64) -> Result<AronholdCandidate, AronholdError> {
    require_complete(lines)?;
    let table = SyzygyTable::build(lines, guard);
    table.find_aronhold().map(|indices| AronholdCandidate { indices }).ok_or(AronholdError::NotFound)
}

pub fn count_aronhold(lines: &[Bitangent], guard: i64) -> Result<usize, AronholdError> {
    require_complete(lines)?;
    Ok(SyzygyTable::build(lines, guard).count_aronhold())
}

/// Checks a user-pinned set.
pub fn validate_pinned(table: &SyzygyTable, indices: &[usize]) -> Result<AronholdCandidate, AronholdError> {
    let mut sorted = indices.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if indices.len() != 7 || sorted.len() != 7 || sorted.iter().any(|&i| i >= table.len()) {
        return Err(AronholdError::BadPinned);
    }
    if let Some(t) = table.syzygetic_triples_in(indices).first() {
        return Err(AronholdError::PinnedSyzygetic(*t));
    }
    Ok(AronholdCandidate { indices: indices.to_vec() })
}
