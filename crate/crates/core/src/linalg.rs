//! Dense matrices over the generic coefficient rings.

use crate::ring::{Coeff, FieldCoeff};

#[derive(Clone, Debug)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Coeff> Matrix<T> {
    pub fn filled(rows: usize, cols: usize, fill: T) -> Self {
        Self { rows, cols, data: vec![fill; rows * cols] }
    }

    /// Panics if the rows have different lengths or there are none.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let cols = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        let n = rows.len();
        Self { rows: n, cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn identity(n: usize, one: &T) -> Self {
        let mut m = Self::filled(n, n, one.zero_like());
        for i in 0..n {
            m[(i, i)] = one.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)].clone());
            }
        }
        Self { rows: self.cols, cols: self.rows, data }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let zero = self.data[0].zero_like();
        let mut out = Self::filled(self.rows, other.cols, zero.clone());
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = zero.clone();
                for k in 0..self.cols {
                    acc = acc.plus(&self[(i, k)].times(&other[(k, j)]));
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = v[0].zero_like();
                for (a, b) in self.row(i).iter().zip(v) {
                    acc = acc.plus(&a.times(b));
                }
                acc
            })
            .collect()
    }

    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// Determinant without divisions, by dynamic programming over the sets
    /// of columns used by the first rows. Cost `O(2^n n)` ring operations;
    /// meant for the small matrices with polynomial entries.
    pub fn det_division_free(&self) -> T {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        assert!(n <= 20, "subset expansion is limited to 20 × 20");
        let zero = self.data[0].zero_like();
        let mut dp: Vec<Option<T>> = vec![None; 1 << n];
        dp[0] = Some(zero.one_like());
        for mask in 0usize..(1 << n) {
            let Some(val) = dp[mask].take() else { continue };
            let r = mask.count_ones() as usize;
            if r == n {
                dp[mask] = Some(val);
                continue;
            }
            if val.is_zero() {
                continue;
            }
            for c in 0..n {
                if mask & (1 << c) != 0 {
                    continue;
                }
                let entry = &self[(r, c)];
                if entry.is_zero() {
                    continue;
                }
                let above = (mask >> (c + 1)).count_ones();
                let mut term = val.times(entry);
                if above % 2 == 1 {
                    term = term.negate();
                }
                let slot = &mut dp[mask | (1 << c)];
                *slot = Some(match slot.take() {
                    Some(s) => s.plus(&term),
                    None => term,
                });
            }
        }
        dp[(1 << n) - 1].take().unwrap_or(zero)
    }
}

impl<T: FieldCoeff> Matrix<T> {
    /// Row echelon form with full pivoting by [`FieldCoeff::pivot_rank`].
    /// Returns `(rank, det)` where `det` is meaningful only for square
    /// matrices of full rank.
    fn eliminate(&self) -> (usize, T) {
        let mut m = self.clone();
        let zero = self.data[0].zero_like();
        let mut det = zero.one_like();
        let mut rank = 0;
        let mut col_done = vec![false; self.cols];
        for r in 0..self.rows {
            // best pivot among remaining rows and columns
            let mut best: Option<(i64, usize, usize)> = None;
            for i in r..m.rows {
                for (j, done) in col_done.iter().enumerate() {
                    if *done {
                        continue;
                    }
                    if let Some(rank) = m[(i, j)].pivot_rank() {
                        if best.map_or(true, |(b, _, _)| rank < b) {
                            best = Some((rank, i, j));
                        }
                    }
                }
            }
            let Some((_, pi, pj)) = best else { break };
            if pi != r {
                m.swap_rows(pi, r);
                det = det.negate();
            }
            // column position sign: count the finished columns to the left
            let pos = col_done[..pj].iter().filter(|d| !**d).count();
            if pos % 2 == 1 {
                det = det.negate();
            }
            col_done[pj] = true;
            let piv = m[(r, pj)].clone();
            det = det.times(&piv);
            let inv = piv.try_inv().expect("pivot is invertible");
            for i in (r + 1)..m.rows {
                let f = m[(i, pj)].times(&inv);
                if f.is_zero() {
                    continue;
                }
                for j in 0..m.cols {
                    if col_done[j] && j != pj {
                        continue;
                    }
                    let v = m[(i, j)].minus(&f.times(&m[(r, j)]));
                    m[(i, j)] = v;
                }
                m[(i, pj)] = zero.clone();
            }
            rank += 1;
        }
        if rank < self.rows.min(self.cols) {
            det = zero;
        }
        (rank, det)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Determinant by Gaussian elimination; zero when no pivot remains.
    pub fn det(&self) -> T {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        self.eliminate().1
    }

    pub fn rank(&self) -> usize {
        self.eliminate().0
    }

    /// Solves `A x = b` for square `A`; `None` when singular at precision.
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        assert_eq!(self.rows, self.cols, "solve needs a square matrix");
        let n = self.rows;
        let mut aug: Vec<Vec<T>> = (0..n)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.push(b[i].clone());
                row
            })
            .collect();
        let mut perm_cols: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let mut best: Option<(i64, usize, usize)> = None;
            for (i, row) in aug.iter().enumerate().skip(k) {
                for (jj, &j) in perm_cols.iter().enumerate().skip(k) {
                    if let Some(rk) = row[j].pivot_rank() {
                        if best.map_or(true, |(bst, _, _)| rk < bst) {
                            best = Some((rk, i, jj));
                        }
                    }
                }
            }
            let (_, pi, pjj) = best?;
            aug.swap(k, pi);
            perm_cols.swap(k, pjj);
            let pj = perm_cols[k];
            let inv = aug[k][pj].try_inv()?;
            for i in 0..n {
                if i == k {
                    continue;
                }
                let f = aug[i][pj].times(&inv);
                if f.is_zero() {
                    continue;
                }
                for j in 0..=n {
                    let v = aug[i][j].minus(&f.times(&aug[k][j]));
                    aug[i][j] = v;
                }
            }
        }
        let mut x = vec![b[0].zero_like(); n];
        for k in 0..n {
            let pj = perm_cols[k];
            x[pj] = aug[k][n].try_div(&aug[k][pj])?;
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.rows;
        let one = self.data[0].one_like();
        let id = Self::identity(n, &one);
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let e: Vec<T> = (0..n).map(|i| id[(i, j)].clone()).collect();
            cols.push(self.solve(&e)?);
        }
        let mut out = Self::filled(n, n, one.zero_like());
        for (j, col) in cols.into_iter().enumerate() {
            for (i, v) in col.into_iter().enumerate() {
                out[(i, j)] = v;
            }
        }
        Some(out)
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}
