use std::collections::BTreeMap;

use crate::linalg::Matrix;
use crate::ring::{Coeff, FieldCoeff};

use super::Poly;

/// Exponent vector; unused variables carry exponent 0.
pub type Exps = [u32; 3];

/// Polynomial in up to three variables, stored as an exponent map.
///
/// Coefficients that test as zero are pruned after every operation.
#[derive(Clone, Debug)]
pub struct MultiPoly<T> {
    nvars: usize,
    terms: BTreeMap<Exps, T>,
    zero: T,
}

/// All exponent vectors of total degree `deg` in `n ≤ 3` variables, in
/// lexicographically decreasing order (`x1^deg` first).
pub fn monomials(n: usize, deg: u32) -> Vec<Exps> {
    let mut out = Vec::new();
    match n {
        1 => out.push([deg, 0, 0]),
        2 => {
            for a in (0..=deg).rev() {
                out.push([a, deg - a, 0]);
            }
        }
        3 => {
            for a in (0..=deg).rev() {
                for b in (0..=deg - a).rev() {
                    out.push([a, b, deg - a - b]);
                }
            }
        }
        _ => panic!("between one and three variables"),
    }
    out
}

impl<T: Coeff> MultiPoly<T> {
    pub fn zero(nvars: usize, zero: T) -> Self {
        assert!((1..=3).contains(&nvars), "between one and three variables");
        Self { nvars, terms: BTreeMap::new(), zero }
    }

    pub fn constant(nvars: usize, c: T) -> Self {
        let mut p = Self::zero(nvars, c.zero_like());
        p.add_term([0; 3], c);
        p
    }

    /// The variable `x_{i+1}`.
    pub fn var(nvars: usize, i: usize, one: &T) -> Self {
        let mut e = [0; 3];
        e[i] = 1;
        Self::monomial(nvars, e, one.clone())
    }

    pub fn monomial(nvars: usize, exps: Exps, c: T) -> Self {
        let mut p = Self::zero(nvars, c.zero_like());
        p.add_term(exps, c);
        p
    }

    pub fn from_terms(nvars: usize, zero: T, terms: impl IntoIterator<Item = (Exps, T)>) -> Self {
        let mut p = Self::zero(nvars, zero);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn zero_elem(&self) -> &T {
        &self.zero
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &T)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &Exps) -> T {
        self.terms.get(e).cloned().unwrap_or_else(|| self.zero.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: Exps, c: T) {
        debug_assert!(e[self.nvars..].iter().all(|&x| x == 0));
        let new = match self.terms.remove(&e) {
            Some(old) => old.plus(&c),
            None => c,
        };
        if !new.is_zero() {
            self.terms.insert(e, new);
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// The common total degree of all terms, `None` if not homogeneous or zero.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[var]).max()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (*e, c.negate())).collect(), zero: self.zero.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &T) -> Self {
        let mut out = Self::zero(self.nvars, self.zero.clone());
        for (e, c) in &self.terms {
            out.add_term(*e, c.times(s));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars.max(other.nvars), self.zero.clone());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term([e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]], c1.times(c2));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.nvars, self.zero.one_like());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, point: &[T]) -> T {
        let mut acc = self.zero.clone();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate().take(self.nvars) {
                if k > 0 {
                    t = t.times(&point[i].pow(k));
                }
            }
            acc = acc.plus(&t);
        }
        acc
    }

    /// `∂/∂x_{var+1}`.
    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(self.nvars, self.zero.clone());
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut ne = *e;
            ne[var] -= 1;
            out.add_term(ne, c.times(&c.int_like(e[var] as i64)));
        }
        out
    }

    pub fn map<U: Coeff>(&self, zero: U, f: impl Fn(&T) -> U) -> MultiPoly<U> {
        let mut out = MultiPoly::zero(self.nvars, zero);
        for (e, c) in &self.terms {
            out.add_term(*e, f(c));
        }
        out
    }

    /// Replaces each variable `x_i` by the polynomial `images[i]`.
    pub fn compose(&self, images: &[MultiPoly<T>]) -> MultiPoly<T> {
        let nv = images[0].nvars;
        let mut powers: Vec<Vec<MultiPoly<T>>> = Vec::new();
        for (i, img) in images.iter().enumerate().take(self.nvars) {
            let maxd = self.degree_in(i).unwrap_or(0);
            let mut pw = vec![MultiPoly::constant(nv, self.zero.one_like())];
            for k in 1..=maxd as usize {
                let next = pw[k - 1].mul(img);
                pw.push(next);
            }
            powers.push(pw);
        }
        let mut out = MultiPoly::zero(nv, self.zero.clone());
        for (e, c) in &self.terms {
            let mut t = MultiPoly::constant(nv, c.clone());
            for i in 0..self.nvars {
                if e[i] > 0 {
                    t = t.mul(&powers[i][e[i] as usize]);
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// `F(M x)`: variable `x_i` becomes `Σ_j M_ij x_j`.
    pub fn substitute(&self, m: &Matrix<T>) -> MultiPoly<T> {
        let n = self.nvars;
        let images: Vec<MultiPoly<T>> = (0..n)
            .map(|i| {
                let mut row = MultiPoly::zero(n, self.zero.clone());
                for j in 0..n {
                    let mut e = [0; 3];
                    e[j] = 1;
                    row.add_term(e, m[(i, j)].clone());
                }
                row
            })
            .collect();
        self.compose(&images)
    }

    /// Views the polynomial as univariate in `var` with coefficients that
    /// are polynomials in the remaining variables (same variable slots).
    pub fn to_univariate_in(&self, var: usize) -> Poly<MultiPoly<T>> {
        let deg = self.degree_in(var).unwrap_or(0) as usize;
        let zero = MultiPoly::zero(self.nvars, self.zero.clone());
        let mut coeffs = vec![zero.clone(); deg + 1];
        for (e, c) in &self.terms {
            let mut ne = *e;
            ne[var] = 0;
            coeffs[e[var] as usize].add_term(ne, c.clone());
        }
        Poly::new(coeffs, zero)
    }

    /// For a polynomial in one variable (slot 0).
    pub fn to_poly(&self) -> Poly<T> {
        let deg = self.degree_in(0).unwrap_or(0) as usize;
        let mut coeffs = vec![self.zero.clone(); deg + 1];
        for (e, c) in &self.terms {
            debug_assert!(e[1] == 0 && e[2] == 0);
            coeffs[e[0] as usize] = c.clone();
        }
        Poly::new(coeffs, self.zero.clone())
    }

    /// Dense coefficient vector on [`monomials`] of the given degree.
    pub fn coeff_vector(&self, deg: u32) -> Vec<T> {
        monomials(self.nvars, deg).iter().map(|e| self.coeff(e)).collect()
    }
}

impl<T: FieldCoeff> MultiPoly<T> {
    /// `F(M x)` after checking that `M` is invertible at precision.
    pub fn substitute_checked(&self, m: &Matrix<T>) -> Result<MultiPoly<T>, SingularChange> {
        if m.det().is_zero() {
            return Err(SingularChange);
        }
        Ok(self.substitute(m))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("linear change of variables is singular at precision")]
pub struct SingularChange;

impl<T: Coeff> Coeff for MultiPoly<T> {
    fn zero_like(&self) -> Self {
        Self::zero(self.nvars, self.zero.clone())
    }
    fn one_like(&self) -> Self {
        Self::constant(self.nvars, self.zero.one_like())
    }
    fn int_like(&self, n: i64) -> Self {
        Self::constant(self.nvars, self.zero.int_like(n))
    }
    fn is_zero(&self) -> bool {
        MultiPoly::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn minus(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn negate(&self) -> Self {
        self.neg()
    }
}
