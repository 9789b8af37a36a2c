//! Discriminant of a ternary quartic as the Macaulay resultant of its three
//! partial derivatives.
//!
//! The value is the raw quotient `det(M) / det(minor)` of the degree-7
//! Macaulay matrix, without normalizing the universal constant supported at
//! 2 and 3. Under `F ↦ F∘A` it scales by `det(A)^36`.

use crate::linalg::Matrix;
use crate::ring::FieldCoeff;

use super::multivariate::{monomials, Exps, MultiPoly};

/// Weight `w` in `disc(F∘A) = det(A)^w · disc(F)`.
pub const DISCRIMINANT_WEIGHT: u32 = 36;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiscriminantError {
    #[error("input is not a ternary quartic form")]
    NotQuartic,
    #[error("every extraneous Macaulay minor vanishes")]
    Degenerate,
}

/// Macaulay resultant of three ternary cubics. Each monomial of degree 7 is
/// assigned to the first variable (in `order`) whose exponent is at least 3.
fn macaulay_cubics<T: FieldCoeff>(g: &[MultiPoly<T>; 3], order: [usize; 3]) -> Option<T> {
    let zero = g[0].zero_elem().clone();
    let cols = monomials(3, 7);
    let index = |e: &Exps| cols.iter().position(|c| c == e).expect("degree 7");
    let mut m = Matrix::filled(36, 36, zero.clone());
    let mut reduced_count: Vec<usize> = Vec::with_capacity(36);
    for (r, alpha) in cols.iter().enumerate() {
        let i = *order.iter().find(|&&v| alpha[v] >= 3).expect("some exponent is at least 3");
        let mut shift = *alpha;
        shift[i] -= 3;
        for (e, c) in g[i].terms() {
            let col = index(&[e[0] + shift[0], e[1] + shift[1], e[2] + shift[2]]);
            m[(r, col)] = c.clone();
        }
        reduced_count.push(alpha.iter().filter(|&&a| a >= 3).count());
    }
    // rows and columns of monomials divisible by two of the x_i^3
    let extra: Vec<usize> = (0..36).filter(|&k| reduced_count[k] >= 2).collect();
    let mut minor = Matrix::filled(extra.len(), extra.len(), zero);
    for (a, &r) in extra.iter().enumerate() {
        for (b, &c) in extra.iter().enumerate() {
            minor[(a, b)] = m[(r, c)].clone();
        }
    }
    let md = minor.det();
    if md.is_zero() {
        return None;
    }
    md.try_inv().map(|inv| m.det().times(&inv))
}

/// Unimodular changes of variables tried when the extraneous minor
/// vanishes for a special input; they leave the discriminant unchanged.
fn unimodular(k: i64) -> [[i64; 3]; 3] {
    // upper times lower unitriangular, entries from a short fixed sequence
    let (a, b, c) = (k % 3 + 1, (2 * k) % 5 - 2, k % 4 + 1);
    let (d, e, f) = ((3 * k) % 5 - 1, k % 2 + 1, (k * k) % 3 - 1);
    let upper = [[1, a, b], [0, 1, c], [0, 0, 1]];
    let lower = [[1, 0, 0], [d, 1, 0], [e, f, 1]];
    let mut out = [[0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|t| upper[i][t] * lower[t][j]).sum();
        }
    }
    out
}

pub fn discriminant_quartic<T: FieldCoeff>(f: &MultiPoly<T>) -> Result<T, DiscriminantError> {
    if f.is_zero() {
        return Ok(f.zero_elem().clone());
    }
    if f.nvars() != 3 || f.homogeneous_degree() != Some(4) {
        return Err(DiscriminantError::NotQuartic);
    }
    let orders = [[0, 1, 2], [1, 2, 0], [2, 0, 1], [0, 2, 1], [1, 0, 2], [2, 1, 0]];
    let one = f.zero_elem().one_like();
    for k in 0..8 {
        let g = if k == 0 {
            f.clone()
        } else {
            let u = unimodular(k);
            let m = Matrix::from_rows(u.iter().map(|r| r.iter().map(|&x| one.int_like(x)).collect()).collect());
            f.substitute(&m)
        };
        let partials = [g.derivative(0), g.derivative(1), g.derivative(2)];
        for order in orders {
            if let Some(d) = macaulay_cubics(&partials, order) {
                return Ok(d);
            }
        }
    }
    Err(DiscriminantError::Degenerate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{rat, Coeff};
    use num_rational::BigRational;

    fn quartic(terms: &[(Exps, i64)]) -> MultiPoly<BigRational> {
        MultiPoly::from_terms(3, rat(0), terms.iter().map(|(e, c)| (*e, rat(*c))))
    }

    #[test]
    fn fermat_is_smooth_and_x1_4_is_singular() {
        let fermat = quartic(&[([4, 0, 0], 1), ([0, 4, 0], 1), ([0, 0, 4], 1)]);
        assert!(!Coeff::is_zero(&discriminant_quartic(&fermat).unwrap()));
        let x4 = quartic(&[([4, 0, 0], 1)]);
        let d = discriminant_quartic(&x4);
        assert!(d.map(|v| Coeff::is_zero(&v)).unwrap_or(true));
    }

    #[test]
    fn klein_valuation_at_seven() {
        let klein = quartic(&[([3, 1, 0], 1), ([0, 3, 1], 1), ([1, 0, 3], 1)]);
        let d = discriminant_quartic(&klein).unwrap();
        let mut n = d.numer().clone();
        let mut v = 0;
        while (&n % 7u32) == num_bigint::BigInt::from(0) {
            n /= 7u32;
            v += 1;
        }
        assert_eq!(v, 7);
        assert!((d.denom() % 7u32) != num_bigint::BigInt::from(0));
    }

    #[test]
    fn weight_under_scaling() {
        let f = quartic(&[([3, 1, 0], 1), ([0, 3, 1], 1), ([1, 0, 3], 1), ([2, 1, 1], 2)]);
        let mut a = Matrix::identity(3, &rat(1));
        a[(0, 0)] = rat(2);
        let d0 = discriminant_quartic(&f).unwrap();
        let d1 = discriminant_quartic(&f.substitute(&a)).unwrap();
        assert_eq!(d1, d0 * Coeff::pow(&rat(2), DISCRIMINANT_WEIGHT));
    }
}
