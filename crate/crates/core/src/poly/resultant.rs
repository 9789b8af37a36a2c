//! Sylvester resultants and first subresultants.
//!
//! Convention: `res(f, g) = lc(f)^{deg g} · Π_{f(α)=0} g(α)`, the determinant
//! of the Sylvester matrix with the rows of `f` on top. In particular
//! `res(x - a, x - b) = a - b`.

use crate::linalg::Matrix;
use crate::ring::{Coeff, FieldCoeff};

use super::Poly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ResultantError {
    #[error("zero polynomial in a resultant")]
    ZeroInput,
    #[error("unstable elimination: leading coefficient is zero at precision")]
    UnstableLeading,
}

fn checked_degree<T: Coeff>(f: &Poly<T>) -> Result<usize, ResultantError> {
    let d = f.degree().ok_or(ResultantError::ZeroInput)?;
    // a stored top coefficient that vanishes at precision makes the degree ambiguous
    if f.len() > d + 1 {
        return Err(ResultantError::UnstableLeading);
    }
    Ok(d)
}

/// The `(m+n) × (m+n)` Sylvester matrix, descending powers.
pub fn sylvester_matrix<T: Coeff>(f: &Poly<T>, g: &Poly<T>) -> Matrix<T> {
    let m = f.degree().unwrap_or(0);
    let n = g.degree().unwrap_or(0);
    let size = m + n;
    let zero = f.zero_elem().clone();
    let mut s = Matrix::filled(size, size, zero);
    for r in 0..n {
        for k in 0..=m {
            s[(r, r + k)] = f.coeff(m - k);
        }
    }
    for r in 0..m {
        for k in 0..=n {
            s[(n + r, r + k)] = g.coeff(n - k);
        }
    }
    s
}

/// Resultant over an arbitrary commutative ring, by division-free
/// expansion. Suited to small matrices with polynomial entries.
pub fn resultant_generic<T: Coeff>(f: &Poly<T>, g: &Poly<T>) -> Result<T, ResultantError> {
    let m = checked_degree(f)?;
    let n = checked_degree(g)?;
    if m + n == 0 {
        return Ok(f.zero_elem().one_like());
    }
    Ok(sylvester_matrix(&f.trimmed(), &g.trimmed()).det_division_free())
}

/// Resultant over a field by elimination with valuation pivoting.
pub fn resultant<T: FieldCoeff>(f: &Poly<T>, g: &Poly<T>) -> Result<T, ResultantError> {
    let m = checked_degree(f)?;
    let n = checked_degree(g)?;
    if m + n == 0 {
        return Ok(f.zero_elem().one_like());
    }
    Ok(sylvester_matrix(&f.trimmed(), &g.trimmed()).det())
}

/// Coefficients `(σ0, σ1)` of the first subresultant `σ1 x + σ0` of `f` and
/// `g` (both of degree at least 1). At a simple common root `x0` with
/// `σ1 ≠ 0`, `x0 = -σ0/σ1`.
pub fn first_subresultant<T: Coeff>(f: &Poly<T>, g: &Poly<T>) -> Result<(T, T), ResultantError> {
    let f = f.trimmed();
    let g = g.trimmed();
    let m = checked_degree(&f)?;
    let n = checked_degree(&g)?;
    assert!(m >= 1 && n >= 1, "first subresultant needs positive degrees");
    let zero = f.zero_elem().clone();
    let rows = m + n - 2;
    if rows == 0 {
        // both linear: S_1 is f itself up to convention
        return Ok((f.coeff(0), f.coeff(1)));
    }
    let width = m + n - 1; // monomials x^{m+n-2} .. x^0
    let mut full = Matrix::filled(rows, width, zero.clone());
    for r in 0..n - 1 {
        for k in 0..=m {
            full[(r, r + k)] = f.coeff(m - k);
        }
    }
    for r in 0..m - 1 {
        for k in 0..=n {
            full[(n - 1 + r, r + k)] = g.coeff(n - k);
        }
    }
    let pick = |last: usize| {
        let mut a = Matrix::filled(rows, rows, zero.clone());
        for i in 0..rows {
            for j in 0..rows - 1 {
                a[(i, j)] = full[(i, j)].clone();
            }
            a[(i, rows - 1)] = full[(i, last)].clone();
        }
        a.det_division_free()
    };
    // column width-1 is x^0, width-2 is x^1
    Ok((pick(width - 1), pick(width - 2)))
}
