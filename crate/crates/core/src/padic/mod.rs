//! Capped-precision p-adic arithmetic in towers of local fields.

mod context;
mod element;
pub mod roots;
pub mod zmod;

pub use context::{FieldContext, TowerSpec, UnramifiedMap};
pub use element::{PadicDigits, PadicElement, SqrtError};
pub use roots::{roots_in_field, RootReport, UnresolvedCluster};

use crate::finite_field::FfElem;
use crate::poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PadicError {
    #[error("p = 2 is not supported")]
    EvenPrime,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("bad unramified polynomial: {0}")]
    BadUnramified(String),
    #[error("not an Eisenstein polynomial: {0}")]
    NotEisenstein(String),
    #[error("precision must be positive, got {0}")]
    BadPrecision(i64),
    #[error("precision needs {digits} base-{p} digits, more than fit in 126 bits")]
    PrecisionTooLarge { p: u64, digits: u32 },
    #[error("division by (numerical) zero: divisor is O(π^{abs})")]
    DivisionByZero { abs: i64 },
    #[error("malformed digit serialization: {0}")]
    BadDigits(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HenselError {
    #[error("the polynomial is zero at precision")]
    ZeroPolynomial,
    #[error("the residue is not a root of the reduced polynomial")]
    NotARoot,
    #[error("Hensel obstruction: derivative has valuation {deriv_val:?} at the residue root")]
    Obstruction { deriv_val: Option<i64> },
}

/// Divides a polynomial by the power of `π` that makes it primitive.
/// `None` when the smallest valuation is not certified, i.e. some
/// coefficient that is zero at precision is known only below it.
pub fn primitive_part(f: &Poly<PadicElement>) -> Option<Poly<PadicElement>> {
    let c = f.coeffs().iter().filter_map(|c| c.valuation()).min()?;
    if f.coeffs().iter().any(|x| x.is_zero() && x.abs_precision() < c) {
        return None;
    }
    Some(f.map(f.zero_elem().clone(), |x| x.shift(-c)))
}

/// Newton refinement of a root of `f` from the starting point `r`. Stops
/// when the correction vanishes at precision.
pub fn newton_refine(f: &Poly<PadicElement>, df: &Poly<PadicElement>, mut r: PadicElement) -> PadicElement {
    let limit = 2 * (64 - (r.ctx().precision() as u64).leading_zeros()) as usize + 8;
    for _ in 0..limit {
        let fr = f.eval(&r);
        if fr.is_zero() {
            break;
        }
        let Ok(step) = fr.div(&df.eval(&r)) else { break };
        if step.is_zero() {
            break;
        }
        r = r.sub(&step);
    }
    r
}

/// The root of `f` reducing to `r0`, by Newton's method. A root with
/// `κ = v(f'(r0)) > 0` is accepted when `v(f(r0)) > 2κ` (strong Hensel).
pub fn hensel_root(f: &Poly<PadicElement>, r0: &FfElem) -> Result<PadicElement, HenselError> {
    let f = primitive_part(f).ok_or(HenselError::ZeroPolynomial)?;
    let ctx = f.zero_elem().ctx().clone();
    let df = f.derivative();
    let r = PadicElement::lift_residue(&ctx, r0);
    let fr = f.eval(&r);
    if fr.val_bound() < 1 {
        return Err(HenselError::NotARoot);
    }
    let dfr = df.eval(&r);
    let kappa = dfr.valuation();
    match kappa {
        Some(0) => {}
        Some(k) if fr.val_bound() > 2 * k => {}
        _ => return Err(HenselError::Obstruction { deriv_val: kappa }),
    }
    Ok(newton_refine(&f, &df, r))
}
