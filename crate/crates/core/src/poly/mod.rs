//! Univariate and multivariate polynomials, resultants and discriminants.

pub mod discriminant;
pub mod multivariate;
pub mod resultant;
mod univariate;

pub use discriminant::{discriminant_quartic, DISCRIMINANT_WEIGHT};
pub use multivariate::{monomials, Exps, MultiPoly};
pub use resultant::{first_subresultant, resultant, resultant_generic};
pub use univariate::Poly;
