//! Stable reduction of plane quartics with potentially good hyperelliptic
//! reduction over p-adic fields.

pub mod aronhold;
pub mod bitangents;
pub mod finite_field;
pub mod linalg;
pub mod padic;
pub mod poly;
pub mod reduction;
pub mod riemann;
pub mod ring;
