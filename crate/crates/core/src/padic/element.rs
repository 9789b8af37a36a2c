use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::context::FieldContext;
use super::PadicError;
use crate::finite_field::FfElem;
use crate::ring::{Coeff, FieldCoeff};

/// An element `π^val · unit` of the tower, known modulo `π^{val + rel}`.
///
/// `rel = 0` encodes a value that is zero at its precision; its `val` is then
/// the absolute precision. The unit is stored reduced modulo `π^rel`.
#[derive(Clone)]
pub struct PadicElement {
    ctx: Arc<FieldContext>,
    val: i64,
    rel: i64,
    unit: Vec<u128>,
}

/// Why [`PadicElement::sqrt`] found no root in the current field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum SqrtError {
    #[error("square root of an element that is zero at precision")]
    Zero,
    #[error("odd valuation {0}")]
    OddValuation(i64),
    #[error("unit part is not a square in the residue field")]
    NonResidue,
}

/// Digit serialization: for each basis vector `τ^i π^j` of the unit part, its
/// base-p digits, least significant first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicDigits {
    pub val: i64,
    pub rel: i64,
    pub digits: Vec<Vec<u64>>,
}

impl PadicElement {
    pub(crate) fn from_parts(ctx: &Arc<FieldContext>, val: i64, rel: i64, unit: Vec<u128>) -> Self {
        let mut x = Self { ctx: ctx.clone(), val, rel, unit };
        x.cap();
        x
    }

    pub(crate) fn parts(&self) -> (i64, i64, &[u128]) {
        (self.val, self.rel, &self.unit)
    }

    fn cap(&mut self) {
        let n = self.ctx.precision();
        if self.rel <= 0 {
            self.make_zero(self.val.min(n));
            return;
        }
        let rel = self.rel.min(n).min(n - self.val);
        if rel <= 0 {
            self.make_zero(n);
            return;
        }
        self.rel = rel;
        let mut unit = std::mem::take(&mut self.unit);
        self.ctx.raw_truncate(&mut unit, rel);
        self.unit = unit;
    }

    fn make_zero(&mut self, abs: i64) {
        self.val = abs;
        self.rel = 0;
        self.unit = vec![0; self.ctx.dim()];
    }

    /// Zero known modulo `π^abs` (capped at the working precision).
    pub fn zero_with_precision(ctx: &Arc<FieldContext>, abs: i64) -> Self {
        Self { ctx: ctx.clone(), val: abs.min(ctx.precision()), rel: 0, unit: vec![0; ctx.dim()] }
    }

    pub fn zero(ctx: &Arc<FieldContext>) -> Self {
        Self::zero_with_precision(ctx, ctx.precision())
    }

    pub fn one(ctx: &Arc<FieldContext>) -> Self {
        Self::from_parts(ctx, 0, ctx.precision(), ctx.raw_one())
    }

    pub fn from_int(ctx: &Arc<FieldContext>, n: i64) -> Self {
        Self::from_bigint(ctx, &BigInt::from(n))
    }

    pub fn from_bigint(ctx: &Arc<FieldContext>, n: &BigInt) -> Self {
        match ctx.raw_from_bigint(n) {
            None => Self::zero(ctx),
            Some((val, unit)) => Self::from_parts(ctx, val, ctx.precision(), unit),
        }
    }

    pub fn from_rational(ctx: &Arc<FieldContext>, r: &BigRational) -> Self {
        let num = Self::from_bigint(ctx, r.numer());
        if num.is_zero() {
            return num;
        }
        let den = Self::from_bigint(ctx, r.denom());
        num.div(&den).expect("nonzero denominator")
    }

    /// `τ`, the generator of the unramified part.
    pub fn tau(ctx: &Arc<FieldContext>) -> Self {
        if ctx.unram_degree() == 1 {
            let c = ctx.zmod().neg(ctx.unram_coeffs()[0]);
            return Self::from_integral_raw(ctx, &{
                let mut v = vec![0; ctx.dim()];
                v[0] = c;
                v
            });
        }
        let mut v = vec![0; ctx.dim()];
        v[1] = 1;
        Self::from_integral_raw(ctx, &v)
    }

    /// The uniformizer `π`.
    pub fn uniformizer(ctx: &Arc<FieldContext>) -> Self {
        Self::from_parts(ctx, 1, ctx.precision(), ctx.raw_one())
    }

    /// `π^k` for any integer `k`.
    pub fn pi_power(ctx: &Arc<FieldContext>, k: i64) -> Self {
        Self::from_parts(ctx, k, ctx.precision(), ctx.raw_one())
    }

    /// Element from integer coordinates on the basis `τ^i π^j`
    /// (`coords[j][i]`), known to the working precision.
    pub fn from_basis_coords(ctx: &Arc<FieldContext>, coords: &[Vec<i64>]) -> Self {
        let d = ctx.unram_degree();
        let mut acc = Self::zero(ctx);
        let mut pij = Self::one(ctx);
        let pi = Self::uniformizer(ctx);
        for row in coords {
            let mut v = vec![0u128; ctx.dim()];
            for (i, &c) in row.iter().enumerate().take(d) {
                v[i] = ctx.zmod().from_i128(c as i128);
            }
            let c = Self::from_integral_raw(ctx, &v);
            acc = acc.add(&c.mul(&pij));
            pij = pij.mul(&pi);
        }
        acc
    }

    /// Element of the integers from a raw vector, known modulo `π^N`.
    pub(crate) fn from_integral_raw(ctx: &Arc<FieldContext>, raw: &[u128]) -> Self {
        Self::normalize(ctx, 0, ctx.precision(), raw.to_vec())
    }

    /// `π^base · y` where `y` is integral and known modulo `π^known`.
    fn normalize(ctx: &Arc<FieldContext>, base: i64, known: i64, mut y: Vec<u128>) -> Self {
        if known <= 0 {
            return Self::zero_with_precision(ctx, base + known.max(0));
        }
        ctx.raw_truncate(&mut y, known);
        match ctx.raw_valuation(&y) {
            Some(k) if k < known => {
                let unit = ctx.raw_div_pi(&y, k);
                Self::from_parts(ctx, base + k, known - k, unit)
            }
            _ => Self::zero_with_precision(ctx, base + known),
        }
    }

    pub fn lift_residue(ctx: &Arc<FieldContext>, x: &FfElem) -> Self {
        Self::from_integral_raw(ctx, &ctx.raw_from_residue(x))
    }

    pub fn ctx(&self) -> &Arc<FieldContext> {
        &self.ctx
    }

    /// `None` when zero at precision.
    pub fn valuation(&self) -> Option<i64> {
        if self.rel == 0 {
            None
        } else {
            Some(self.val)
        }
    }

    /// Lower bound for the valuation: the valuation, or the absolute
    /// precision of a zero.
    pub fn val_bound(&self) -> i64 {
        self.val
    }

    pub fn abs_precision(&self) -> i64 {
        self.val + self.rel
    }

    pub fn rel_precision(&self) -> i64 {
        self.rel
    }

    pub fn is_zero(&self) -> bool {
        self.rel == 0
    }

    /// Zero at precision, or valuation at least `N - guard`.
    pub fn is_negligible(&self, guard: i64) -> bool {
        self.rel == 0 || self.val >= self.ctx.precision() - guard
    }

    pub fn is_integral(&self) -> bool {
        self.val >= 0
    }

    fn check_ctx(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.ctx, &other.ctx) || *self.ctx == *other.ctx,
            "elements from different field contexts"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_ctx(other);
        let abs = self.abs_precision().min(other.abs_precision());
        let base = self.val.min(other.val);
        if base >= abs {
            return Self::zero_with_precision(&self.ctx, abs);
        }
        let known = abs - base;
        let mut y = vec![0u128; self.ctx.dim()];
        for x in [self, other] {
            if x.rel == 0 {
                continue;
            }
            let shift = x.val - base;
            if shift >= known {
                continue;
            }
            let term = if shift == 0 { x.unit.clone() } else { self.ctx.raw_mul(&x.unit, self.ctx.pi_pow(shift as usize)) };
            y = self.ctx.raw_add(&y, &term);
        }
        Self::normalize(&self.ctx, base, known, y)
    }

    pub fn neg(&self) -> Self {
        Self { ctx: self.ctx.clone(), val: self.val, rel: self.rel, unit: {
            let mut u = self.ctx.raw_neg(&self.unit);
            self.ctx.raw_truncate(&mut u, self.rel);
            u
        } }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_ctx(other);
        if self.rel == 0 || other.rel == 0 {
            let abs = (self.abs_precision() + other.val).min(other.abs_precision() + self.val);
            return Self::zero_with_precision(&self.ctx, abs);
        }
        let unit = self.ctx.raw_mul(&self.unit, &other.unit);
        Self::from_parts(&self.ctx, self.val + other.val, self.rel.min(other.rel), unit)
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    /// Multiplies by `π^k`; relative precision is unchanged.
    pub fn shift(&self, k: i64) -> Self {
        if self.rel == 0 {
            return Self::zero_with_precision(&self.ctx, self.val + k);
        }
        Self::from_parts(&self.ctx, self.val + k, self.rel, self.unit.clone())
    }

    pub fn inv(&self) -> Result<Self, PadicError> {
        if self.rel == 0 {
            return Err(PadicError::DivisionByZero { abs: self.val });
        }
        let unit = self.ctx.raw_unit_inverse(&self.unit);
        Ok(Self::from_parts(&self.ctx, -self.val, self.rel, unit))
    }

    pub fn div(&self, other: &Self) -> Result<Self, PadicError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow_i(&self, k: i64) -> Result<Self, PadicError> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        Ok(Coeff::pow(&base, k.unsigned_abs() as u32))
    }

    /// Element with valuation 0 and the same relative precision.
    pub fn unit_part(&self) -> Self {
        Self { ctx: self.ctx.clone(), val: 0, rel: self.rel, unit: self.unit.clone() }
    }

    /// Lowers the absolute precision to at most `abs`.
    pub fn with_precision(&self, abs: i64) -> Self {
        if self.abs_precision() <= abs {
            return self.clone();
        }
        if self.rel == 0 || self.val >= abs {
            return Self::zero_with_precision(&self.ctx, abs.min(self.val));
        }
        Self::from_parts(&self.ctx, self.val, abs - self.val, self.unit.clone())
    }

    /// Image in the residue field; `None` for negative valuation.
    pub fn residue(&self) -> Option<FfElem> {
        if self.rel == 0 || self.val > 0 {
            if self.val < 0 {
                return None;
            }
            return Some(self.ctx.residue_field().zero());
        }
        if self.val < 0 {
            return None;
        }
        Some(self.ctx.raw_residue(&self.unit))
    }

    /// Coordinates of an integral element on the basis `τ^i π^j`, reduced
    /// modulo `p^m` (the layout is `j·d + i`). Panics on negative valuation.
    pub fn integral_coords(&self) -> Vec<u128> {
        assert!(self.val >= 0, "integral_coords of a non-integral element");
        if self.rel == 0 {
            return vec![0; self.ctx.dim()];
        }
        let mut v = self.ctx.raw_mul(&self.unit, self.ctx.pi_pow(self.val.min(self.ctx.precision() + self.ctx.ram_index() as i64) as usize));
        self.ctx.raw_truncate(&mut v, self.abs_precision());
        v
    }

    /// Coordinates reduced modulo `p^k`, as signed representatives in
    /// `(-p^k/2, p^k/2]` when `signed` is set.
    pub fn coords_mod_p_power(&self, k: u32) -> Vec<u128> {
        let pk = (self.ctx.p() as u128).pow(k);
        self.integral_coords().into_iter().map(|c| c % pk).collect()
    }

    /// Square root with the residue-canonical choice of sign.
    pub fn sqrt(&self) -> Result<Self, SqrtError> {
        if self.rel == 0 {
            return Err(SqrtError::Zero);
        }
        if self.val.rem_euclid(2) != 0 {
            return Err(SqrtError::OddValuation(self.val));
        }
        let ctx = &self.ctx;
        let r0 = ctx.raw_residue(&self.unit).sqrt().ok_or(SqrtError::NonResidue)?;
        // z ≈ u^{-1/2} by z ← z (3 - u z²) / 2, then √u = u z
        let mut z = ctx.raw_from_residue(&r0.inv().expect("unit"));
        let three = ctx.raw_from_int(3);
        let half = ctx.raw_unit_inverse(&ctx.raw_from_int(2));
        let target = (ctx.ram_index() as i64) * ctx.zmod().digits() as i64;
        let mut prec = 1;
        while prec < target {
            let uz2 = ctx.raw_mul(&self.unit, &ctx.raw_mul(&z, &z));
            z = ctx.raw_mul(&ctx.raw_mul(&z, &ctx.raw_sub(&three, &uz2)), &half);
            prec *= 2;
        }
        let root = ctx.raw_mul(&self.unit, &z);
        Ok(Self::from_parts(ctx, self.val / 2, self.rel, root))
    }

    pub fn to_digits(&self) -> PadicDigits {
        let zm = self.ctx.zmod();
        let digits = self.unit.iter().map(|&c| zm.to_digits(c)).collect();
        PadicDigits { val: self.val, rel: self.rel, digits }
    }

    pub fn from_digits(ctx: &Arc<FieldContext>, d: &PadicDigits) -> Result<Self, PadicError> {
        if d.digits.len() != ctx.dim() {
            return Err(PadicError::BadDigits("wrong number of basis coordinates".into()));
        }
        let zm = ctx.zmod();
        let unit = d
            .digits
            .iter()
            .map(|ds| zm.from_digits(ds).ok_or_else(|| PadicError::BadDigits("digit out of range".into())))
            .collect::<Result<Vec<_>, _>>()?;
        if d.rel < 0 || d.rel > ctx.precision() {
            return Err(PadicError::BadDigits("relative precision out of range".into()));
        }
        let x = Self::from_parts(ctx, d.val, d.rel, unit);
        if d.rel > 0 && x.unit.iter().take(ctx.unram_degree()).all(|&c| c % ctx.p() as u128 == 0) {
            return Err(PadicError::BadDigits("unit part is divisible by π".into()));
        }
        Ok(x)
    }

    /// The element in another copy of the same tower, capped at the
    /// target's precision.
    pub fn cast(&self, target: &Arc<FieldContext>) -> Self {
        assert!(self.ctx.same_tower(target), "cast between different towers");
        if self.rel == 0 {
            return Self::zero_with_precision(target, self.val);
        }
        let modulus = target.zmod().modulus();
        let unit = self.unit.iter().map(|c| c % modulus).collect();
        Self::from_parts(target, self.val, self.rel, unit)
    }

    /// Equality at the common precision of both elements.
    pub fn eq_at_precision(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

impl PartialEq for PadicElement {
    /// Bitwise equality of the stored data, including precision.
    fn eq(&self, other: &Self) -> bool {
        self.val == other.val && self.rel == other.rel && self.unit == other.unit && *self.ctx == *other.ctx
    }
}

impl fmt::Debug for PadicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for PadicElement {
    /// Renders `Σ c_j(τ) π^j + O(π^abs)` with coefficients in `[0, p^k)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rel == 0 {
            return write!(f, "O(π^{})", self.val);
        }
        let (scaled, shift) = if self.val < 0 { (self.shift(-self.val), self.val) } else { (self.clone(), 0) };
        let coords = scaled.integral_coords();
        let d = self.ctx.unram_degree();
        let mut terms = Vec::new();
        for j in 0..self.ctx.ram_index() {
            let slot = &coords[j * d..(j + 1) * d];
            if slot.iter().all(|&c| c == 0) {
                continue;
            }
            let mut parts = Vec::new();
            for (i, &c) in slot.iter().enumerate().rev() {
                if c == 0 {
                    continue;
                }
                parts.push(match i {
                    0 => format!("{c}"),
                    1 => format!("{c}*τ"),
                    _ => format!("{c}*τ^{i}"),
                });
            }
            let coeff = if parts.len() > 1 { format!("({})", parts.join(" + ")) } else { parts.remove(0) };
            let exp = j as i64 + shift;
            terms.push(match exp {
                0 => coeff,
                1 => format!("{coeff}*π"),
                _ => format!("{coeff}*π^{exp}"),
            });
        }
        terms.push(format!("O(π^{})", self.abs_precision()));
        write!(f, "{}", terms.join(" + "))
    }
}

impl Coeff for PadicElement {
    fn zero_like(&self) -> Self {
        Self::zero(&self.ctx)
    }
    fn one_like(&self) -> Self {
        Self::one(&self.ctx)
    }
    fn int_like(&self, n: i64) -> Self {
        Self::from_int(&self.ctx, n)
    }
    fn is_zero(&self) -> bool {
        PadicElement::is_zero(self)
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

impl FieldCoeff for PadicElement {
    fn try_inv(&self) -> Option<Self> {
        self.inv().ok()
    }
    fn pivot_rank(&self) -> Option<i64> {
        self.valuation()
    }
}
