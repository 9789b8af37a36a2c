use crate::ring::{Coeff, FieldCoeff};

/// Dense univariate polynomial, coefficients in ascending degree.
///
/// Trailing zero coefficients may be stored; [`Poly::degree`] looks past
/// them. A zero template is kept so that the zero polynomial still knows its
/// coefficient ring.
#[derive(Clone, Debug)]
pub struct Poly<T> {
    coeffs: Vec<T>,
    zero: T,
}

impl<T: Coeff> Poly<T> {
    pub fn new(coeffs: Vec<T>, zero: T) -> Self {
        Self { coeffs, zero }
    }

    /// Panics on an empty vector, use [`Poly::new`] for that.
    pub fn from_coeffs(coeffs: Vec<T>) -> Self {
        let zero = coeffs[0].zero_like();
        Self { coeffs, zero }
    }

    pub fn zero(zero: T) -> Self {
        Self { coeffs: Vec::new(), zero }
    }

    pub fn constant(c: T) -> Self {
        let zero = c.zero_like();
        Self { coeffs: vec![c], zero }
    }

    /// `c x^k`
    pub fn monomial(c: T, k: usize) -> Self {
        let zero = c.zero_like();
        let mut coeffs = vec![zero.clone(); k + 1];
        coeffs[k] = c;
        Self { coeffs, zero }
    }

    /// The polynomial `x - r`.
    pub fn linear_root(r: &T) -> Self {
        Self::from_coeffs(vec![r.negate(), r.one_like()])
    }

    pub fn zero_elem(&self) -> &T {
        &self.zero
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.zero.clone())
    }

    pub fn coeff_ref(&self, i: usize) -> Option<&T> {
        self.coeffs.get(i)
    }

    pub fn set_coeff(&mut self, i: usize, c: T) {
        if i >= self.coeffs.len() {
            self.coeffs.resize(i + 1, self.zero.clone());
        }
        self.coeffs[i] = c;
    }

    /// Number of stored coefficients.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    pub fn leading(&self) -> Option<&T> {
        self.degree().map(|d| &self.coeffs[d])
    }

    pub fn trimmed(&self) -> Self {
        let n = self.degree().map_or(0, |d| d + 1);
        Self { coeffs: self.coeffs[..n].to_vec(), zero: self.zero.clone() }
    }

    /// Drops coefficients past index `n - 1` whether or not they vanish.
    pub fn truncated_len(&self, n: usize) -> Self {
        let n = n.min(self.coeffs.len());
        Self { coeffs: self.coeffs[..n].to_vec(), zero: self.zero.clone() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => a.plus(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Self { coeffs, zero: self.zero.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c.negate()).collect(), zero: self.zero.clone() }
    }

    pub fn scale(&self, s: &T) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c.times(s)).collect(), zero: self.zero.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero(self.zero.clone());
        }
        let mut out = vec![self.zero.clone(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].plus(&a.times(b));
            }
        }
        Self { coeffs: out, zero: self.zero.clone() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.zero.one_like());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        let mut coeffs = vec![self.zero.clone(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs, zero: self.zero.clone() }
    }

    pub fn eval(&self, x: &T) -> T {
        let mut acc = self.zero.clone();
        for c in self.coeffs.iter().rev() {
            acc = acc.times(x).plus(c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.times(&c.int_like(i as i64)))
            .collect();
        Self { coeffs, zero: self.zero.clone() }
    }

    /// `f(a + b y)` as a polynomial in `y`, by Horner's rule.
    pub fn compose_affine(&self, a: &T, b: &T) -> Self {
        let lin = Self::from_coeffs(vec![a.clone(), b.clone()]);
        let mut acc = Self::zero(self.zero.clone());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&Self::constant(c.clone()));
        }
        acc
    }

    /// `x^n f(1/x)` where `n` is the number of stored coefficients minus one.
    pub fn reversed(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Self { coeffs, zero: self.zero.clone() }
    }

    pub fn map<U: Coeff>(&self, zero: U, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly { coeffs: self.coeffs.iter().map(f).collect(), zero }
    }
}

impl<T: FieldCoeff> Poly<T> {
    /// Euclidean division. `None` when the divisor's leading coefficient is
    /// not invertible.
    pub fn divrem(&self, divisor: &Self) -> Option<(Self, Self)> {
        let dd = divisor.degree()?;
        let lead_inv = divisor.coeffs[dd].try_inv()?;
        let mut rem: Vec<T> = self.trimmed().coeffs;
        if rem.len() <= dd {
            return Some((Self::zero(self.zero.clone()), Self { coeffs: rem, zero: self.zero.clone() }));
        }
        let mut quot = vec![self.zero.clone(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = rem[k].times(&lead_inv);
            if c.is_zero() {
                continue;
            }
            for (i, dc) in divisor.coeffs[..=dd].iter().enumerate() {
                rem[k - dd + i] = rem[k - dd + i].minus(&c.times(dc));
            }
            quot[k - dd] = c;
        }
        rem.truncate(dd);
        Some((Self { coeffs: quot, zero: self.zero.clone() }, Self { coeffs: rem, zero: self.zero.clone() }))
    }

    pub fn rem(&self, divisor: &Self) -> Option<Self> {
        self.divrem(divisor).map(|(_, r)| r)
    }

    pub fn monic(&self) -> Option<Self> {
        let lead = self.leading()?.try_inv()?;
        Some(self.trimmed().scale(&lead))
    }

    /// Monic gcd by the Euclidean algorithm; meaningful over exact fields.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.trimmed();
        let mut b = other.trimmed();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor over a field");
            a = b;
            b = r.trimmed();
        }
        a.monic().unwrap_or(a)
    }

    /// `self^k mod modulus` by square-and-multiply with a u128 exponent.
    pub fn powmod(&self, mut k: u128, modulus: &Self) -> Self {
        let one = self.zero.one_like();
        let mut acc = Self::constant(one).rem(modulus).expect("modulus");
        let mut base = self.rem(modulus).expect("modulus");
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base).rem(modulus).expect("modulus");
            }
            base = base.mul(&base).rem(modulus).expect("modulus");
            k >>= 1;
        }
        acc
    }
}

impl<T: Coeff> Coeff for Poly<T> {
    fn zero_like(&self) -> Self {
        Self::zero(self.zero.clone())
    }
    fn one_like(&self) -> Self {
        Self::constant(self.zero.one_like())
    }
    fn int_like(&self, n: i64) -> Self {
        Self::constant(self.zero.int_like(n))
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
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
