//! Finite fields `F_p[t]/(m(t))` for small odd primes, polynomial root
//! finding over them, and embeddings between them.
//!
//! These serve as residue fields of the p-adic tower and as the splitting
//! fields used when comparing hyperelliptic special fibers.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poly::Poly;
use crate::ring::{Coeff, FieldCoeff};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FiniteFieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("modulus must be monic of degree at least 1")]
    BadModulus,
    #[error("modulus is reducible over F_{0}")]
    Reducible(u64),
    #[error("field order {0}^{1} is too large")]
    TooLarge(u64, usize),
}

#[derive(Debug, PartialEq, Eq, Hash)]
pub struct FiniteField {
    p: u64,
    /// Monic modulus, ascending coefficients, length `degree + 1`.
    modulus: Vec<u64>,
    order: u128,
}

/// Element of a [`FiniteField`]; coefficients on the power basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FfElem {
    field: Arc<FiniteField>,
    c: Vec<u64>,
}

impl fmt::Debug for FfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.degree() == 1 {
            return write!(f, "{}", self.c[0]);
        }
        let mut terms = Vec::new();
        for (i, &c) in self.c.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            terms.push(match i {
                0 => format!("{c}"),
                1 if c == 1 => "t".to_string(),
                1 => format!("{c}*t"),
                _ if c == 1 => format!("t^{i}"),
                _ => format!("{c}*t^{i}"),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

impl FiniteField {
    pub fn new(p: u64, modulus: Vec<u64>) -> Result<Arc<Self>, FiniteFieldError> {
        if p < 3 || !crate::padic::zmod::is_prime(p) {
            return Err(FiniteFieldError::NotPrime(p));
        }
        let modulus: Vec<u64> = modulus.into_iter().map(|c| c % p).collect();
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 {
            return Err(FiniteFieldError::BadModulus);
        }
        let degree = modulus.len() - 1;
        let order = (p as u128).checked_pow(degree as u32).ok_or(FiniteFieldError::TooLarge(p, degree))?;
        if order > 1u128 << 100 {
            return Err(FiniteFieldError::TooLarge(p, degree));
        }
        if !fp_poly_is_irreducible(&modulus, p) {
            return Err(FiniteFieldError::Reducible(p));
        }
        Ok(Arc::new(Self { p, modulus, order }))
    }

    pub fn prime_field(p: u64) -> Result<Arc<Self>, FiniteFieldError> {
        Self::new(p, vec![0, 1])
    }

    /// `F_{p^k}` with the first irreducible modulus in a fixed enumeration.
    pub fn with_degree(p: u64, k: usize) -> Result<Arc<Self>, FiniteFieldError> {
        Self::new(p, find_irreducible(p, k))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn order(&self) -> u128 {
        self.order
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(self: &Arc<Self>) -> FfElem {
        FfElem { field: self.clone(), c: vec![0; self.degree()] }
    }

    pub fn one(self: &Arc<Self>) -> FfElem {
        self.from_int(1)
    }

    pub fn from_int(self: &Arc<Self>, n: i64) -> FfElem {
        let mut c = vec![0; self.degree()];
        c[0] = n.rem_euclid(self.p as i64) as u64;
        FfElem { field: self.clone(), c }
    }

    /// Power-basis coefficients, reduced mod p; missing entries are zero.
    pub fn from_coeffs(self: &Arc<Self>, coeffs: &[i64]) -> FfElem {
        let mut c = vec![0; self.degree()];
        let mut x = FfElem { field: self.clone(), c: c.clone() };
        for (i, &v) in coeffs.iter().enumerate() {
            if i < c.len() {
                c[i] = v.rem_euclid(self.p as i64) as u64;
            } else {
                // reduce higher powers through the modulus
                let t = self.generator().pow_u128(i as u128).scale_int(v);
                x = x.plus(&t);
            }
        }
        x.plus(&FfElem { field: self.clone(), c })
    }

    /// The class of `t`.
    pub fn generator(self: &Arc<Self>) -> FfElem {
        if self.degree() == 1 {
            return self.from_int(-(self.modulus[0] as i64));
        }
        let mut c = vec![0; self.degree()];
        c[1] = 1;
        FfElem { field: self.clone(), c }
    }

    /// Element with the given index in `[0, q)`, reading base-p digits as
    /// power-basis coefficients.
    pub fn element(self: &Arc<Self>, mut index: u128) -> FfElem {
        let p = self.p as u128;
        let c = (0..self.degree())
            .map(|_| {
                let d = (index % p) as u64;
                index /= p;
                d
            })
            .collect();
        FfElem { field: self.clone(), c }
    }

    pub fn elements(self: &Arc<Self>) -> impl Iterator<Item = FfElem> + '_ {
        (0..self.order).map(move |i| self.element(i))
    }

    pub fn random(self: &Arc<Self>, rng: &mut impl Rng) -> FfElem {
        let c = (0..self.degree()).map(|_| rng.gen_range(0..self.p)).collect();
        FfElem { field: self.clone(), c }
    }

    fn reduce(&self, mut v: Vec<u64>) -> Vec<u64> {
        let k = self.degree();
        let p = self.p;
        for i in (k..v.len()).rev() {
            let c = v[i];
            if c == 0 {
                continue;
            }
            v[i] = 0;
            for j in 0..k {
                let t = mulmod(c, self.modulus[j], p);
                v[i - k + j] = (v[i - k + j] + p - t) % p;
            }
        }
        v.truncate(k);
        v.resize(k, 0);
        v
    }
}

impl FfElem {
    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn index(&self) -> u128 {
        let p = self.field.p as u128;
        self.c.iter().rev().fold(0u128, |acc, &d| acc * p + d as u128)
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    fn same_field(&self, other: &Self) {
        debug_assert!(Arc::ptr_eq(&self.field, &other.field) || self.field == other.field, "finite field mismatch");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_field(other);
        let p = self.field.p;
        let c = self.c.iter().zip(&other.c).map(|(a, b)| (a + b) % p).collect();
        Self { field: self.field.clone(), c }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.same_field(other);
        let p = self.field.p;
        let c = self.c.iter().zip(&other.c).map(|(a, b)| (a + p - b) % p).collect();
        Self { field: self.field.clone(), c }
    }

    pub fn neg(&self) -> Self {
        let p = self.field.p;
        Self { field: self.field.clone(), c: self.c.iter().map(|&a| (p - a) % p).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_field(other);
        let p = self.field.p;
        let k = self.c.len();
        if k == 1 {
            return Self { field: self.field.clone(), c: vec![mulmod(self.c[0], other.c[0], p)] };
        }
        let mut v = vec![0u64; 2 * k - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                v[i + j] = (v[i + j] + mulmod(a, b, p)) % p;
            }
        }
        Self { field: self.field.clone(), c: self.field.reduce(v) }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        let p = self.field.p;
        let s = n.rem_euclid(p as i64) as u64;
        Self { field: self.field.clone(), c: self.c.iter().map(|&a| mulmod(a, s, p)).collect() }
    }

    pub fn pow_u128(&self, mut k: u128) -> Self {
        let mut acc = self.field.one();
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(self.pow_u128(self.field.order - 2))
    }

    pub fn frobenius(&self) -> Self {
        self.pow_u128(self.field.p as u128)
    }

    pub fn is_square(&self) -> bool {
        self.is_zero() || self.pow_u128((self.field.order - 1) / 2) == self.field.one()
    }

    /// Square root by Tonelli-Shanks, normalized to the root with the
    /// smaller [`FfElem::index`].
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        if !self.is_square() {
            return None;
        }
        let q = self.field.order;
        let one = self.field.one();
        let mut s = 0u32;
        let mut t = q - 1;
        while t % 2 == 0 {
            t /= 2;
            s += 1;
        }
        // a quadratic non-residue, found by scanning indices
        let z = (1..q).map(|i| self.field.element(i)).find(|z| !z.is_square()).expect("non-residue exists");
        let mut m = s;
        let mut c = z.pow_u128(t);
        let mut tt = self.pow_u128(t);
        let mut r = self.pow_u128((t + 1) / 2);
        while tt != one {
            let mut i = 0;
            let mut probe = tt.clone();
            while probe != one {
                probe = probe.mul(&probe);
                i += 1;
            }
            let mut b = c.clone();
            for _ in 0..(m - i - 1) {
                b = b.mul(&b);
            }
            m = i;
            c = b.mul(&b);
            tt = tt.mul(&c);
            r = r.mul(&b);
        }
        let other = r.neg();
        Some(if other.index() < r.index() { other } else { r })
    }
}

impl Coeff for FfElem {
    fn zero_like(&self) -> Self {
        self.field.zero()
    }
    fn one_like(&self) -> Self {
        self.field.one()
    }
    fn int_like(&self, n: i64) -> Self {
        self.field.from_int(n)
    }
    fn is_zero(&self) -> bool {
        FfElem::is_zero(self)
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

impl FieldCoeff for FfElem {
    fn try_inv(&self) -> Option<Self> {
        self.inv()
    }
    fn pivot_rank(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(0)
        }
    }
}

// ---------------------------------------------------------------------------
// F_p[x] helpers on raw coefficient vectors, used for irreducibility tests.

fn fp_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn fp_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    fp_trim(&mut r);
    let db = b.len() - 1;
    let inv = crate::padic::zmod::mod_inverse_u64(b[db], p).expect("unit lead");
    while r.len() > db {
        let k = r.len() - 1;
        let c = mulmod(r[k], inv, p);
        for (i, &bc) in b.iter().enumerate() {
            let idx = k - db + i;
            r[idx] = (r[idx] + p - mulmod(c, bc, p)) % p;
        }
        fp_trim(&mut r);
    }
    r
}

fn fp_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut v = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            v[i + j] = (v[i + j] + mulmod(x, y, p)) % p;
        }
    }
    fp_rem(&v, m, p)
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    fp_trim(&mut a);
    fp_trim(&mut b);
    while !b.is_empty() {
        let r = fp_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Ben-Or irreducibility test over F_p.
pub fn fp_poly_is_irreducible(f: &[u64], p: u64) -> bool {
    let mut f = f.to_vec();
    fp_trim(&mut f);
    let n = match f.len() {
        0 | 1 => return false,
        l => l - 1,
    };
    if n == 1 {
        return true;
    }
    let mut xp = vec![0, 1];
    for _ in 0..n / 2 {
        // xp <- xp^p mod f
        let mut acc = vec![1u64];
        let mut base = xp.clone();
        let mut k = p;
        while k > 0 {
            if k & 1 == 1 {
                acc = fp_mulmod(&acc, &base, &f, p);
            }
            base = fp_mulmod(&base, &base, &f, p);
            k >>= 1;
        }
        xp = acc;
        let mut diff = xp.clone();
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = (diff[1] + p - 1) % p;
        let g = fp_gcd(&f, &diff, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// First monic irreducible polynomial of degree `k` over F_p in the order
/// `x^k + c_{k-1} x^{k-1} + ... + c_0` with `(c_0, c_1, ...)` counted in base p.
pub fn find_irreducible(p: u64, k: usize) -> Vec<u64> {
    if k == 1 {
        return vec![0, 1];
    }
    let mut idx: u128 = 0;
    loop {
        let mut f = vec![0u64; k + 1];
        let mut t = idx;
        for c in f.iter_mut().take(k) {
            *c = (t % p as u128) as u64;
            t /= p as u128;
        }
        f[k] = 1;
        if f[0] != 0 && fp_poly_is_irreducible(&f, p) {
            return f;
        }
        idx += 1;
    }
}

// ---------------------------------------------------------------------------
// Polynomials over F_q.

pub type FfPoly = Poly<FfElem>;

/// Roots in F_q with multiplicities, sorted by index. Uses `gcd(f, x^q - x)`
/// followed by equal-degree splitting with a fixed seed.
pub fn roots_with_multiplicity(f: &FfPoly) -> Vec<(FfElem, usize)> {
    let f = f.trimmed();
    let Some(deg) = f.degree() else {
        return Vec::new();
    };
    if deg == 0 {
        return Vec::new();
    }
    let field = f.zero_elem().field().clone();
    let q = field.order();
    let x = Poly::monomial(field.one(), 1);
    let xq = x.powmod(q, &f);
    let g = f.gcd(&xq.sub(&x));
    let mut roots = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    split_linear_factors(&g, &field, &mut rng, &mut roots);
    roots.sort_by_key(|r| r.index());
    roots
        .into_iter()
        .map(|r| {
            let lin = Poly::linear_root(&r);
            let mut m = 0;
            let mut h = f.clone();
            loop {
                let (qq, rr) = h.divrem(&lin).expect("monic divisor");
                if !rr.is_zero() {
                    break;
                }
                m += 1;
                h = qq;
            }
            (r, m)
        })
        .collect()
}

fn split_linear_factors(g: &FfPoly, field: &Arc<FiniteField>, rng: &mut ChaCha8Rng, out: &mut Vec<FfElem>) {
    let Some(d) = g.degree() else { return };
    if d == 0 {
        return;
    }
    let g = g.monic().expect("nonzero");
    if d == 1 {
        out.push(g.coeff(0).neg());
        return;
    }
    let q = field.order();
    loop {
        let a = field.random(rng);
        let shifted = Poly::from_coeffs(vec![a, field.one()]);
        let h = shifted.powmod((q - 1) / 2, &g).sub(&Poly::constant(field.one()));
        let s = g.gcd(&h);
        let sd = s.degree().unwrap_or(0);
        if sd > 0 && sd < d {
            let (other, _) = g.divrem(&s).expect("monic");
            split_linear_factors(&s, field, rng, out);
            split_linear_factors(&other, field, rng, out);
            return;
        }
    }
}

/// Roots by evaluating at every field element; a test oracle for
/// [`roots_with_multiplicity`] on small fields.
pub fn roots_by_scan(f: &FfPoly) -> Vec<FfElem> {
    let field = f.zero_elem().field().clone();
    field.elements().filter(|x| f.eval(x).is_zero()).collect()
}

/// Degrees of the irreducible factors of a squarefree polynomial over F_q,
/// by distinct-degree factorization.
pub fn factor_degrees(f: &FfPoly) -> Vec<usize> {
    let mut f = match f.monic() {
        Some(m) => m,
        None => return Vec::new(),
    };
    let field = f.zero_elem().field().clone();
    let q = field.order();
    let x = Poly::monomial(field.one(), 1);
    let mut xqi = x.clone();
    let mut degs = Vec::new();
    let mut i = 1;
    while f.degree().unwrap_or(0) > 0 {
        if 2 * i > f.degree().unwrap() {
            degs.push(f.degree().unwrap());
            break;
        }
        xqi = xqi.powmod(q, &f);
        let g = f.gcd(&xqi.sub(&x));
        let gd = g.degree().unwrap_or(0);
        if gd > 0 {
            for _ in 0..gd / i {
                degs.push(i);
            }
            f = f.divrem(&g).unwrap().0.monic().unwrap();
            xqi = xqi.rem(&f).unwrap();
        }
        i += 1;
    }
    degs.sort_unstable();
    degs
}

/// A field embedding `F -> E` given by the image of the generator of `F`.
#[derive(Clone, Debug)]
pub struct FfEmbedding {
    source: Arc<FiniteField>,
    image_of_generator: FfElem,
}

impl FfEmbedding {
    /// Finds an embedding by locating a root of the source modulus in the
    /// target; the root with the smallest index is used.
    pub fn find(source: &Arc<FiniteField>, target: &Arc<FiniteField>) -> Option<Self> {
        if source.p() != target.p() || target.degree() % source.degree() != 0 {
            return None;
        }
        let coeffs: Vec<FfElem> = source.modulus().iter().map(|&c| target.from_int(c as i64)).collect();
        let m = Poly::from_coeffs(coeffs);
        let roots = roots_with_multiplicity(&m);
        let (r, _) = roots.into_iter().next()?;
        Some(Self { source: source.clone(), image_of_generator: r })
    }

    pub fn target(&self) -> &Arc<FiniteField> {
        self.image_of_generator.field()
    }

    pub fn apply(&self, x: &FfElem) -> FfElem {
        debug_assert_eq!(**x.field(), *self.source);
        let target = self.target();
        let mut acc = target.zero();
        let mut pw = target.one();
        for &c in x.coeffs() {
            if c != 0 {
                acc = acc.add(&pw.scale_int(c as i64));
            }
            pw = pw.mul(&self.image_of_generator);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fpoly(field: &Arc<FiniteField>, c: &[i64]) -> FfPoly {
        Poly::from_coeffs(c.iter().map(|&x| field.from_int(x)).collect())
    }

    #[test]
    fn roots_of_x2_minus_2_over_f7() {
        let f7 = FiniteField::prime_field(7).unwrap();
        let roots = roots_with_multiplicity(&fpoly(&f7, &[-2, 0, 1]));
        let vals: Vec<_> = roots.iter().map(|(r, m)| (r.index(), *m)).collect();
        assert_eq!(vals, vec![(3, 1), (4, 1)]);
        let scan: Vec<_> = roots_by_scan(&fpoly(&f7, &[-2, 0, 1])).iter().map(|r| r.index()).collect();
        assert_eq!(scan, vec![3, 4]);
    }

    #[test]
    fn double_root_and_empty() {
        let f5 = FiniteField::prime_field(5).unwrap();
        let roots = roots_with_multiplicity(&fpoly(&f5, &[0, 0, 1]));
        assert_eq!(roots.len(), 1);
        assert_eq!((roots[0].0.index(), roots[0].1), (0, 2));
        let f7 = FiniteField::prime_field(7).unwrap();
        assert!(roots_with_multiplicity(&fpoly(&f7, &[1, 0, 1])).is_empty());
    }

    #[test]
    fn quadratic_extension_arithmetic() {
        // t^2 + 12 t + 2 over F_13 is irreducible
        let f = FiniteField::new(13, vec![2, 12, 1]).unwrap();
        let t = f.generator();
        // t^2 = -12 t - 2 = t + 11
        assert_eq!(t.mul(&t), f.from_coeffs(&[11, 1]));
        for i in 1..f.order() {
            let x = f.element(i);
            assert_eq!(x.mul(&x.inv().unwrap()), f.one());
        }
        assert!(FiniteField::new(13, vec![1, 0, 1]).is_err() || !fp_poly_is_irreducible(&[1, 0, 1], 13));
    }

    #[test]
    fn sqrt_roundtrip_in_f169() {
        let f = FiniteField::new(13, vec![2, 12, 1]).unwrap();
        let mut squares = 0;
        for x in f.elements() {
            if let Some(r) = x.sqrt() {
                assert_eq!(r.mul(&r), x);
                squares += 1;
            }
        }
        assert_eq!(squares, 85);
    }

    #[test]
    fn factor_degree_profile() {
        let f7 = FiniteField::prime_field(7).unwrap();
        // (x^2 + 1)(x - 3)
        let f = fpoly(&f7, &[1, 0, 1]).mul(&fpoly(&f7, &[-3, 1]));
        assert_eq!(factor_degrees(&f), vec![1, 2]);
    }

    #[test]
    fn embedding_preserves_arithmetic() {
        let small = FiniteField::new(13, vec![2, 12, 1]).unwrap();
        let big = FiniteField::with_degree(13, 4).unwrap();
        let emb = FfEmbedding::find(&small, &big).unwrap();
        let a = small.from_coeffs(&[3, 5]);
        let b = small.from_coeffs(&[7, 11]);
        assert_eq!(emb.apply(&a.mul(&b)), emb.apply(&a).mul(&emb.apply(&b)));
        assert_eq!(emb.apply(&a.add(&b)), emb.apply(&a).add(&emb.apply(&b)));
    }
}
