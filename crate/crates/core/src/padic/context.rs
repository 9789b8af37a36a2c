//! Towers `Q_p ⊂ unramified degree d ⊂ totally ramified degree e`.
//!
//! Elements of the ring of integers are stored on the basis `τ^i π^j`
//! (`0 ≤ i < d`, `0 ≤ j < e`) with coordinates in `Z/p^m`. Since this basis
//! is a `Z_p`-basis of the integers, arithmetic modulo `p^m` is exact in
//! `O/π^{em}`; the working precision `N` is kept at most `e(m-1)` so that one
//! spare digit absorbs the exact divisions by `p` needed to divide by powers
//! of `π`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::zmod::{is_prime, ZMod};
use super::PadicError;
use crate::finite_field::{find_irreducible, FfElem, FiniteField};

/// The integer description of a tower, as supplied by a user.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerSpec {
    pub p: u64,
    /// Monic, ascending coefficients; degree `d`.
    pub unram_poly: Vec<i64>,
    /// Monic in `π`, ascending; each coefficient is a `τ`-coordinate vector.
    pub eis_poly: Vec<Vec<i64>>,
}

#[derive(Debug)]
pub struct FieldContext {
    p: u64,
    d: usize,
    e: usize,
    n: i64,
    zm: ZMod,
    /// Monic unramified polynomial mod `p^m`, length `d + 1`.
    unram: Vec<u128>,
    /// Eisenstein coefficients below the leading one, each of length `d`.
    eis: Vec<Vec<u128>>,
    residue: Arc<FiniteField>,
    spec: Option<TowerSpec>,
    history: Vec<String>,
    /// `π^k` for `0 ≤ k ≤ N + e`.
    pi_pows: Vec<Vec<u128>>,
    /// `ω^q = (p / π^e)^q` for `0 ≤ q ≤ m`.
    omega_pows: Vec<Vec<u128>>,
}

impl PartialEq for FieldContext {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.n == other.n
            && self.zm == other.zm
            && self.unram == other.unram
            && self.eis == other.eis
    }
}

impl fmt::Display for FieldContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q_{} (d = {}, e = {}, N = {})", self.p, self.d, self.e, self.n)
    }
}

fn ceil_div(a: i64, b: i64) -> i64 {
    (a + b - 1).div_euclid(b)
}

impl FieldContext {
    /// Builds a tower from integer polynomials. `abs_precision` is in units
    /// of `v(π) = 1`.
    pub fn new(spec: TowerSpec, abs_precision: i64) -> Result<Arc<Self>, PadicError> {
        let p = spec.p;
        if p == 2 {
            return Err(PadicError::EvenPrime);
        }
        if !is_prime(p) {
            return Err(PadicError::NotPrime(p));
        }
        let d = spec.unram_poly.len().saturating_sub(1);
        let e = spec.eis_poly.len().saturating_sub(1);
        if d == 0 || spec.unram_poly[d] != 1 {
            return Err(PadicError::BadUnramified("polynomial must be monic of positive degree".into()));
        }
        if e == 0 || spec.eis_poly[e].first().copied().unwrap_or(0) != 1 || spec.eis_poly[e].iter().skip(1).any(|&c| c != 0)
        {
            return Err(PadicError::NotEisenstein("polynomial must be monic of positive degree".into()));
        }
        let (m, build) = Self::moduli(p, e, abs_precision)?;
        let unram: Vec<u128> = spec.unram_poly.iter().map(|&c| build.from_i128(c as i128)).collect();
        let mut eis = Vec::with_capacity(e);
        for (k, coeff) in spec.eis_poly[..e].iter().enumerate() {
            if coeff.len() > d {
                return Err(PadicError::NotEisenstein(format!("coefficient of π^{k} has more than {d} τ-coordinates")));
            }
            let mut v: Vec<u128> = coeff.iter().map(|&c| build.from_i128(c as i128)).collect();
            v.resize(d, 0);
            eis.push(v);
        }
        let ctx = Self::build(p, d, e, abs_precision, m, unram, eis, Some(spec), Vec::new())?;
        Ok(Arc::new(ctx))
    }

    /// `Q_p` itself, with `π = p`.
    pub fn rational(p: u64, abs_precision: i64) -> Result<Arc<Self>, PadicError> {
        Self::new(TowerSpec { p, unram_poly: vec![0, 1], eis_poly: vec![vec![-(p as i64)], vec![1]] }, abs_precision)
    }

    fn moduli(p: u64, e: usize, n: i64) -> Result<(u32, ZMod), PadicError> {
        if n < 1 {
            return Err(PadicError::BadPrecision(n));
        }
        let m = ceil_div(n, e as i64) + 1;
        let build = ZMod::new(p, m as u32 + 1).ok_or(PadicError::PrecisionTooLarge { p, digits: m as u32 + 1 })?;
        Ok((m as u32, build))
    }

    /// `unram` and `eis` are reduced modulo `p^{m+1}` by `build`.
    #[allow(clippy::too_many_arguments)]
    fn build(
        p: u64,
        d: usize,
        e: usize,
        n: i64,
        m: u32,
        unram: Vec<u128>,
        eis: Vec<Vec<u128>>,
        spec: Option<TowerSpec>,
        history: Vec<String>,
    ) -> Result<Self, PadicError> {
        let zm = ZMod::new(p, m).expect("smaller than the construction modulus");
        let pp = p as u128;
        // residue field from the unramified polynomial mod p
        let modp: Vec<u64> = unram.iter().map(|&c| (c % pp) as u64).collect();
        let residue = FiniteField::new(p, modp).map_err(|_| PadicError::BadUnramified("reducible modulo p".into()))?;
        // Eisenstein conditions
        for (k, c) in eis.iter().enumerate() {
            if c.iter().any(|&x| x % pp != 0) {
                return Err(PadicError::NotEisenstein(format!("coefficient of π^{k} is not divisible by p")));
            }
        }
        if eis[0].iter().all(|&x| (x / pp) % pp == 0) {
            return Err(PadicError::NotEisenstein("constant term does not have valuation exactly 1".into()));
        }
        let mut ctx = Self {
            p,
            d,
            e,
            n,
            zm,
            unram: unram.iter().map(|&c| c % zm.modulus()).collect(),
            eis: eis.iter().map(|c| c.iter().map(|&x| x % zm.modulus()).collect()).collect(),
            residue,
            spec,
            history,
            pi_pows: Vec::new(),
            omega_pows: Vec::new(),
        };
        // W = -Σ (E_k / p) π^k, so that π^e = p W; computed from the extra digit.
        let mut w = vec![0u128; d * e];
        for (k, c) in eis.iter().enumerate() {
            for (i, &x) in c.iter().enumerate() {
                w[k * d + i] = zm.neg((x / pp) % zm.modulus());
            }
        }
        let omega = ctx.raw_unit_inverse(&w);
        let mut omega_pows = vec![ctx.raw_one()];
        for q in 1..=m as usize {
            let next = ctx.raw_mul(&omega_pows[q - 1], &omega);
            omega_pows.push(next);
        }
        let mut pi_pows = vec![ctx.raw_one()];
        let pi = ctx.raw_pi();
        for k in 1..=(n as usize + e) {
            let next = ctx.raw_mul(&pi_pows[k - 1], &pi);
            pi_pows.push(next);
        }
        ctx.omega_pows = omega_pows;
        ctx.pi_pows = pi_pows;
        Ok(ctx)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Degree of the unramified part.
    pub fn unram_degree(&self) -> usize {
        self.d
    }

    /// Ramification index.
    pub fn ram_index(&self) -> usize {
        self.e
    }

    /// Working absolute precision `N`, in units of `v(π)`.
    pub fn precision(&self) -> i64 {
        self.n
    }

    pub fn zmod(&self) -> &ZMod {
        &self.zm
    }

    pub fn residue_field(&self) -> &Arc<FiniteField> {
        &self.residue
    }

    pub fn spec(&self) -> Option<&TowerSpec> {
        self.spec.as_ref()
    }

    /// Extensions applied on top of the user-supplied tower.
    pub fn history(&self) -> &[String] {
        &self.history
    }

    pub(crate) fn dim(&self) -> usize {
        self.d * self.e
    }

    /// The unramified polynomial's coefficients, as residues mod `p^m`.
    pub fn unram_coeffs(&self) -> &[u128] {
        &self.unram
    }

    /// Eisenstein coefficients below the leading one, residues mod `p^m`.
    pub fn eis_coeffs(&self) -> &[Vec<u128>] {
        &self.eis
    }

    pub(crate) fn raw_one(&self) -> Vec<u128> {
        let mut v = vec![0; self.dim()];
        v[0] = 1 % self.zm.modulus();
        v
    }

    pub(crate) fn raw_pi(&self) -> Vec<u128> {
        let mut v = vec![0; self.dim()];
        if self.e > 1 {
            v[self.d] = 1;
        } else {
            // π = -E_0
            for i in 0..self.d {
                v[i] = self.zm.neg(self.eis[0][i]);
            }
        }
        v
    }

    pub(crate) fn pi_pow(&self, k: usize) -> &[u128] {
        &self.pi_pows[k]
    }

    pub(crate) fn omega_pow(&self, q: usize) -> &[u128] {
        &self.omega_pows[q]
    }

    pub(crate) fn raw_from_int(&self, x: i128) -> Vec<u128> {
        let mut v = vec![0; self.dim()];
        v[0] = self.zm.from_i128(x);
        v
    }

    fn unram_mul(&self, a: &[u128], b: &[u128]) -> Vec<u128> {
        let d = self.d;
        let zm = &self.zm;
        if d == 1 {
            return vec![zm.mul(a[0], b[0])];
        }
        let mut prod = vec![0u128; 2 * d - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y != 0 {
                    prod[i + j] = zm.add(prod[i + j], zm.mul(x, y));
                }
            }
        }
        self.unram_reduce(prod)
    }

    fn unram_reduce(&self, mut prod: Vec<u128>) -> Vec<u128> {
        let d = self.d;
        let zm = &self.zm;
        for k in (d..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for i in 0..d {
                prod[k - d + i] = zm.sub(prod[k - d + i], zm.mul(c, self.unram[i]));
            }
        }
        prod.truncate(d);
        prod.resize(d, 0);
        prod
    }

    /// Product of two raw vectors modulo `p^m`.
    pub(crate) fn raw_mul(&self, a: &[u128], b: &[u128]) -> Vec<u128> {
        let (d, e) = (self.d, self.e);
        let zm = &self.zm;
        if d * e == 1 {
            return vec![zm.mul(a[0], b[0])];
        }
        // convolution in (τ, π), then reduce τ-degree per π-slot
        let mut conv = vec![vec![0u128; 2 * d - 1]; 2 * e - 1];
        for j1 in 0..e {
            let sa = &a[j1 * d..(j1 + 1) * d];
            if sa.iter().all(|&x| x == 0) {
                continue;
            }
            for j2 in 0..e {
                let sb = &b[j2 * d..(j2 + 1) * d];
                let row = &mut conv[j1 + j2];
                for (i1, &x) in sa.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for (i2, &y) in sb.iter().enumerate() {
                        if y != 0 {
                            row[i1 + i2] = zm.add(row[i1 + i2], zm.mul(x, y));
                        }
                    }
                }
            }
        }
        let mut slots: Vec<Vec<u128>> = conv.into_iter().map(|row| self.unram_reduce(row)).collect();
        // π^j = -Σ E_k π^{j-e+k} for j ≥ e
        for j in (e..2 * e - 1).rev() {
            let c = std::mem::replace(&mut slots[j], vec![0; d]);
            if c.iter().all(|&x| x == 0) {
                continue;
            }
            for k in 0..e {
                let t = self.unram_mul(&c, &self.eis[k]);
                let slot = &mut slots[j - e + k];
                for i in 0..d {
                    slot[i] = zm.sub(slot[i], t[i]);
                }
            }
        }
        let mut out = Vec::with_capacity(d * e);
        for s in slots.into_iter().take(e) {
            out.extend(s);
        }
        out
    }

    pub(crate) fn raw_add(&self, a: &[u128], b: &[u128]) -> Vec<u128> {
        a.iter().zip(b).map(|(&x, &y)| self.zm.add(x, y)).collect()
    }

    pub(crate) fn raw_sub(&self, a: &[u128], b: &[u128]) -> Vec<u128> {
        a.iter().zip(b).map(|(&x, &y)| self.zm.sub(x, y)).collect()
    }

    pub(crate) fn raw_neg(&self, a: &[u128]) -> Vec<u128> {
        a.iter().map(|&x| self.zm.neg(x)).collect()
    }

    /// Valuation of a raw vector, `None` when it is zero mod `p^m`.
    pub(crate) fn raw_valuation(&self, a: &[u128]) -> Option<i64> {
        let mut best: Option<i64> = None;
        for j in 0..self.e {
            let vp = a[j * self.d..(j + 1) * self.d].iter().filter_map(|&c| self.zm.val(c)).min();
            if let Some(vp) = vp {
                let v = self.e as i64 * vp as i64 + j as i64;
                best = Some(best.map_or(v, |b: i64| b.min(v)));
            }
        }
        best
    }

    /// Reduces modulo `π^r`, canonically.
    pub(crate) fn raw_truncate(&self, a: &mut [u128], r: i64) {
        let e = self.e as i64;
        for j in 0..self.e {
            let digits = ceil_div(r - j as i64, e);
            for c in &mut a[j * self.d..(j + 1) * self.d] {
                if digits <= 0 {
                    *c = 0;
                } else {
                    *c = self.zm.truncate(*c, digits as u32);
                }
            }
        }
    }

    /// Exact quotient `y / π^k` of a vector with `v(y) ≥ k`; the result is
    /// correct modulo `π^{e(m-q)}` with `q = ⌈k/e⌉`.
    pub(crate) fn raw_div_pi(&self, y: &[u128], k: i64) -> Vec<u128> {
        if k == 0 {
            return y.to_vec();
        }
        let e = self.e as i64;
        let q = ceil_div(k, e);
        let shifted = self.raw_mul(y, self.pi_pow((e * q - k) as usize));
        let pq = self.zm.p_pow(q as u32);
        let divided: Vec<u128> = shifted
            .iter()
            .map(|&c| {
                debug_assert_eq!(c % pq, 0, "division by π^{k} is not exact");
                c / pq
            })
            .collect();
        self.raw_mul(&divided, self.omega_pow(q as usize))
    }

    pub(crate) fn raw_residue(&self, a: &[u128]) -> FfElem {
        let pp = self.p as i64;
        let coeffs: Vec<i64> = a[..self.d].iter().map(|&c| (c % pp as u128) as i64).collect();
        self.residue.from_coeffs(&coeffs)
    }

    pub(crate) fn raw_from_residue(&self, x: &FfElem) -> Vec<u128> {
        let mut v = vec![0; self.dim()];
        for (i, &c) in x.coeffs().iter().enumerate() {
            v[i] = c as u128;
        }
        v
    }

    /// Inverse of a unit modulo `p^m`, by Newton iteration.
    pub(crate) fn raw_unit_inverse(&self, a: &[u128]) -> Vec<u128> {
        let r = self.raw_residue(a).inv().expect("unit");
        let mut x = self.raw_from_residue(&r);
        let two = self.raw_from_int(2);
        let target = (self.e * self.zm.digits() as usize) as i64;
        let mut prec = 1i64;
        while prec < target {
            let ax = self.raw_mul(a, &x);
            x = self.raw_mul(&x, &self.raw_sub(&two, &ax));
            prec *= 2;
        }
        x
    }

    /// `n · ω^{v_p(n)}` split as `(v_p(n), unit raw vector)`.
    pub(crate) fn raw_from_bigint(&self, n: &BigInt) -> Option<(i64, Vec<u128>)> {
        use num_traits::Zero;
        if n.is_zero() {
            return None;
        }
        let p = BigInt::from(self.p);
        let mut k = 0i64;
        let mut x = n.clone();
        while (&x % &p).is_zero() {
            x /= &p;
            k += 1;
        }
        let modulus = BigInt::from(self.zm.modulus());
        let r = ((x % &modulus) + &modulus) % &modulus;
        let mut v = vec![0; self.dim()];
        v[0] = r.to_u128().expect("reduced");
        if k > 0 {
            let kk = k.min(self.zm.digits() as i64) as usize;
            // p^k = π^{ek} ω^k; powers past m only matter beyond the precision cap
            let mut w = self.omega_pow(kk).to_vec();
            for _ in kk..k as usize {
                w = self.raw_mul(&w, self.omega_pow(1));
            }
            v = self.raw_mul(&v, &w);
        }
        Some((k * self.e as i64, v))
    }

    /// The tower `K(√π)`: the Eisenstein polynomial `E(x)` becomes `E(x²)`
    /// and the precision doubles. Elements map by [`FieldContext::embed_ramified`].
    pub fn ramified_quadratic(&self) -> Result<Arc<Self>, PadicError> {
        let n = 2 * self.n;
        let e = 2 * self.e;
        let (m, build) = Self::moduli(self.p, e, n)?;
        let (unram, eis) = self.construction_coeffs(build)?;
        let mut new_eis = vec![vec![0u128; self.d]; e];
        for (k, c) in eis.into_iter().enumerate() {
            new_eis[2 * k] = c;
        }
        let mut history = self.history.clone();
        history.push(format!("adjoined a square root of the uniformizer (e = {e})"));
        Ok(Arc::new(Self::build(self.p, self.d, e, n, m, unram, new_eis, self.spec.clone(), history)?))
    }

    /// The same tower at another working precision. Elements move between
    /// the two with [`super::PadicElement::cast`].
    pub fn with_precision(&self, n: i64) -> Result<Arc<Self>, PadicError> {
        let (m, build) = Self::moduli(self.p, self.e, n)?;
        let (unram, eis) = self.construction_coeffs(build)?;
        Ok(Arc::new(Self::build(self.p, self.d, self.e, n, m, unram, eis, self.spec.clone(), self.history.clone())?))
    }

    /// Whether two contexts describe the same tower, possibly at different
    /// precisions.
    pub fn same_tower(&self, other: &Self) -> bool {
        if self.p != other.p || self.d != other.d || self.e != other.e {
            return false;
        }
        let modulus = self.zm.modulus().min(other.zm.modulus());
        let reduce = |v: &[u128]| v.iter().map(|c| c % modulus).collect::<Vec<_>>();
        reduce(&self.unram) == reduce(&other.unram)
            && self.eis.iter().zip(&other.eis).all(|(a, b)| reduce(a) == reduce(b))
    }

    /// Coefficients of the defining polynomials reduced modulo `p^{m+1}` of
    /// a possibly different construction modulus. Only integer input towers
    /// and towers whose stored residues are already exact can be rebuilt.
    fn construction_coeffs(&self, build: ZMod) -> Result<(Vec<u128>, Vec<Vec<u128>>), PadicError> {
        if let Some(spec) = &self.spec {
            if self.history.is_empty() || self.history.iter().all(|h| h.starts_with("adjoined a square root")) {
                let unram = spec.unram_poly.iter().map(|&c| build.from_i128(c as i128)).collect();
                let mut eis: Vec<Vec<u128>> = spec.eis_poly[..spec.eis_poly.len() - 1]
                    .iter()
                    .map(|c| {
                        let mut v: Vec<u128> = c.iter().map(|&x| build.from_i128(x as i128)).collect();
                        v.resize(self.d, 0);
                        v
                    })
                    .collect();
                // a previous ramified upgrade substituted x^(2^t)
                let stride = self.e / eis.len();
                if stride > 1 {
                    let mut spread = vec![vec![0u128; self.d]; self.e];
                    for (k, c) in eis.into_iter().enumerate() {
                        spread[stride * k] = c;
                    }
                    eis = spread;
                }
                return Ok((unram, eis));
            }
        }
        Err(PadicError::Unsupported("rebuilding a tower obtained by an unramified extension".into()))
    }

    /// Embeds an element into [`FieldContext::ramified_quadratic`].
    pub fn embed_ramified(&self, target: &Arc<Self>, x: &super::PadicElement) -> super::PadicElement {
        debug_assert_eq!(target.e, 2 * self.e);
        let (val, rel, unit) = x.parts();
        let mut v = vec![0u128; target.dim()];
        for j in 0..self.e {
            for i in 0..self.d {
                v[2 * j * self.d + i] = unit[j * self.d + i] % target.zm.modulus();
            }
        }
        super::PadicElement::from_parts(target, 2 * val, 2 * rel, v)
    }

    /// A tower with the unramified degree doubled: a new unramified
    /// polynomial of degree `2d` (the first irreducible one modulo p in a
    /// fixed enumeration), with `τ` mapped to a Hensel-lifted root of the old
    /// unramified polynomial.
    pub fn unramified_doubling(&self) -> Result<(Arc<Self>, UnramifiedMap), PadicError> {
        let p = self.p;
        let d2 = 2 * self.d;
        let new_poly = find_irreducible(p, d2);
        let (m, build) = Self::moduli(p, self.e, self.n)?;
        // the unramified ring of degree 2d at one extra digit, to map τ
        let aux_spec = TowerSpec {
            p,
            unram_poly: new_poly.iter().map(|&c| c as i64).collect(),
            eis_poly: vec![vec![-(p as i64)], vec![1]],
        };
        let aux = Self::new(aux_spec, m as i64 + 2)?;
        let old_poly: Vec<super::PadicElement> = self
            .construction_coeffs(build)?
            .0
            .iter()
            .map(|&c| super::PadicElement::from_bigint(&aux, &BigInt::from(c)))
            .collect();
        let f = crate::poly::Poly::from_coeffs(old_poly);
        let residue_poly = f.map(aux.residue_field().zero(), |c| c.residue().expect("integral"));
        let roots = crate::finite_field::roots_with_multiplicity(&residue_poly);
        let (r0, _) = roots.first().ok_or(PadicError::Unsupported("unramified polynomial has no root".into()))?;
        let rho = super::hensel_root(&f, r0).map_err(|e| PadicError::Unsupported(format!("{e}")))?;
        // powers of ρ as integer vectors mod p^{m+1}
        let mut rho_pows = Vec::with_capacity(self.d);
        let mut acc = super::PadicElement::one(&aux);
        for _ in 0..self.d {
            rho_pows.push(acc.integral_coords().into_iter().map(|c| c % build.modulus()).collect::<Vec<u128>>());
            acc = acc.mul(&rho);
        }
        let map_unram = |c: &[u128], zm: &ZMod| -> Vec<u128> {
            let mut out = vec![0u128; d2];
            for (i, &x) in c.iter().enumerate() {
                for (t, &r) in rho_pows[i].iter().enumerate() {
                    out[t] = zm.add(out[t], zm.mul(x % zm.modulus(), r % zm.modulus()));
                }
            }
            out
        };
        let (_, old_eis) = self.construction_coeffs(build)?;
        let eis: Vec<Vec<u128>> = old_eis.iter().map(|c| map_unram(c, &build)).collect();
        let unram: Vec<u128> = new_poly.iter().map(|&c| c as u128).collect();
        let mut history = self.history.clone();
        history.push(format!("doubled the unramified degree (d = {d2}, residue modulus {:?})", new_poly));
        let target = Arc::new(Self::build(p, d2, self.e, self.n, m, unram, eis, self.spec.clone(), history)?);
        let images = rho_pows.iter().map(|v| v.iter().map(|&c| c % target.zm.modulus()).collect()).collect();
        Ok((target.clone(), UnramifiedMap { source_d: self.d, target, rho_pows: images }))
    }
}

/// The embedding produced by [`FieldContext::unramified_doubling`].
#[derive(Clone, Debug)]
pub struct UnramifiedMap {
    source_d: usize,
    target: Arc<FieldContext>,
    rho_pows: Vec<Vec<u128>>,
}

impl UnramifiedMap {
    pub fn target(&self) -> &Arc<FieldContext> {
        &self.target
    }

    pub fn apply(&self, x: &super::PadicElement) -> super::PadicElement {
        let (val, rel, unit) = x.parts();
        let t = &self.target;
        let zm = &t.zm;
        let mut v = vec![0u128; t.dim()];
        for j in 0..t.e {
            for i in 0..self.source_d {
                let c = unit[j * self.source_d + i];
                if c == 0 {
                    continue;
                }
                for (k, &r) in self.rho_pows[i].iter().enumerate() {
                    let idx = j * t.d + k;
                    v[idx] = zm.add(v[idx], zm.mul(c, r));
                }
            }
        }
        super::PadicElement::from_parts(t, val, rel, v)
    }
}
