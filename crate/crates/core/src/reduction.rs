//! Reduction of a toggle model modulo `π` and the hyperelliptic special
//! fiber: the double cover of the conic `Q̄ = 0` branched over its eight
//! intersection points with `Ḡ = 0`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::finite_field::{factor_degrees, roots_with_multiplicity, FfElem, FfEmbedding, FfPoly, FiniteField};
use crate::linalg::Matrix;
use crate::poly::{MultiPoly, Poly};
use crate::riemann::ToggleModel;

/// A ternary or binary form over a finite field.
pub type FfForm = MultiPoly<FfElem>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReductionError {
    #[error("coefficient with negative valuation in the model")]
    NegativeValuation,
    #[error("degenerate conic: Q̄ has a singular Gram matrix")]
    DegenerateConic,
    #[error("no point found on the conic")]
    NoConicPoint,
    #[error("Ḡ vanishes identically on the conic")]
    IdenticallyZeroPullback,
    #[error("non-transverse intersection: the pulled-back octic has a repeated root")]
    NonTransverse,
    #[error("fewer than 8 intersection points (degree {0} pullback)")]
    FewerPoints(usize),
    #[error("octic roots do not split over an extension of degree {0} of F_p")]
    NoSplittingField(usize),
    #[error("binary forms must both be squarefree octics")]
    NotOctic,
}

/// Binary form `Σ c_i x^i z^(n−i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryForm {
    pub coeffs: Vec<FfElem>,
}

impl BinaryForm {
    pub fn new(coeffs: Vec<FfElem>) -> Self {
        assert!(!coeffs.is_empty(), "a binary form needs a degree");
        Self { coeffs }
    }

    /// From integer coefficients, `coeffs[i]` on `x^i z^(n−i)`.
    pub fn from_ints(field: &Arc<FiniteField>, coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        self.coeffs[0].field()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// `f(x, 1)`.
    pub fn dehomogenize(&self) -> FfPoly {
        Poly::new(self.coeffs.clone(), self.field().zero()).trimmed()
    }

    /// Multiplicity of the root `(1 : 0)`.
    pub fn infinity_multiplicity(&self) -> usize {
        self.coeffs.iter().rev().take_while(|c| c.is_zero()).count()
    }

    pub fn eval(&self, x: &FfElem, z: &FfElem) -> FfElem {
        let n = self.degree();
        let mut acc = x.field().zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            acc = acc.add(&c.mul(&x.pow_u128(i as u128)).mul(&z.pow_u128((n - i) as u128)));
        }
        acc
    }

    /// `f(m00 x + m01 z, m10 x + m11 z)`.
    pub fn transform(&self, m: &[[FfElem; 2]; 2]) -> Self {
        let field = self.field().clone();
        let n = self.degree() as u32;
        let as_poly = MultiPoly::from_terms(2, field.zero(), self.coeffs.iter().enumerate().map(|(i, c)| ([i as u32, n - i as u32, 0], c.clone())));
        let x = MultiPoly::var(2, 0, &field.one());
        let z = MultiPoly::var(2, 1, &field.one());
        let images = [x.scale(&m[0][0]).add(&z.scale(&m[0][1])), x.scale(&m[1][0]).add(&z.scale(&m[1][1]))];
        to_binary(&as_poly.compose(&images), n)
    }

    pub fn scale(&self, c: &FfElem) -> Self {
        Self::new(self.coeffs.iter().map(|x| x.mul(c)).collect())
    }

    pub fn map(&self, emb: &FfEmbedding) -> Self {
        Self::new(self.coeffs.iter().map(|c| emb.apply(c)).collect())
    }

    /// Squarefree as a binary form: at most a simple root at infinity and
    /// a squarefree affine part.
    pub fn is_squarefree(&self) -> bool {
        if self.is_zero() || self.infinity_multiplicity() > 1 {
            return false;
        }
        let f = self.dehomogenize();
        match f.degree() {
            None => false,
            Some(0) => true,
            Some(_) => f.gcd(&f.derivative()).degree() == Some(0),
        }
    }
}

impl std::fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let n = self.degree();
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mon = match (i, n - i) {
                (0, 0) => String::new(),
                (a, 0) => pow_str("x", a),
                (0, b) => pow_str("z", b),
                (a, b) => format!("{}*{}", pow_str("x", a), pow_str("z", b)),
            };
            let coeff = c.to_string();
            terms.push(match (coeff.as_str(), mon.is_empty()) {
                (_, true) => coeff,
                ("1", false) => mon,
                _ if coeff.contains('+') => format!("({coeff})*{mon}"),
                _ => format!("{coeff}*{mon}"),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

fn pow_str(v: &str, k: usize) -> String {
    if k == 1 {
        v.to_string()
    } else {
        format!("{v}^{k}")
    }
}

/// `Q̄` and `Ḡ0` over the residue field.
#[derive(Clone, Debug)]
pub struct ReducedModel {
    pub q: FfForm,
    pub g: FfForm,
}

fn reduce_form(f: &crate::bitangents::KQuartic, field: &Arc<FiniteField>) -> Result<FfForm, ReductionError> {
    let mut out = MultiPoly::zero(f.nvars(), field.zero());
    for (e, c) in f.terms() {
        out.add_term(*e, c.residue().ok_or(ReductionError::NegativeValuation)?);
    }
    Ok(out)
}

pub fn reduce_model(t: &ToggleModel) -> Result<ReducedModel, ReductionError> {
    let field = t.q.zero_elem().ctx().residue_field().clone();
    Ok(ReducedModel { q: reduce_form(&t.q, &field)?, g: reduce_form(&t.g0, &field)? })
}

/// Symmetric matrix of a ternary quadratic form, scaled by 2 so that no
/// division is needed: `2Q(x) = xᵀ S x`.
pub fn gram_matrix(q: &FfForm) -> Matrix<FfElem> {
    let field = q.zero_elem().field().clone();
    let mut s = Matrix::filled(3, 3, field.zero());
    for i in 0..3 {
        for j in 0..3 {
            let mut e = [0u32; 3];
            e[i] += 1;
            e[j] += 1;
            let c = q.coeff(&e);
            s[(i, j)] = if i == j { c.scale_int(2) } else { c };
        }
    }
    s
}

pub fn is_nondegenerate(q: &FfForm) -> bool {
    !gram_matrix(q).det().is_zero()
}

/// A point on a conic, by scanning `(1 : y : z)`, then `(0 : 1 : z)`,
/// then `(0 : 0 : 1)`.
pub fn conic_point(q: &FfForm) -> Option<[FfElem; 3]> {
    let field = q.zero_elem().field().clone();
    let one = field.one();
    let zero = field.zero();
    for y in field.elements() {
        for z in field.elements() {
            let pt = [one.clone(), y.clone(), z];
            if q.eval(&pt).is_zero() {
                return Some(pt);
            }
        }
    }
    for z in field.elements() {
        let pt = [zero.clone(), one.clone(), z];
        if q.eval(&pt).is_zero() {
            return Some(pt);
        }
    }
    let pt = [zero.clone(), zero, one];
    q.eval(&pt).is_zero().then_some(pt)
}

/// Quadratic parametrization `(s : t) ↦ φ(s, t)` of a non-degenerate conic
/// through a point `R` on it: for `X = s B + t C`, the second intersection
/// of the line `RX` is `Q(X) R − (Q(R + X) − Q(X)) X`.
pub fn parametrize_conic(q: &FfForm) -> Result<[FfForm; 3], ReductionError> {
    if !is_nondegenerate(q) {
        return Err(ReductionError::DegenerateConic);
    }
    let r = conic_point(q).ok_or(ReductionError::NoConicPoint)?;
    let field = q.zero_elem().field().clone();
    let zero = field.zero();
    let one = field.one();
    // complete R to a basis with two unit vectors
    let k = r.iter().position(|c| !c.is_zero()).expect("projective point");
    let others: Vec<usize> = (0..3).filter(|i| *i != k).collect();
    let s = MultiPoly::var(2, 0, &one);
    let t = MultiPoly::var(2, 1, &one);
    let x: Vec<FfForm> = (0..3)
        .map(|i| {
            if i == others[0] {
                s.clone()
            } else if i == others[1] {
                t.clone()
            } else {
                MultiPoly::zero(2, zero.clone())
            }
        })
        .collect();
    let rx: Vec<FfForm> = (0..3).map(|i| x[i].add(&MultiPoly::constant(2, r[i].clone()))).collect();
    let qx = q.compose(&x);
    let qrx = q.compose(&rx).sub(&qx);
    let phi: [FfForm; 3] =
        std::array::from_fn(|i| qx.scale(&r[i]).sub(&qrx.mul(&x[i])));
    Ok(phi)
}

/// `(s, t)` coefficients of a binary form held as a two-variable polynomial,
/// as `Σ c_i s^i t^(n−i)`.
pub fn to_binary(f: &FfForm, n: u32) -> BinaryForm {
    let field = f.zero_elem().field().clone();
    let mut coeffs = vec![field.zero(); n as usize + 1];
    for (e, c) in f.terms() {
        debug_assert_eq!(e[0] + e[1], n);
        coeffs[e[0] as usize] = c.clone();
    }
    BinaryForm::new(coeffs)
}

/// Certificate that a reduced toggle model is good.
#[derive(Clone, Debug)]
pub struct GoodCertificate {
    pub gram_det: FfElem,
    pub param: [FfForm; 3],
    pub octic: BinaryForm,
}

/// Non-degeneracy of `Q̄` and eight distinct transverse intersection
/// points, read off the pullback of `Ḡ` along the conic parametrization.
pub fn check_good(m: &ReducedModel) -> Result<GoodCertificate, ReductionError> {
    let gram_det = gram_matrix(&m.q).det();
    if gram_det.is_zero() {
        return Err(ReductionError::DegenerateConic);
    }
    let param = parametrize_conic(&m.q)?;
    let pulled = m.g.compose(&param);
    if pulled.is_zero() {
        return Err(ReductionError::IdenticallyZeroPullback);
    }
    let octic = to_binary(&pulled.neg(), 8);
    if !octic.is_squarefree() {
        return Err(ReductionError::NonTransverse);
    }
    Ok(GoodCertificate { gram_det, param, octic })
}

/// The special fiber `y² = f(x, z)`.
#[derive(Clone, Debug)]
pub struct HyperellipticModel {
    /// `f = −Ḡ0 ∘ φ`, matching `y² + G0 = 0`.
    pub octic: BinaryForm,
    pub conic: FfForm,
    pub param: [FfForm; 3],
    /// Degrees of the residue fields of the branch points.
    pub branch_degrees: Vec<usize>,
}

pub fn hyperelliptic_reduction(m: &ReducedModel, cert: &GoodCertificate) -> HyperellipticModel {
    let octic = cert.octic.clone();
    let mut branch_degrees = factor_degrees(&octic.dehomogenize());
    if octic.infinity_multiplicity() == 1 {
        branch_degrees.insert(0, 1);
    }
    HyperellipticModel { octic, conic: m.q.clone(), param: cert.param.clone(), branch_degrees }
}

/// Projective roots `(x : z)` of a binary form over a field where it
/// splits, or `None` if it does not split there.
pub fn projective_roots(f: &BinaryForm) -> Option<Vec<[FfElem; 2]>> {
    let field = f.field().clone();
    let mut out = Vec::new();
    for _ in 0..f.infinity_multiplicity() {
        out.push([field.one(), field.zero()]);
    }
    let aff = f.dehomogenize();
    let roots = roots_with_multiplicity(&aff);
    for (r, m) in &roots {
        for _ in 0..*m {
            out.push([r.clone(), field.one()]);
        }
    }
    (out.len() == f.degree()).then_some(out)
}

fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// Smallest extension of the base field over which both forms split.
pub fn common_splitting_field(f: &BinaryForm, g: &BinaryForm) -> Result<Arc<FiniteField>, ReductionError> {
    let base = f.field().clone();
    let mut l = 1;
    for h in [f, g] {
        for d in factor_degrees(&h.dehomogenize()) {
            l = lcm(l, d);
        }
    }
    let deg = base.degree() * l;
    let big = FiniteField::with_degree(base.p(), deg).map_err(|_| ReductionError::NoSplittingField(deg))?;
    Ok(big)
}

fn cross_zero(a: &[FfElem; 2], b: &[FfElem; 2]) -> bool {
    a[0].mul(&b[1]).sub(&a[1].mul(&b[0])).is_zero()
}

/// Matrix sending `(1:0), (0:1), (1:1)` to the three given points.
fn frame_matrix(p: &[[FfElem; 2]; 3]) -> Option<Matrix<FfElem>> {
    let m = Matrix::from_rows(vec![vec![p[0][0].clone(), p[1][0].clone()], vec![p[0][1].clone(), p[1][1].clone()]]);
    let ab = m.solve(&[p[2][0].clone(), p[2][1].clone()])?;
    if ab.iter().any(|c| c.is_zero()) {
        return None;
    }
    Some(Matrix::from_rows(vec![
        vec![ab[0].mul(&p[0][0]), ab[1].mul(&p[1][0])],
        vec![ab[0].mul(&p[0][1]), ab[1].mul(&p[1][1])],
    ]))
}

/// A Möbius transformation carrying the roots of `f` onto those of `g`,
/// as a 2 × 2 matrix over the splitting field.
pub fn find_mobius(f: &BinaryForm, g: &BinaryForm) -> Result<Option<Matrix<FfElem>>, ReductionError> {
    if f.degree() != g.degree() || !f.is_squarefree() || !g.is_squarefree() {
        return Err(ReductionError::NotOctic);
    }
    let big = common_splitting_field(f, g)?;
    let emb = FfEmbedding::find(f.field(), &big).ok_or(ReductionError::NoSplittingField(big.degree()))?;
    let rf = projective_roots(&f.map(&emb)).ok_or(ReductionError::NoSplittingField(big.degree()))?;
    let rg = projective_roots(&g.map(&emb)).ok_or(ReductionError::NoSplittingField(big.degree()))?;
    let n = rf.len();
    if n < 3 {
        return Err(ReductionError::NotOctic);
    }
    let src = frame_matrix(&[rf[0].clone(), rf[1].clone(), rf[2].clone()]).expect("distinct roots");
    let src_inv = src.inverse().expect("invertible");
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i == j || j == k || i == k {
                    continue;
                }
                let Some(dst) = frame_matrix(&[rg[i].clone(), rg[j].clone(), rg[k].clone()]) else { continue };
                let t = dst.mul(&src_inv);
                let all = rf.iter().all(|r| {
                    let im = t.mul_vec(r);
                    let im = [im[0].clone(), im[1].clone()];
                    rg.iter().any(|s| cross_zero(&im, s))
                });
                if all {
                    return Ok(Some(t));
                }
            }
        }
    }
    Ok(None)
}

/// Whether `y² = f` and `y² = g` are isomorphic over the algebraic
/// closure: a Möbius transformation matches the branch points.
pub fn octic_equivalent(f: &BinaryForm, g: &BinaryForm) -> Result<bool, ReductionError> {
    Ok(find_mobius(f, g)?.is_some())
}

/// Number of points of `y² = f(x, z)` in `P(1, 4, 1)` over the field of
/// the coefficients of `f`, for a form of even degree.
pub fn point_count(f: &BinaryForm) -> u128 {
    let field = f.field().clone();
    let one = field.one();
    let chi = |v: &FfElem| -> u128 {
        if v.is_zero() {
            1
        } else if v.is_square() {
            2
        } else {
            0
        }
    };
    let mut n = 0;
    for x in field.elements() {
        n += chi(&f.eval(&x, &one));
    }
    n + chi(&f.eval(&one, &field.zero()))
}

/// `|N − (q + 1)| ≤ 2g√q` for genus `g = deg/2 − 1`.
pub fn satisfies_weil_bound(f: &BinaryForm, count: u128) -> bool {
    let q = f.field().order() as i128;
    let genus = (f.degree() / 2 - 1) as i128;
    let d = count as i128 - (q + 1);
    d * d <= 4 * genus * genus * q
}

/// Serializable summary of the special fiber for reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OcticSummary {
    pub p: u64,
    pub field_modulus: Vec<u64>,
    /// `coeffs[i]` on `x^i z^(8−i)`, each on the power basis of the field.
    pub coeffs: Vec<Vec<u64>>,
    pub display: String,
    pub branch_degrees: Vec<usize>,
    pub point_count: u128,
}

impl OcticSummary {
    pub fn new(h: &HyperellipticModel) -> Self {
        let f = &h.octic;
        Self {
            p: f.field().p(),
            field_modulus: f.field().modulus().to_vec(),
            coeffs: f.coeffs.iter().map(|c| c.coeffs().to_vec()).collect(),
            display: f.to_string(),
            branch_degrees: h.branch_degrees.clone(),
            point_count: point_count(f),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f7() -> Arc<FiniteField> {
        FiniteField::prime_field(7).unwrap()
    }

    fn ternary(field: &Arc<FiniteField>, terms: &[([u32; 3], i64)]) -> FfForm {
        MultiPoly::from_terms(3, field.zero(), terms.iter().map(|(e, c)| (*e, field.from_int(*c))))
    }

    #[test]
    fn standard_conic_parametrization() {
        let k = f7();
        let q = ternary(&k, &[([1, 0, 1], 1), ([0, 2, 0], -1)]);
        let phi = parametrize_conic(&q).unwrap();
        assert!(q.compose(&phi).is_zero());
    }

    #[test]
    fn sum_of_squares_conic_over_f7() {
        let k = f7();
        let q = ternary(&k, &[([2, 0, 0], 1), ([0, 2, 0], 1), ([0, 0, 2], 1)]);
        let r = conic_point(&q).unwrap();
        assert!(q.eval(&r).is_zero());
        let phi = parametrize_conic(&q).unwrap();
        assert!(q.compose(&phi).is_zero());
        for s in 0..5 {
            for t in 1..5 {
                let pt: Vec<FfElem> = phi.iter().map(|c| c.eval(&[k.from_int(s), k.from_int(t)])).collect();
                assert!(q.eval(&pt).is_zero());
                assert!(pt.iter().any(|c| !c.is_zero()));
            }
        }
    }

    #[test]
    fn degenerate_conics_fail() {
        let k = f7();
        let q = ternary(&k, &[([2, 0, 0], 1)]);
        let g = ternary(&k, &[([4, 0, 0], 1), ([0, 4, 0], 1)]);
        assert_eq!(check_good(&ReducedModel { q, g }).unwrap_err(), ReductionError::DegenerateConic);
        let q = ternary(&k, &[([1, 0, 1], 1), ([0, 2, 0], -1)]);
        let g = q.mul(&ternary(&k, &[([2, 0, 0], 1), ([0, 0, 2], 3)]));
        assert_eq!(check_good(&ReducedModel { q, g }).unwrap_err(), ReductionError::IdenticallyZeroPullback);
    }

    #[test]
    fn octic_equivalence_examples() {
        let k = f7();
        let f = BinaryForm::from_ints(&k, &[1, 0, 0, 0, 14, 0, 0, 0, 1]);
        let g = BinaryForm::from_ints(&k, &[1, 0, 0, 0, 0, 0, 0, 0, 1]);
        assert!(octic_equivalent(&f, &f).unwrap());
        assert!(octic_equivalent(&f, &g).unwrap());
        assert!(octic_equivalent(&g, &f).unwrap());
        // z(x^7 − z^7) = z(x − z)^7 is not squarefree in characteristic 7
        let h = BinaryForm::from_ints(&k, &[0, -1, 0, 0, 0, 0, 0, 0, 1]);
        assert_eq!(octic_equivalent(&g, &h), Err(ReductionError::NotOctic));
        // over F_13 it is squarefree and not equivalent to x^8 + z^8
        let k13 = FiniteField::prime_field(13).unwrap();
        let g13 = BinaryForm::from_ints(&k13, &[1, 0, 0, 0, 0, 0, 0, 0, 1]);
        let h13 = BinaryForm::from_ints(&k13, &[0, -1, 0, 0, 0, 0, 0, 0, 1]);
        assert!(!octic_equivalent(&g13, &h13).unwrap());
        assert!(!octic_equivalent(&h13, &g13).unwrap());
        let moved = h13.transform(&[[k13.from_int(2), k13.from_int(1)], [k13.from_int(1), k13.from_int(5)]]).scale(&k13.from_int(3));
        assert!(octic_equivalent(&h13, &moved).unwrap());
        assert!(octic_equivalent(&moved, &h13).unwrap());
    }

    #[test]
    fn point_counts() {
        let k = f7();
        let g = BinaryForm::from_ints(&k, &[1, 0, 0, 0, 0, 0, 0, 0, 1]);
        // brute force over x with z = 1, plus the two points at infinity
        let mut n = 0u128;
        for x in 0..7i64 {
            let v = (x.pow(8) + 1).rem_euclid(7);
            let sq = (0..7i64).filter(|y| (y * y).rem_euclid(7) == v).count() as u128;
            n += sq;
        }
        n += 2;
        assert_eq!(point_count(&g), n);
        assert!(satisfies_weil_bound(&g, n));
        let h = BinaryForm::from_ints(&k, &[0, -1, 0, 0, 0, 0, 0, 0, 1]);
        assert!(h.coeffs[0].is_zero());
        assert!(satisfies_weil_bound(&h, point_count(&h)));
    }
}
