//! The 28 bitangents of a smooth plane quartic.
//!
//! In chart `j` a line is written `x_j = a·x_{j+1} + b·x_{j+2}` (indices
//! mod 3). Restricting `F` to it gives a binary quartic
//! `c4 s^4 + c3 s^3 t + c2 s^2 t^2 + c1 s t^3 + c0 t^4` with `c_k ∈ Q[a, b]`,
//! and the line is a bitangent exactly when this is `c4 (s^2 + α st + β t^2)^2`.
//! Eliminating the square's coefficients leaves two conditions
//!
//! ```text
//! S1 = c3^3 - 4 c2 c3 c4 + 8 c1 c4^2
//! S2 = (4 c4 c2 - c3^2)^2 - 64 c0 c4^3
//! ```
//!
//! which are eliminated exactly over `Q` (resultant in `b`, first
//! subresultant for back substitution); only the final univariate root
//! finding happens in the p-adic tower.

use std::sync::Arc;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::linalg::Matrix;
use crate::padic::{roots_in_field, FieldContext, PadicElement};
use crate::poly::{discriminant_quartic, first_subresultant, resultant_generic, MultiPoly, Poly};
use crate::ring::{rat, Coeff};

pub type Quartic = MultiPoly<BigRational>;
pub type KQuartic = MultiPoly<PadicElement>;
pub type Line = [PadicElement; 3];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BitangentError {
    #[error("the quartic is singular")]
    Singular,
    #[error("input is not a ternary quartic form")]
    NotQuartic,
    #[error("not a bitangent at precision (residual valuation {0})")]
    NotBitangent(i64),
    #[error("elimination failed: {0}")]
    Elimination(String),
}

/// A bitangent line with the data describing its contact divisor.
///
/// The line is `line · x = 0`, normalized so that the first coefficient of
/// minimal valuation is 1. `param` maps `(s, t)` onto the line, and the
/// contact divisor is cut out on it by the binary quadratic
/// `quad[0] s^2 + quad[1] s t + quad[2] t^2`. Contact points are present
/// when that quadratic splits over the field.
#[derive(Clone, Debug)]
pub struct Bitangent {
    pub line: Line,
    pub param: [[PadicElement; 2]; 3],
    pub quad: [PadicElement; 3],
    pub contact: Option<([PadicElement; 3], [PadicElement; 3])>,
    pub chart: usize,
    /// Smallest valuation of the coefficients of `F|β − c·quad²`.
    pub residual_val: i64,
}

/// Bitangents found over the field, with diagnostics about the ones that
/// were not.
#[derive(Clone, Debug)]
pub struct BitangentSet {
    pub lines: Vec<Bitangent>,
    pub complete: bool,
    pub diagnostics: Vec<String>,
}

/// Per-chart elimination data over `Q`.
#[derive(Clone, Debug)]
pub struct ChartSystem {
    pub chart: usize,
    /// `c_0..c_4` as polynomials in `(a, b)`.
    pub c: [MultiPoly<BigRational>; 5],
    pub s1: MultiPoly<BigRational>,
    pub s2: MultiPoly<BigRational>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct EliminationSummary {
    pub chart: usize,
    pub resultant_degree: usize,
    pub deflated_degree: usize,
    pub squarefree_degree: usize,
}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// Binary quartic `F(Φ(s, t))` for a linear parametrization `Φ`, with
/// coefficients indexed by the power of `t` (`out[k]` multiplies
/// `s^{4-k} t^k`).
pub fn restrict_param<T: Coeff>(f: &MultiPoly<T>, phi: &[[T; 2]; 3]) -> Vec<T> {
    let zero = f.zero_elem().clone();
    let one = zero.one_like();
    let lin: Vec<MultiPoly<T>> = (0..3)
        .map(|i| MultiPoly::from_terms(2, zero.clone(), [([1, 0, 0], phi[i][0].clone()), ([0, 1, 0], phi[i][1].clone())]))
        .collect();
    let g = f.compose(&lin);
    let deg = f.homogeneous_degree().unwrap_or(4);
    let _ = one;
    (0..=deg).map(|k| g.coeff(&[deg - k, k, 0])).collect()
}

/// Restriction of `F` to a line given by its coefficients `(l1, l2, l3)`.
/// The variable with the first coefficient of minimal valuation (first
/// nonzero, over exact rings) is eliminated; the result is a binary quartic
/// in the remaining two variables, indexed by the power of the second.
pub fn restrict_to_line(f: &KQuartic, line: &Line) -> Vec<PadicElement> {
    restrict_param(f, &line_parametrization(line))
}

/// `Φ` with `ℓ·Φ = 0`, solving for the pivot coordinate of `ℓ`.
pub fn line_parametrization(line: &Line) -> [[PadicElement; 2]; 3] {
    let ctx = line[0].ctx().clone();
    let j = pivot_index(line);
    let (k1, k2) = ((j + 1) % 3, (j + 2) % 3);
    let inv = line[j].inv().expect("pivot is nonzero");
    let zero = PadicElement::zero(&ctx);
    let one = PadicElement::one(&ctx);
    let mut phi: [[PadicElement; 2]; 3] = std::array::from_fn(|_| [zero.clone(), zero.clone()]);
    phi[j] = [line[k1].mul(&inv).neg(), line[k2].mul(&inv).neg()];
    phi[k1] = [one.clone(), zero.clone()];
    phi[k2] = [zero, one];
    phi
}

/// Index of the first coefficient of minimal valuation.
pub fn pivot_index(v: &[PadicElement]) -> usize {
    let mut best: Option<(i64, usize)> = None;
    for (i, x) in v.iter().enumerate() {
        if let Some(val) = x.valuation() {
            if best.map_or(true, |(b, _)| val < b) {
                best = Some((val, i));
            }
        }
    }
    best.map(|(_, i)| i).unwrap_or(0)
}

/// Scales a vector so that its first coefficient of minimal valuation is 1.
pub fn normalize_vector(v: &[PadicElement]) -> Vec<PadicElement> {
    let j = pivot_index(v);
    match v[j].inv() {
        Ok(inv) => v.iter().map(|x| x.mul(&inv)).collect(),
        Err(_) => v.to_vec(),
    }
}

/// Scales by a power of `π` so the smallest valuation is 0.
pub fn make_primitive(v: &[PadicElement]) -> Vec<PadicElement> {
    match v.iter().filter_map(|x| x.valuation()).min() {
        Some(c) => v.iter().map(|x| x.shift(-c)).collect(),
        None => v.to_vec(),
    }
}

fn cross(a: &[PadicElement], b: &[PadicElement]) -> [PadicElement; 3] {
    [
        a[1].mul(&b[2]).sub(&a[2].mul(&b[1])),
        a[2].mul(&b[0]).sub(&a[0].mul(&b[2])),
        a[0].mul(&b[1]).sub(&a[1].mul(&b[0])),
    ]
}

/// Valuation to which two lines agree projectively: the smallest
/// valuation bound of the 2 × 2 minors of their primitive forms.
pub fn line_agreement(a: &Line, b: &Line) -> i64 {
    let pa = make_primitive(a);
    let pb = make_primitive(b);
    cross(&pa, &pb).iter().map(|c| c.val_bound()).min().expect("three minors")
}

/// Projective equality of two normalized lines up to the guard.
pub fn same_line(a: &Line, b: &Line, guard: i64) -> bool {
    let pa = make_primitive(a);
    let pb = make_primitive(b);
    cross(&pa, &pb).iter().all(|c| c.is_negligible(guard))
}

/// Builds `S1`, `S2` for chart `j ∈ {0, 1, 2}`.
pub fn perfect_square_system(f: &Quartic, chart: usize) -> ChartSystem {
    let j = chart;
    let k1 = (j + 1) % 3;
    let zero2 = MultiPoly::zero(2, rat(0));
    let mut c: [MultiPoly<BigRational>; 5] = std::array::from_fn(|_| zero2.clone());
    for (e, coeff) in f.terms() {
        // x_j^{e_j} x_{k1}^{e_k1} x_{k2}^{e_k2} with x_j = a s + b t, x_k1 = s, x_k2 = t
        let n = e[j];
        for i in 0..=n {
            // a^i b^{n-i} s^{i} t^{n-i}
            let s_pow = i + e[k1];
            let coef = coeff * rat(binomial(n, i));
            c[s_pow as usize].add_term([i, n - i, 0], coef);
        }
    }
    // c[k] multiplies s^k t^{4-k}: c4 = coefficient of s^4
    let [c0, c1, c2, c3, c4] = c.clone();
    let s1 = c3.pow(3).sub(&c2.mul(&c3).mul(&c4).scale(&rat(4))).add(&c1.mul(&c4.pow(2)).scale(&rat(8)));
    let t = c4.mul(&c2).scale(&rat(4)).sub(&c3.pow(2));
    let s2 = t.pow(2).sub(&c0.mul(&c4.pow(3)).scale(&rat(64)));
    ChartSystem { chart, c, s1, s2 }
}

/// Univariate `R(a)`, deflated by `c4(a)` and made squarefree, plus the
/// first subresultant coefficients in `b`.
pub struct Elimination {
    pub summary: EliminationSummary,
    pub r: Poly<BigRational>,
    pub sigma0: Poly<BigRational>,
    pub sigma1: Poly<BigRational>,
}

fn in_b(p: &MultiPoly<BigRational>) -> Poly<Poly<BigRational>> {
    let u = p.to_univariate_in(1);
    let zero = Poly::zero(rat(0));
    let coeffs: Vec<Poly<BigRational>> = u.coeffs().iter().map(|c| c.to_poly().trimmed()).collect();
    Poly::new(coeffs, zero).trimmed()
}

pub fn eliminate(sys: &ChartSystem) -> Result<Elimination, BitangentError> {
    let f = in_b(&sys.s1);
    let g = in_b(&sys.s2);
    let err = |e: crate::poly::resultant::ResultantError| BitangentError::Elimination(e.to_string());
    let r = resultant_generic(&f, &g).map_err(err)?.trimmed();
    let resultant_degree = r.degree().unwrap_or(0);
    let c4 = sys.c[4].to_poly().trimmed();
    let mut deflated = r.clone();
    if c4.degree().unwrap_or(0) > 0 {
        loop {
            let (q, rem) = deflated.divrem(&c4).expect("nonzero");
            if !rem.is_zero() {
                break;
            }
            deflated = q.trimmed();
        }
    }
    let deflated_degree = deflated.degree().unwrap_or(0);
    let g0 = deflated.gcd(&deflated.derivative());
    let squarefree = if g0.degree().unwrap_or(0) > 0 { deflated.divrem(&g0).unwrap().0.trimmed() } else { deflated };
    let (s0, s1) = first_subresultant(&f, &g).map_err(err)?;
    Ok(Elimination {
        summary: EliminationSummary {
            chart: sys.chart,
            resultant_degree,
            deflated_degree,
            squarefree_degree: squarefree.degree().unwrap_or(0),
        },
        r: squarefree,
        sigma0: s0.trimmed(),
        sigma1: s1.trimmed(),
    })
}

pub fn to_field_poly(ctx: &Arc<FieldContext>, p: &Poly<BigRational>) -> Poly<PadicElement> {
    p.map(PadicElement::zero(ctx), |c| PadicElement::from_rational(ctx, c))
}

pub fn to_field_quartic(ctx: &Arc<FieldContext>, f: &Quartic) -> KQuartic {
    f.map(PadicElement::zero(ctx), |c| PadicElement::from_rational(ctx, c))
}

/// Builds the bitangent record for a candidate line given by a
/// parametrization, checking the perfect-square condition.
pub fn bitangent_from_param(
    f: &KQuartic,
    phi: [[PadicElement; 2]; 3],
    chart: usize,
    guard: i64,
) -> Result<Bitangent, BitangentError> {
    let ctx = f.zero_elem().ctx().clone();
    let q = restrict_param(f, &phi);
    // q[k] multiplies s^{4-k} t^k; pick the end with the smaller valuation
    // as the leading one to keep divisions stable
    let flip = q[4].val_bound() < q[0].val_bound();
    let c: Vec<PadicElement> = if flip { q.iter().rev().cloned().collect() } else { q.clone() };
    let lead = &c[0];
    let inv = lead.inv().map_err(|_| BitangentError::NotBitangent(lead.val_bound()))?;
    let two_inv = PadicElement::from_int(&ctx, 2).inv().expect("p odd");
    let alpha = c[1].mul(&inv).mul(&two_inv);
    let beta = c[2].mul(&inv).sub(&alpha.square()).mul(&two_inv);
    let r1 = c[3].sub(&lead.mul(&alpha).mul(&beta).shift(0).mul(&PadicElement::from_int(&ctx, 2)));
    let r0 = c[4].sub(&lead.mul(&beta.square()));
    let residual_val = r1.val_bound().min(r0.val_bound());
    if !(r1.is_negligible(guard) && r0.is_negligible(guard)) {
        return Err(BitangentError::NotBitangent(residual_val));
    }
    let one = PadicElement::one(&ctx);
    let mut quad = [one, alpha, beta];
    if flip {
        quad.reverse();
    }
    let quad_vec = make_primitive(&quad);
    let quad = [quad_vec[0].clone(), quad_vec[1].clone(), quad_vec[2].clone()];
    // the line through the two columns of Φ
    let col0 = [phi[0][0].clone(), phi[1][0].clone(), phi[2][0].clone()];
    let col1 = [phi[0][1].clone(), phi[1][1].clone(), phi[2][1].clone()];
    let l = normalize_vector(&cross(&col0, &col1));
    let line = [l[0].clone(), l[1].clone(), l[2].clone()];
    let contact = contact_from_quad(&phi, &quad);
    Ok(Bitangent { line, param: phi, quad, contact, chart, residual_val })
}

fn apply_param(phi: &[[PadicElement; 2]; 3], s: &PadicElement, t: &PadicElement) -> [PadicElement; 3] {
    std::array::from_fn(|i| phi[i][0].mul(s).add(&phi[i][1].mul(t)))
}

fn contact_from_quad(phi: &[[PadicElement; 2]; 3], quad: &[PadicElement; 3]) -> Option<([PadicElement; 3], [PadicElement; 3])> {
    let ctx = quad[0].ctx().clone();
    let one = PadicElement::one(&ctx);
    let two = PadicElement::from_int(&ctx, 2);
    let four = PadicElement::from_int(&ctx, 4);
    let disc = quad[1].square().sub(&quad[0].mul(&quad[2]).mul(&four));
    if quad[0].val_bound() <= quad[2].val_bound() {
        // roots s/t of a s^2 + b s t + c t^2 with t = 1
        let den = quad[0].mul(&two);
        let (r1, r2) = if disc.is_zero() {
            let r = quad[1].neg().div(&den).ok()?;
            (r.clone(), r)
        } else {
            let sq = disc.sqrt().ok()?;
            (quad[1].neg().add(&sq).div(&den).ok()?, quad[1].neg().sub(&sq).div(&den).ok()?)
        };
        Some((apply_param(phi, &r1, &one), apply_param(phi, &r2, &one)))
    } else {
        let den = quad[2].mul(&two);
        let (r1, r2) = if disc.is_zero() {
            let r = quad[1].neg().div(&den).ok()?;
            (r.clone(), r)
        } else {
            let sq = disc.sqrt().ok()?;
            (quad[1].neg().add(&sq).div(&den).ok()?, quad[1].neg().sub(&sq).div(&den).ok()?)
        };
        Some((apply_param(phi, &one, &r1), apply_param(phi, &one, &r2)))
    }
}

/// Contact points of a bitangent; `P = Q` at a hyperflex.
pub fn contact_points(f: &KQuartic, line: &Line, guard: i64) -> Result<([PadicElement; 3], [PadicElement; 3]), BitangentError> {
    let b = bitangent_from_param(f, line_parametrization(line), 0, guard)?;
    b.contact.ok_or(BitangentError::Elimination("contact points lie in a quadratic extension".into()))
}

/// Unimodular integer matrices used as extra charts after the three
/// coordinate charts.
fn extra_chart(k: usize) -> [[i64; 3]; 3] {
    let a = (k % 4) as i64 + 1;
    let b = ((3 * k) % 5) as i64 - 2;
    let c = ((2 * k + 1) % 3) as i64;
    let d = ((5 * k + 2) % 7) as i64 - 3;
    // upper unitriangular times lower unitriangular
    let upper = [[1, a, b], [0, 1, c], [0, 0, 1]];
    let lower = [[1, 0, 0], [d, 1, 0], [c - 1, a - 2, 1]];
    let mut out = [[0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|t| upper[i][t] * lower[t][j]).sum();
        }
    }
    out
}

fn int_matrix(m: &[[i64; 3]; 3]) -> Matrix<BigRational> {
    Matrix::from_rows(m.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
}

/// Options for [`solve_bitangents`].
#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub guard: i64,
    /// Additional unimodular charts tried when the coordinate charts leave
    /// bitangents undetected.
    pub extra_charts: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { guard: 0, extra_charts: 6 }
    }
}

/// Finds the bitangents of `f` defined over the field of `ctx`.
///
/// Roots of the eliminants are computed in a copy of the tower at a raised
/// working precision (the eliminants are exact, so this only costs time),
/// then every candidate is cast down and checked again at the precision of
/// `ctx`. The extra precision grows until all 28 lines verify or the
/// schedule runs out.
pub fn solve_bitangents(f: &Quartic, ctx: &Arc<FieldContext>, opts: &SolveOptions) -> Result<BitangentSet, BitangentError> {
    if f.nvars() != 3 || f.homogeneous_degree() != Some(4) {
        return Err(BitangentError::NotQuartic);
    }
    let disc = discriminant_quartic(f).map_err(|_| BitangentError::Singular)?;
    if disc.is_zero() {
        return Err(BitangentError::Singular);
    }
    let n = ctx.precision();
    let fk = to_field_quartic(ctx, f);
    let mut charts: Vec<(Quartic, Option<[[i64; 3]; 3]>)> = (0..3).map(|_| (f.clone(), None)).collect();
    for k in 0..opts.extra_charts {
        let u = extra_chart(k);
        charts.push((f.substitute(&int_matrix(&u)), Some(u)));
    }
    let mut eliminations: Vec<Option<Elimination>> = charts.iter().map(|_| None).collect();
    let mut found: Vec<Bitangent> = Vec::new();
    let mut diagnostics = Vec::new();
    let schedule = [n.max(16), 3 * n.max(16)];
    for (attempt, &extra) in schedule.iter().enumerate() {
        let work = match ctx.with_precision(n + extra) {
            Ok(w) => w,
            Err(_) if attempt == 0 => ctx.clone(),
            Err(_) => break,
        };
        let work_guard = opts.guard + (work.precision() - n);
        let fw = to_field_quartic(&work, f);
        found.clear();
        diagnostics.push(format!("working precision {}", work.precision()));
        for (chart_no, (g, u)) in charts.iter().enumerate() {
            if found.len() >= 28 {
                break;
            }
            let chart = chart_no.min(2);
            if eliminations[chart_no].is_none() {
                eliminations[chart_no] = Some(eliminate(&perfect_square_system(g, chart))?);
            }
            let elim = eliminations[chart_no].as_ref().expect("just computed");
            let report = roots_in_field(&to_field_poly(&work, &elim.r));
            let sigma0 = to_field_poly(&work, &elim.sigma0);
            let sigma1 = to_field_poly(&work, &elim.sigma1);
            let (mut new_here, mut rejected) = (0, 0);
            for a in &report.roots {
                let s1 = sigma1.eval(a);
                if s1.is_negligible(work_guard) {
                    rejected += 1;
                    continue;
                }
                let b = sigma0.eval(a).div(&s1).expect("nonzero").neg();
                let phi = chart_param(&work, chart, a, &b, u.as_ref());
                if bitangent_from_param(&fw, phi.clone(), chart_no, work_guard).is_err() {
                    rejected += 1;
                    continue;
                }
                let phi_k: [[PadicElement; 2]; 3] = std::array::from_fn(|i| std::array::from_fn(|c| phi[i][c].cast(ctx)));
                match bitangent_from_param(&fk, phi_k, chart_no, opts.guard) {
                    Ok(bt) => {
                        if !found.iter().any(|o| same_line(&o.line, &bt.line, opts.guard)) {
                            found.push(bt);
                            new_here += 1;
                        }
                    }
                    Err(_) => rejected += 1,
                }
            }
            diagnostics.push(format!(
                "chart {chart_no}: resultant degree {}, deflated {}, squarefree {}, roots in field {}, new lines {new_here}, rejected {rejected}, unresolved clusters {}, residue degree outside the field {}",
                elim.summary.resultant_degree,
                elim.summary.deflated_degree,
                elim.summary.squarefree_degree,
                report.roots.len(),
                report.clusters.len(),
                report.unsplit_degree,
            ));
        }
        if found.len() == 28 {
            break;
        }
    }
    found.sort_by(|a, b| line_sort_key(&a.line).cmp(&line_sort_key(&b.line)));
    let complete = found.len() == 28;
    if !complete {
        diagnostics.push(format!("found {} of 28 bitangents; the tower may be too small or the precision too low", found.len()));
    }
    Ok(BitangentSet { lines: found, complete, diagnostics })
}

/// `Φ` for the chart line `x_chart = a x_{chart+1} + b x_{chart+2}`,
/// mapped back through the unimodular chart change `U` if present.
fn chart_param(
    ctx: &Arc<FieldContext>,
    chart: usize,
    a: &PadicElement,
    b: &PadicElement,
    u: Option<&[[i64; 3]; 3]>,
) -> [[PadicElement; 2]; 3] {
    let (k1, k2) = ((chart + 1) % 3, (chart + 2) % 3);
    let zero = PadicElement::zero(ctx);
    let one = PadicElement::one(ctx);
    let mut phi: [[PadicElement; 2]; 3] = std::array::from_fn(|_| [zero.clone(), zero.clone()]);
    phi[chart] = [a.clone(), b.clone()];
    phi[k1] = [one.clone(), zero.clone()];
    phi[k2] = [zero.clone(), one];
    match u {
        None => phi,
        Some(u) => std::array::from_fn(|i| {
            std::array::from_fn(|c| {
                let mut acc = zero.clone();
                for (t, row) in phi.iter().enumerate() {
                    if u[i][t] != 0 {
                        acc = acc.add(&row[c].mul(&PadicElement::from_int(ctx, u[i][t])));
                    }
                }
                acc
            })
        }),
    }
}

/// Deterministic ordering key: valuations, then residues and digits of the
/// normalized coefficients.
pub fn line_sort_key(line: &Line) -> Vec<(i64, Vec<u128>)> {
    line.iter()
        .map(|c| {
            let v = c.valuation().unwrap_or(i64::MAX);
            let digits = if v == i64::MAX { Vec::new() } else { c.unit_part().with_precision(2).integral_coords() };
            (v, digits)
        })
        .collect()
}
