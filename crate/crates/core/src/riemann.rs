//! Riemann models attached to Aronhold sets, and the toggle model.
//!
//! An ordered Aronhold set `β1..β7` is moved by `x = M y` so that
//! `β_i: y_i = 0` for `i ≤ 3` and `β4: y1 + y2 + y3 = 0`; the remaining
//! three lines become `β_{4+i}: Σ_j a'_ij y_j = 0`. The true coefficients
//! are `a_ij = a'_ij / η_i` with `λ` and `1/η_i²` solving two 3 × 3
//! systems. Every later formula only involves `η_i²` (the sign of `η_i`
//! cancels row by row), so the model itself never needs a square root.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::aronhold::SyzygyTable;
use crate::bitangents::{make_primitive, normalize_vector, line_agreement, same_line, Bitangent, KQuartic, Line};
use crate::linalg::Matrix;
use crate::padic::{FieldContext, PadicElement};
use crate::poly::MultiPoly;

pub type Mat3 = [[PadicElement; 3]; 3];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RiemannError {
    #[error("degenerate Aronhold frame: {0}")]
    DegenerateFrame(String),
    #[error("frame inconsistency: the Riemann model misses F∘M (residual valuations {0:?})")]
    FrameInconsistency(Vec<i64>),
    #[error("table bitangent {0} is not among the computed bitangents")]
    MissingTableLine(String),
    #[error("relabeling did not reach the first case: {0}")]
    RelabelFailed(String),
    #[error("internal consistency check failed: {0}")]
    Assertion(String),
    #[error("half-integral valuation {0}/2; a ramified quadratic extension of the tower is needed")]
    HalfIntegral(i64),
}

/// Valuation pattern of the `a_ij` (doubled, so that half-integral
/// valuations stay representable).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ValuationCase {
    /// Two entries of one column have valuation `v0 > 0`, the rest 0.
    Positive { twice_v0: i64, column: usize, rows: [usize; 2] },
    /// Two entries of one column have valuation `-v0 < 0`, the rest 0.
    Negative { twice_v0: i64, column: usize, rows: [usize; 2] },
    /// All valuations zero.
    AllZero,
    /// None of the three patterns.
    Other,
}

pub fn classify_valuations(twice_vals: &[[i64; 3]; 3]) -> ValuationCase {
    let nonzero: Vec<(usize, usize, i64)> =
        (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).filter_map(|(i, j)| (twice_vals[i][j] != 0).then_some((i, j, twice_vals[i][j]))).collect();
    match nonzero.as_slice() {
        [] => ValuationCase::AllZero,
        [(i1, j1, v1), (i2, j2, v2)] if j1 == j2 && v1 == v2 => {
            if *v1 > 0 {
                ValuationCase::Positive { twice_v0: *v1, column: *j1, rows: [*i1, *i2] }
            } else {
                ValuationCase::Negative { twice_v0: -*v1, column: *j1, rows: [*i1, *i2] }
            }
        }
        _ => ValuationCase::Other,
    }
}

fn matrix3(rows: &Mat3) -> Matrix<PadicElement> {
    Matrix::from_rows(rows.iter().map(|r| r.to_vec()).collect())
}

/// `M` with `x = M y` sending the first three lines to `y_i = 0` and the
/// fourth to `y1 + y2 + y3 = 0`.
pub fn frame_change(frame: &[Line; 4]) -> Result<Matrix<PadicElement>, RiemannError> {
    let l = matrix3(&[frame[0].clone(), frame[1].clone(), frame[2].clone()]);
    let d = l
        .transpose()
        .solve(&frame[3])
        .ok_or_else(|| RiemannError::DegenerateFrame("the first three lines are concurrent".into()))?;
    if d.iter().any(|x| x.is_zero()) {
        return Err(RiemannError::DegenerateFrame("three of the four frame lines are concurrent".into()));
    }
    let rows: Vec<Vec<PadicElement>> = (0..3).map(|i| frame[i].iter().map(|c| c.mul(&d[i])).collect()).collect();
    Matrix::from_rows(rows).inverse().ok_or_else(|| RiemannError::DegenerateFrame("singular frame".into()))
}

/// Coefficients of a line after `x = M y`: `ℓ · M`.
pub fn transform_line(m: &Matrix<PadicElement>, line: &Line) -> Line {
    std::array::from_fn(|j| {
        let mut acc = line[0].mul(&m[(0, j)]);
        for i in 1..3 {
            acc = acc.add(&line[i].mul(&m[(i, j)]));
        }
        acc
    })
}

/// Frame change and the raw coefficients `a'_ij`, each row scaled so that
/// its first coefficient of minimal valuation is 1.
pub fn normalize_frame(lines: &[Line; 7]) -> Result<(Matrix<PadicElement>, Mat3), RiemannError> {
    let m = frame_change(&[lines[0].clone(), lines[1].clone(), lines[2].clone(), lines[3].clone()])?;
    let a: Mat3 = std::array::from_fn(|i| {
        let row = normalize_vector(&transform_line(&m, &lines[4 + i]));
        [row[0].clone(), row[1].clone(), row[2].clone()]
    });
    if a.iter().flatten().any(|x| x.is_zero()) {
        return Err(RiemannError::DegenerateFrame("a frame coefficient vanishes at precision".into()));
    }
    Ok((m, a))
}

fn ones(ctx: &Arc<FieldContext>) -> Vec<PadicElement> {
    vec![PadicElement::from_int(ctx, -1); 3]
}

/// `Σ_i λ_i / a'_ij = -1` for each column `j`.
pub fn solve_lambda(a: &Mat3) -> Result<[PadicElement; 3], RiemannError> {
    let ctx = a[0][0].ctx().clone();
    let rows: Vec<Vec<PadicElement>> =
        (0..3).map(|j| (0..3).map(|i| a[i][j].inv().expect("nonzero")).collect()).collect();
    let sol = Matrix::from_rows(rows).solve(&ones(&ctx)).ok_or_else(|| RiemannError::DegenerateFrame("λ system is singular".into()))?;
    Ok([sol[0].clone(), sol[1].clone(), sol[2].clone()])
}

/// `η_i²` from `Σ_i λ_i a'_ij / η_i² = -1`.
pub fn solve_eta_sq(a: &Mat3, lambda: &[PadicElement; 3]) -> Result<[PadicElement; 3], RiemannError> {
    let ctx = a[0][0].ctx().clone();
    let rows: Vec<Vec<PadicElement>> = (0..3).map(|j| (0..3).map(|i| lambda[i].mul(&a[i][j])).collect()).collect();
    let w = Matrix::from_rows(rows).solve(&ones(&ctx)).ok_or_else(|| RiemannError::DegenerateFrame("η system is singular".into()))?;
    let mut out = Vec::with_capacity(3);
    for x in w {
        out.push(x.inv().map_err(|_| RiemannError::DegenerateFrame("1/η² vanishes".into()))?);
    }
    Ok([out[0].clone(), out[1].clone(), out[2].clone()])
}

/// Square roots of `η_i²` when they exist in the field, with the
/// canonical residue root.
pub fn solve_eta(eta_sq: &[PadicElement; 3]) -> Option<[PadicElement; 3]> {
    let r: Vec<PadicElement> = eta_sq.iter().map(|x| x.sqrt().ok()).collect::<Option<_>>()?;
    Some([r[0].clone(), r[1].clone(), r[2].clone()])
}

/// The u-system solution: `u_k = Σ_j U[k][j] y_j`, from rows 1 and 2 of
/// the `a_ij` given through `a'` and `η²`.
#[derive(Clone, Debug)]
pub struct USolution {
    pub u: Mat3,
    /// `v(u_k)` as linear forms.
    pub vals: [i64; 3],
    /// `2 v(det)` of the matrix `[1 1 1; 1/a_1j; 1/a_2j]`.
    pub twice_det_val: i64,
}

pub fn solve_u(a: &Mat3, eta_sq: &[PadicElement; 3]) -> Result<USolution, RiemannError> {
    let ctx = a[0][0].ctx().clone();
    let one = PadicElement::one(&ctx);
    let mut lhs = vec![vec![one.clone(); 3]];
    let mut rhs = vec![vec![one.clone(); 3]];
    for i in 0..2 {
        lhs.push((0..3).map(|j| eta_sq[i].div(&a[i][j]).expect("nonzero")).collect());
        rhs.push(a[i].to_vec());
    }
    let lhs = Matrix::from_rows(lhs);
    let det = lhs.det();
    let det_val = det.valuation().ok_or_else(|| RiemannError::DegenerateFrame("u system is singular".into()))?;
    let twice_det_val = 2 * det_val - eta_sq[0].val_bound() - eta_sq[1].val_bound();
    let inv = lhs.inverse().ok_or_else(|| RiemannError::DegenerateFrame("u system is singular".into()))?;
    let u = inv.mul(&Matrix::from_rows(rhs));
    let u: Mat3 = std::array::from_fn(|k| std::array::from_fn(|j| u[(k, j)].clone()));
    let vals = std::array::from_fn(|k| u[k].iter().map(|c| c.val_bound()).min().unwrap());
    Ok(USolution { u, vals, twice_det_val })
}

fn linear_form(ctx: &Arc<FieldContext>, row: &[PadicElement; 3]) -> KQuartic {
    MultiPoly::from_terms(3, PadicElement::zero(ctx), (0..3).map(|j| {
        let mut e = [0; 3];
        e[j] = 1;
        (e, row[j].clone())
    }))
}

/// `(y1 u1 + y2 u2 − y3 u3)² − 4 y1 u1 y2 u2`, returned as `(Q, G)`.
pub fn riemann_parts(u: &Mat3) -> (KQuartic, KQuartic) {
    let ctx = u[0][0].ctx().clone();
    let y = |i| MultiPoly::var(3, i, &PadicElement::one(&ctx));
    let us: Vec<KQuartic> = (0..3).map(|k| linear_form(&ctx, &u[k])).collect();
    let q = y(0).mul(&us[0]).add(&y(1).mul(&us[1])).sub(&y(2).mul(&us[2]));
    let g = y(0).mul(&us[0]).mul(&y(1)).mul(&us[1]).scale(&PadicElement::from_int(&ctx, -4));
    (q, g)
}

/// Best scalar `c` with `model ≈ c · target`, and the smallest coefficient
/// valuation of `model − c · target`.
pub fn proportionality(model: &KQuartic, target: &KQuartic) -> Option<(PadicElement, i64)> {
    let (e, tc) = target.terms().min_by_key(|(_, c)| c.val_bound())?;
    let c = model.coeff(e).div(tc).ok()?;
    let diff = model.sub(&target.scale(&c));
    let res = poly_min_val(&diff).min(model.zero_elem().ctx().precision());
    Some((c, res))
}

/// An ordered Aronhold set with its normalized coordinates.
#[derive(Clone, Debug)]
pub struct AronholdFrame {
    /// Indices into the bitangent list, in frame order `β1..β7`.
    pub order: [usize; 7],
    pub m: Matrix<PadicElement>,
    pub a_prime: Mat3,
    pub lambda: [PadicElement; 3],
    pub eta_sq: [PadicElement; 3],
    pub eta: Option<[PadicElement; 3]>,
    /// `a_ij = a'_ij / η_i` with the accepted signs, when `η` is in the field.
    pub a: Option<Mat3>,
    pub signs: Option<[i8; 3]>,
    pub twice_vals: [[i64; 3]; 3],
    pub case: ValuationCase,
    pub u: USolution,
    /// `R = c · F∘M` up to `O(π^residual_val)`.
    pub scalar: PadicElement,
    pub residual_val: i64,
}

/// Builds and checks the frame of an ordered Aronhold set.
pub fn build_frame(
    lines: &[Bitangent],
    order: [usize; 7],
    f: &KQuartic,
    guard: i64,
) -> Result<AronholdFrame, RiemannError> {
    let ls: [Line; 7] = std::array::from_fn(|i| lines[order[i]].line.clone());
    let (m, a_prime) = normalize_frame(&ls)?;
    let lambda = solve_lambda(&a_prime)?;
    let eta_sq = solve_eta_sq(&a_prime, &lambda)?;
    let eta = solve_eta(&eta_sq);
    let twice_vals = std::array::from_fn(|i| std::array::from_fn(|j| 2 * a_prime[i][j].val_bound() - eta_sq[i].val_bound()));
    let case = classify_valuations(&twice_vals);
    let u = solve_u(&a_prime, &eta_sq)?;
    let (q, g) = riemann_parts(&u.u);
    let model = q.mul(&q).add(&g);
    let fm = f.substitute(&m);
    let n = f.zero_elem().ctx().precision();
    let (scalar, residual_val) = proportionality(&model, &fm).ok_or_else(|| RiemannError::FrameInconsistency(vec![]))?;
    if residual_val < n - guard {
        return Err(RiemannError::FrameInconsistency(vec![residual_val]));
    }
    let mut frame = AronholdFrame { order, m, a_prime, lambda, eta_sq, eta, a: None, signs: None, twice_vals, case, u, scalar, residual_val };
    if frame.eta.is_some() {
        let (signs, a) = fix_signs(&frame, &fm, guard)?;
        frame.signs = Some(signs);
        frame.a = Some(a);
    }
    Ok(frame)
}

/// `a_ij = a'_ij / (±η_i)` for a sign pattern, with the residual
/// valuation of the Riemann model built from those `a_ij` against `F∘M`.
pub fn signed_frame(frame: &AronholdFrame, signs: [i8; 3], fm: &KQuartic) -> Option<(Mat3, i64)> {
    let eta = frame.eta.as_ref()?;
    let ctx = eta[0].ctx().clone();
    let one = PadicElement::one(&ctx);
    let a: Mat3 = std::array::from_fn(|i| {
        let e = if signs[i] < 0 { eta[i].neg() } else { eta[i].clone() };
        std::array::from_fn(|j| frame.a_prime[i][j].div(&e).expect("η is a unit multiple"))
    });
    // η² = 1 in these coordinates
    let ones = [one.clone(), one.clone(), one];
    let u = solve_u(&a, &ones).ok()?;
    let (q, g) = riemann_parts(&u.u);
    let model = q.mul(&q).add(&g);
    let r = proportionality(&model, fm).map_or(i64::MIN, |(_, r)| r);
    Some((a, r))
}

/// Tries the eight sign patterns of `η` in lexicographic order (`+` first)
/// and returns the first whose Riemann model, built from the signed
/// `a_ij` directly, reproduces `F∘M`.
pub fn fix_signs(frame: &AronholdFrame, fm: &KQuartic, guard: i64) -> Result<([i8; 3], Mat3), RiemannError> {
    let n = frame.a_prime[0][0].ctx().precision();
    let mut residuals = Vec::new();
    for pattern in 0..8u8 {
        let signs: [i8; 3] = std::array::from_fn(|i| if pattern & (4 >> i) != 0 { -1 } else { 1 });
        match signed_frame(frame, signs, fm) {
            Some((a, r)) if r >= n - guard => return Ok((signs, a)),
            Some((_, r)) => residuals.push(r),
            None => continue,
        }
    }
    Err(RiemannError::FrameInconsistency(residuals))
}

/// Replaces the signs chosen by [`fix_signs`] with pinned ones, which must
/// also reproduce `F∘M`.
pub fn pin_signs(frame: &mut AronholdFrame, signs: [i8; 3], f: &KQuartic, guard: i64) -> Result<(), RiemannError> {
    if signs.iter().any(|&s| s != 1 && s != -1) {
        return Err(RiemannError::Assertion(format!("signs must be ±1, got {signs:?}")));
    }
    let fm = f.substitute(&frame.m);
    let n = frame.a_prime[0][0].ctx().precision();
    let Some((a, r)) = signed_frame(frame, signs, &fm) else {
        return Err(RiemannError::DegenerateFrame("η is not defined over the field".into()));
    };
    if r < n - guard {
        return Err(RiemannError::FrameInconsistency(vec![r]));
    }
    frame.signs = Some(signs);
    frame.a = Some(a);
    Ok(())
}

/// Names of the 28 bitangents in the frame's table (1-based indices as in
/// the usual notation).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TableLine {
    /// `β_i`, `1 ≤ i ≤ 7`.
    Base(usize),
    /// `β_ij: u_k = 0` for `{i, j, k} = {1, 2, 3}`, named by `k`.
    UZero(usize),
    /// `β_i4: u_i + x_j + x_k = 0`.
    I4(usize),
    /// `β_{i(4+l)}: u_i / a_li + a_lj x_j + a_lk x_k = 0`.
    IL(usize, usize),
    /// `β_{4(4+i)}`.
    FourL(usize),
    /// `β_56`, `β_57`, `β_67`, named by the row `l` left out (3, 2, 1
    /// respectively): `Σ_m u_m / (a_pm a_qm (a_pj a_pk − a_qj a_qk)) = 0`
    /// over the other two rows `p, q`.
    Pair(usize),
}

impl std::fmt::Display for TableLine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            TableLine::Base(i) => write!(f, "β{i}"),
            TableLine::UZero(k) => {
                let (i, j) = match k {
                    1 => (2, 3),
                    2 => (1, 3),
                    _ => (1, 2),
                };
                write!(f, "β{i}{j}")
            }
            TableLine::I4(i) => write!(f, "β{i}4"),
            TableLine::IL(i, l) => write!(f, "β{i}{}", 4 + l),
            TableLine::FourL(i) => write!(f, "β4{}", 4 + i),
            TableLine::Pair(l) => match l {
                3 => write!(f, "β56"),
                2 => write!(f, "β57"),
                _ => write!(f, "β67"),
            },
        }
    }
}

impl TableLine {
    /// `β_ij` by its two indices from `{1, 2, 3}`.
    pub fn pair(i: usize, j: usize) -> Self {
        TableLine::UZero(6 - i - j)
    }

    pub fn all() -> Vec<TableLine> {
        let mut v: Vec<TableLine> = (1..=7).map(TableLine::Base).collect();
        v.extend((1..=3).map(TableLine::UZero));
        v.extend((1..=3).map(TableLine::I4));
        for i in 1..=3 {
            for l in 1..=3 {
                v.push(TableLine::IL(i, l));
            }
        }
        v.extend((1..=3).map(TableLine::FourL));
        v.extend((1..=3).map(TableLine::Pair));
        v
    }
}

/// Coefficients of a table bitangent in the frame coordinates `y`.
///
/// The table is written for `u` with `u1 + u2 + u3 + x1 + x2 + x3 = 0`,
/// the negative of the solution of [`solve_u`]; the forms that are not
/// homogeneous in `u` change sign accordingly.
pub fn table_line_y(frame: &AronholdFrame, name: TableLine) -> Line {
    let a = &frame.a_prime;
    let h = &frame.eta_sq;
    let u = &frame.u.u;
    let ctx = a[0][0].ctx().clone();
    let zero = PadicElement::zero(&ctx);
    let one = PadicElement::one(&ctx);
    let e = |j: usize| -> Line { std::array::from_fn(|t| if t == j { one.clone() } else { zero.clone() }) };
    let comb = |terms: &[(PadicElement, Line)]| -> Line {
        std::array::from_fn(|t| {
            let mut acc = zero.clone();
            for (c, l) in terms {
                acc = acc.add(&c.mul(&l[t]));
            }
            acc
        })
    };
    let urow = |k: usize| -> Line { u[k].clone() };
    // `a_ij a_ik = a'_ij a'_ik / η_i²`
    let prod = |i: usize, j: usize, k: usize| a[i][j].mul(&a[i][k]).div(&h[i]).expect("η² is nonzero");
    match name {
        TableLine::Base(i) if i <= 3 => e(i - 1),
        TableLine::Base(4) => [one.clone(), one.clone(), one.clone()],
        TableLine::Base(i) => a[i - 5].clone(),
        TableLine::UZero(k) => urow(k - 1),
        TableLine::I4(i) => {
            let (j, k) = (i % 3, (i + 1) % 3);
            comb(&[(one.neg(), urow(i - 1)), (one.clone(), e(j)), (one.clone(), e(k))])
        }
        TableLine::IL(i, l) => {
            let (i0, l0) = (i - 1, l - 1);
            let (j, k) = ((i0 + 1) % 3, (i0 + 2) % 3);
            // multiplied through by η_l
            let cu = h[l0].div(&a[l0][i0]).expect("nonzero").neg();
            comb(&[(cu, urow(i0)), (a[l0][j].clone(), e(j)), (a[l0][k].clone(), e(k))])
        }
        TableLine::FourL(i) => {
            let r = i - 1;
            // multiplied through by 1/η_i
            let terms: Vec<(PadicElement, Line)> = (0..3)
                .map(|mm| {
                    let d = a[r][mm].mul(&one.sub(&prod(r, (mm + 1) % 3, (mm + 2) % 3)));
                    (d.inv().expect("nonzero"), urow(mm))
                })
                .collect();
            comb(&terms)
        }
        TableLine::Pair(l) => {
            // the two rows other than `l`; with `a_4j = 1` this is the same
            // expression as `β_4(4+i)`, here multiplied through by `η_p η_q`
            let (p, q) = match l {
                1 => (1, 2),
                2 => (0, 2),
                _ => (0, 1),
            };
            let terms: Vec<(PadicElement, Line)> = (0..3)
                .map(|mm| {
                    let (j, k) = ((mm + 1) % 3, (mm + 2) % 3);
                    let d = a[p][mm].mul(&a[q][mm]).mul(&prod(p, j, k).sub(&prod(q, j, k)));
                    (d.inv().expect("nonzero"), urow(mm))
                })
                .collect();
            comb(&terms)
        }
    }
}

/// A table bitangent in the input coordinates: `ℓ_x = M^{-T} ℓ_y`.
pub fn table_line(frame: &AronholdFrame, name: TableLine) -> Line {
    let ly = table_line_y(frame, name);
    let mt = frame.m.transpose();
    let lx = mt.solve(&ly).expect("frame change is invertible");
    let v = normalize_vector(&lx);
    [v[0].clone(), v[1].clone(), v[2].clone()]
}

/// Index of a table bitangent among the computed ones.
pub fn locate_table_line(frame: &AronholdFrame, name: TableLine, lines: &[Bitangent], guard: i64) -> Result<usize, RiemannError> {
    let l = table_line(frame, name);
    let agreement: Vec<i64> = lines.iter().map(|b| line_agreement(&b.line, &l)).collect();
    let best = (0..lines.len()).max_by_key(|&i| (agreement[i], std::cmp::Reverse(i))).ok_or_else(|| RiemannError::MissingTableLine(name.to_string()))?;
    // the computed table line may carry less precision than the bitangents,
    // so the match must also beat every other candidate
    let unique = agreement.iter().enumerate().all(|(i, &a)| i == best || a < agreement[best]);
    if same_line(&lines[best].line, &l, guard) && unique {
        Ok(best)
    } else {
        Err(RiemannError::MissingTableLine(format!("{name} (agreement π^{})", agreement[best])))
    }
}

fn permuted(order: &[usize; 7], cols: [usize; 3], rows: [usize; 3]) -> [usize; 7] {
    [order[cols[0]], order[cols[1]], order[cols[2]], order[3], order[4 + rows[0]], order[4 + rows[1]], order[4 + rows[2]]]
}

const PERMS3: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Column and row permutations placing the two special entries of
/// `column` and `rows` at `(1, 1)` and `(3, 1)`.
fn canonical_perm(column: usize, rows: [usize; 2]) -> ([usize; 3], [usize; 3]) {
    let others: Vec<usize> = (0..3).filter(|c| *c != column).collect();
    let cols = [column, others[0], others[1]];
    let middle = (0..3).find(|r| !rows.contains(r)).expect("three rows");
    (cols, [rows[0], middle, rows[1]])
}

/// Outcome of [`relabel_aronhold`].
#[derive(Clone, Debug)]
pub struct Relabeling {
    pub frame: AronholdFrame,
    /// Cases met along the way, for the report.
    pub steps: Vec<String>,
}

fn is_canonical_positive(case: &ValuationCase) -> bool {
    matches!(case, ValuationCase::Positive { column: 0, rows: [0, 2], .. })
}

/// Moves to an Aronhold set in the first case with the positive entries at
/// `a11` and `a31`, using the explicit relabeling tables and, when those
/// stay in the third case, a search over the Aronhold sets.
pub fn relabel_aronhold(
    frame: AronholdFrame,
    lines: &[Bitangent],
    table: &SyzygyTable,
    f: &KQuartic,
    guard: i64,
) -> Result<Relabeling, RiemannError> {
    let mut steps = Vec::new();
    let mut current = frame;
    for _round in 0..3 {
        steps.push(format!("{:?}", current.case));
        match current.case.clone() {
            ValuationCase::Positive { column, rows, .. } => {
                if is_canonical_positive(&current.case) {
                    return Ok(Relabeling { frame: current, steps });
                }
                let (cols, rws) = canonical_perm(column, rows);
                let next = build_frame(lines, permuted(&current.order, cols, rws), f, guard)?;
                if !is_canonical_positive(&next.case) {
                    return Err(RiemannError::RelabelFailed(format!("permutation gave {:?}", next.case)));
                }
                steps.push("permuted to a11, a31".into());
                return Ok(Relabeling { frame: next, steps });
            }
            ValuationCase::Negative { column, rows, .. } => {
                let (cols, rws) = canonical_perm(column, rows);
                let base = build_frame(lines, permuted(&current.order, cols, rws), f, guard)?;
                let names = [
                    TableLine::pair(2, 3),
                    TableLine::Base(2),
                    TableLine::Base(3),
                    TableLine::I4(1),
                    TableLine::IL(1, 1),
                    TableLine::IL(1, 2),
                    TableLine::IL(1, 3),
                ];
                let order = locate_all(&base, &names, lines, guard)?;
                steps.push("second case: γ = {β23, β2, β3, β14, β15, β16, β17}".into());
                current = build_frame(lines, order, f, guard)?;
            }
            ValuationCase::AllZero => match third_case_tables(&current, lines, f, guard, &mut steps) {
                Some(next) => current = next,
                None => {
                    steps.push("third-case tables stay in the third case; searching the Aronhold sets".into());
                    let order = search_frame_orders(lines, table, &current.order).ok_or_else(|| {
                        RiemannError::RelabelFailed(
                            "all a_ij are units for every Aronhold set; consistent with potentially good quartic reduction".into(),
                        )
                    })?;
                    current = build_frame(lines, order, f, guard)?;
                }
            },
            ValuationCase::Other => {
                return Err(RiemannError::RelabelFailed(format!(
                    "valuation pattern {:?} matches none of the three cases",
                    current.twice_vals
                )));
            }
        }
    }
    Err(RiemannError::RelabelFailed(format!("still in {:?} after relabeling", current.case)))
}

/// The explicit third-case relabelings. Returns the new frame when it
/// leaves the third case.
fn third_case_tables(
    current: &AronholdFrame,
    lines: &[Bitangent],
    f: &KQuartic,
    guard: i64,
    steps: &mut Vec<String>,
) -> Option<AronholdFrame> {
    let a = &current.a_prime;
    let h = &current.eta_sq;
    let one = PadicElement::one(a[0][0].ctx());
    let any_positive = (0..3).any(|i| {
        (0..3).any(|j| {
            let prod = a[i][j].mul(&a[i][(j + 1) % 3]).div(&h[i]).expect("nonzero");
            one.sub(&prod).val_bound() > 0
        })
    });
    if any_positive {
        let names = [
            TableLine::pair(2, 3),
            TableLine::pair(1, 3),
            TableLine::pair(1, 2),
            TableLine::Base(4),
            TableLine::FourL(1),
            TableLine::FourL(2),
            TableLine::FourL(3),
        ];
        steps.push("third case, a difference 1 − a_ij a_i(j+1) is not a unit: γ = {β23, β13, β12, β4, β45, β46, β47}".into());
        for cols in PERMS3 {
            for rws in PERMS3 {
                let Ok(base) = build_frame(lines, permuted(&current.order, cols, rws), f, guard) else { continue };
                let Ok(order) = locate_all(&base, &names, lines, guard) else { continue };
                let Ok(next) = build_frame(lines, order, f, guard) else { continue };
                if matches!(next.case, ValuationCase::Positive { .. }) {
                    return Some(next);
                }
            }
        }
        None
    } else {
        let o = current.order;
        steps.push("third case, all differences are units: γ = {β5, β6, β7, β4, β1, β2, β3}".into());
        let next = build_frame(lines, [o[4], o[5], o[6], o[3], o[0], o[1], o[2]], f, guard).ok()?;
        (next.case != ValuationCase::AllZero).then_some(next)
    }
}

/// Valuation pattern of an ordered Aronhold set, without building the
/// Riemann model.
pub fn frame_case(lines: &[Bitangent], order: [usize; 7]) -> Result<ValuationCase, RiemannError> {
    let ls: [Line; 7] = std::array::from_fn(|i| lines[order[i]].line.clone());
    let (_, a_prime) = normalize_frame(&ls)?;
    let lambda = solve_lambda(&a_prime)?;
    let eta_sq = solve_eta_sq(&a_prime, &lambda)?;
    let twice_vals = std::array::from_fn(|i| std::array::from_fn(|j| 2 * a_prime[i][j].val_bound() - eta_sq[i].val_bound()));
    Ok(classify_valuations(&twice_vals))
}

/// Searches the Aronhold sets, `first` before the others, for an ordering
/// in the first or second case. Within a set only the choice of the three
/// row lines and of `β4` matters up to permutations of rows and columns.
pub fn search_frame_orders(lines: &[Bitangent], table: &SyzygyTable, first: &[usize; 7]) -> Option<[usize; 7]> {
    let mut sets: Vec<Vec<usize>> = vec![first.to_vec()];
    let mut key = first.to_vec();
    key.sort_unstable();
    sets.extend(table.aronhold_sets().into_iter().filter(|s| *s != key));
    for set in sets {
        for rmask in 0u32..128 {
            if rmask.count_ones() != 3 {
                continue;
            }
            let rows: Vec<usize> = (0..7).filter(|i| rmask & (1 << i) != 0).map(|i| set[i]).collect();
            let base: Vec<usize> = (0..7).filter(|i| rmask & (1 << i) == 0).map(|i| set[i]).collect();
            for b4 in 0..4 {
                let cols: Vec<usize> = (0..4).filter(|c| *c != b4).map(|c| base[c]).collect();
                let order = [cols[0], cols[1], cols[2], base[b4], rows[0], rows[1], rows[2]];
                if let Ok(ValuationCase::Positive { .. } | ValuationCase::Negative { .. }) = frame_case(lines, order) {
                    return Some(order);
                }
            }
        }
    }
    None
}

fn locate_all(frame: &AronholdFrame, names: &[TableLine; 7], lines: &[Bitangent], guard: i64) -> Result<[usize; 7], RiemannError> {
    let mut out = [0; 7];
    for (slot, name) in out.iter_mut().zip(names) {
        *slot = locate_table_line(frame, *name, lines, guard)?;
    }
    Ok(out)
}

/// `Q² + π^s G0 = 0` in the frame coordinates.
#[derive(Clone, Debug)]
pub struct ToggleModel {
    pub q: KQuartic,
    pub g0: KQuartic,
    pub s: i64,
    pub v0: i64,
    /// `v(u_1), v(u_2), v(u_3)`.
    pub v_u: [i64; 3],
    pub twice_det_val: i64,
    /// `x = M y` from the input coordinates.
    pub m_total: Matrix<PadicElement>,
    /// `Q² + π^s G0 = scalar · F∘M` up to `O(π^residual_val)`.
    pub scalar: PadicElement,
    pub residual_val: i64,
    pub order: [usize; 7],
}

/// Builds the toggle model of a frame in the first case with positive
/// entries at `a11`, `a31`, checking the valuation lemmas on the way.
pub fn toggle_model(frame: &AronholdFrame, f: &KQuartic, guard: i64) -> Result<ToggleModel, RiemannError> {
    let ValuationCase::Positive { twice_v0, column: 0, rows: [0, 2] } = frame.case else {
        return Err(RiemannError::Assertion(format!("toggle model needs the canonical first case, got {:?}", frame.case)));
    };
    if twice_v0 % 2 != 0 {
        return Err(RiemannError::HalfIntegral(twice_v0));
    }
    let v0 = twice_v0 / 2;
    let us = &frame.u;
    if us.vals.iter().any(|&v| v < 0) {
        return Err(RiemannError::Assertion(format!("u_i not integral: valuations {:?}", us.vals)));
    }
    if us.twice_det_val != -twice_v0 {
        return Err(RiemannError::Assertion(format!("2·v(det) = {} instead of {}", us.twice_det_val, -twice_v0)));
    }
    if us.vals[0] < v0 {
        return Err(RiemannError::Assertion(format!("v1 = {} < v0 = {v0}", us.vals[0])));
    }
    let (q, g) = riemann_parts(&us.u);
    let ctx = f.zero_elem().ctx().clone();
    let n = ctx.precision();
    let q_val = poly_min_val(&q);
    if q_val != 0 {
        return Err(RiemannError::Assertion(format!("Q is not primitive (content valuation {q_val})")));
    }
    let s = poly_min_val(&g);
    if s <= 0 {
        return Err(RiemannError::Assertion(format!("G has valuation {s}, not positive")));
    }
    let g0 = g.map(PadicElement::zero(&ctx), |c| c.shift(-s));
    let model = q.mul(&q).add(&g0.scale(&PadicElement::pi_power(&ctx, s)));
    let fm = f.substitute(&frame.m);
    let (scalar, residual_val) = proportionality(&model, &fm).ok_or_else(|| RiemannError::FrameInconsistency(vec![]))?;
    if residual_val < n - guard {
        return Err(RiemannError::FrameInconsistency(vec![residual_val]));
    }
    Ok(ToggleModel {
        q,
        g0,
        s,
        v0,
        v_u: us.vals,
        twice_det_val: us.twice_det_val,
        m_total: frame.m.clone(),
        scalar,
        residual_val,
        order: frame.order,
    })
}

/// Smallest coefficient valuation of a polynomial (`i64::MAX` if zero).
pub fn poly_min_val(f: &KQuartic) -> i64 {
    f.terms().map(|(_, c)| c.val_bound()).min().unwrap_or(i64::MAX)
}

/// The stable model in weighted projective space `P(1,1,1,2)`:
/// `y² + G0 = 0`, `ϖ^{s'} y − Q = 0` with `ϖ² = π` when `s` is odd.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StableScheme {
    /// Whether `√π` had to be adjoined.
    pub adjoined_sqrt_pi: bool,
    /// Exponent of the (possibly new) uniformizer in front of `y`.
    pub y_exponent: i64,
    pub description: String,
}

pub fn stable_scheme(t: &ToggleModel) -> StableScheme {
    if t.s % 2 == 0 {
        StableScheme {
            adjoined_sqrt_pi: false,
            y_exponent: t.s / 2,
            description: format!("y^2 + G0 = 0, π^{} y − Q = 0 in P(1,1,1,2)", t.s / 2),
        }
    } else {
        StableScheme {
            adjoined_sqrt_pi: true,
            y_exponent: t.s,
            description: format!("y^2 + G0 = 0, ϖ^{} y − Q = 0 in P(1,1,1,2), ϖ^2 = π", t.s),
        }
    }
}

/// Scales a vector of coefficients to be primitive; exposed for reports.
pub fn primitive_row(v: &Line) -> Line {
    let p = make_primitive(v);
    [p[0].clone(), p[1].clone(), p[2].clone()]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification_patterns() {
        assert_eq!(classify_valuations(&[[0; 3]; 3]), ValuationCase::AllZero);
        assert_eq!(
            classify_valuations(&[[4, 0, 0], [0, 0, 0], [4, 0, 0]]),
            ValuationCase::Positive { twice_v0: 4, column: 0, rows: [0, 2] }
        );
        assert_eq!(
            classify_valuations(&[[0, -2, 0], [0, -2, 0], [0, 0, 0]]),
            ValuationCase::Negative { twice_v0: 2, column: 1, rows: [0, 1] }
        );
        assert_eq!(classify_valuations(&[[2, 0, 0], [0, 2, 0], [0, 0, 0]]), ValuationCase::Other);
        assert_eq!(classify_valuations(&[[2, 0, 0], [0, 0, 0], [4, 0, 0]]), ValuationCase::Other);
    }

    #[test]
    fn table_names() {
        let all = TableLine::all();
        assert_eq!(all.len(), 28);
        let names: std::collections::HashSet<String> = all.iter().map(|t| t.to_string()).collect();
        assert_eq!(names.len(), 28);
        assert_eq!(TableLine::pair(2, 3).to_string(), "β23");
        assert_eq!(TableLine::Pair(3).to_string(), "β56");
        assert_eq!(TableLine::IL(1, 2).to_string(), "β16");
    }

    #[test]
    fn canonical_permutation() {
        let (c, r) = canonical_perm(1, [0, 1]);
        assert_eq!(c, [1, 0, 2]);
        assert_eq!(r, [0, 2, 1]);
    }
}
