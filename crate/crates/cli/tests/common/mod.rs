//! Helpers shared by the integration tests: job files, rebuilding field
//! elements from reports, and oracles that recheck a report from scratch.

#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use stablequartic::bitangents::{Quartic, KQuartic};
use stablequartic::finite_field::{FfElem, FiniteField};
use stablequartic::linalg::Matrix;
use stablequartic::padic::{FieldContext, PadicDigits, PadicElement};
use stablequartic::poly::MultiPoly;
use stablequartic::reduction::{BinaryForm, OcticSummary};
use stablequartic_cli::report::{Report, Term};
use stablequartic_cli::{JobSpec, Mode};

pub fn jobs_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../jobs")
}

pub fn load_job(name: &str) -> JobSpec {
    let path = jobs_dir().join(format!("{name}.json"));
    JobSpec::from_json(&std::fs::read_to_string(&path).expect("job file")).expect("valid job")
}

pub fn with_mode(mut job: JobSpec, mode: Mode) -> JobSpec {
    job.mode = mode;
    job
}

pub fn context(job: &JobSpec) -> Arc<FieldContext> {
    FieldContext::new(job.tower_spec(), job.precision).expect("tower")
}

pub fn element(ctx: &Arc<FieldContext>, d: &PadicDigits) -> PadicElement {
    PadicElement::from_digits(ctx, d).expect("digits fit the tower")
}

pub fn form(ctx: &Arc<FieldContext>, terms: &[Term]) -> KQuartic {
    MultiPoly::from_terms(3, PadicElement::zero(ctx), terms.iter().map(|t| (t.exps, element(ctx, &t.coeff))))
}

pub fn over_field(ctx: &Arc<FieldContext>, f: &Quartic) -> KQuartic {
    f.map(PadicElement::zero(ctx), |c| PadicElement::from_rational(ctx, c))
}

/// The octic of a report as a binary form over its own residue field.
pub fn octic(summary: &OcticSummary) -> BinaryForm {
    let field = FiniteField::new(summary.p, summary.field_modulus.clone()).expect("field");
    let coeffs = summary
        .coeffs
        .iter()
        .map(|c| field.from_coeffs(&c.iter().map(|&x| x as i64).collect::<Vec<_>>()))
        .collect();
    BinaryForm::new(coeffs)
}

/// `coeffs[i]` on `x^i z^(8−i)`.
pub fn octic_like(f: &BinaryForm, coeffs: &[i64]) -> BinaryForm {
    BinaryForm::from_ints(f.field(), coeffs)
}

/// Smallest coefficient valuation; `None` for the zero form.
pub fn content(f: &KQuartic) -> Option<i64> {
    f.terms().map(|(_, c)| c.val_bound()).min()
}

/// Rechecks the toggle model of a report against the input quartic:
/// returns `(v(Q² + π^s G0 − unit · π^(−c) F∘M), v(unit))` where `c` is
/// the content of `F∘M` and `unit = scalar · π^c`.
pub fn identity_check(job: &JobSpec, report: &Report) -> (i64, Option<i64>) {
    let ctx = context(job);
    let t = report.toggle.as_ref().expect("toggle model");
    let q = form(&ctx, &t.q);
    let g0 = form(&ctx, &t.g0);
    let m = Matrix::from_rows(t.m.iter().map(|row| row.iter().map(|d| element(&ctx, d)).collect()).collect());
    let f = over_field(&ctx, &job.quartic_poly().unwrap());
    let fm = f.substitute(&m);
    let c = content(&fm).expect("nonzero");
    let unit = element(&ctx, &t.scalar).shift(c);
    let primitive = fm.map(PadicElement::zero(&ctx), |x| x.shift(-c));
    let model = q.mul(&q).add(&g0.scale(&PadicElement::pi_power(&ctx, t.s)));
    let diff = model.sub(&primitive.scale(&unit));
    let residual = diff.terms().map(|(_, x)| x.val_bound()).min().unwrap_or(ctx.precision());
    (residual, unit.valuation())
}

/// Determinant of the doubled Gram matrix of `Q̄`, from the residues of the
/// report's `Q`.
pub fn gram_det(job: &JobSpec, report: &Report) -> FfElem {
    let ctx = context(job);
    let t = report.toggle.as_ref().expect("toggle model");
    let k = ctx.residue_field().clone();
    let coeff = |e: [u32; 3]| {
        t.q.iter().find(|term| term.exps == e).map_or(k.zero(), |term| element(&ctx, &term.coeff).residue().expect("integral"))
    };
    let a = coeff([2, 0, 0]);
    let b = coeff([1, 1, 0]);
    let c = coeff([1, 0, 1]);
    let d = coeff([0, 2, 0]);
    let e = coeff([0, 1, 1]);
    let f = coeff([0, 0, 2]);
    let two = k.from_int(2);
    let (a2, d2, f2) = (a.mul(&two), d.mul(&two), f.mul(&two));
    // | 2a b c ; b 2d e ; c e 2f |
    a2.mul(&d2.mul(&f2).sub(&e.mul(&e)))
        .sub(&b.mul(&b.mul(&f2).sub(&e.mul(&c))))
        .add(&c.mul(&b.mul(&e).sub(&d2.mul(&c))))
}

/// The lemma conditions of a certified run, rechecked from the report.
pub fn lemma_failures(job: &JobSpec, report: &Report) -> Vec<String> {
    let mut out = Vec::new();
    let Some(l) = &report.lemmas else {
        return vec!["no lemma data".into()];
    };
    if l.v_u.iter().any(|&v| v < 0) {
        out.push(format!("v(u) = {:?} has a negative entry", l.v_u));
    }
    if l.v_u[0] < l.v0 {
        out.push(format!("v1 = {} < v0 = {}", l.v_u[0], l.v0));
    }
    if l.twice_det_val != -2 * l.v0 {
        out.push(format!("2·v(det) = {} instead of {}", l.twice_det_val, -2 * l.v0));
    }
    if gram_det(job, report).is_zero() {
        out.push("Q̄ is degenerate".into());
    }
    let f = octic(report.octic.as_ref().expect("octic"));
    let degree_ok = f.degree() == 8 || (f.degree() == 7 && f.infinity_multiplicity() == 1);
    if !degree_ok || !f.is_squarefree() {
        out.push(format!("the octic {f} does not give 8 distinct points"));
    }
    if l.intersection_points != 8 {
        out.push(format!("{} intersection points", l.intersection_points));
    }
    out
}
