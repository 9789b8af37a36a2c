//! Roots of univariate polynomials in the tower, including roots that
//! collide modulo `π`.
//!
//! Integral roots are found by recursion on residue roots: a simple residue
//! root is lifted by Newton's method, a multiple one `r` is refined by
//! passing to `f(r + π y)`. Roots of negative valuation are the inverses of
//! the roots of the reversed polynomial that reduce to 0.

use crate::finite_field::{roots_with_multiplicity, FfElem};
use crate::poly::Poly;

use super::{newton_refine, primitive_part, PadicElement};

/// A group of roots that could not be separated before the precision ran
/// out: `multiplicity` roots (with multiplicity) congruent to `center`
/// modulo `π^radius`.
#[derive(Clone, Debug)]
pub struct UnresolvedCluster {
    pub center: PadicElement,
    pub radius: i64,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, Default)]
pub struct RootReport {
    pub roots: Vec<PadicElement>,
    pub clusters: Vec<UnresolvedCluster>,
    /// Residue roots of the top-level reduction with their multiplicities.
    pub residue_profile: Vec<(FfElem, usize)>,
    /// Degree of the reduction not accounted for by residue roots, i.e.
    /// roots lying in a proper extension of the residue field.
    pub unsplit_degree: usize,
}

impl RootReport {
    pub fn is_complete(&self, degree: usize) -> bool {
        self.clusters.is_empty() && self.roots.len() == degree
    }
}

const MAX_DEPTH: usize = 4096;

/// `f(r + π^k y)` as a polynomial in `y`.
fn taylor_shift(f: &Poly<PadicElement>, r: &PadicElement, k: i64) -> Poly<PadicElement> {
    let ctx = r.ctx();
    f.compose_affine(r, &PadicElement::pi_power(ctx, k))
}

fn residue_poly(f: &Poly<PadicElement>) -> Poly<FfElem> {
    let field = f.zero_elem().ctx().residue_field().clone();
    f.map(field.zero(), |c| c.residue().expect("integral after normalization"))
}

/// Integral roots `center + π^radius y` of `f`, recursing on multiple
/// residue roots. `only_zero` restricts the residue root to 0 at the top.
fn integral_roots(
    f: &Poly<PadicElement>,
    center: &PadicElement,
    radius: i64,
    only_zero: bool,
    depth: usize,
    report: &mut RootReport,
    top: bool,
) {
    let Some(g) = primitive_part(f) else {
        // zero at precision: every point of this disc is a root
        let mult = f.len().saturating_sub(1).max(1);
        report.clusters.push(UnresolvedCluster { center: center.clone(), radius, multiplicity: mult });
        return;
    };
    let gbar = residue_poly(&g);
    let deg = gbar.degree().unwrap_or(0);
    if deg == 0 {
        return;
    }
    let rr = roots_with_multiplicity(&gbar);
    if top {
        report.residue_profile = rr.clone();
        report.unsplit_degree = deg - rr.iter().map(|(_, m)| m).sum::<usize>();
    }
    let ctx = center.ctx().clone();
    for (r0, mult) in rr {
        if only_zero && !r0.is_zero() {
            continue;
        }
        let r = PadicElement::lift_residue(&ctx, &r0);
        if mult == 1 {
            let dg = g.derivative();
            let y = newton_refine(&g, &dg, r);
            report.roots.push(center.add(&y.shift(radius)));
            continue;
        }
        let next_center = center.add(&r.shift(radius));
        if depth >= MAX_DEPTH {
            report.clusters.push(UnresolvedCluster { center: next_center, radius: radius + 1, multiplicity: mult });
            continue;
        }
        let h = taylor_shift(&g, &r, 1);
        integral_roots(&h, &next_center, radius + 1, false, depth + 1, report, false);
    }
}

/// All roots of `f` in the field, with residue diagnostics. Roots are
/// returned in discovery order (integral roots first).
pub fn roots_in_field(f: &Poly<PadicElement>) -> RootReport {
    let mut report = RootReport::default();
    let Some(deg) = f.degree() else { return report };
    if deg == 0 {
        return report;
    }
    let ctx = f.zero_elem().ctx().clone();
    let zero = PadicElement::zero(&ctx);
    integral_roots(&f.trimmed(), &zero, 0, false, 0, &mut report, true);
    let rev = f.trimmed().reversed();
    let mut inverse = RootReport::default();
    integral_roots(&rev, &zero, 0, true, 0, &mut inverse, false);
    for r in inverse.roots {
        if let Ok(x) = r.inv() {
            report.roots.push(x);
        }
    }
    for c in inverse.clusters {
        if c.center.is_zero() {
            // roots of the reversal at 0 correspond to a dropped degree
            continue;
        }
        if let Ok(x) = c.center.inv() {
            report.clusters.push(UnresolvedCluster { center: x, radius: c.radius, multiplicity: c.multiplicity });
        }
    }
    report
}
