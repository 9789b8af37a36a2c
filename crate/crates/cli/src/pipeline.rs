//! The end-to-end computation behind `analyze`.

use std::sync::Arc;

use stablequartic::aronhold::{validate_pinned, SyzygyTable};
use stablequartic::bitangents::{solve_bitangents, to_field_quartic, BitangentSet, KQuartic, Quartic, SolveOptions};
use stablequartic::linalg::Matrix;
use stablequartic::padic::{FieldContext, PadicDigits, PadicElement};
use stablequartic::poly::discriminant_quartic;
use stablequartic::reduction::{check_good, hyperelliptic_reduction, reduce_model, satisfies_weil_bound, OcticSummary};
use stablequartic::riemann::{
    build_frame, pin_signs, primitive_row, relabel_aronhold, stable_scheme, toggle_model, AronholdFrame, RiemannError,
};
use stablequartic::ring::rational_valuation;

use crate::job::{JobSpec, Mode};
use crate::report::*;

/// A stage failure, before it is sorted into a verdict.
struct Stop {
    verdict: Verdict,
    failure: Failure,
}

fn stop(verdict: Verdict, stage: Stage, message: impl Into<String>, hint: &str) -> Stop {
    Stop { verdict, failure: Failure { stage, message: message.into(), hint: hint.into() } }
}

fn digits(x: &PadicElement) -> PadicDigits {
    x.to_digits()
}

fn terms(f: &KQuartic) -> Vec<Term> {
    f.terms().map(|(e, c)| Term { exps: *e, coeff: digits(c) }).collect()
}

fn matrix_rows(m: &Matrix<PadicElement>) -> Vec<Vec<PadicDigits>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| digits(&m[(i, j)])).collect()).collect()
}

fn frame_report(frame: &AronholdFrame, signs_pinned: bool) -> FrameReport {
    FrameReport {
        order: frame.order,
        a: frame.a.as_ref().map(|a| a.iter().map(|row| row.iter().map(digits).collect()).collect()),
        signs: frame.signs,
        twice_vals: frame.twice_vals,
        case: frame.case.clone(),
        signs_pinned,
    }
}

const HINT_PRECISION: &str = "raise the working precision N (or the guard)";
const HINT_TOWER: &str = "enlarge the tower so that all 28 bitangents are defined over it";

/// Runs the job. Every outcome, including errors, is a report.
pub fn run_pipeline(job: &JobSpec) -> Report {
    let mut report = Report::new(job.mode);
    if let Err(s) = run(job, &mut report) {
        report.verdict = s.verdict;
        report.failure = Some(s.failure);
    }
    report
}

fn run(job: &JobSpec, report: &mut Report) -> Result<(), Stop> {
    job.validate().map_err(|e| stop(Verdict::Error, Stage::Input, e.to_string(), "fix the job file"))?;
    let f = job.quartic_poly().map_err(|e| stop(Verdict::Error, Stage::Input, e.to_string(), "fix the job file"))?;
    let ctx = FieldContext::new(job.tower_spec(), job.precision).map_err(|e| {
        stop(Verdict::Error, Stage::Field, e.to_string(), "the unramified polynomial must be irreducible mod p and the ramified one Eisenstein")
    })?;
    if job.mode != Mode::BitangentsOnly {
        let disc = discriminant_quartic(&f).map_err(|e| stop(Verdict::Error, Stage::Discriminant, e.to_string(), "supply a ternary quartic form"))?;
        match rational_valuation(&disc, job.p) {
            Some(v) => report.discriminant_valuation = Some(v),
            None => return Err(stop(Verdict::Error, Stage::Discriminant, "the quartic is singular (discriminant 0)", "supply a smooth quartic")),
        }
    }
    match analyze_over(job, &f, &ctx, report) {
        Err(Stop { failure: Failure { stage: Stage::Toggle, message, .. }, .. }) if message.starts_with("half-integral") => {
            let up = ctx.ramified_quadratic().map_err(|e| stop(Verdict::Error, Stage::Field, e.to_string(), HINT_PRECISION))?;
            report.note(Stage::Toggle, format!("{message}; restarting over K(√π)"));
            analyze_over(job, &f, &up, report)
        }
        other => other,
    }
}

fn analyze_over(job: &JobSpec, f: &Quartic, ctx: &Arc<FieldContext>, report: &mut Report) -> Result<(), Stop> {
    let guard = job.guard;
    let n = ctx.precision();
    report.field = Some(FieldInfo { p: ctx.p(), unram_degree: ctx.unram_degree(), ram_index: ctx.ram_index(), precision: n, guard });
    report.extensions = ctx.history().to_vec();
    let mut budget = PrecisionBudget { requested: n, guard, min_verified: n, consumed: 0 };

    let set = solve_bitangents(f, ctx, &SolveOptions { guard, ..Default::default() })
        .map_err(|e| stop(Verdict::Error, Stage::Bitangents, e.to_string(), HINT_PRECISION))?;
    record_bitangents(&set, report, &mut budget);
    report.precision = Some(budget.clone());
    if set.lines.len() != 28 {
        return Err(stop(Verdict::Error, Stage::Bitangents, format!("only {} of the 28 bitangents are defined over the tower", set.lines.len()), HINT_TOWER));
    }
    if job.mode == Mode::BitangentsOnly {
        report.note(Stage::Bitangents, "mode bitangents-only stops before certification");
        return Ok(());
    }

    let table = SyzygyTable::build(&set.lines, guard);
    let mut ar = AronholdReport { syzygetic_triples: table.syzygetic_count(), count: None, order: None, pinned: false };
    if job.mode == Mode::CountAronhold {
        ar.count = Some(table.count_aronhold());
        report.aronhold = Some(ar);
        report.note(Stage::Aronhold, "mode count-aronhold stops before certification");
        return Ok(());
    }
    let fixtures = job.fixtures.clone().unwrap_or_default();
    let order: [usize; 7] = match fixtures.pinned_aronhold {
        Some(pinned) => {
            let c = validate_pinned(&table, &pinned).map_err(|e| stop(Verdict::Error, Stage::Aronhold, e.to_string(), "pin seven indices of an Aronhold set"))?;
            ar.pinned = true;
            c.indices.try_into().expect("seven indices")
        }
        None => table
            .find_aronhold()
            .ok_or_else(|| stop(Verdict::Error, Stage::Aronhold, "no Aronhold set among the bitangents", HINT_PRECISION))?
            .try_into()
            .expect("seven indices"),
    };
    ar.order = Some(order);
    report.aronhold = Some(ar);

    let fk = to_field_quartic(ctx, f);
    let mut frame = build_frame(&set.lines, order, &fk, guard).map_err(|e| frame_stop(Stage::Frame, e))?;
    if let Some(signs) = fixtures.pinned_signs {
        pin_signs(&mut frame, signs, &fk, guard).map_err(|e| frame_stop(Stage::Frame, e))?;
    }
    budget.min_verified = budget.min_verified.min(frame.residual_val);
    report.frame = Some(frame_report(&frame, fixtures.pinned_signs.is_some()));
    if frame.eta.is_none() {
        report.note(Stage::Frame, "η is not defined over the tower; a_ij are reported through their valuations only");
    }

    let relabeled = match relabel_aronhold(frame, &set.lines, &table, &fk, guard) {
        Ok(r) => r,
        Err(RiemannError::RelabelFailed(why)) => {
            set_budget(report, budget);
            return Err(stop(
                Verdict::NotCertified,
                Stage::Relabel,
                format!("no frame with positive v0: {why}"),
                "the valuation pattern points to good quartic reduction or bad reduction, which this pipeline does not certify; a pattern read at low precision can also hide a positive frame, so raise N to confirm",
            ));
        }
        Err(e) => return Err(frame_stop(Stage::Relabel, e)),
    };
    report.relabel = Some(RelabelReport { steps: relabeled.steps.clone(), order: relabeled.frame.order, case: relabeled.frame.case.clone() });
    if job.mode == Mode::Classify {
        set_budget(report, budget);
        report.note(Stage::Relabel, "mode classify stops before certification");
        return Ok(());
    }

    let toggle = toggle_model(&relabeled.frame, &fk, guard).map_err(|e| frame_stop(Stage::Toggle, e))?;
    budget.min_verified = budget.min_verified.min(toggle.residual_val);
    report.toggle = Some(ToggleReport {
        s: toggle.s,
        q: terms(&toggle.q),
        g0: terms(&toggle.g0),
        m: matrix_rows(&toggle.m_total),
        scalar: digits(&toggle.scalar),
        residual_val: toggle.residual_val,
    });
    let scheme = stable_scheme(&toggle);
    if scheme.adjoined_sqrt_pi {
        report.extensions.push("the stable model is defined after adjoining ϖ with ϖ² = π".into());
    }
    report.stable_scheme = Some(scheme);
    set_budget(report, budget);

    let reduced = reduce_model(&toggle).map_err(|e| stop(Verdict::Error, Stage::Reduction, e.to_string(), HINT_PRECISION))?;
    let mut lemmas = LemmaReport {
        v0: toggle.v0,
        v_u: toggle.v_u,
        twice_det_val: toggle.twice_det_val,
        gram_det_nonzero: false,
        intersection_points: 0,
        transverse: false,
    };
    let cert = match check_good(&reduced) {
        Ok(c) => c,
        Err(e) => {
            report.lemmas = Some(lemmas);
            return Err(stop(Verdict::NotCertified, Stage::Reduction, format!("toggle model found but not good at this precision: {e}"), HINT_PRECISION));
        }
    };
    let hyp = hyperelliptic_reduction(&reduced, &cert);
    lemmas.gram_det_nonzero = !cert.gram_det.is_zero();
    lemmas.intersection_points = hyp.branch_degrees.iter().sum();
    lemmas.transverse = true;
    report.lemmas = Some(lemmas);
    if hyp.octic.field().degree() > ctx.residue_field().degree() {
        report.extensions.push(format!("conic point found over F_{}^{}", ctx.p(), hyp.octic.field().degree()));
    }
    let summary = OcticSummary::new(&hyp);
    if !satisfies_weil_bound(&hyp.octic, summary.point_count) {
        return Err(stop(Verdict::Error, Stage::Reduction, "point count of the special fiber violates the Weil bound", "report this input"));
    }
    report.octic = Some(summary);
    report.verdict = Verdict::GoodHyperellipticCertificate;
    Ok(())
}

fn set_budget(report: &mut Report, mut budget: PrecisionBudget) {
    budget.consumed = budget.requested - budget.min_verified;
    report.precision = Some(budget);
}

fn record_bitangents(set: &BitangentSet, report: &mut Report, budget: &mut PrecisionBudget) {
    let min_residual = set.lines.iter().map(|b| b.residual_val).min().unwrap_or(budget.requested);
    budget.min_verified = budget.min_verified.min(min_residual);
    budget.consumed = budget.requested - budget.min_verified;
    for d in &set.diagnostics {
        report.note(Stage::Bitangents, d.clone());
    }
    report.bitangents = Some(BitangentReport {
        count: set.lines.len(),
        complete: set.complete,
        lines: set.lines.iter().map(|b| primitive_row(&b.line).map(|c| digits(&c))).collect(),
        min_residual,
    });
}

fn frame_stop(stage: Stage, e: RiemannError) -> Stop {
    let hint = match e {
        RiemannError::HalfIntegral(_) => "adjoin a square root of the uniformizer",
        RiemannError::MissingTableLine(_) | RiemannError::FrameInconsistency(_) => HINT_PRECISION,
        _ => "raise the precision or pin another Aronhold set",
    };
    stop(Verdict::Error, stage, e.to_string(), hint)
}
