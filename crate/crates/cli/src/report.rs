//! Pipeline reports and their JSON and text renderings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use stablequartic::padic::PadicDigits;
use stablequartic::reduction::OcticSummary;
use stablequartic::riemann::{StableScheme, ValuationCase};

use crate::job::{Mode, SCHEMA};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    GoodHyperellipticCertificate,
    NotCertified,
    Error,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::GoodHyperellipticCertificate => "good-hyperelliptic-certificate",
            Verdict::NotCertified => "not-certified",
            Verdict::Error => "error",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::GoodHyperellipticCertificate => 0,
            Verdict::NotCertified => 2,
            Verdict::Error => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Input,
    Field,
    Discriminant,
    Bitangents,
    Aronhold,
    Frame,
    Relabel,
    Toggle,
    Reduction,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::Input => "input",
            Stage::Field => "field",
            Stage::Discriminant => "discriminant",
            Stage::Bitangents => "bitangents",
            Stage::Aronhold => "aronhold",
            Stage::Frame => "frame",
            Stage::Relabel => "relabel",
            Stage::Toggle => "toggle",
            Stage::Reduction => "reduction",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldInfo {
    pub p: u64,
    pub unram_degree: usize,
    pub ram_index: usize,
    pub precision: i64,
    pub guard: i64,
}

/// One coefficient of a ternary form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub exps: [u32; 3],
    pub coeff: PadicDigits,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BitangentReport {
    pub count: usize,
    pub complete: bool,
    /// Primitive line coefficients `(l1, l2, l3)` of `l1 x1 + l2 x2 + l3 x3`.
    pub lines: Vec<[PadicDigits; 3]>,
    pub min_residual: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AronholdReport {
    pub syzygetic_triples: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<[usize; 7]>,
    pub pinned: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameReport {
    pub order: [usize; 7],
    /// `a_ij` with `η_i² = 1`, when `η` is defined over the field.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<Vec<PadicDigits>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signs: Option<[i8; 3]>,
    /// `2 v(a_ij)`.
    pub twice_vals: [[i64; 3]; 3],
    pub case: ValuationCase,
    pub signs_pinned: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelabelReport {
    pub steps: Vec<String>,
    pub order: [usize; 7],
    pub case: ValuationCase,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToggleReport {
    pub s: i64,
    pub q: Vec<Term>,
    pub g0: Vec<Term>,
    /// `x = M y`, rows of `M`.
    pub m: Vec<Vec<PadicDigits>>,
    /// `Q² + π^s G0 = scalar · F∘M` to the residual valuation.
    pub scalar: PadicDigits,
    pub residual_val: i64,
}

/// Valuation lemmas and transversality, as checked on the run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub v0: i64,
    pub v_u: [i64; 3],
    pub twice_det_val: i64,
    pub gram_det_nonzero: bool,
    pub intersection_points: usize,
    pub transverse: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionBudget {
    pub requested: i64,
    pub guard: i64,
    /// Smallest valuation to which every verified identity held.
    pub min_verified: i64,
    pub consumed: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub stage: Stage,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub stage: Stage,
    pub message: String,
    pub hint: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub mode: Mode,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldInfo>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discriminant_valuation: Option<i64>,
    #[serde(default)]
    pub extensions: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bitangents: Option<BitangentReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aronhold: Option<AronholdReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<FrameReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relabel: Option<RelabelReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub toggle: Option<ToggleReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lemmas: Option<LemmaReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stable_scheme: Option<StableScheme>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub octic: Option<OcticSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<PrecisionBudget>,
    #[serde(default)]
    pub diagnostics: Vec<Diagnostic>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<Failure>,
}

impl Report {
    pub fn new(mode: Mode) -> Self {
        Self {
            schema: SCHEMA,
            mode,
            verdict: Verdict::NotCertified,
            field: None,
            discriminant_valuation: None,
            extensions: Vec::new(),
            bitangents: None,
            aronhold: None,
            frame: None,
            relabel: None,
            toggle: None,
            lemmas: None,
            stable_scheme: None,
            octic: None,
            precision: None,
            diagnostics: Vec::new(),
            failure: None,
        }
    }

    pub fn note(&mut self, stage: Stage, message: impl Into<String>) {
        self.diagnostics.push(Diagnostic { stage, message: message.into() });
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

pub fn emit_report(r: &Report, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(r).expect("report serializes");
            s.push('\n');
            s.into_bytes()
        }
        Format::Text => render_text(r).into_bytes(),
    }
}

/// Integer coordinates of a digit list, one per basis vector `τ^i π^j`
/// (index `j·d + i`).
fn coordinates(x: &PadicDigits, p: u64) -> Vec<u128> {
    x.digits.iter().map(|ds| ds.iter().rev().fold(0u128, |acc, &d| acc * p as u128 + d as u128)).collect()
}

fn basis_name(i: usize, j: usize) -> String {
    let t = match i {
        0 => String::new(),
        1 => "τ".to_string(),
        _ => format!("τ^{i}"),
    };
    let q = match j {
        0 => String::new(),
        1 => "π".to_string(),
        _ => format!("π^{j}"),
    };
    match (t.is_empty(), q.is_empty()) {
        (true, true) => "1".into(),
        (false, true) => t,
        (true, false) => q,
        (false, false) => format!("{t}{q}"),
    }
}

/// `π^v·(c + c'τ + …) + O(π^(v+rel))` with the coordinates of the unit part.
pub fn format_padic(x: &PadicDigits, field: &FieldInfo) -> String {
    if x.rel == 0 {
        return format!("O(π^{})", x.val);
    }
    let d = field.unram_degree;
    let parts: Vec<String> = coordinates(x, field.p)
        .into_iter()
        .enumerate()
        .filter(|(_, c)| *c != 0)
        .map(|(k, c)| {
            let b = basis_name(k % d, k / d);
            if b == "1" {
                c.to_string()
            } else if c == 1 {
                b
            } else {
                format!("{c}{b}")
            }
        })
        .collect();
    let unit = if parts.len() == 1 { parts[0].clone() } else { format!("({})", parts.join(" + ")) };
    let head = match x.val {
        0 => unit,
        1 => format!("π·{unit}"),
        v => format!("π^{v}·{unit}"),
    };
    format!("{head} + O(π^{})", x.val + x.rel)
}

fn monomial(e: &[u32; 3]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| if k == 1 { format!("x{}", i + 1) } else { format!("x{}^{k}", i + 1) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn form(name: &str, terms: &[Term], field: &FieldInfo, out: &mut String) {
    let _ = writeln!(out, "{name} =");
    for t in terms {
        let _ = writeln!(out, "    ({}) * {}", format_padic(&t.coeff, field), monomial(&t.exps));
    }
}

fn case_text(c: &ValuationCase) -> String {
    match c {
        ValuationCase::Positive { twice_v0, column, rows } => {
            format!("positive, 2·v0 = {twice_v0} in column {} rows {} and {}", column + 1, rows[0] + 1, rows[1] + 1)
        }
        ValuationCase::Negative { twice_v0, column, rows } => {
            format!("negative, 2·v0 = {twice_v0} in column {} rows {} and {}", column + 1, rows[0] + 1, rows[1] + 1)
        }
        ValuationCase::AllZero => "all a_ij are units".into(),
        ValuationCase::Other => "no recognised valuation pattern".into(),
    }
}

/// The human-readable rendering: verdict, then `Q`, then `G0`, then the
/// extension data and the special fiber.
pub fn render_text(r: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "stablequartic report (schema {})", r.schema);
    let _ = writeln!(out, "mode: {}", r.mode.name());
    let _ = writeln!(out, "verdict: {}", r.verdict.name());
    if let Some(f) = &r.field {
        let _ = writeln!(out, "field: p = {}, unramified degree {}, ramification index {}, N = {}, guard = {}", f.p, f.unram_degree, f.ram_index, f.precision, f.guard);
    }
    if let Some(v) = r.discriminant_valuation {
        let _ = writeln!(out, "discriminant valuation: {v}");
    }
    if let Some(b) = &r.bitangents {
        let _ = writeln!(out, "bitangents: {} ({}), min residual valuation {}", b.count, if b.complete { "complete" } else { "incomplete" }, b.min_residual);
    }
    if let Some(a) = &r.aronhold {
        let _ = writeln!(out, "syzygetic triples: {}", a.syzygetic_triples);
        if let Some(c) = a.count {
            let _ = writeln!(out, "Aronhold sets: {c}");
        }
        if let Some(o) = a.order {
            let _ = writeln!(out, "Aronhold set: {o:?}{}", if a.pinned { " (pinned)" } else { "" });
        }
    }
    if let (Some(fr), Some(field)) = (&r.frame, &r.field) {
        let _ = writeln!(out, "frame {:?}: {}", fr.order, case_text(&fr.case));
        if let Some(s) = fr.signs {
            let _ = writeln!(out, "signs: {s:?}{}", if fr.signs_pinned { " (pinned)" } else { "" });
        }
        if let Some(a) = &fr.a {
            for (i, row) in a.iter().enumerate() {
                for (j, x) in row.iter().enumerate() {
                    let _ = writeln!(out, "    a{}{} = {}", i + 1, j + 1, format_padic(x, field));
                }
            }
        }
    }
    if let Some(rl) = &r.relabel {
        let _ = writeln!(out, "relabeled frame {:?}: {}", rl.order, case_text(&rl.case));
        for s in &rl.steps {
            let _ = writeln!(out, "    {s}");
        }
    }
    if let (Some(t), Some(field)) = (&r.toggle, &r.field) {
        let _ = writeln!(out, "toggle model Q^2 + π^{} G0 = 0", t.s);
        form("Q", &t.q, field, &mut out);
        form("G0", &t.g0, field, &mut out);
        let _ = writeln!(out, "change of variables x = M y:");
        for row in &t.m {
            let cells: Vec<String> = row.iter().map(|x| format_padic(x, field)).collect();
            let _ = writeln!(out, "    [{}]", cells.join(", "));
        }
        let _ = writeln!(out, "scalar: {}", format_padic(&t.scalar, field));
        let _ = writeln!(out, "identity residual valuation: {}", t.residual_val);
    }
    if let Some(s) = &r.stable_scheme {
        let _ = writeln!(out, "stable model: {}", s.description);
    }
    if !r.extensions.is_empty() {
        let _ = writeln!(out, "extensions:");
        for e in &r.extensions {
            let _ = writeln!(out, "    {e}");
        }
    }
    if let Some(o) = &r.octic {
        let _ = writeln!(out, "special fiber: y^2 = {}", o.display);
        let _ = writeln!(out, "    over F_{}^{} (modulus {:?}), coefficients {:?}", o.p, o.field_modulus.len() - 1, o.field_modulus, o.coeffs);
        let _ = writeln!(out, "    branch point degrees {:?}, {} points", o.branch_degrees, o.point_count);
    }
    if let Some(l) = &r.lemmas {
        let _ = writeln!(
            out,
            "lemmas: v0 = {}, v(u) = {:?}, 2·v(det) = {}, Gram determinant nonzero: {}, {} intersection points, transverse: {}",
            l.v0, l.v_u, l.twice_det_val, l.gram_det_nonzero, l.intersection_points, l.transverse
        );
    }
    if let Some(b) = &r.precision {
        let _ = writeln!(out, "precision: requested {}, guard {}, verified to π^{}, consumed {}", b.requested, b.guard, b.min_verified, b.consumed);
    }
    if !r.diagnostics.is_empty() {
        let _ = writeln!(out, "diagnostics:");
        for d in &r.diagnostics {
            let _ = writeln!(out, "    [{}] {}", d.stage.name(), d.message);
        }
    }
    if let Some(f) = &r.failure {
        let _ = writeln!(out, "stopped at {}: {}", f.stage.name(), f.message);
        let _ = writeln!(out, "hint: {}", f.hint);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn padic_rendering() {
        let field = FieldInfo { p: 13, unram_degree: 2, ram_index: 7, precision: 14, guard: 2 };
        let x = PadicDigits { val: 2, rel: 5, digits: vec![vec![3], vec![0, 1], vec![1], vec![], vec![], vec![], vec![], vec![], vec![], vec![], vec![], vec![], vec![], vec![]] };
        assert_eq!(format_padic(&x, &field), "π^2·(3 + 13τ + π) + O(π^7)");
        let zero = PadicDigits { val: 9, rel: 0, digits: vec![vec![]; 14] };
        assert_eq!(format_padic(&zero, &field), "O(π^9)");
    }
}
