mod common;

use std::path::PathBuf;
use std::process::Command;

use common::*;
use stablequartic_cli::report::{format_padic, render_text, Stage};
use stablequartic_cli::{emit_report, Fixtures, Format, JobSpec, Mode, Report, Verdict};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_stablequartic"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("stablequartic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn analyze(job: &PathBuf, extra: &[&str], out: &PathBuf) -> i32 {
    let status = bin()
        .args(["analyze", "--input"])
        .arg(job)
        .arg("--out")
        .arg(out)
        .args(extra)
        .status()
        .unwrap();
    status.code().unwrap()
}

#[test]
fn klein_at_7_end_to_end() {
    let job = jobs_dir().join("klein7.json");
    let (a, b, t) = (scratch("k7a.json"), scratch("k7b.json"), scratch("k7.txt"));
    assert_eq!(analyze(&job, &["--mode", "full", "--precision", "60", "--guard", "8"], &a), 0);
    assert_eq!(analyze(&job, &[], &b), 0);
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap(), "reports are deterministic");

    let text = String::from_utf8(bytes).unwrap();
    assert!(text.contains("\"schema\": 1"));
    let report = Report::from_json(&text).unwrap();
    assert_eq!(report.verdict, Verdict::GoodHyperellipticCertificate);
    assert_eq!(String::from_utf8(emit_report(&report, Format::Json)).unwrap(), text);

    assert_eq!(analyze(&job, &["--text"], &t), 0);
    let rendered = std::fs::read_to_string(&t).unwrap();
    assert_eq!(rendered, render_text(&report));
    let field = report.field.as_ref().unwrap();
    let toggle = report.toggle.as_ref().unwrap();
    for term in toggle.q.iter().chain(&toggle.g0) {
        assert!(rendered.contains(&format_padic(&term.coeff, field)));
    }
    let q_at = rendered.find("\nQ =").unwrap();
    let g_at = rendered.find("\nG0 =").unwrap();
    let ext_at = rendered.find("stable model:").unwrap();
    assert!(q_at < g_at && g_at < ext_at);
}

#[test]
fn partial_modes_exit_not_certified() {
    let job = jobs_dir().join("klein29.json");
    let out = scratch("k29.json");
    assert_eq!(analyze(&job, &["--mode", "bitangents-only"], &out), 2);
    let report = Report::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report.mode, Mode::BitangentsOnly);
    assert_eq!(report.bitangents.unwrap().count, 28);
    assert!(report.aronhold.is_none());

    assert_eq!(analyze(&job, &["--mode", "count-aronhold", "--precision", "14"], &out), 2);
    let report = Report::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report.field.unwrap().precision, 14);
    assert_eq!(report.aronhold.unwrap().count, Some(288));
}

#[test]
fn bad_jobs_exit_with_errors() {
    let mut job = load_job("klein29");
    job.p = 2;
    job.tower.unram_poly = vec![0, 1];
    job.tower.eis_poly = vec![vec![-2], vec![1]];
    let path = scratch("even.json");
    std::fs::write(&path, job.to_json()).unwrap();
    let out = scratch("even-report.json");
    assert_eq!(analyze(&path, &[], &out), 1);
    let report = Report::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report.verdict, Verdict::Error);
    assert_eq!(report.failure.unwrap().stage, Stage::Input);

    let broken = scratch("broken.json");
    std::fs::write(&broken, "{\"schema\": 1, \"p\": ").unwrap();
    assert_eq!(analyze(&broken, &[], &out), 1);
}

#[test]
fn pinned_sets_are_validated() {
    let mut job = with_mode(load_job("klein29"), Mode::Classify);
    job.fixtures = Some(Fixtures { pinned_aronhold: Some([0, 0, 1, 2, 3, 4, 5]), pinned_signs: None });
    let report = stablequartic_cli::run_pipeline(&job);
    assert_eq!(report.verdict, Verdict::Error);
    assert_eq!(report.failure.unwrap().stage, Stage::Aronhold);
}

#[test]
fn job_files_roundtrip() {
    for name in ["klein7", "klein29", "fermat5", "bas13"] {
        let job = load_job(name);
        job.validate().unwrap();
        assert_eq!(JobSpec::from_json(&job.to_json()).unwrap(), job);
        assert_eq!(job.quartic.len(), 15);
    }
    let mut short = load_job("klein7");
    short.quartic.pop();
    assert!(short.validate().is_err());
}

#[test]
fn empty_diagnostics_have_no_section() {
    let report = Report::new(Mode::Full);
    let text = render_text(&report);
    assert!(!text.contains("diagnostics"));
    let back = Report::from_json(std::str::from_utf8(&emit_report(&report, Format::Json)).unwrap()).unwrap();
    assert_eq!(back, report);
}
