//! Job files, the analysis pipeline and its reports.

pub mod job;
pub mod pipeline;
pub mod report;

pub use job::{Fixtures, JobSpec, Mode, Tower};
pub use pipeline::run_pipeline;
pub use report::{emit_report, Format, Report, Verdict};
