//! Batch fuzzing, sharpness search and report emission.

mod fuzz;
mod report;
mod sharpness;

pub use fuzz::{
    run_fuzz, BoundSection, CaseRecord, FuzzConfig, FuzzError, FuzzReport, MarginHistogram, TrialRecord,
    HISTOGRAM_BINS, HISTOGRAM_HI, HISTOGRAM_LO, SCHEMA, THREADS_ENV,
};
pub use report::{emit_report, parse_report, ReportError, ReportFormat, CSV_COLUMNS};
pub use sharpness::{search_sharpness, ExtremalResult, SharpnessConfig};
