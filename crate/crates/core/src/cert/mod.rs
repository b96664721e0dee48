//! Report and bundle formats plus stand-alone re-verification.

pub mod bundle;
pub mod convention;
pub mod report;
pub mod reverify;

pub use bundle::{file_sha256, reduced_summary, Bundle, Payload};
pub use convention::{convention_sha256, REPORT_SCHEMA};
pub use report::{BundleRef, ConfigEcho, Report, SuiteReport};
pub use reverify::{reverify_report, Check, ReverifyOutcome};
