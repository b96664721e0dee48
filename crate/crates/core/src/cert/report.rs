//! The run report: configuration echo, one entry per suite with a reduced
//! summary, references to certificate bundles, and a content signature.
//! Two runs with the same configuration produce byte-identical reports
//! except for the timing block, which the signature excludes.

use crate::cert::bundle::write_bytes_atomic;
use crate::cert::convention::{convention_sha256, sha256_bytes, REPORT_SCHEMA};
use crate::error::Error;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub target: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub suites: Vec<String>,
    pub samples: usize,
    pub seed: u64,
    pub primes: Vec<u64>,
    pub tol: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BundleRef {
    /// Path relative to the report file.
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    /// "pass" or "fail".
    pub status: String,
    pub summary: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bundle: Option<BundleRef>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub report_schema: u32,
    pub convention_sha256: String,
    pub config: ConfigEcho,
    pub suites: Vec<SuiteReport>,
    pub timing_seconds: BTreeMap<String, f64>,
    /// Digest of the report with timing and signature blanked.
    pub signature: String,
}

impl Report {
    pub fn new(config: ConfigEcho) -> Self {
        Report {
            version: env!("CARGO_PKG_VERSION").to_string(),
            report_schema: REPORT_SCHEMA,
            convention_sha256: convention_sha256(),
            config,
            suites: Vec::new(),
            timing_seconds: BTreeMap::new(),
            signature: String::new(),
        }
    }

    pub fn compute_signature(&self) -> Result<String, Error> {
        let mut stripped = self.clone();
        stripped.timing_seconds.clear();
        stripped.signature.clear();
        Ok(sha256_bytes(&serde_json::to_vec(&stripped)?))
    }

    pub fn seal(&mut self) -> Result<(), Error> {
        self.signature = self.compute_signature()?;
        Ok(())
    }

    pub fn all_pass(&self) -> bool {
        self.suites.iter().all(|s| s.status == "pass")
    }

    pub fn write_atomic(&self, path: &Path) -> Result<(), Error> {
        let bytes = serde_json::to_vec_pretty(self)?;
        write_bytes_atomic(path, &bytes)
    }

    pub fn read(path: &Path) -> Result<Report, Error> {
        Ok(serde_json::from_slice(&std::fs::read(path)?)?)
    }
}
