//! Certificate bundles: the heavy suites write their full outcome — witness
//! vectors and sampling parameters verbatim — to a sidecar file next to the
//! report. The report itself stays small and references each bundle by path
//! and content digest.

use crate::cert::convention::{convention_sha256, sha256_bytes, REPORT_SCHEMA};
use crate::error::Error;
use crate::hpn::suites::{KernelOutcome, PairingOutcome};
use crate::op2::suites::Op2PairingOutcome;
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::io::Write;
use std::path::Path;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Bundle {
    pub version: String,
    pub report_schema: u32,
    pub convention_sha256: String,
    pub target: String,
    pub suite: String,
    pub payload: Payload,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    HpnKernel(KernelOutcome),
    HpnPairing(PairingOutcome),
    Op2Pairing(Op2PairingOutcome),
}

impl Bundle {
    pub fn new(target: &str, suite: &str, payload: Payload) -> Self {
        Bundle {
            version: env!("CARGO_PKG_VERSION").to_string(),
            report_schema: REPORT_SCHEMA,
            convention_sha256: convention_sha256(),
            target: target.to_string(),
            suite: suite.to_string(),
            payload,
        }
    }

    /// Writes via a temporary file in the same directory, then renames, so
    /// a crash never leaves a truncated bundle. Returns the content digest.
    pub fn write_atomic(&self, path: &Path) -> Result<String, Error> {
        let bytes = serde_json::to_vec(self)?;
        write_bytes_atomic(path, &bytes)?;
        Ok(sha256_bytes(&bytes))
    }

    pub fn read(path: &Path) -> Result<Bundle, Error> {
        Ok(serde_json::from_slice(&std::fs::read(path)?)?)
    }
}

/// The small subset of a bundle that the report embeds as the suite summary.
/// Re-verification recomputes it from the loaded bundle and demands exact
/// equality, so report and bundle cannot drift apart silently.
pub fn reduced_summary(payload: &Payload) -> serde_json::Value {
    match payload {
        Payload::HpnKernel(out) => json!({
            "n": out.n,
            "samples": out.samples,
            "seed": out.seed,
            "vcount": out.vcount,
            "packed_cols": out.packed_cols,
            "matrix_sha256": out.matrix_sha256,
            "guard_rows": out.guard_rows,
            "guard_rank": out.guard_rank,
            "trace_family_rank": out.trace_family_rank,
            "kernel_dim": out.cert.dim(),
            "modular_rank": out.cert.modular_rank,
            "prime": out.cert.prime,
            "condition": out.condition,
        }),
        Payload::HpnPairing(out) => json!({
            "n": out.n,
            "samples": out.samples,
            "seed": out.seed,
            "isometry_dim": out.isometry_dim,
            "g_cols": out.g_cols,
            "f_cols": out.f_cols,
            "g_sha256": out.g_sha256,
            "f_sha256": out.f_sha256,
            "expected_rank": out.expected_rank,
            "pairing_rank": out.cert.pairing_rank(),
            "guard_rows": out.guard_rows,
            "guard_rank": out.guard_rank,
            "prime": out.cert.prime,
            "decompositions": out.cert.decompositions.len(),
            "ideal_witnesses": out.ideal_witnesses.as_ref().map(Vec::len),
        }),
        Payload::Op2Pairing(out) => json!({
            "samples": out.samples,
            "seed": out.seed,
            "derivation_dim": out.derivation_dim,
            "g_cols": out.g_cols,
            "f_cols": out.f_cols,
            "g_sha256": out.g_sha256,
            "f_sha256": out.f_sha256,
            "f_rank_mod_p": out.f_rank_mod_p,
            "expected_rank": out.expected_rank,
            "pairing_rank": out.cert.pairing_rank(),
            "guard_rows": out.guard_rows,
            "guard_rank": out.guard_rank,
            "prime": out.cert.prime,
        }),
    }
}

pub(crate) fn write_bytes_atomic(path: &Path, bytes: &[u8]) -> Result<(), Error> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let mut tmp = tempfile::NamedTempFile::new_in(dir.unwrap_or_else(|| Path::new(".")))?;
    tmp.write_all(bytes)?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

pub fn file_sha256(path: &Path) -> Result<String, Error> {
    Ok(sha256_bytes(&std::fs::read(path)?))
}
