//! Convention fingerprint. Every number in a report depends on fixed
//! choices: the multiplication table, basis orderings, packing order, row
//! scales. The fingerprint hashes a canonical description of all of them,
//! so a report produced under different conventions is rejected instead of
//! being compared entry-by-entry against incompatible matrices.

use crate::scalars::oct::{hex_string, table_text};
use sha2::{Digest, Sha256};

/// Version of the report/bundle JSON layout.
pub const REPORT_SCHEMA: u32 = 1;

const CONVENTION_TEXT: &[&str] = &[
    "hermitian coordinates: r1 r2 r3 then x1 x2 x3, each octonion e0..e7",
    "inner products carry weight 2 on off-diagonal octonion slots",
    "determinant: r1 r2 r3 + 2<x1 x2, x3> - r1|x1|^2 - r2|x2|^2 - r3|x3|^2",
    "pair packing: upper triangle row-major, off-diagonal columns doubled",
    "quaternionic samples: integer horizontal pairs (x, p), all four pairings zero",
    "projective chart rows: shared scale 3 D^2 with D the chart trace, rows content-reduced",
    "witness supports: stacked pivot rows in ascending order",
];

/// Digest of the conventions this build evaluates under.
pub fn convention_sha256() -> String {
    let mut h = Sha256::new();
    h.update(format!("schema {REPORT_SCHEMA}\n").as_bytes());
    h.update(table_text().as_bytes());
    for line in CONVENTION_TEXT {
        h.update(line.as_bytes());
        h.update(b"\n");
    }
    hex_string(&h.finalize())
}

pub fn sha256_bytes(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    hex_string(&h.finalize())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fingerprint_is_stable_within_a_build() {
        let a = convention_sha256();
        let b = convention_sha256();
        assert_eq!(a, b);
        assert_eq!(a.len(), 64);
    }
}
