//! Quaternionic projective space: structure operators, the operator basis,
//! exact horizontal sampling, the tensors built from them, and the
//! verification suites.

pub mod ideal;
pub mod isometry;
pub mod samples;
pub mod structure;
pub mod suites;
pub mod tensors;
pub mod vbasis;
