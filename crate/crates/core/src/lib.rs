#![forbid(unsafe_code)]

//! Exact certificates for quadratic Killing tensors on quaternionic projective
//! spaces and the Cayley plane.
//!
//! Everything load-bearing is computed over the rationals. Modular arithmetic
//! is used to *find* candidates (kernels, witness supports, solution vectors);
//! every claim that ends up in a report is then re-verified with exact
//! rational arithmetic. Floating point appears in exactly one place, the
//! advisory geodesic-flow drift check, and is labeled as such in reports.

pub mod error;
pub mod scalars;
pub mod seeding;
pub mod linalg;
pub mod bihom;
pub mod hpn;
pub mod op2;
pub mod cert;

pub use cert::{reverify_report, Bundle, ConfigEcho, Report, ReverifyOutcome, SuiteReport};
pub use error::Error;
pub use scalars::oct::Oct;
pub use scalars::rat::{Int, Rat};
pub use linalg::farkas::FarkasWitness;
pub use linalg::mat::MatR;
pub use linalg::rank::RankReport;
