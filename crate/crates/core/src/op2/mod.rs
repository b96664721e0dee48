//! The Cayley plane: Albert algebra, exact points and tangent spaces,
//! derivations, geodesics, and the verification suites.

pub mod chart;
pub mod deriv;
pub mod flow;
pub mod geod;
pub mod suites;
pub mod h3o;
