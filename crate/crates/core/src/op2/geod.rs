//! Geodesics on the projective plane and the quadratic forms K_A.

use crate::error::Error;
use crate::op2::chart::membership_ok;
use crate::op2::h3o::{cross, phi3, H3O};
use crate::scalars::oct::Oct;
use crate::scalars::rat::{rat, Rat};
use num_traits::{One, Zero};

/// A tangent vector: a base point on the plane together with a traceless
/// direction satisfying the linearized sharp constraint. Both conditions
/// are verified at construction.
#[derive(Clone, Debug)]
pub struct TangentVec {
    pub at: H3O,
    pub t: H3O,
}

impl TangentVec {
    pub fn new(at: H3O, t: H3O) -> Result<Self, Error> {
        membership_ok(&at)?;
        if !t.trace3().is_zero() {
            return Err(Error::MembershipFailed("direction has nonzero trace".into()));
        }
        if !cross(&t, &at).is_zero() {
            return Err(Error::MembershipFailed(
                "direction violates the linearized sharp constraint".into(),
            ));
        }
        Ok(TangentVec { at, t })
    }
}

/// The unit-speed geodesic through the base point in the first coordinate
/// plane, evaluated at a parameter with cos = c, sin = s: returns the point
/// and its velocity. Requires c^2 + s^2 = 1.
pub fn base_geodesic(c: &Rat, s: &Rat) -> Result<TangentVec, Error> {
    if !(c * c + s * s).is_one() {
        return Err(Error::invalid("geodesic parameter needs c^2 + s^2 = 1"));
    }
    let point = H3O::from_parts(
        [c * c, s * s, Rat::zero()],
        [Oct::zero(), Oct::zero(), Oct::real(c * s)],
    );
    let speed = H3O::from_parts(
        [rat(-2) * c * s, rat(2) * c * s, Rat::zero()],
        [Oct::zero(), Oct::zero(), Oct::real(c * c - s * s)],
    );
    TangentVec::new(point, speed)
}

/// The 26 trace-free hermitian basis elements: two diagonal differences,
/// then the 24 off-diagonal octonion units.
pub fn traceless_basis() -> Vec<H3O> {
    let mut out = Vec::with_capacity(26);
    out.push(H3O::diag(rat(1), rat(0), rat(-1)));
    out.push(H3O::diag(rat(0), rat(1), rat(-1)));
    for k in 3..27 {
        out.push(H3O::basis_element(k));
    }
    out
}

/// The quadratic form attached to a trace-free hermitian matrix, evaluated
/// on two tangent vectors at a common base point.
pub fn k_a(a: &H3O, xi: &TangentVec, eta: &TangentVec) -> Result<Rat, Error> {
    if !a.trace3().is_zero() {
        return Err(Error::invalid("K_A needs a trace-free parameter"));
    }
    if xi.at != eta.at {
        return Err(Error::invalid("K_A needs tangent vectors at one point"));
    }
    Ok(phi3(&xi.t, &eta.t, a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::op2::chart::t_span;
    use crate::scalars::rat::ratio;
    use crate::seeding::suite_rng;
    use rand::Rng;

    #[test]
    fn geodesic_starts_at_the_base_point() {
        let g = base_geodesic(&rat(1), &rat(0)).unwrap();
        assert_eq!(g.at, H3O::base_point());
        assert_eq!(g.t, t_span(&Oct::one(), &Oct::zero()));
    }

    #[test]
    fn cross_term_of_the_standard_tangent_pair() {
        let at = H3O::base_point();
        let xi = TangentVec::new(at.clone(), t_span(&Oct::one(), &Oct::zero())).unwrap();
        let eta = TangentVec::new(at, t_span(&Oct::zero(), &Oct::one())).unwrap();
        let a = H3O::basis_element(3);
        assert_eq!(k_a(&a, &xi, &eta).unwrap(), ratio(1, 3));
    }

    #[test]
    fn speed_form_is_minus_a_third_of_the_last_diagonal() {
        let params = [(rat(1), rat(0)), (ratio(3, 5), ratio(4, 5)), (ratio(5, 13), ratio(12, 13))];
        let basis = traceless_basis();
        let mut rng = suite_rng(42, "op2.geod.speed");
        for (c, s) in params {
            let g = base_geodesic(&c, &s).unwrap();
            for _ in 0..20 {
                let mut a = H3O::zero();
                for e in &basis {
                    let w = rat(rng.gen_range(-3i64..=3));
                    a = a.add(&e.scale(&w));
                }
                let r3 = a.coords()[2].clone();
                assert_eq!(k_a(&a, &g, &g).unwrap(), -r3 / rat(3));
            }
        }
    }

    #[test]
    fn bad_inputs_are_rejected() {
        assert!(base_geodesic(&rat(1), &rat(1)).is_err());
        let at = H3O::base_point();
        let xi = TangentVec::new(at, t_span(&Oct::one(), &Oct::zero())).unwrap();
        assert!(k_a(&H3O::identity(), &xi, &xi).is_err());
        assert!(TangentVec::new(H3O::identity(), H3O::basis_element(3)).is_err());
    }
}
