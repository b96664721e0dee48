//! The 27-dimensional Jordan algebra of 3x3 Hermitian octonion matrices.
//!
//! An element is stored as three real diagonal entries and three octonions
//! placed as
//!
//! ```text
//!   [ r1    x3*   x2* ]
//!   [ x3    r2    x1  ]
//!   [ x2    x1*   r3  ]
//! ```
//!
//! Coordinates are ordered (r1, r2, r3, x1[0..8], x2[0..8], x3[0..8]).
//! Products go through honest 3x3 octonion matrix multiplication; the small
//! closed formulas (trace, inner product, determinant) are separate and the
//! tests pin them against the matrix route.

use crate::error::Error;
use crate::scalars::oct::Oct;
use crate::scalars::rat::{rat, Rat};
use num_traits::Zero;

pub const H3O_DIM: usize = 27;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct H3O {
    pub r: [Rat; 3],
    pub x: [Oct; 3],
}

type OctMat = [[Oct; 3]; 3];

impl H3O {
    pub fn zero() -> Self {
        H3O {
            r: [rat(0), rat(0), rat(0)],
            x: [Oct::zero(), Oct::zero(), Oct::zero()],
        }
    }

    pub fn identity() -> Self {
        H3O {
            r: [rat(1), rat(1), rat(1)],
            x: [Oct::zero(), Oct::zero(), Oct::zero()],
        }
    }

    /// The projector fixed throughout as the base point of the plane.
    pub fn base_point() -> Self {
        H3O::diag(rat(1), rat(0), rat(0))
    }

    pub fn diag(r1: Rat, r2: Rat, r3: Rat) -> Self {
        H3O {
            r: [r1, r2, r3],
            x: [Oct::zero(), Oct::zero(), Oct::zero()],
        }
    }

    pub fn from_parts(r: [Rat; 3], x: [Oct; 3]) -> Self {
        H3O { r, x }
    }

    /// The Hermitian matrix with `o` at entry (i, j) and `o*` at (j, i);
    /// for i = j this is the real diagonal entry o + o*.
    pub fn hermitian_entry(i: usize, j: usize, o: &Oct) -> Self {
        let mut out = H3O::zero();
        if i == j {
            out.r[i] = o.re() * rat(2);
            return out;
        }
        // Slot map: x1 lives at (1,2), x2 at (2,0), x3 at (1,0).
        let (slot, val) = match (i, j) {
            (1, 2) => (0, o.clone()),
            (2, 1) => (0, o.conj()),
            (2, 0) => (1, o.clone()),
            (0, 2) => (1, o.conj()),
            (1, 0) => (2, o.clone()),
            (0, 1) => (2, o.conj()),
            _ => unreachable!("indices out of range"),
        };
        out.x[slot] = val;
        out
    }

    /// Basis element `k` of the coordinate order fixed above.
    pub fn basis_element(k: usize) -> Self {
        let mut out = H3O::zero();
        if k < 3 {
            out.r[k] = rat(1);
        } else {
            out.x[(k - 3) / 8] = Oct::unit((k - 3) % 8);
        }
        out
    }

    pub fn from_coords(c: &[Rat]) -> Result<Self, Error> {
        if c.len() != H3O_DIM {
            return Err(Error::invalid(format!(
                "expected 27 coordinates, got {}",
                c.len()
            )));
        }
        let mut out = H3O::zero();
        out.r = [c[0].clone(), c[1].clone(), c[2].clone()];
        for i in 0..3 {
            let mut coords: [Rat; 8] = Default::default();
            coords.clone_from_slice(&c[3 + 8 * i..11 + 8 * i]);
            out.x[i] = Oct::from_coords(coords);
        }
        Ok(out)
    }

    pub fn coords(&self) -> Vec<Rat> {
        let mut out = Vec::with_capacity(H3O_DIM);
        out.extend(self.r.iter().cloned());
        for x in &self.x {
            out.extend(x.0.iter().cloned());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.r.iter().all(Rat::is_zero) && self.x.iter().all(Oct::is_zero)
    }

    pub fn add(&self, other: &H3O) -> Self {
        H3O {
            r: std::array::from_fn(|i| &self.r[i] + &other.r[i]),
            x: std::array::from_fn(|i| self.x[i].add(&other.x[i])),
        }
    }

    pub fn sub(&self, other: &H3O) -> Self {
        H3O {
            r: std::array::from_fn(|i| &self.r[i] - &other.r[i]),
            x: std::array::from_fn(|i| self.x[i].sub(&other.x[i])),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&rat(-1))
    }

    pub fn scale(&self, s: &Rat) -> Self {
        H3O {
            r: std::array::from_fn(|i| &self.r[i] * s),
            x: std::array::from_fn(|i| self.x[i].scale(s)),
        }
    }

    fn to_mat(&self) -> OctMat {
        let r = |i: usize| Oct::real(self.r[i].clone());
        [
            [r(0), self.x[2].conj(), self.x[1].conj()],
            [self.x[2].clone(), r(1), self.x[0].clone()],
            [self.x[1].clone(), self.x[0].conj(), r(2)],
        ]
    }

    /// Extracts the Hermitian parts of a matrix known to be Hermitian by
    /// construction; debug builds check the claim.
    fn from_mat(m: OctMat) -> Self {
        debug_assert!(m[0][0].is_real() && m[1][1].is_real() && m[2][2].is_real());
        debug_assert!(m[0][1] == m[1][0].conj());
        debug_assert!(m[0][2] == m[2][0].conj());
        debug_assert!(m[2][1] == m[1][2].conj());
        H3O {
            r: [m[0][0].re(), m[1][1].re(), m[2][2].re()],
            x: [m[1][2].clone(), m[2][0].clone(), m[1][0].clone()],
        }
    }

    /// The Jordan product (AB + BA)/2.
    pub fn jordan(&self, other: &H3O) -> Self {
        let a = self.to_mat();
        let b = other.to_mat();
        let ab = mat_product(&a, &b);
        let ba = mat_product(&b, &a);
        let half = Rat::new(1.into(), 2.into());
        let sym: OctMat =
            std::array::from_fn(|i| std::array::from_fn(|j| ab[i][j].add(&ba[i][j]).scale(&half)));
        H3O::from_mat(sym)
    }

    pub fn trace3(&self) -> Rat {
        &(&self.r[0] + &self.r[1]) + &self.r[2]
    }

    /// Inner product Tr(A o B), evaluated by the closed formula
    /// sum r_i s_i + 2 sum <x_i, y_i>.
    pub fn inner3(&self, other: &H3O) -> Rat {
        let mut acc = Rat::zero();
        for i in 0..3 {
            acc += &self.r[i] * &other.r[i];
            acc += self.x[i].inner(&other.x[i]) * rat(2);
        }
        acc
    }

    /// r1 r2 r3 + 2 <x1 x2, x3> - r1 |x1|^2 - r2 |x2|^2 - r3 |x3|^2.
    ///
    /// The middle term is the one consistent with the placement of x3 below
    /// the diagonal: it reduces to 2 Re(x1 x2 x3) whenever the three
    /// octonions associate (in particular on every real input), and it is
    /// the unique choice for which `A o sharp(A) = det3(A) I` holds on all
    /// of the algebra (pinned by the adjugate-identity tests).
    pub fn det3(&self) -> Rat {
        let mut acc = &(&self.r[0] * &self.r[1]) * &self.r[2];
        acc += self.x[0].mul(&self.x[1]).inner(&self.x[2]) * rat(2);
        for i in 0..3 {
            acc -= &self.r[i] * &self.x[i].norm2();
        }
        acc
    }

    fn sigma2(&self) -> Rat {
        let t = self.trace3();
        (&(&t * &t) - &self.inner3(self)) * Rat::new(1.into(), 2.into())
    }

    /// The adjugate-like square: A o A - Tr(A) A + sigma2(A) I. Satisfies
    /// A o sharp(A) = det3(A) I and <sharp(A), B> = 3 phi3(A, A, B).
    pub fn sharp(&self) -> Self {
        let quad = self.jordan(self);
        let lin = self.scale(&self.trace3());
        let cons = H3O::identity().scale(&self.sigma2());
        quad.sub(&lin).add(&cons)
    }
}

fn mat_product(a: &OctMat, b: &OctMat) -> OctMat {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let mut acc = Oct::zero();
            for k in 0..3 {
                acc = acc.add(&a[i][k].mul(&b[k][j]));
            }
            acc
        })
    })
}

/// Full polarization of the determinant: symmetric, trilinear, and equal to
/// det3 on the diagonal.
pub fn phi3(a: &H3O, b: &H3O, c: &H3O) -> Rat {
    let sixth = Rat::new(1.into(), 6.into());
    let mut acc = a.add(b).add(c).det3();
    acc -= a.add(b).det3();
    acc -= a.add(c).det3();
    acc -= b.add(c).det3();
    acc += a.det3();
    acc += b.det3();
    acc += c.det3();
    acc * sixth
}

/// Bilinear polarization of sharp; cross(A, A) = sharp(A) and
/// <cross(A,B), C> = 3 phi3(A,B,C).
pub fn cross(a: &H3O, b: &H3O) -> H3O {
    let half = Rat::new(1.into(), 2.into());
    a.add(b).sharp().sub(&a.sharp()).sub(&b.sharp()).scale(&half)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeding::suite_rng;
    use rand::Rng;

    pub(crate) fn random_h3o(rng: &mut impl Rng) -> H3O {
        let mut c = Vec::with_capacity(27);
        for _ in 0..27 {
            let num = rng.gen_range(-4i64..=4);
            let den = rng.gen_range(1i64..=3);
            c.push(Rat::new(num.into(), den.into()));
        }
        H3O::from_coords(&c).unwrap()
    }

    #[test]
    fn coordinates_round_trip_and_basis_is_consistent() {
        let mut rng = suite_rng(1, "op2.h3o.coords");
        for _ in 0..10 {
            let a = random_h3o(&mut rng);
            let c = a.coords();
            assert_eq!(H3O::from_coords(&c).unwrap(), a);
            let mut rebuilt = H3O::zero();
            for (k, ck) in c.iter().enumerate() {
                rebuilt = rebuilt.add(&H3O::basis_element(k).scale(ck));
            }
            assert_eq!(rebuilt, a);
        }
    }

    #[test]
    fn determinant_matches_hand_values() {
        assert_eq!(H3O::diag(rat(2), rat(3), rat(5)).det3(), rat(30));
        let e = H3O::base_point();
        assert_eq!(e.det3(), rat(0));
        assert_eq!(e.trace3(), rat(1));
        // r = (1,1,1), all x_i = 1: 1 + 2 - 3 = 0.
        let ones = H3O::from_parts([rat(1), rat(1), rat(1)], [Oct::one(), Oct::one(), Oct::one()]);
        assert_eq!(ones.det3(), rat(0));
        // r = 0, all x_i = 1: the real matrix with zero diagonal and unit
        // off-diagonal entries has determinant 2.
        let offs = H3O::from_parts([rat(0), rat(0), rat(0)], [Oct::one(), Oct::one(), Oct::one()]);
        assert_eq!(offs.det3(), rat(2));
    }

    #[test]
    fn jordan_product_is_commutative_and_fixes_idempotents() {
        let e = H3O::base_point();
        assert_eq!(e.jordan(&e), e);
        let mut rng = suite_rng(2, "op2.h3o.comm");
        for _ in 0..50 {
            let a = random_h3o(&mut rng);
            let b = random_h3o(&mut rng);
            assert_eq!(a.jordan(&b), b.jordan(&a));
        }
    }

    #[test]
    fn jordan_identity_holds() {
        let mut rng = suite_rng(3, "op2.h3o.jordan");
        for _ in 0..20 {
            let a = random_h3o(&mut rng);
            let b = random_h3o(&mut rng);
            let a2 = a.jordan(&a);
            assert_eq!(a.jordan(&b).jordan(&a2), a.jordan(&b.jordan(&a2)));
        }
    }

    #[test]
    fn inner_product_agrees_with_the_trace_form() {
        let mut rng = suite_rng(4, "op2.h3o.inner");
        for _ in 0..20 {
            let a = random_h3o(&mut rng);
            let b = random_h3o(&mut rng);
            assert_eq!(a.inner3(&b), a.jordan(&b).trace3());
        }
    }

    #[test]
    fn polarization_is_symmetric_and_restricts_to_det() {
        let mut rng = suite_rng(5, "op2.h3o.phi");
        for _ in 0..10 {
            let a = random_h3o(&mut rng);
            let b = random_h3o(&mut rng);
            let c = random_h3o(&mut rng);
            let v = phi3(&a, &b, &c);
            assert_eq!(v, phi3(&b, &a, &c));
            assert_eq!(v, phi3(&a, &c, &b));
            assert_eq!(v, phi3(&c, &b, &a));
            assert_eq!(phi3(&a, &a, &a), a.det3());
        }
    }

    #[test]
    fn sharp_satisfies_the_adjugate_identities() {
        let mut rng = suite_rng(6, "op2.h3o.sharp");
        for _ in 0..15 {
            let a = random_h3o(&mut rng);
            let b = random_h3o(&mut rng);
            let c = random_h3o(&mut rng);
            let sharp = a.sharp();
            assert_eq!(a.jordan(&sharp), H3O::identity().scale(&a.det3()));
            assert_eq!(cross(&a, &a), sharp);
            assert_eq!(cross(&a, &b).inner3(&c), phi3(&a, &b, &c) * rat(3));
        }
    }

    #[test]
    fn gram_matrix_of_the_basis_is_positive_diagonal() {
        for i in 0..27 {
            for j in 0..27 {
                let v = H3O::basis_element(i).inner3(&H3O::basis_element(j));
                if i != j {
                    assert_eq!(v, rat(0));
                } else if i < 3 {
                    assert_eq!(v, rat(1));
                } else {
                    assert_eq!(v, rat(2));
                }
            }
        }
    }
}
