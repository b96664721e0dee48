//! Exact points of the Cayley plane and their tangent spaces.
//!
//! Points are produced through the dense affine chart v = (a, b, 1): the
//! normalisation of the projector v v† is replaced by a rational division,
//! so every point is exact. Internally the chart vector is cleared to
//! integers v̂ = (â, b̂, q); the integer numerator N̂ = v̂ v̂† and its trace
//! D carry all the linear algebra, with X = N̂ / D the actual point.

use crate::error::Error;
use crate::linalg::bareiss::{kernel_from_rref, rref_exact};
use crate::linalg::certify::ColEchelon;
use crate::linalg::mat::MatR;
use crate::linalg::modular::{default_primes, rat_mod};
use crate::op2::h3o::{cross, H3O, H3O_DIM};
use crate::scalars::oct::Oct;
use crate::scalars::rat::{rat, Int, Rat};
use num_integer::Integer;
use num_traits::{One, Zero};

/// An exact point of the plane: `x` is the normalised projector, `nhat` the
/// integer numerator with `x = nhat / scale`, and for chart points `vhat`
/// retains the cleared chart vector used to build tangent frames.
#[derive(Clone, Debug)]
pub struct OP2Point {
    pub x: H3O,
    pub nhat: H3O,
    pub scale: Rat,
    pub vhat: Option<[Oct; 3]>,
    pub chart: Option<(Oct, Oct)>,
}

/// Exact membership equations of the plane: unit trace and vanishing sharp
/// (the latter is equivalent to the vanishing of the polarized determinant
/// against every basis element).
pub fn membership_ok(x: &H3O) -> Result<(), Error> {
    if x.trace3() != rat(1) {
        return Err(Error::MembershipFailed(format!(
            "trace is {}, not 1",
            x.trace3()
        )));
    }
    if !x.sharp().is_zero() {
        return Err(Error::MembershipFailed(
            "sharp of the point does not vanish".into(),
        ));
    }
    Ok(())
}

/// The tangent matrix T(y, z) at the base point: y and z fill the two
/// off-diagonal slots adjacent to the fixed corner.
pub fn t_span(y: &Oct, z: &Oct) -> H3O {
    H3O::from_parts([rat(0), rat(0), rat(0)], [Oct::zero(), z.clone(), y.clone()])
}

/// The base point as an exact plane point.
pub fn base_point_op2() -> OP2Point {
    let e = H3O::base_point();
    OP2Point {
        x: e.clone(),
        nhat: e,
        scale: rat(1),
        vhat: None,
        chart: None,
    }
}

fn denom_lcm_oct(a: &Oct, b: &Oct) -> Int {
    let mut l = Int::one();
    for c in a.0.iter().chain(b.0.iter()) {
        l = l.lcm(c.denom());
    }
    l
}

/// Builds the exact plane point for the chart vector (a, b, 1) and verifies
/// the membership equations before returning.
pub fn op2_chart(a: &Oct, b: &Oct) -> Result<OP2Point, Error> {
    let q = Rat::from_integer(denom_lcm_oct(a, b));
    let ah = a.scale(&q);
    let bh = b.scale(&q);
    let vhat = [ah, bh, Oct::real(q)];
    let nhat = projector_numerator(&vhat);
    let scale = nhat.trace3();
    let x = nhat.scale(&(Rat::one() / &scale));
    membership_ok(&x)?;
    Ok(OP2Point {
        x,
        nhat,
        scale,
        vhat: Some(vhat),
        chart: Some((a.clone(), b.clone())),
    })
}

/// v̂ v̂† as an element of the algebra.
fn projector_numerator(v: &[Oct; 3]) -> H3O {
    H3O::from_parts(
        [v[0].norm2(), v[1].norm2(), v[2].norm2()],
        [
            v[1].mul(&v[2].conj()),
            v[2].mul(&v[0].conj()),
            v[1].mul(&v[0].conj()),
        ],
    )
}

/// The 16 integer chart-derivative tangent vectors at a chart point:
/// T̂ = D·∂N̂ − (∂D)·N̂ for each unit direction in the two chart slots.
/// Each vector is verified traceless with N̂ × T̂ = 0 exactly, and the
/// family is checked to have rank 16.
pub fn tangent_frame(p: &OP2Point) -> Result<Vec<H3O>, Error> {
    let vhat = p
        .vhat
        .as_ref()
        .ok_or_else(|| Error::invalid("tangent frame requires a chart point"))?;
    let d = &p.scale;
    let mut frame = Vec::with_capacity(16);
    for slot in 0..2 {
        for m in 0..8 {
            let e = Oct::unit(m);
            // ∂N̂ in direction e at the chart slot: v̂ e† + e v̂†.
            let mut bhat = H3O::zero();
            for (i, vi) in vhat.iter().enumerate() {
                bhat = bhat.add(&H3O::hermitian_entry(i, slot, &vi.mul(&e.conj())));
            }
            let dd = vhat[slot].inner(&e) * rat(2);
            let that = bhat.scale(d).sub(&p.nhat.scale(&dd));
            if !that.trace3().is_zero() {
                return Err(Error::claim("chart derivative is not traceless"));
            }
            if !cross(&that, &p.nhat).is_zero() {
                return Err(Error::claim("chart derivative is not tangent"));
            }
            frame.push(that);
        }
    }
    let prime = default_primes()[0];
    let mut ech = ColEchelon::new(prime, H3O_DIM);
    let mut rank = 0usize;
    for t in &frame {
        let col: Vec<u64> = t
            .coords()
            .iter()
            .map(|c| rat_mod(c, prime))
            .collect::<Result<_, _>>()?;
        if ech.offer(col).is_some() {
            rank += 1;
        }
    }
    if rank != 16 {
        return Err(Error::UnexpectedDimension {
            what: "chart tangent frame".into(),
            expected: 16,
            got: rank,
        });
    }
    Ok(frame)
}

/// The exact tangent space at any plane point: kernel of the linearised
/// defining equations {Tr T = 0, Φ₃(A_i, T, X) = 0 for all basis A_i}.
/// Errors unless the kernel has dimension 16; every returned vector is
/// re-verified against the nonlinear tangency condition X × T = 0.
pub fn tangent_basis(p: &OP2Point) -> Result<Vec<H3O>, Error> {
    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(H3O_DIM + 1);
    let mut trace_row = vec![Rat::zero(); H3O_DIM];
    for slot in trace_row.iter_mut().take(3) {
        *slot = rat(1);
    }
    rows.push(trace_row);
    for i in 0..H3O_DIM {
        // 3 Φ₃(A_i, T, X) = <cross(A_i, X), T>, read off in coordinates
        // against the diagonal Gram form of the basis.
        let ci = cross(&H3O::basis_element(i), &p.x);
        let coords = ci.coords();
        let row: Vec<Rat> = coords
            .iter()
            .enumerate()
            .map(|(j, c)| if j < 3 { c.clone() } else { c * rat(2) })
            .collect();
        rows.push(row);
    }
    let m = MatR::from_rows(rows);
    let (rref, _, pivots) = rref_exact(&m);
    let kernel = kernel_from_rref(&rref, &pivots);
    if kernel.len() != 16 {
        return Err(Error::UnexpectedDimension {
            what: "tangent space".into(),
            expected: 16,
            got: kernel.len(),
        });
    }
    let mut out = Vec::with_capacity(16);
    for coords in kernel {
        let t = H3O::from_coords(&coords)?;
        if !t.trace3().is_zero() || !cross(&t, &p.x).is_zero() {
            return Err(Error::claim("kernel vector fails the tangency equations"));
        }
        out.push(t);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::bareiss::rank_exact;
    use crate::seeding::suite_rng;
    use rand::Rng;

    fn random_oct(rng: &mut impl Rng, den_max: i64) -> Oct {
        let den = rng.gen_range(1..=den_max);
        Oct::from_coords(std::array::from_fn(|_| {
            Rat::new(rng.gen_range(-4i64..=4).into(), den.into())
        }))
    }

    #[test]
    fn chart_matches_the_hand_expanded_points() {
        let p0 = op2_chart(&Oct::zero(), &Oct::zero()).unwrap();
        assert_eq!(p0.x, H3O::diag(rat(0), rat(0), rat(1)));

        let p1 = op2_chart(&Oct::one(), &Oct::zero()).unwrap();
        let half = Rat::new(1.into(), 2.into());
        assert_eq!(p1.x.r, [half.clone(), rat(0), half.clone()]);
        assert_eq!(p1.x.x[1], Oct::real(half));
        assert!(p1.x.x[0].is_zero() && p1.x.x[2].is_zero());
    }

    #[test]
    fn random_chart_points_satisfy_membership_exactly() {
        let mut rng = suite_rng(11, "op2.chart.random");
        for _ in 0..10 {
            let a = random_oct(&mut rng, 8);
            let b = random_oct(&mut rng, 8);
            let p = op2_chart(&a, &b).unwrap();
            assert_eq!(p.x, p.nhat.scale(&(Rat::one() / &p.scale)));
            membership_ok(&p.x).unwrap();
        }
    }

    #[test]
    fn tangent_space_at_the_base_point_is_the_expected_span() {
        let e = base_point_op2();
        let basis = tangent_basis(&e).unwrap();
        assert_eq!(basis.len(), 16);
        // T(1,0) and T(0,1) lie in the computed span.
        for t in [
            t_span(&Oct::one(), &Oct::zero()),
            t_span(&Oct::zero(), &Oct::one()),
        ] {
            let mut rows: Vec<Vec<Rat>> = basis.iter().map(|b| b.coords()).collect();
            rows.push(t.coords());
            assert_eq!(rank_exact(&MatR::from_rows(rows)), 16);
        }
    }

    #[test]
    fn tangent_dimensions_and_frames_agree_at_chart_points() {
        let mut rng = suite_rng(12, "op2.chart.tangent");
        let mut points = vec![op2_chart(&Oct::one(), &Oct::zero()).unwrap()];
        points.push(op2_chart(&random_oct(&mut rng, 4), &random_oct(&mut rng, 4)).unwrap());
        for p in &points {
            let basis = tangent_basis(p).unwrap();
            let frame = tangent_frame(p).unwrap();
            assert_eq!(basis.len(), 16);
            assert_eq!(frame.len(), 16);
            // The frame lies in the exact tangent space and spans it.
            let mut rows: Vec<Vec<Rat>> = basis.iter().map(|b| b.coords()).collect();
            rows.extend(frame.iter().map(|t| t.coords()));
            assert_eq!(rank_exact(&MatR::from_rows(rows)), 16);
        }
    }
}
