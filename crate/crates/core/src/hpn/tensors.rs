//! The quadratic tensors attached to invariant operators, their Lie
//! derivatives along the structure rotations, and the polarized form.

use crate::bihom::Bihom22;
use crate::error::Error;
use crate::hpn::structure::QuatStructure;
use crate::linalg::mat::MatR;
use crate::scalars::rat::{rat, Rat};
use num_traits::Zero;

/// Checks that S is symmetric and commutes with the structure operators
/// (commuting with two of them implies the third).
pub fn require_invariant(s: &MatR, qs: &QuatStructure) -> Result<(), Error> {
    if s.rows() != qs.dim() || s.cols() != qs.dim() {
        return Err(Error::invalid("operator has the wrong dimension"));
    }
    if s.transpose() != *s {
        return Err(Error::invalid("operator is not symmetric"));
    }
    for alpha in 1..=2 {
        let j = qs.j(alpha);
        if s.matmul(j) != j.matmul(s) {
            return Err(Error::invalid(format!(
                "operator does not commute with J{alpha}"
            )));
        }
    }
    Ok(())
}

/// Value of the tensor at (X, P): the sum over the three structure
/// operators of the squared pairings <S J_a X, P>.
pub fn ts_value(s: &MatR, qs: &QuatStructure, x: &[Rat], p: &[Rat]) -> Rat {
    let mut acc = Rat::zero();
    for alpha in 1..=3 {
        let v = dot(&s.matmul(qs.j(alpha)).matvec(x), p);
        acc += &v * &v;
    }
    acc
}

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Packed polynomial form of the tensor, usable for coefficient-level
/// identities. Requires S to be invariant.
pub fn ts_poly(s: &MatR, qs: &QuatStructure) -> Result<Bihom22, Error> {
    require_invariant(s, qs)?;
    let pairs: Vec<(MatR, MatR)> = (1..=3)
        .map(|alpha| {
            let sj = s.matmul(qs.j(alpha));
            (sj.clone(), sj)
        })
        .collect();
    Bihom22::from_skew_pairs(qs.dim(), &pairs)
}

/// Lie derivative of the tensor along the vector field generated by
/// J_beta, as a polynomial. Differentiating t -> T(e^{tJ} X, e^{tJ} P)
/// at t = 0 and moving J across the pairing gives
///
///   L T (X, P) = 2 sum_a <(S J_a J_b - J_b S J_a) X, P> <S J_a X, P>,
///
/// which for S commuting with J_b is the bracket form
/// 2 sum_a <S [J_a, J_b] X, P> <S J_a X, P>. Invariant S must yield the
/// zero polynomial; the packed coefficients make that checkable exactly.
pub fn lie_derivative_poly(s: &MatR, qs: &QuatStructure, beta: usize) -> Result<Bihom22, Error> {
    let jb = qs.j(beta);
    let pairs: Vec<(MatR, MatR)> = (1..=3)
        .map(|alpha| {
            let ja = qs.j(alpha);
            let twisted = s.matmul(&ja.matmul(jb)).add(&jb.matmul(&s.matmul(ja)).scale(&rat(-1)));
            (twisted.scale(&rat(2)), s.matmul(ja))
        })
        .collect();
    Bihom22::from_skew_pairs(qs.dim(), &pairs)
}

/// Full polarization of the tensor: symmetric in (1,2), in (3,4), and
/// under exchanging the two pairs, with
///
///   T(Y1, Y2, Y3, Y4) = 1/2 sum_a (A13 A24 + A14 A23),
///   A_ij = <S J_a Y_i, Y_j>.
pub fn polarized_ts(
    s: &MatR,
    qs: &QuatStructure,
    y1: &[Rat],
    y2: &[Rat],
    y3: &[Rat],
    y4: &[Rat],
) -> Rat {
    let mut acc = Rat::zero();
    for alpha in 1..=3 {
        let m = s.matmul(qs.j(alpha));
        let a13 = dot(&m.matvec(y1), y3);
        let a24 = dot(&m.matvec(y2), y4);
        let a14 = dot(&m.matvec(y1), y4);
        let a23 = dot(&m.matvec(y2), y3);
        acc += a13 * a24 + a14 * a23;
    }
    acc / rat(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hpn::samples::sample_horizontal;
    use crate::hpn::structure::build_quat_structure;
    use crate::hpn::vbasis::{basis_element, v_basis_indices};
    use crate::scalars::rat::ratio;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn random_vec(dim: usize, rng: &mut impl Rng) -> Vec<Rat> {
        (0..dim).map(|_| rat(rng.gen_range(-5..=5))).collect()
    }

    #[test]
    fn poly_and_direct_value_agree() {
        let qs = build_quat_structure(1).unwrap();
        let s = basis_element(&v_basis_indices(1)[3], 1).unwrap();
        let poly = ts_poly(&s, &qs).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        for _ in 0..10 {
            let x = random_vec(qs.dim(), &mut rng);
            let p = random_vec(qs.dim(), &mut rng);
            assert_eq!(poly.eval(&x, &p), ts_value(&s, &qs, &x, &p));
        }
    }

    #[test]
    fn lie_derivative_vanishes_identically_for_every_basis_element() {
        for n in 1..=2 {
            let qs = build_quat_structure(n).unwrap();
            for idx in v_basis_indices(n) {
                let s = basis_element(&idx, n).unwrap();
                for beta in 1..=3 {
                    let lie = lie_derivative_poly(&s, &qs, beta).unwrap();
                    assert!(lie.is_zero(), "nonzero Lie derivative at {idx:?}, beta={beta}");
                }
            }
        }
    }

    #[test]
    fn lie_derivative_detects_a_non_invariant_operator() {
        let qs = build_quat_structure(1).unwrap();
        let mut e11 = MatR::zeros(qs.dim(), qs.dim());
        e11.set(0, 0, rat(1));
        assert!(require_invariant(&e11, &qs).is_err());
        let lie = lie_derivative_poly(&e11, &qs, 1).unwrap();
        assert!(!lie.is_zero());
        // Cross-check one coefficient against a finite difference along the
        // actual rotation flow, evaluated symbolically at degree one.
        let x: Vec<Rat> = (0..qs.dim()).map(|k| rat((k as i64 % 5) - 2)).collect();
        let p: Vec<Rat> = (0..qs.dim()).map(|k| rat(((3 * k) as i64 % 7) - 3)).collect();
        let jx = qs.j(1).matvec(&x);
        let jp = qs.j(1).matvec(&p);
        let mut derivative = Rat::zero();
        for alpha in 1..=3 {
            let m = e11.matmul(qs.j(alpha));
            let base = dot(&m.matvec(&x), &p);
            let moved = dot(&m.matvec(&jx), &p) + dot(&m.matvec(&x), &jp);
            derivative += rat(2) * base * moved;
        }
        assert_eq!(lie.eval(&x, &p), derivative);
    }

    #[test]
    fn polarization_restricts_to_the_quadratic_tensor() {
        let qs = build_quat_structure(1).unwrap();
        let s = basis_element(&v_basis_indices(1)[4], 1).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(9);
        for _ in 0..8 {
            let x = random_vec(qs.dim(), &mut rng);
            let p = random_vec(qs.dim(), &mut rng);
            assert_eq!(polarized_ts(&s, &qs, &x, &x, &p, &p), ts_value(&s, &qs, &x, &p));
        }
    }

    #[test]
    fn polarization_has_pair_symmetries_and_first_bianchi() {
        let qs = build_quat_structure(1).unwrap();
        let s = basis_element(&v_basis_indices(1)[2], 1).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(13);
        for _ in 0..8 {
            let y: Vec<Vec<Rat>> = (0..4).map(|_| random_vec(qs.dim(), &mut rng)).collect();
            let t = |a: usize, b: usize, c: usize, d: usize| {
                polarized_ts(&s, &qs, &y[a], &y[b], &y[c], &y[d])
            };
            assert_eq!(t(0, 1, 2, 3), t(1, 0, 2, 3));
            assert_eq!(t(0, 1, 2, 3), t(0, 1, 3, 2));
            assert_eq!(t(0, 1, 2, 3), t(2, 3, 0, 1));
            let bianchi = t(0, 1, 2, 3) + t(0, 2, 3, 1) + t(0, 3, 1, 2);
            assert!(bianchi.is_zero());
        }
    }

    #[test]
    fn tensor_is_constant_along_rational_great_circles() {
        let n = 1;
        let qs = build_quat_structure(n).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(21);
        let samples = sample_horizontal(&qs, 5, &mut rng).unwrap();
        let pythagorean = [(ratio(3, 5), ratio(4, 5)), (ratio(5, 13), ratio(12, 13))];
        for idx in v_basis_indices(n) {
            let s = basis_element(&idx, n).unwrap();
            for smp in &samples {
                let base = ts_value(&s, &qs, smp.x(), smp.p());
                for (c, sn) in &pythagorean {
                    let g: Vec<Rat> = smp
                        .x()
                        .iter()
                        .zip(smp.p())
                        .map(|(xe, pe)| c * xe + sn * pe)
                        .collect();
                    let gdot: Vec<Rat> = smp
                        .x()
                        .iter()
                        .zip(smp.p())
                        .map(|(xe, pe)| c * pe - sn * xe)
                        .collect();
                    assert_eq!(ts_value(&s, &qs, &g, &gdot), base, "{idx:?}");
                }
            }
        }
    }
}
