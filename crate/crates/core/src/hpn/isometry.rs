//! The isometry algebra of the quaternionic structure: skew matrices
//! commuting with J_1 and J_2 (and then automatically with J_3), computed
//! as the exact kernel of an integer linear system.

use crate::error::Error;
use crate::hpn::structure::QuatStructure;
use crate::linalg::bareiss::{kernel_from_rref, rref_exact};
use crate::linalg::mat::MatR;
use crate::scalars::rat::{primitive_scale, rat, Rat};
use num_traits::Zero;

pub fn isometry_count(n: usize) -> usize {
    (n + 1) * (2 * n + 3)
}

/// Exact basis of the algebra, each element returned as a primitive
/// integer matrix (in rational containers). The dimension is checked
/// against the closed-form count.
pub fn isometry_algebra_basis(qs: &QuatStructure) -> Result<Vec<MatR>, Error> {
    let d = qs.dim();
    let unknowns = d * d;
    let idx = |a: usize, b: usize| a * d + b;

    let mut rows: Vec<Vec<Rat>> = Vec::new();
    // Skew-symmetry: M_ab + M_ba = 0 for a <= b.
    for a in 0..d {
        for b in a..d {
            let mut row = vec![Rat::zero(); unknowns];
            row[idx(a, b)] += rat(1);
            row[idx(b, a)] += rat(1);
            rows.push(row);
        }
    }
    // Commutation with the first two structure operators:
    // (M J - J M)_{ij} = sum_k M_ik J_kj - J_ik M_kj.
    for alpha in 1..=2 {
        let j = qs.j(alpha);
        for i in 0..d {
            for jj in 0..d {
                let mut row = vec![Rat::zero(); unknowns];
                for k in 0..d {
                    let jkj = j.at(k, jj);
                    if !jkj.is_zero() {
                        row[idx(i, k)] += jkj.clone();
                    }
                    let jik = j.at(i, k);
                    if !jik.is_zero() {
                        row[idx(k, jj)] -= jik.clone();
                    }
                }
                rows.push(row);
            }
        }
    }

    let (rref, _rank, pivots) = rref_exact(&MatR::from_rows(rows));
    let kernel = kernel_from_rref(&rref, &pivots);
    let expected = isometry_count(qs.n());
    if kernel.len() != expected {
        return Err(Error::UnexpectedDimension {
            what: "isometry algebra".into(),
            expected,
            got: kernel.len(),
        });
    }

    let mut out = Vec::with_capacity(kernel.len());
    for v in kernel {
        let (ints, _) = primitive_scale(&v);
        let mut m = MatR::zeros(d, d);
        for a in 0..d {
            for b in 0..d {
                m.set(a, b, Rat::from_integer(ints[idx(a, b)].clone()));
            }
        }
        // Defensive re-verification of the defining equations.
        if !m.is_skew_symmetric() {
            return Err(Error::claim("isometry kernel vector is not skew"));
        }
        for alpha in 1..=2 {
            if !m.commutator(qs.j(alpha)).is_zero() {
                return Err(Error::claim("isometry kernel vector fails to commute"));
            }
        }
        out.push(m);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hpn::structure::build_quat_structure;
    use crate::linalg::bareiss::rank_exact;
    use crate::linalg::intmat::IntMat;

    #[test]
    fn dimension_matches_closed_form_for_small_ranks() {
        for n in 1..=2 {
            let qs = build_quat_structure(n).unwrap();
            let basis = isometry_algebra_basis(&qs).unwrap();
            assert_eq!(basis.len(), isometry_count(n));
        }
    }

    #[test]
    fn elements_commute_with_the_derived_third_operator_too() {
        let n = 1;
        let qs = build_quat_structure(n).unwrap();
        for m in isometry_algebra_basis(&qs).unwrap() {
            let j3 = qs.j(3);
            assert_eq!(m.matmul(j3), j3.matmul(&m));
        }
    }

    #[test]
    fn basis_is_linearly_independent() {
        let n = 1;
        let qs = build_quat_structure(n).unwrap();
        let basis = isometry_algebra_basis(&qs).unwrap();
        let d = qs.dim();
        let mut flat = IntMat::zeros(0, d * d);
        for m in &basis {
            let mut row = Vec::with_capacity(d * d);
            for a in 0..d {
                for b in 0..d {
                    let e = m.at(a, b);
                    assert!(e.is_integer());
                    row.push(i128::try_from(e.to_integer()).unwrap());
                }
            }
            flat.push_row(&row);
        }
        assert_eq!(rank_exact(&flat.to_matr()), basis.len());
    }

    #[test]
    fn closure_under_bracket() {
        // The bracket of two basis elements is again skew and commuting,
        // hence a combination of the basis; spot-check the defining
        // equations on a few brackets.
        let n = 1;
        let qs = build_quat_structure(n).unwrap();
        let basis = isometry_algebra_basis(&qs).unwrap();
        for (a, b) in [(0usize, 1usize), (2, 5), (3, 7)] {
            let br = basis[a]
                .matmul(&basis[b])
                .add(&basis[b].matmul(&basis[a]).scale(&rat(-1)));
            assert_eq!(br.transpose(), br.scale(&rat(-1)));
            for alpha in 1..=2 {
                let j = qs.j(alpha);
                assert_eq!(br.matmul(j), j.matmul(&br));
            }
        }
    }
}
