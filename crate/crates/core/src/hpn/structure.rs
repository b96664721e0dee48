//! The quaternionic structure on the ambient space of the sphere.
//!
//! Vectors live in R^{4n+4}, read as n+1 quaternionic coordinates; each
//! block of four real coordinates is a quaternion over the basis
//! (1, i, j, k). The three complex structures are right multiplications,
//! so they commute with the left-multiplication blocks that make up the
//! symmetric operators elsewhere in this crate.

use crate::error::Error;
use crate::linalg::mat::MatR;
use crate::scalars::oct::{quat_lr_matrices, Oct};
use crate::scalars::rat::Rat;
use num_traits::Zero;

#[derive(Clone, Debug)]
pub struct QuatStructure {
    n: usize,
    dim: usize,
    j: [MatR; 3],
}

/// Places copies of a 4x4 block down the diagonal.
fn block_diagonal(block: &MatR, copies: usize) -> MatR {
    debug_assert_eq!(block.rows(), 4);
    debug_assert_eq!(block.cols(), 4);
    MatR::from_fn(4 * copies, 4 * copies, |r, c| {
        if r / 4 == c / 4 {
            block.at(r % 4, c % 4).clone()
        } else {
            Rat::zero()
        }
    })
}

impl QuatStructure {
    /// J1 and J2 are blockwise right multiplication by i and j; J3 is
    /// defined as the product J1 J2 so that the commutation relations
    /// [J_a, J_b] = 2 eps J_c hold with the cyclic sign convention.
    pub fn build(n: usize) -> Result<QuatStructure, Error> {
        if n == 0 {
            return Err(Error::invalid("need at least one quaternionic dimension"));
        }
        let blocks = n + 1;
        let (_, ri) = quat_lr_matrices(&Oct::unit(1))?;
        let (_, rj) = quat_lr_matrices(&Oct::unit(2))?;
        let j1 = block_diagonal(&ri, blocks);
        let j2 = block_diagonal(&rj, blocks);
        let j3 = j1.matmul(&j2);
        let qs = QuatStructure {
            n,
            dim: 4 * blocks,
            j: [j1, j2, j3],
        };
        qs.verify()?;
        Ok(qs)
    }

    fn verify(&self) -> Result<(), Error> {
        let id = MatR::identity(self.dim);
        let neg_id = id.scale(&-Rat::from_integer(1.into()));
        for alpha in 1..=3 {
            let j = self.j(alpha);
            if j.matmul(j) != neg_id {
                return Err(Error::claim(format!("J{alpha} squared is not -I")));
            }
            if j.transpose() != j.scale(&-Rat::from_integer(1.into())) {
                return Err(Error::claim(format!("J{alpha} is not skew-symmetric")));
            }
        }
        // Cyclic commutators: [J1,J2] = 2J3, [J2,J3] = 2J1, [J3,J1] = 2J2.
        for (a, b, c) in [(1, 2, 3), (2, 3, 1), (3, 1, 2)] {
            let comm = self.j(a).matmul(self.j(b)).sub(&self.j(b).matmul(self.j(a)));
            if comm != self.j(c).scale(&Rat::from_integer(2.into())) {
                return Err(Error::claim(format!("[J{a},J{b}] is not 2 J{c}")));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Ambient dimension 4(n+1).
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// One-based index, alpha in 1..=3.
    pub fn j(&self, alpha: usize) -> &MatR {
        &self.j[alpha - 1]
    }

    /// Integer image of J_alpha applied to an integer vector.
    pub fn j_apply_int(&self, alpha: usize, v: &[i128]) -> Vec<i128> {
        let j = self.j(alpha);
        let mut out = vec![0i128; self.dim];
        for r in 0..self.dim {
            let mut acc = 0i128;
            for c in 0..self.dim {
                let e = j.at(r, c);
                if !e.is_zero() {
                    // Entries of right-multiplication blocks are 0 or +-1.
                    let sign = if e.numer().sign() == num_bigint::Sign::Minus {
                        -1
                    } else {
                        1
                    };
                    acc += sign * v[c];
                }
            }
            out[r] = acc;
        }
        out
    }
}

pub fn build_quat_structure(n: usize) -> Result<QuatStructure, Error> {
    QuatStructure::build(n)
}
