//! Derivations of the 27-dimensional Jordan algebra.
//!
//! The basis is extracted from commutators of Jordan left-multiplication
//! operators. Dimension 52 is certified from both sides: the returned
//! derivations are exactly independent (lower bound), and the modular
//! kernel of the full Leibniz constraint system has dimension 52 at a
//! recorded prime (upper bound, since reduction cannot shrink a rational
//! kernel).

use crate::error::Error;
use crate::linalg::bareiss::rank_exact_rows;
use crate::linalg::certify::ColEchelon;
use crate::linalg::modular::{default_primes, i128_mod};
use crate::op2::h3o::{H3O, H3O_DIM};
use crate::scalars::rat::{Int, Rat};
use num_traits::{Signed, Zero};
use once_cell::sync::Lazy;

const D: usize = H3O_DIM;

/// Structure constants: `JTAB[r][s]` holds the 27 coordinates of
/// 2 (A_r o A_s), which are integers.
static JTAB: Lazy<Vec<Vec<[i64; 27]>>> = Lazy::new(|| {
    let basis: Vec<H3O> = (0..D).map(H3O::basis_element).collect();
    let two = crate::scalars::rat::rat(2);
    let mut tab = vec![vec![[0i64; 27]; D]; D];
    for r in 0..D {
        for s in r..D {
            let prod = basis[r].jordan(&basis[s]).scale(&two);
            let coords = prod.coords();
            let mut row = [0i64; 27];
            for (k, c) in coords.iter().enumerate() {
                assert!(c.is_integer(), "doubled structure constants are integers");
                row[k] = int_to_i64(&c.to_integer());
            }
            tab[r][s] = row;
            tab[s][r] = row;
        }
    }
    tab
});

fn int_to_i64(v: &Int) -> i64 {
    let mag: u64 = v.abs().try_into().expect("structure constant fits i64");
    if v.is_negative() {
        -(mag as i64)
    } else {
        mag as i64
    }
}

/// A derivation as an integer 27x27 matrix acting on coordinates.
#[derive(Clone, Debug)]
pub struct Derivation {
    m: Vec<i128>,
}

impl Derivation {
    pub fn entries(&self) -> &[i128] {
        &self.m
    }

    pub fn apply_int(&self, v: &[i128]) -> Vec<i128> {
        let mut out = vec![0i128; D];
        for (t, slot) in out.iter_mut().enumerate() {
            let row = &self.m[t * D..(t + 1) * D];
            *slot = row.iter().zip(v).map(|(a, b)| a * b).sum();
        }
        out
    }

    pub fn apply(&self, a: &H3O) -> H3O {
        let coords = a.coords();
        let mut out = vec![Rat::zero(); D];
        for (t, slot) in out.iter_mut().enumerate() {
            let row = &self.m[t * D..(t + 1) * D];
            for (c, v) in row.iter().zip(&coords) {
                if *c != 0 {
                    *slot += v * Rat::from_integer((*c).into());
                }
            }
        }
        H3O::from_coords(&out).expect("27 coordinates")
    }
}

/// Exact Leibniz check of one candidate matrix over all basis pairs.
fn is_derivation(m: &[i128]) -> bool {
    let tab = &*JTAB;
    for r in 0..D {
        for s in r..D {
            let prod = &tab[r][s];
            for t in 0..D {
                let mut lhs = 0i128;
                for c in 0..D {
                    lhs += m[t * D + c] * prod[c] as i128;
                }
                let mut rhs = 0i128;
                for k in 0..D {
                    rhs += m[k * D + r] * tab[k][s][t] as i128;
                    rhs += m[k * D + s] * tab[k][r][t] as i128;
                }
                if lhs != rhs {
                    return false;
                }
            }
        }
    }
    true
}

fn trace_and_skew_ok(m: &[i128]) -> bool {
    let gram = |i: usize| if i < 3 { 1i128 } else { 2 };
    for c in 0..D {
        if (0..3).map(|t| m[t * D + c]).sum::<i128>() != 0 {
            return false;
        }
    }
    for t in 0..D {
        for c in 0..D {
            if gram(t) * m[t * D + c] != -(gram(c) * m[c * D + t]) {
                return false;
            }
        }
    }
    true
}

/// Modular upper bound for the dimension of the full derivation space:
/// offers the Leibniz constraint rows at `p` until the kernel reaches
/// `target`, returning the final kernel dimension bound.
fn leibniz_kernel_bound(p: u64, target: usize) -> usize {
    let tab = &*JTAB;
    let mut ech = ColEchelon::new(p, D * D);
    let mut rank = 0usize;
    for r in 0..D {
        for s in r..D {
            for t in 0..D {
                let mut row = vec![0i128; D * D];
                for c in 0..D {
                    row[t * D + c] += tab[r][s][c] as i128;
                }
                for k in 0..D {
                    row[k * D + r] -= tab[k][s][t] as i128;
                    row[k * D + s] -= tab[k][r][t] as i128;
                }
                let col: Vec<u64> = row.iter().map(|&v| i128_mod(v, p)).collect();
                if ech.offer(col).is_some() {
                    rank += 1;
                }
            }
            if D * D - rank == target {
                return target;
            }
        }
    }
    D * D - rank
}

/// The full derivation algebra: 52 exactly independent, exactly verified
/// derivations spanning the commutator space, with the dimension certified
/// from both sides.
pub fn derivation_basis() -> Result<Vec<Derivation>, Error> {
    let tab = &*JTAB;
    let prime = default_primes()[0];

    // 2 L_i as integer matrices: column s of 2L_i is 2 (A_i o A_s).
    let lmul: Vec<Vec<i128>> = (0..D)
        .map(|i| {
            let mut m = vec![0i128; D * D];
            for s in 0..D {
                for t in 0..D {
                    m[t * D + s] = tab[i][s][t] as i128;
                }
            }
            m
        })
        .collect();

    let mut ech = ColEchelon::new(prime, D * D);
    let mut picked: Vec<Vec<i128>> = Vec::new();
    for i in 0..D {
        for j in (i + 1)..D {
            let mut comm = vec![0i128; D * D];
            for t in 0..D {
                for k in 0..D {
                    let a = lmul[i][t * D + k];
                    let b = lmul[j][t * D + k];
                    if a == 0 && b == 0 {
                        continue;
                    }
                    for c in 0..D {
                        comm[t * D + c] += a * lmul[j][k * D + c] - b * lmul[i][k * D + c];
                    }
                }
            }
            let col: Vec<u64> = comm.iter().map(|&v| i128_mod(v, prime)).collect();
            if ech.offer(col).is_some() {
                picked.push(comm);
            }
        }
    }

    if picked.len() != 52 {
        return Err(Error::UnexpectedDimension {
            what: "derivation span (commutators)".into(),
            expected: 52,
            got: picked.len(),
        });
    }
    let rows: Vec<Vec<Int>> = picked
        .iter()
        .map(|m| m.iter().map(|&v| Int::from(v)).collect())
        .collect();
    if rank_exact_rows(rows, D * D) != 52 {
        return Err(Error::claim("picked commutators are not independent"));
    }
    for m in &picked {
        if !is_derivation(m) {
            return Err(Error::claim("commutator fails the Leibniz identity"));
        }
        if !trace_and_skew_ok(m) {
            return Err(Error::claim(
                "derivation is not trace-free and inner-product skew",
            ));
        }
    }

    let bound = leibniz_kernel_bound(prime, 52);
    if bound != 52 {
        return Err(Error::UnexpectedDimension {
            what: "derivation space (Leibniz kernel bound)".into(),
            expected: 52,
            got: bound,
        });
    }

    Ok(picked.into_iter().map(|m| Derivation { m }).collect())
}
