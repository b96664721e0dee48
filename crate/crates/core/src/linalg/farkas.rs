//! Either/or solving: an exact solution or an exact infeasibility witness.
//!
//! For a column `f` and a matrix `G`, exactly one of the following is
//! produced, and both kinds are verified with exact rational arithmetic
//! before being returned:
//!
//! * coefficients `c` with `G c = f`, or
//! * a witness `w` with `w^T G = 0` and `w^T f != 0`, proving no such `c`
//!   exists (Farkas-style duality for linear spans).

use crate::error::Error;
use crate::linalg::bareiss::rank_exact_rows;
use crate::linalg::certify::{pairing_certificate, PairingCert};
use crate::linalg::intmat::IntMat;
use crate::linalg::mat::MatR;
use crate::linalg::modular::ModMat;
use crate::scalars::rat::{parse_rat, rat_of, rat_str, Int, Rat};
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, Debug)]
pub struct FarkasWitness {
    /// Full-length weights over the rows of `G`.
    pub w: Vec<Rat>,
    /// The nonzero value `w^T f`.
    pub target_value: Rat,
}

#[derive(Serialize, Deserialize)]
struct FarkasJson {
    w: Vec<String>,
    target_value: String,
}

impl Serialize for FarkasWitness {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FarkasJson {
            w: self.w.iter().map(rat_str).collect(),
            target_value: rat_str(&self.target_value),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FarkasWitness {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = FarkasJson::deserialize(d)?;
        let w = raw
            .w
            .iter()
            .map(|s| parse_rat(s).map_err(serde::de::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        let target_value = parse_rat(&raw.target_value).map_err(serde::de::Error::custom)?;
        Ok(FarkasWitness { w, target_value })
    }
}

impl FarkasWitness {
    /// Exact validity: `w^T G = 0` and `w^T f = target_value != 0`.
    pub fn is_valid(&self, g: &MatR, f: &[Rat]) -> bool {
        if self.w.len() != g.rows() || f.len() != g.rows() || self.target_value.is_zero() {
            return false;
        }
        for j in 0..g.cols() {
            let mut acc = Rat::zero();
            for i in 0..g.rows() {
                if !self.w[i].is_zero() {
                    acc += &self.w[i] * g.at(i, j);
                }
            }
            if !acc.is_zero() {
                return false;
            }
        }
        let mut acc = Rat::zero();
        for i in 0..g.rows() {
            if !self.w[i].is_zero() {
                acc += &self.w[i] * &f[i];
            }
        }
        acc == self.target_value
    }
}

#[derive(Clone, Debug)]
pub enum SolveOutcome {
    /// `G c = f` exactly; entries align with the columns of `G`.
    Solution(Vec<Rat>),
    Witness(FarkasWitness),
}

pub fn solve_or_witness(g: &MatR, f: &[Rat], primes: &[u64]) -> Result<SolveOutcome, Error> {
    if f.len() != g.rows() {
        return Err(Error::invalid(format!(
            "target length {} does not match row count {}",
            f.len(),
            g.rows()
        )));
    }
    // Row-scale the augmented matrix so G and f see the same scaling; row
    // scaling by positive rationals changes neither solvability nor the
    // mapped-back witness identities.
    let f_col = MatR::from_fn(f.len(), 1, |i, _| f[i].clone());
    let aug = g.hstack(&f_col);
    let (aug_int, row_scales) = IntMat::from_matr_row_scaled(&aug)?;
    let g_int = aug_int.submatrix(
        &(0..g.rows()).collect::<Vec<_>>(),
        &(0..g.cols()).collect::<Vec<_>>(),
    );
    let f_int = aug_int.submatrix(&(0..g.rows()).collect::<Vec<_>>(), &[g.cols()]);

    let cert = pairing_certificate(&g_int, &f_int, primes)?;
    outcome_from_cert(&cert, g, f, &row_scales)
}

fn outcome_from_cert(
    cert: &PairingCert,
    g: &MatR,
    f: &[Rat],
    row_scales: &[Rat],
) -> Result<SolveOutcome, Error> {
    if cert.pairing_rank() == 0 {
        let d = cert
            .decompositions
            .first()
            .ok_or_else(|| Error::invalid("containment certificate missing decomposition"))?;
        let mut c = vec![Rat::zero(); g.cols()];
        for (col, s) in d.coeff_cols.iter().zip(&d.coeffs) {
            c[*col] = parse_rat(s)?;
        }
        // Exact re-verification in the original (unscaled) coordinates.
        let gc = g.matvec(&c);
        if gc.iter().zip(f).any(|(a, b)| a != b) {
            return Err(Error::ReconstructionFailed(
                "solution failed exact verification after unscaling".into(),
            ));
        }
        Ok(SolveOutcome::Solution(c))
    } else {
        let wit = &cert.witnesses[0];
        let ints = wit.entries_ints()?;
        let mut w = vec![Rat::zero(); g.rows()];
        for (row, v) in wit.support.iter().zip(&ints) {
            // Scaled rows satisfy w_int^T (S G) = 0, so weights for the
            // original rows are w_i * s_i.
            w[*row] = rat_of(v.clone()) * &row_scales[*row];
        }
        let mut target = Rat::zero();
        for i in 0..g.rows() {
            if !w[i].is_zero() {
                target += &w[i] * &f[i];
            }
        }
        let witness = FarkasWitness {
            w,
            target_value: target,
        };
        if !witness.is_valid(g, f) {
            return Err(Error::ReconstructionFailed(
                "witness failed exact verification after unscaling".into(),
            ));
        }
        Ok(SolveOutcome::Witness(witness))
    }
}

/// Exact rank of the pairing matrix `W F` for a stack of witness rows `W`
/// and evaluation columns `F`.
///
/// Strategy: an all-zero pairing matrix has rank 0; a modular rank that
/// saturates `min(rows, cols)` is already exact (mod-p ranks never exceed
/// the rational rank); otherwise fall back to exact fraction-free
/// elimination. The result is invariant under row scaling of `W` and column
/// scaling of `F` by nonzero rationals.
pub fn pairing_rank(w: &MatR, f: &MatR, primes: &[u64]) -> Result<usize, Error> {
    if w.cols() != f.rows() {
        return Err(Error::invalid(format!(
            "witness width {} does not match sample count {}",
            w.cols(),
            f.rows()
        )));
    }
    // Integer-scale both factors; scaling rows of W and columns of F is
    // rank-neutral for the product.
    let (w_int, _) = IntMat::from_matr_row_scaled(w)?;
    let (ft_int, _) = IntMat::from_matr_row_scaled(&f.transpose())?;
    let r = w.rows();
    let c = f.cols();
    let mut rows: Vec<Vec<Int>> = Vec::with_capacity(r);
    for i in 0..r {
        let wi = w_int.row(i);
        let mut row = Vec::with_capacity(c);
        for j in 0..c {
            let fj = ft_int.row(j);
            let mut acc = Int::zero();
            for k in 0..w.cols() {
                if wi[k] != 0 && fj[k] != 0 {
                    acc += Int::from(wi[k]) * Int::from(fj[k]);
                }
            }
            row.push(acc);
        }
        rows.push(row);
    }
    if rows.iter().all(|row| row.iter().all(|v| v.is_zero())) {
        return Ok(0);
    }
    let cap = r.min(c);
    for &p in primes {
        let mut mm = ModMat::zeros(p, r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                mm.set(i, j, crate::linalg::modular::big_mod(v, p));
            }
        }
        let rank = mm.rank();
        if rank == cap {
            return Ok(rank);
        }
    }
    Ok(rank_exact_rows(rows, c))
}
