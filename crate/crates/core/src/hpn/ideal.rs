//! Coefficient-level certificates that a bidegree-(2,2) form vanishes on
//! horizontal pairs.
//!
//! The four bilinear forms <X,P>, <J_1 X,P>, <J_2 X,P>, <J_3 X,P> cut out
//! the horizontal variety. A form lying in the ideal they generate vanishes
//! on every horizontal pair, so exhibiting multipliers
//!
//!   q = sum_b lambda_b * l_b,   lambda_b bilinear,
//!
//! upgrades "q vanished on all sampled pairs" to a sample-independent
//! statement. The multipliers are found modulo a prime and verified by
//! exact rational arithmetic on the packed coefficients; an unlucky prime
//! can only delay certification, never falsify it.

use crate::bihom::{pair_count, pair_index};
use crate::error::Error;
use crate::hpn::structure::QuatStructure;
use crate::linalg::certify::ColEchelon;
use crate::linalg::modular::{i128_mod, invmod, mulmod, ModLu, ModMat};
use crate::linalg::reconstruct::{crt_combine, vec_reconstruct};
use crate::scalars::rat::{denom_lcm, parse_rat, rat_str, Int, Rat};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

const IDEAL_MAX_PRIMES: usize = 8;

/// Sparse packed columns spanning the bidegree-(2,2) graded piece of the
/// horizontality ideal: one column per multiplier monomial `x_i p_j` and
/// generator index (0 for <X,P>, 1..3 for the structure forms).
pub struct IdealBasis {
    dim: usize,
    packed: usize,
    cols: Vec<Vec<(usize, i128)>>,
}

/// Exact multipliers certifying one target form. `support` holds column
/// labels `(beta * dim + i) * dim + j`, aligned with `multipliers`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdealWitness {
    pub target: usize,
    pub support: Vec<usize>,
    pub multipliers: Vec<String>,
}

impl IdealBasis {
    pub fn build(qs: &QuatStructure) -> Self {
        let dim = qs.dim();
        let t = pair_count(dim);
        let packed = t * t;
        let mut cols = Vec::with_capacity(4 * dim * dim);
        for beta in 0..4 {
            // Nonzero entries (k, l, v) of the form matrix: <M X, P> with
            // M = I or J_beta, i.e. the coefficient of x_l p_k.
            let entries: Vec<(usize, usize, i128)> = if beta == 0 {
                (0..dim).map(|k| (k, k, 1i128)).collect()
            } else {
                let j = qs.j(beta);
                let mut es = Vec::with_capacity(dim);
                for k in 0..dim {
                    for l in 0..dim {
                        let v = j.at(k, l);
                        if !v.is_zero() {
                            es.push((k, l, if v.numer().sign() == num_bigint::Sign::Minus { -1 } else { 1 }));
                        }
                    }
                }
                es
            };
            for i in 0..dim {
                for jj in 0..dim {
                    // x_i p_jj * sum_(k,l) M_kl x_l p_k.
                    let mut col: Vec<(usize, i128)> = Vec::with_capacity(entries.len());
                    for &(k, l, v) in &entries {
                        let a = pair_index(dim, i.min(l), i.max(l));
                        let b = pair_index(dim, jj.min(k), jj.max(k));
                        col.push((a * t + b, v));
                    }
                    col.sort_unstable_by_key(|e| e.0);
                    let mut merged: Vec<(usize, i128)> = Vec::with_capacity(col.len());
                    for (idx, v) in col {
                        match merged.last_mut() {
                            Some(last) if last.0 == idx => last.1 += v,
                            _ => merged.push((idx, v)),
                        }
                    }
                    merged.retain(|e| e.1 != 0);
                    cols.push(merged);
                }
            }
        }
        IdealBasis { dim, packed, cols }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Exact re-check of a stored witness against a target form.
    pub fn check(&self, w: &IdealWitness, target: &[Rat]) -> Result<bool, Error> {
        if target.len() != self.packed || w.support.len() != w.multipliers.len() {
            return Ok(false);
        }
        let mut acc = vec![Rat::zero(); self.packed];
        for (lbl, ms) in w.support.iter().zip(&w.multipliers) {
            if *lbl >= self.cols.len() {
                return Ok(false);
            }
            let m = parse_rat(ms)?;
            for &(idx, v) in &self.cols[*lbl] {
                acc[idx] += &m * Rat::from_integer(v.into());
            }
        }
        Ok(acc.iter().zip(target).all(|(a, b)| a == b))
    }

    /// Certifies that each target lies in the ideal, returning exact
    /// multipliers. Targets are `(label, packed coefficients)`.
    pub fn certify(
        &self,
        targets: &[(usize, Vec<Rat>)],
        primes: &[u64],
    ) -> Result<Vec<IdealWitness>, Error> {
        for (_, d) in targets {
            if d.len() != self.packed {
                return Err(Error::invalid("target form has the wrong packed length"));
            }
        }
        let pool: Vec<u64> = {
            let mut pool = primes.to_vec();
            for p in crate::linalg::modular::primes_below_2_62(IDEAL_MAX_PRIMES) {
                if !pool.contains(&p) {
                    pool.push(p);
                }
            }
            pool.truncate(IDEAL_MAX_PRIMES);
            pool
        };

        // Pivot structure from the first prime; primes that disagree are
        // skipped (their residues would not be comparable under CRT).
        let mut structure: Option<(Vec<usize>, Vec<usize>)> = None;
        // Per target, per multiplier coordinate: (residue, prime) pairs.
        let mut residues: Vec<Vec<Vec<(u64, u64)>>> = Vec::new();
        let mut done: Vec<Option<IdealWitness>> = vec![None; targets.len()];
        let mut last_candidate: Vec<Option<Vec<Rat>>> = vec![None; targets.len()];

        for &p in &pool {
            let (accepted, support) = match self.echelon_structure(p) {
                Some(s) => s,
                None => continue,
            };
            match &structure {
                Some((a, s)) => {
                    if *a != accepted || *s != support {
                        continue;
                    }
                }
                None => {
                    structure = Some((accepted.clone(), support.clone()));
                    residues = vec![vec![Vec::new(); accepted.len()]; targets.len()];
                }
            }
            let t = accepted.len();
            let mut a = ModMat::zeros(p, t, t);
            for (j, &cid) in accepted.iter().enumerate() {
                for &(idx, v) in &self.cols[cid] {
                    if let Ok(r) = support.binary_search(&idx) {
                        a.set(r, j, i128_mod(v, p));
                    }
                }
            }
            let lu = match ModLu::new(&a) {
                Ok(lu) => lu,
                Err(_) => continue,
            };

            for (ti, (label, d)) in targets.iter().enumerate() {
                if done[ti].is_some() {
                    continue;
                }
                let den = denom_lcm(d);
                let den_mod = crate::linalg::modular::big_mod(&den, p);
                if den_mod == 0 {
                    continue;
                }
                let inv_den = invmod(den_mod, p);
                let b: Vec<u64> = support
                    .iter()
                    .map(|&r| {
                        let num = crate::linalg::modular::big_mod(
                            &(d[r].numer() * (&den / d[r].denom())),
                            p,
                        );
                        mulmod(num, inv_den, p)
                    })
                    .collect();
                // Solve against den*d then fold den back in, so the CRT
                // residues track the final rational multipliers directly.
                let z = lu.solve(&b);
                for (acc, &zi) in residues[ti].iter_mut().zip(&z) {
                    acc.push((zi, p));
                }
                let mut combined = Vec::with_capacity(residues[ti].len());
                let mut modulus = Int::from(1);
                for pairs in &residues[ti] {
                    let (x, m) = crt_combine(pairs);
                    modulus = m;
                    combined.push(x);
                }
                if let Some(cand) = vec_reconstruct(&combined, &modulus) {
                    let stable = last_candidate[ti].as_deref() == Some(&cand[..]);
                    if self.verify_candidate(&accepted, &cand, d) {
                        let (support_labels, multipliers): (Vec<usize>, Vec<String>) = accepted
                            .iter()
                            .zip(&cand)
                            .filter(|(_, v)| !v.is_zero())
                            .map(|(&cid, v)| (cid, rat_str(v)))
                            .unzip();
                        done[ti] = Some(IdealWitness {
                            target: *label,
                            support: support_labels,
                            multipliers,
                        });
                    } else if stable {
                        return Err(Error::claim(format!(
                            "form {label} is not certified to vanish on horizontal pairs"
                        )));
                    }
                    last_candidate[ti] = Some(cand);
                }
            }
            if done.iter().all(|w| w.is_some()) {
                break;
            }
        }

        let mut out = Vec::with_capacity(targets.len());
        for (ti, w) in done.into_iter().enumerate() {
            match w {
                Some(w) => out.push(w),
                None => {
                    return Err(Error::ReconstructionFailed(format!(
                        "ideal multipliers for form {} did not stabilize",
                        targets[ti].0
                    )))
                }
            }
        }
        Ok(out)
    }

    fn echelon_structure(&self, p: u64) -> Option<(Vec<usize>, Vec<usize>)> {
        let mut ech = ColEchelon::new(p, self.packed);
        let mut accepted = Vec::new();
        for (cid, col) in self.cols.iter().enumerate() {
            let mut dense = vec![0u64; self.packed];
            for &(idx, v) in col {
                dense[idx] = i128_mod(v, p);
            }
            if ech.offer(dense).is_some() {
                accepted.push(cid);
            }
        }
        if accepted.is_empty() {
            return None;
        }
        let mut support = ech.pivot_rows();
        support.sort_unstable();
        Some((accepted, support))
    }

    fn verify_candidate(&self, accepted: &[usize], cand: &[Rat], d: &[Rat]) -> bool {
        let mut acc = vec![Rat::zero(); self.packed];
        for (&cid, z) in accepted.iter().zip(cand) {
            if z.is_zero() {
                continue;
            }
            for &(idx, v) in &self.cols[cid] {
                acc[idx] += z * Rat::from_integer(v.into());
            }
        }
        acc.iter().zip(d).all(|(a, b)| a == b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bihom::Bihom22;
    use crate::hpn::structure::build_quat_structure;
    use crate::linalg::mat::MatR;
    use crate::linalg::modular::default_primes;
    use crate::scalars::rat::rat;

    fn form_matrix(qs: &QuatStructure, beta: usize) -> MatR {
        if beta == 0 {
            MatR::identity(qs.dim())
        } else {
            qs.j(beta).clone()
        }
    }

    #[test]
    fn squares_and_products_of_generators_are_certified() {
        let qs = build_quat_structure(1).unwrap();
        let basis = IdealBasis::build(&qs);
        let mut targets = Vec::new();
        for (t, (a, b)) in [(0usize, 0usize), (1, 1), (0, 2), (3, 1)].iter().enumerate() {
            let q = Bihom22::from_skew_pairs(
                qs.dim(),
                &[(form_matrix(&qs, *a), form_matrix(&qs, *b))],
            )
            .unwrap();
            targets.push((t, q.packed().to_vec()));
        }
        let witnesses = basis.certify(&targets, default_primes()).unwrap();
        assert_eq!(witnesses.len(), targets.len());
        for (w, (_, d)) in witnesses.iter().zip(&targets) {
            assert!(basis.check(w, d).unwrap());
        }
    }

    #[test]
    fn perturbed_witness_fails_the_check() {
        let qs = build_quat_structure(1).unwrap();
        let basis = IdealBasis::build(&qs);
        let q = Bihom22::from_skew_pairs(qs.dim(), &[(form_matrix(&qs, 0), form_matrix(&qs, 0))])
            .unwrap();
        let target = (0usize, q.packed().to_vec());
        let mut w = basis.certify(&[target.clone()], default_primes()).unwrap().remove(0);
        assert!(basis.check(&w, &target.1).unwrap());
        let bumped = parse_rat(&w.multipliers[0]).unwrap() + rat(1);
        w.multipliers[0] = rat_str(&bumped);
        assert!(!basis.check(&w, &target.1).unwrap());
    }

    #[test]
    fn a_form_not_vanishing_on_horizontal_pairs_is_rejected() {
        let qs = build_quat_structure(1).unwrap();
        let basis = IdealBasis::build(&qs);
        // x_0^2 p_4^2 is nonzero at the horizontal pair X = e_0, P = e_4
        // (different blocks), so no multipliers can exist for it.
        let dim = qs.dim();
        let t = pair_count(dim);
        let mut d = vec![Rat::zero(); t * t];
        d[pair_index(dim, 0, 0) * t + pair_index(dim, 4, 4)] = rat(1);
        let err = basis.certify(&[(7, d)], default_primes()).unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains('7'), "unexpected error: {msg}");
    }
}
