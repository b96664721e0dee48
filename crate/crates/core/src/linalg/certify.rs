//! Certified kernels and quotient-rank (pairing) certificates.
//!
//! Soundness architecture, used by every suite:
//!
//! * Modular elimination *finds* structure: candidate kernel vectors, pivot
//!   rows and columns, selected columns. None of this is trusted.
//! * Exact big-integer identities *certify* it. A kernel vector is accepted
//!   only if `M v = 0` exactly; a witness only if `w^T G = 0` exactly over
//!   every column; a decomposition only if `G c = f` exactly over every row.
//! * Counting closes the loop: rank mod p never exceeds the rational rank,
//!   so `rank_p = r` together with `cols - r` verified independent kernel
//!   vectors pins the exact rank to `r` and proves the kernel is spanned.
//!
//! An unlucky prime can only make the search fail (caught by the exact
//! checks), never certify something false; failures retry deterministically
//! on the next prime.

use crate::error::Error;
use crate::linalg::dixon::DixonSolver;
use crate::linalg::intmat::IntMat;
use crate::linalg::modular::{invmod, mulmod, primes_below_2_62, submod, ModMat};
use crate::linalg::reconstruct::{crt_combine, vec_reconstruct};
use crate::scalars::rat::{primitive_scale, Int, Rat};
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// How many primes beyond the configured list may be consumed by retries
/// before a computation gives up.
const MAX_PRIME_POOL: usize = 24;

fn prime_pool(primes: &[u64]) -> Vec<u64> {
    let mut pool = primes.to_vec();
    for p in primes_below_2_62(MAX_PRIME_POOL) {
        if !pool.contains(&p) {
            pool.push(p);
        }
    }
    pool
}

// ---------------------------------------------------------------------------
// Certified kernel
// ---------------------------------------------------------------------------

/// An exact kernel basis with a completeness certificate.
///
/// Invariants established by construction:
/// * every `basis` vector `v` satisfies `M v = 0` exactly;
/// * the vectors are independent (vector `i` is nonzero at `free_cols[i]`
///   and zero at every other free column);
/// * `basis.len() + modular_rank == cols`, which forces the exact rank of
///   `M` to equal `modular_rank` and the basis to span the kernel.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KernelCert {
    pub cols: usize,
    pub prime: u64,
    pub modular_rank: usize,
    pub pivot_cols: Vec<usize>,
    pub free_cols: Vec<usize>,
    /// Primitive integer kernel vectors, one per free column.
    pub basis: Vec<Vec<String>>,
}

impl KernelCert {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn exact_rank(&self) -> usize {
        self.modular_rank
    }

    pub fn basis_ints(&self) -> Result<Vec<Vec<Int>>, Error> {
        self.basis
            .iter()
            .map(|v| {
                v.iter()
                    .map(|s| {
                        s.parse::<Int>()
                            .map_err(|_| Error::invalid(format!("bad integer {s:?}")))
                    })
                    .collect()
            })
            .collect()
    }
}

/// Computes the exact kernel of an integer matrix with the counting
/// certificate described in the module docs.
pub fn kernel_certified(m: &IntMat, primes: &[u64]) -> Result<KernelCert, Error> {
    let pool = prime_pool(primes);
    let mut last_err = None;
    for &p in &pool {
        match kernel_attempt(m, p, &pool) {
            Ok(cert) => return Ok(cert),
            Err(e @ Error::ReconstructionFailed(_)) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap_or_else(|| Error::ReconstructionFailed("no primes available".into())))
}

fn kernel_attempt(m: &IntMat, p: u64, pool: &[u64]) -> Result<KernelCert, Error> {
    let mut mm = ModMat::from_intmat(m, p);
    let pivots = mm.rref();
    let rank = pivots.len();
    let mut is_pivot = vec![false; m.cols()];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let free: Vec<usize> = (0..m.cols()).filter(|&c| !is_pivot[c]).collect();

    // Candidate kernel vectors in canonical normalization (entry 1 at the
    // defining free column), reconstructed via CRT over as many primes with
    // matching pivot structure as it takes. One elimination per prime serves
    // every vector.
    let mut rationals: Vec<Option<Vec<Rat>>> = vec![None; free.len()];
    let mut residues: Vec<Vec<Vec<(u64, u64)>>> =
        vec![vec![Vec::new(); m.cols()]; free.len()];
    let mut pending = free.len();
    let mut first = Some(mm); // reuse the base-prime RREF
    for &q in std::iter::once(&p).chain(pool.iter().filter(|&&q| q != p)) {
        if pending == 0 {
            break;
        }
        let mq = match first.take() {
            Some(ready) => ready,
            None => {
                let mut mq = ModMat::from_intmat(m, q);
                if mq.rref() != pivots {
                    // Different pivot structure: this prime sees a different
                    // shape, it cannot contribute residues to the candidate.
                    continue;
                }
                mq
            }
        };
        for (vi, &f) in free.iter().enumerate() {
            if rationals[vi].is_some() {
                continue;
            }
            let vq = kernel_vector_mod(&mq, &pivots, f, q);
            for (c, res) in residues[vi].iter_mut().zip(&vq) {
                c.push((*res, q));
            }
            let mut combined = Vec::with_capacity(m.cols());
            let mut modulus = Int::from(1);
            for c in residues[vi].iter() {
                let (x, mo) = crt_combine(c);
                modulus = mo;
                combined.push(x);
            }
            if let Some(v) = vec_reconstruct(&combined, &modulus) {
                rationals[vi] = Some(v);
                pending -= 1;
            }
        }
    }
    if pending > 0 {
        return Err(Error::ReconstructionFailed(format!(
            "{pending} kernel vectors did not reconstruct (base prime {p})"
        )));
    }

    let mut basis: Vec<Vec<Int>> = Vec::with_capacity(free.len());
    for (vi, &f) in free.iter().enumerate() {
        let (ints, _) = primitive_scale(rationals[vi].as_ref().unwrap());
        // Exact certification: M v = 0 over the integers.
        let mv = m.matvec_big(&ints);
        if mv.iter().any(|y| !y.is_zero()) {
            return Err(Error::ReconstructionFailed(format!(
                "kernel candidate {vi} fails exact annihilation (base prime {p})"
            )));
        }
        // Structural independence: nonzero at own free column, zero at others.
        if ints[f].is_zero() || free.iter().any(|&g| g != f && !ints[g].is_zero()) {
            return Err(Error::ReconstructionFailed(format!(
                "kernel candidate {vi} lost its canonical free-column pattern"
            )));
        }
        basis.push(ints);
    }

    debug_assert_eq!(basis.len() + rank, m.cols());
    Ok(KernelCert {
        cols: m.cols(),
        prime: p,
        modular_rank: rank,
        pivot_cols: pivots,
        free_cols: free,
        basis: basis
            .iter()
            .map(|v| v.iter().map(|x| x.to_string()).collect())
            .collect(),
    })
}

fn kernel_vector_mod(rref: &ModMat, pivots: &[usize], f: usize, p: u64) -> Vec<u64> {
    let mut v = vec![0u64; rref.cols()];
    v[f] = 1;
    for (r, &c) in pivots.iter().enumerate() {
        let e = rref.at(r, f);
        if e != 0 {
            v[c] = p - e;
        }
    }
    v
}

// ---------------------------------------------------------------------------
// Column echelon over GF(p), tracking pivot rows
// ---------------------------------------------------------------------------

/// Incremental column echelon: columns are offered in a fixed order; each
/// independent column contributes a pivot row (the first row where its
/// reduction against the current echelon is nonzero).
pub struct ColEchelon {
    p: u64,
    m: usize,
    /// (pivot_row, reduced column normalized to 1 at pivot_row)
    cols: Vec<(usize, Vec<u64>)>,
}

impl ColEchelon {
    pub fn new(p: u64, m: usize) -> Self {
        ColEchelon {
            p,
            m,
            cols: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.cols.len()
    }

    pub fn pivot_rows(&self) -> Vec<usize> {
        self.cols.iter().map(|(r, _)| *r).collect()
    }

    /// Reduces `col` in place against the echelon; returns the pivot row if
    /// the column is independent (and absorbs it), `None` otherwise.
    pub fn offer(&mut self, mut col: Vec<u64>) -> Option<usize> {
        assert_eq!(col.len(), self.m);
        let p = self.p;
        for (pr, e) in &self.cols {
            let f = col[*pr];
            if f == 0 {
                continue;
            }
            for i in 0..self.m {
                if e[i] != 0 {
                    col[i] = submod(col[i], mulmod(f, e[i], p), p);
                }
            }
        }
        let pivot = (0..self.m).find(|&i| col[i] != 0)?;
        let inv = invmod(col[pivot], p);
        for v in col.iter_mut() {
            if *v != 0 {
                *v = mulmod(*v, inv, p);
            }
        }
        self.cols.push((pivot, col));
        Some(pivot)
    }
}

// ---------------------------------------------------------------------------
// Pairing certificates
// ---------------------------------------------------------------------------

/// A Farkas-style witness: integer weights over a small set of sample rows
/// that annihilate every `G` column exactly and pair nonzero with one `F`
/// column.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Witness {
    /// Index of the `F` column this witness certifies.
    pub f_col: usize,
    /// Sample-row indices carrying the weights (sorted ascending).
    pub support: Vec<usize>,
    /// Primitive integer weights, aligned with `support`.
    pub entries: Vec<String>,
}

impl Witness {
    pub fn entries_ints(&self) -> Result<Vec<Int>, Error> {
        self.entries
            .iter()
            .map(|s| {
                s.parse::<Int>()
                    .map_err(|_| Error::invalid(format!("bad integer {s:?}")))
            })
            .collect()
    }
}

/// An exact decomposition `f = G c`, certifying that an `F` column lies in
/// the span of the `G` columns (used when no witness exists).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Decomp {
    pub f_col: usize,
    /// `G` columns carrying nonzero coefficients.
    pub coeff_cols: Vec<usize>,
    /// Coefficients as canonical rational strings, aligned with `coeff_cols`.
    pub coeffs: Vec<String>,
}

/// Quotient-rank certificate for a pair of evaluation matrices sharing rows.
///
/// `witnesses.len()` is the exact rank of the exact pairing matrix
/// `W^T F`: its selected `r x r` block is diagonal with nonzero entries by
/// construction, and it only has `r` rows. Each witness also annihilates
/// all of `G` exactly, so each certified `F` column escapes the span of the
/// `G` columns over the rationals.
///
/// When `witnesses` is empty the certificate instead carries one exact
/// `Decomp` per `F` column, proving total containment (pairing rank 0).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairingCert {
    pub prime: u64,
    pub g_rank_mod_p: usize,
    pub gf_rank_mod_p: usize,
    pub g_pivot_rows: Vec<usize>,
    pub g_pivot_cols: Vec<usize>,
    pub f_selected: Vec<usize>,
    pub witnesses: Vec<Witness>,
    /// Exact diagonal of the selected pairing block (`w_i^T f_sel_i`).
    pub pairing_diag: Vec<String>,
    pub decompositions: Vec<Decomp>,
}

impl PairingCert {
    pub fn pairing_rank(&self) -> usize {
        self.witnesses.len()
    }
}

pub fn pairing_certificate(g: &IntMat, f: &IntMat, primes: &[u64]) -> Result<PairingCert, Error> {
    assert_eq!(g.rows(), f.rows(), "G and F must share sample rows");
    let pool = prime_pool(primes);
    let mut last_err = None;
    for &p in &pool {
        match pairing_attempt(g, f, p) {
            Ok(cert) => return Ok(cert),
            Err(e @ Error::ReconstructionFailed(_)) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap_or_else(|| Error::ReconstructionFailed("no primes available".into())))
}

fn pairing_attempt(g: &IntMat, f: &IntMat, p: u64) -> Result<PairingCert, Error> {
    let m = g.rows();
    let mut ech = ColEchelon::new(p, m);

    let mut g_pivot_rows = Vec::new();
    let mut g_pivot_cols = Vec::new();
    for c in 0..g.cols() {
        let col: Vec<u64> = (0..m).map(|i| crate::linalg::modular::i128_mod(g.at(i, c), p)).collect();
        if let Some(r) = ech.offer(col) {
            g_pivot_rows.push(r);
            g_pivot_cols.push(c);
        }
    }
    let g_rank = g_pivot_cols.len();

    let mut f_selected = Vec::new();
    let mut f_pivot_rows = Vec::new();
    for c in 0..f.cols() {
        let col: Vec<u64> = (0..m).map(|i| crate::linalg::modular::i128_mod(f.at(i, c), p)).collect();
        if let Some(r) = ech.offer(col) {
            f_selected.push(c);
            f_pivot_rows.push(r);
        }
    }
    let r = f_selected.len();
    let gf_rank = g_rank + r;

    if r == 0 {
        let decos = decompose_all(g, f, p, &g_pivot_rows, &g_pivot_cols)?;
        return Ok(PairingCert {
            prime: p,
            g_rank_mod_p: g_rank,
            gf_rank_mod_p: gf_rank,
            g_pivot_rows,
            g_pivot_cols,
            f_selected,
            witnesses: Vec::new(),
            pairing_diag: Vec::new(),
            decompositions: decos,
        });
    }

    // Support rows: all pivot rows, in ascending order. The square system
    // A = [G[:, C_G] | F[:, sel]] restricted to these rows is invertible
    // mod p by the echelon construction.
    let mut support: Vec<usize> = g_pivot_rows
        .iter()
        .chain(f_pivot_rows.iter())
        .copied()
        .collect();
    support.sort_unstable();
    let t = support.len();
    debug_assert_eq!(t, gf_rank);

    let mut a = IntMat::zeros(t, t);
    for (i, &row) in support.iter().enumerate() {
        for (j, &c) in g_pivot_cols.iter().enumerate() {
            a.set(i, j, g.at(row, c));
        }
        for (j, &c) in f_selected.iter().enumerate() {
            a.set(i, g_rank + j, f.at(row, c));
        }
    }
    let at = a.transpose();
    let solver = DixonSolver::new(&at, p)?;

    // Each witness lifts and re-verifies independently; the order of the
    // output is fixed by `f_selected`, so parallelism cannot change it.
    let lifted: Result<Vec<(Witness, String)>, Error> = f_selected
        .par_iter()
        .enumerate()
        .map(|(j, &fc)| {
            let mut b = vec![Int::zero(); t];
            b[g_rank + j] = Int::from(1);
            let w_rat = solver.solve_rat(&b)?;
            let (w_int, scale) = primitive_scale(&w_rat);
            // w^T G must vanish on *every* G column, not just the pivot ones.
            let wg = combine_rows(g, &support, &w_int);
            if let Some(col) = wg.iter().position(|v| !v.is_zero()) {
                return Err(Error::ReconstructionFailed(format!(
                    "witness for F column {fc} pairs nonzero with G column {col} (prime {p})"
                )));
            }
            // Exact pairing with its own F column: 1/scale before scaling, so
            // scale.numer() after; never zero.
            let wf = combine_rows(f, &support, &w_int);
            let diag = wf[fc].clone();
            if diag.is_zero() {
                return Err(Error::ReconstructionFailed(format!(
                    "witness for F column {fc} lost its nonzero pairing (prime {p})"
                )));
            }
            // Other selected columns must pair to zero exactly (diagonal block).
            for (k, &other) in f_selected.iter().enumerate() {
                if k != j && !wf[other].is_zero() {
                    return Err(Error::ReconstructionFailed(format!(
                        "witness for F column {fc} pairs nonzero with selected column {other}"
                    )));
                }
            }
            debug_assert_eq!(Rat::from_integer(diag.clone()), scale);
            let witness = Witness {
                f_col: fc,
                support: support.clone(),
                entries: w_int.iter().map(|x| x.to_string()).collect(),
            };
            Ok((witness, diag.to_string()))
        })
        .collect();
    let (witnesses, pairing_diag): (Vec<_>, Vec<_>) = lifted?.into_iter().unzip();

    Ok(PairingCert {
        prime: p,
        g_rank_mod_p: g_rank,
        gf_rank_mod_p: gf_rank,
        g_pivot_rows,
        g_pivot_cols,
        f_selected,
        witnesses,
        pairing_diag,
        decompositions: Vec::new(),
    })
}

fn decompose_all(
    g: &IntMat,
    f: &IntMat,
    p: u64,
    g_pivot_rows: &[usize],
    g_pivot_cols: &[usize],
) -> Result<Vec<Decomp>, Error> {
    let a = g.submatrix(g_pivot_rows, g_pivot_cols);
    let solver = DixonSolver::new(&a, p)?;
    let mut out = Vec::with_capacity(f.cols());
    for fc in 0..f.cols() {
        let b: Vec<Int> = g_pivot_rows.iter().map(|&i| Int::from(f.at(i, fc))).collect();
        let c = solver.solve_rat(&b)?;
        // Exact containment check over *all* rows: G c = f, denominators cleared.
        let den = crate::scalars::rat::denom_lcm(&c);
        let c_int: Vec<Int> = c.iter().map(|v| v.numer() * (&den / v.denom())).collect();
        for i in 0..g.rows() {
            let mut acc = Int::zero();
            for (k, &gc) in g_pivot_cols.iter().enumerate() {
                let a = g.at(i, gc);
                if a != 0 && !c_int[k].is_zero() {
                    acc += Int::from(a) * &c_int[k];
                }
            }
            if acc != Int::from(f.at(i, fc)) * &den {
                return Err(Error::ReconstructionFailed(format!(
                    "decomposition of F column {fc} fails exact check at row {i} (prime {p})"
                )));
            }
        }
        let (cols, coeffs): (Vec<usize>, Vec<String>) = g_pivot_cols
            .iter()
            .zip(&c)
            .filter(|(_, v)| !v.is_zero())
            .map(|(&gc, v)| (gc, crate::scalars::rat::rat_str(v)))
            .unzip();
        out.push(Decomp {
            f_col: fc,
            coeff_cols: cols,
            coeffs,
        });
    }
    Ok(out)
}

/// Exact `sum_i w_i * M[support_i, :]` over big integers.
pub fn combine_rows(m: &IntMat, support: &[usize], w: &[Int]) -> Vec<Int> {
    assert_eq!(support.len(), w.len());
    let mut out = vec![Int::zero(); m.cols()];
    for (idx, &row) in support.iter().enumerate() {
        if w[idx].is_zero() {
            continue;
        }
        let wi = &w[idx];
        for (j, val) in m.row(row).iter().enumerate() {
            if *val != 0 {
                out[j] += wi * Int::from(*val);
            }
        }
    }
    out
}
