//! Arithmetic modulo word-size primes.
//!
//! Modular computation is the *search* half of every certificate: ranks over
//! a prime field only ever underestimate the rational rank, so a modular
//! result is never trusted on its own. The exact half (big-integer or
//! big-rational re-verification) lives in the callers.
//!
//! Primes are 62-bit and generated deterministically: descending from
//! 2^62 - 1, keeping Miller–Rabin-certified primes (the base set is exact for
//! all 64-bit integers). Every report records the primes it used.

use crate::error::Error;
use crate::linalg::intmat::IntMat;
use crate::linalg::mat::MatR;
use crate::scalars::rat::{Int, Rat};
use num_integer::Integer;
use num_traits::ToPrimitive;
use once_cell::sync::Lazy;

pub const PRIME_BITS: u32 = 62;

pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn addmod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b; // both < p < 2^62, no overflow
    if s >= p {
        s - p
    } else {
        s
    }
}

pub fn submod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

pub fn invmod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0, "inverting zero");
    powmod(a, p - 2, p)
}

/// Deterministic Miller–Rabin, exact for all `u64` inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The first `count` primes below 2^62, in descending order.
pub fn primes_below_2_62(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut n = (1u64 << PRIME_BITS) - 1;
    while out.len() < count {
        if is_prime_u64(n) {
            out.push(n);
        }
        n -= 2;
    }
    out
}

pub static DEFAULT_PRIMES: Lazy<Vec<u64>> = Lazy::new(|| primes_below_2_62(4));

pub fn default_primes() -> &'static [u64] {
    &DEFAULT_PRIMES
}

/// Residue of a big integer, mapped into `[0, p)`.
pub fn big_mod(v: &Int, p: u64) -> u64 {
    let m = v.mod_floor(&Int::from(p));
    m.to_u64().expect("mod_floor result fits")
}

pub fn i128_mod(v: i128, p: u64) -> u64 {
    let m = v.rem_euclid(p as i128);
    m as u64
}

/// Residue of a rational; fails if the denominator vanishes mod `p`.
pub fn rat_mod(r: &Rat, p: u64) -> Result<u64, Error> {
    let den = big_mod(r.denom(), p);
    if den == 0 {
        return Err(Error::BadPrime(p));
    }
    let num = big_mod(r.numer(), p);
    Ok(mulmod(num, invmod(den, p), p))
}

/// Dense matrix over `GF(p)`.
#[derive(Clone, Debug)]
pub struct ModMat {
    pub p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl ModMat {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        ModMat {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_intmat(m: &IntMat, p: u64) -> Self {
        let mut out = ModMat::zeros(p, m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out.set(i, j, i128_mod(m.at(i, j), p));
            }
        }
        out
    }

    pub fn from_matr(m: &MatR, p: u64) -> Result<Self, Error> {
        let mut out = ModMat::zeros(p, m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out.set(i, j, rat_mod(m.at(i, j), p)?);
            }
        }
        Ok(out)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        debug_assert!(v < self.p);
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn push_row(&mut self, row: Vec<u64>) {
        assert_eq!(row.len(), self.cols);
        debug_assert!(row.iter().all(|&v| v < self.p));
        self.data.extend(row);
        self.rows += 1;
    }

    /// In-place reduction to row echelon form with deterministic pivoting
    /// (columns left to right, first row with a nonzero entry). Returns the
    /// pivot columns; the echelon rows occupy the top of the matrix.
    pub fn echelonize(&mut self) -> Vec<usize> {
        let p = self.p;
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..self.cols {
            let Some(pr) = (r..self.rows).find(|&i| self.at(i, c) != 0) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = invmod(self.at(r, c), p);
            // Normalize the pivot row.
            for j in c..self.cols {
                let v = mulmod(self.at(r, j), inv, p);
                self.set(r, j, v);
            }
            let pivot_row = self.row(r).to_vec();
            for i in (r + 1)..self.rows {
                let f = self.at(i, c);
                if f == 0 {
                    continue;
                }
                let base = i * self.cols;
                for j in c..self.cols {
                    let sub = mulmod(f, pivot_row[j], p);
                    self.data[base + j] = submod(self.data[base + j], sub, p);
                }
            }
            pivots.push(c);
            r += 1;
            if r == self.rows {
                break;
            }
        }
        pivots
    }

    /// Full reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let pivots = self.echelonize();
        let p = self.p;
        for (r, &c) in pivots.iter().enumerate().rev() {
            let pivot_row = self.row(r).to_vec();
            for i in 0..r {
                let f = self.at(i, c);
                if f == 0 {
                    continue;
                }
                let base = i * self.cols;
                for j in c..self.cols {
                    let sub = mulmod(f, pivot_row[j], p);
                    self.data[base + j] = submod(self.data[base + j], sub, p);
                }
            }
        }
        pivots
    }

    pub fn rank(mut self) -> usize {
        self.echelonize().len()
    }

    /// Kernel basis read off an RREF (one vector per free column).
    pub fn kernel_from_rref(&self, pivots: &[usize]) -> Vec<Vec<u64>> {
        let p = self.p;
        let mut is_pivot = vec![false; self.cols];
        for &c in pivots {
            is_pivot[c] = true;
        }
        let mut out = Vec::new();
        for f in 0..self.cols {
            if is_pivot[f] {
                continue;
            }
            let mut v = vec![0u64; self.cols];
            v[f] = 1;
            for (r, &c) in pivots.iter().enumerate() {
                let e = self.at(r, f);
                if e != 0 {
                    v[c] = p - e;
                }
            }
            out.push(v);
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn matvec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(self.cols, v.len());
        let p = self.p;
        (0..self.rows)
            .map(|i| {
                let mut acc: u128 = 0;
                for j in 0..self.cols {
                    acc += self.at(i, j) as u128 * v[j] as u128;
                    // Lazy reduction: 62-bit times 62-bit leaves 4 bits of
                    // headroom; reduce every term to stay safe and simple.
                    acc %= p as u128;
                }
                acc as u64
            })
            .collect()
    }
}

/// LU factorization with partial (first-nonzero) pivoting over `GF(p)`,
/// `P A = L U`, for repeated solves against the same square matrix.
pub struct ModLu {
    p: u64,
    n: usize,
    lu: Vec<u64>,
    perm: Vec<usize>,
}

impl ModLu {
    /// Fails with `Err(col)` on the first column where no pivot exists
    /// (matrix singular mod p).
    pub fn new(m: &ModMat) -> Result<Self, usize> {
        assert_eq!(m.rows(), m.cols());
        let n = m.rows();
        let p = m.p;
        let mut lu = m.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let Some(pr) = (k..n).find(|&i| lu[i * n + k] != 0) else {
                return Err(k);
            };
            if pr != k {
                for j in 0..n {
                    lu.swap(k * n + j, pr * n + j);
                }
                perm.swap(k, pr);
            }
            let inv = invmod(lu[k * n + k], p);
            for i in (k + 1)..n {
                let f = mulmod(lu[i * n + k], inv, p);
                lu[i * n + k] = f;
                if f == 0 {
                    continue;
                }
                for j in (k + 1)..n {
                    let sub = mulmod(f, lu[k * n + j], p);
                    lu[i * n + j] = submod(lu[i * n + j], sub, p);
                }
            }
        }
        Ok(ModLu { p, n, lu, perm })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Solves `A x = b` mod p.
    pub fn solve(&self, b: &[u64]) -> Vec<u64> {
        assert_eq!(b.len(), self.n);
        let (n, p) = (self.n, self.p);
        // Forward: L y = P b.
        let mut y = vec![0u64; n];
        for i in 0..n {
            let mut sub: u128 = 0;
            for j in 0..i {
                sub += self.lu[i * n + j] as u128 * y[j] as u128 % p as u128;
            }
            y[i] = submod(b[self.perm[i]], (sub % p as u128) as u64, p);
        }
        // Back: U x = y.
        let mut x = vec![0u64; n];
        for i in (0..n).rev() {
            let mut sub: u128 = 0;
            for j in (i + 1)..n {
                sub += self.lu[i * n + j] as u128 * x[j] as u128 % p as u128;
            }
            let num = submod(y[i], (sub % p as u128) as u64, p);
            x[i] = mulmod(num, invmod(self.lu[i * n + i], p), p);
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat::{rat, ratio};

    #[test]
    fn small_primality_oracle() {
        let primes = [2u64, 3, 5, 7, 97, 561_u64 + 2, 2_147_483_647];
        for p in primes {
            assert!(is_prime_u64(p), "{p}");
        }
        for c in [0u64, 1, 4, 561, 65_536, 2_147_483_649] {
            assert!(!is_prime_u64(c), "{c}");
        }
    }

    #[test]
    fn default_primes_are_62_bit_and_distinct() {
        let ps = default_primes();
        assert_eq!(ps.len(), 4);
        for &p in ps {
            assert!(is_prime_u64(p));
            assert!(p < (1 << 62) && p > (1 << 61));
        }
        let mut sorted = ps.to_vec();
        sorted.dedup();
        assert_eq!(sorted.len(), 4);
        // Regenerating is deterministic.
        assert_eq!(primes_below_2_62(4), ps);
    }

    #[test]
    fn rational_residues() {
        let p = 101u64;
        // 1/2 mod 101 = 51, since 2*51 = 102 = 1.
        assert_eq!(rat_mod(&ratio(1, 2), p).unwrap(), 51);
        assert_eq!(rat_mod(&rat(-1), p).unwrap(), 100);
        match rat_mod(&ratio(3, 101), p) {
            Err(Error::BadPrime(101)) => {}
            other => panic!("expected BadPrime, got {other:?}"),
        }
    }

    #[test]
    fn modular_rank_matches_exact_on_small_matrix() {
        let m = MatR::from_rows(vec![
            vec![rat(1), rat(2), rat(3)],
            vec![rat(4), rat(5), rat(6)],
            vec![rat(7), rat(8), rat(9)],
        ]);
        for &p in default_primes() {
            let mm = ModMat::from_matr(&m, p).unwrap();
            assert_eq!(mm.rank(), 2);
        }
    }

    #[test]
    fn rref_kernel_annihilates_mod_p() {
        let p = default_primes()[0];
        let m = IntMat::from_rows(vec![
            vec![1, 2, 3, 4],
            vec![2, 4, 6, 8],
            vec![0, 1, 1, 1],
        ]);
        let mut mm = ModMat::from_intmat(&m, p);
        let orig = ModMat::from_intmat(&m, p);
        let pivots = mm.rref();
        assert_eq!(pivots, vec![0, 1]);
        let kernel = mm.kernel_from_rref(&pivots);
        assert_eq!(kernel.len(), 2);
        for v in kernel {
            assert!(orig.matvec(&v).iter().all(|&y| y == 0));
        }
    }

    #[test]
    fn lu_solves_and_detects_singularity() {
        let p = default_primes()[1];
        let a = IntMat::from_rows(vec![vec![2, 1, 1], vec![4, -6, 0], vec![-2, 7, 2]]);
        let lu = ModLu::new(&ModMat::from_intmat(&a, p)).unwrap();
        let b = vec![5u64, p - 2, 9];
        let x = lu.solve(&b);
        let am = ModMat::from_intmat(&a, p);
        assert_eq!(am.matvec(&x), b);

        let s = IntMat::from_rows(vec![vec![1, 2], vec![2, 4]]);
        assert!(ModLu::new(&ModMat::from_intmat(&s, p)).is_err());
    }
}
