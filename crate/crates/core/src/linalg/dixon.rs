//! p-adic (Dixon) lifting for square integer systems.
//!
//! Solves `A x = b` over the rationals by lifting modulo one 62-bit prime:
//! one LU factorization of `A mod p`, then one back-substitution per lifting
//! step, rational reconstruction attempts on a doubling schedule, and an
//! exact big-integer verification of any reconstructed candidate before it
//! is returned. A returned solution is therefore correct unconditionally;
//! the prime only affects whether and how fast one is found.

use crate::error::Error;
use crate::linalg::intmat::{dot_big, IntMat};
use crate::linalg::modular::{big_mod, ModLu, ModMat};
use crate::linalg::reconstruct::vec_reconstruct;
use crate::scalars::rat::{denom_lcm, Int, Rat};
use num_traits::{One, Zero};

pub struct DixonSolver<'a> {
    a: &'a IntMat,
    lu: ModLu,
    p: u64,
    /// Split columns for the fast exact residual update; empty when entry
    /// sizes force the big-integer path.
    fast: bool,
    max_iters: usize,
}

impl<'a> DixonSolver<'a> {
    /// Fails when `A` is singular modulo `p`; the caller may retry with a
    /// different prime (if `A` is invertible over the rationals, only
    /// finitely many primes are unlucky).
    pub fn new(a: &'a IntMat, p: u64) -> Result<Self, Error> {
        assert_eq!(a.rows(), a.cols(), "square systems only");
        let n = a.rows();
        let lu = ModLu::new(&ModMat::from_intmat(a, p)).map_err(|col| {
            Error::ReconstructionFailed(format!("matrix singular mod {p} at column {col}"))
        })?;
        let maxa = a.max_abs().max(1);
        // Fast path condition: sum of n products |a| * 2^31 must fit i128.
        let fast = n > 0 && (maxa as f64) * 2f64.powi(31) * (n as f64) < 2f64.powi(125);
        // Cramer-style bound on solution height: numerator and denominator
        // are at most n^(n/2) * maxa^n (times the height of b, handled by
        // the extra slack); the modulus must exceed twice their product.
        let h = (maxa as f64).log2();
        let bits = (n as f64) * (0.5 * (n.max(2) as f64).log2() + h);
        let max_iters = (2.0 * bits / 62.0).ceil() as usize + 64;
        Ok(DixonSolver {
            a,
            lu,
            p,
            fast,
            max_iters,
        })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// Exact rational solution of `A x = b`.
    pub fn solve_rat(&self, b: &[Int]) -> Result<Vec<Rat>, Error> {
        let n = self.a.rows();
        assert_eq!(b.len(), n);
        let p = self.p;
        let p_big = Int::from(p);

        let mut r: Vec<Int> = b.to_vec();
        let mut sol: Vec<Int> = vec![Int::zero(); n];
        let mut pk = Int::one();
        let mut next_try = 8usize;

        for iter in 0..self.max_iters {
            if r.iter().all(|v| v.is_zero()) {
                // Integer solution: sol is exact.
                let xs: Vec<Rat> = sol.iter().map(|v| Rat::from_integer(v.clone())).collect();
                self.verify(&xs, b)?;
                return Ok(xs);
            }
            let rm: Vec<u64> = r.iter().map(|v| big_mod(v, p)).collect();
            let d = self.lu.solve(&rm);
            for i in 0..n {
                if d[i] != 0 {
                    sol[i] += &pk * Int::from(d[i]);
                }
            }
            self.residual_step(&mut r, &d);
            pk *= &p_big;

            if iter + 1 >= next_try || iter + 1 == self.max_iters {
                next_try = next_try.saturating_mul(2);
                if let Some(xs) = vec_reconstruct(&sol, &pk) {
                    if self.verify(&xs, b).is_ok() {
                        return Ok(xs);
                    }
                }
            }
        }
        Err(Error::ReconstructionFailed(format!(
            "no solution reconstructed after {} lifting steps mod {p}",
            self.max_iters
        )))
    }

    /// r <- (r - A d) / p, exactly.
    fn residual_step(&self, r: &mut [Int], d: &[u64]) {
        let n = self.a.rows();
        let p_big = Int::from(self.p);
        if self.fast {
            let lo: Vec<i128> = d.iter().map(|&x| (x & 0x7FFF_FFFF) as i128).collect();
            let hi: Vec<i128> = d.iter().map(|&x| (x >> 31) as i128).collect();
            for i in 0..n {
                let row = self.a.row(i);
                let mut acc_lo: i128 = 0;
                let mut acc_hi: i128 = 0;
                for j in 0..n {
                    let a = row[j];
                    if a != 0 {
                        acc_lo += a * lo[j];
                        acc_hi += a * hi[j];
                    }
                }
                let prod = Int::from(acc_lo) + (Int::from(acc_hi) << 31);
                let num = &r[i] - prod;
                r[i] = exact_div_big(num, &p_big);
            }
        } else {
            let d_big: Vec<Int> = d.iter().map(|&x| Int::from(x)).collect();
            for i in 0..n {
                let prod = dot_big(self.a.row(i), &d_big);
                let num = &r[i] - prod;
                r[i] = exact_div_big(num, &p_big);
            }
        }
    }

    /// Exact check `A x = b` with denominators cleared.
    fn verify(&self, x: &[Rat], b: &[Int]) -> Result<(), Error> {
        let den = denom_lcm(x);
        let xs: Vec<Int> = x.iter().map(|v| v.numer() * (&den / v.denom())).collect();
        let ax = self.a.matvec_big(&xs);
        for i in 0..b.len() {
            if ax[i] != &b[i] * &den {
                return Err(Error::ReconstructionFailed(format!(
                    "candidate fails exact check at row {i}"
                )));
            }
        }
        Ok(())
    }
}

fn exact_div_big(v: Int, p: &Int) -> Int {
    debug_assert!((&v % p).is_zero(), "residual not divisible by p");
    v / p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::modular::default_primes;
    use crate::scalars::rat::{int, rat, ratio};

    #[test]
    fn solves_hand_checked_system() {
        // [3 1; 1 2] x = [1, 1]  =>  x = (1/5, 2/5).
        let a = IntMat::from_rows(vec![vec![3, 1], vec![1, 2]]);
        let s = DixonSolver::new(&a, default_primes()[0]).unwrap();
        let x = s.solve_rat(&[int(1), int(1)]).unwrap();
        assert_eq!(x, vec![ratio(1, 5), ratio(2, 5)]);
    }

    #[test]
    fn solves_integer_solution_early() {
        let a = IntMat::from_rows(vec![vec![1, 0, 0], vec![5, 1, 0], vec![0, -2, 1]]);
        let s = DixonSolver::new(&a, default_primes()[0]).unwrap();
        let b = [int(7), int(40), int(-3)];
        let x = s.solve_rat(&b).unwrap();
        assert_eq!(x, vec![rat(7), rat(5), rat(7)]);
    }

    #[test]
    fn solves_scaled_hilbert_system() {
        // Hilbert 6x6 scaled by lcm(1..11) to integers: badly conditioned,
        // exercises many lifting steps and large reconstructed denominators.
        let n = 6usize;
        let lcm = 27720i128; // lcm(1..=11), so every entry below is integral
        let a = IntMat::from_rows(
            (0..n)
                .map(|i| (0..n).map(|j| lcm / ((i + j + 1) as i128)).collect())
                .collect(),
        );
        let s = DixonSolver::new(&a, default_primes()[0]).unwrap();
        // b = A * (1, 1, ..., 1): solution must come back exactly.
        let ones = vec![int(1); n];
        let b = a.matvec_big(&ones);
        let x = s.solve_rat(&b).unwrap();
        assert!(x.iter().all(|v| v == &rat(1)));
        // A second, non-trivial right-hand side against the same LU.
        let e0: Vec<Int> = (0..n).map(|i| if i == 0 { int(1) } else { int(0) }).collect();
        let x = s.solve_rat(&e0).unwrap();
        let den = denom_lcm(&x);
        let xs: Vec<Int> = x.iter().map(|v| v.numer() * (&den / v.denom())).collect();
        assert_eq!(a.matvec_big(&xs), e0.iter().map(|v| v * &den).collect::<Vec<_>>());
        assert!(!x[0].is_zero());
    }

    #[test]
    fn reports_singularity() {
        let a = IntMat::from_rows(vec![vec![1, 2], vec![2, 4]]);
        assert!(DixonSolver::new(&a, default_primes()[0]).is_err());
    }

    #[test]
    fn big_entry_path_falls_back_cleanly() {
        // Entries near 2^100 force the big-integer residual path.
        let huge = 1i128 << 100;
        let a = IntMat::from_rows(vec![vec![huge, 1], vec![0, huge]]);
        let s = DixonSolver::new(&a, default_primes()[0]).unwrap();
        assert!(!s.fast);
        let b = [int(1), int(2)];
        let x = s.solve_rat(&b).unwrap();
        let two = Int::from(2);
        let h = Int::from(huge);
        assert_eq!(x[1], Rat::new(two, h.clone()));
        assert_eq!(x[0], (Rat::one() - &x[1]) / Rat::from_integer(h));
    }
}
