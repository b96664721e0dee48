//! Chinese remaindering and rational reconstruction.
//!
//! Both are candidate-producing steps: a reconstructed rational is only a
//! guess until the caller has re-checked it exactly against the defining
//! equations. `rat_reconstruct` uses the standard half-extended Euclidean
//! scheme with the symmetric bound `|num|, |den| <= sqrt(m/2)`, under which
//! the reconstructed fraction is unique when it exists.

use crate::scalars::rat::{Int, Rat};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Combines residues `x = r_i (mod p_i)` for pairwise coprime moduli into
/// `(x mod M, M)` with `M` the product of the moduli and `x` in `[0, M)`.
pub fn crt_combine(residues: &[(u64, u64)]) -> (Int, Int) {
    let mut x = Int::zero();
    let mut m = Int::one();
    for &(r, p) in residues {
        let p_big = Int::from(p);
        // x' = x + m * t where t = (r - x) / m (mod p).
        let m_inv = mod_inverse_big(&m, &p_big).expect("moduli must be coprime");
        let diff = (Int::from(r) - &x).mod_floor(&p_big);
        let t = (diff * m_inv).mod_floor(&p_big);
        x += &m * t;
        m *= p_big;
    }
    (x, m)
}

fn mod_inverse_big(a: &Int, m: &Int) -> Option<Int> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

fn within_bound(v: &Int, m: &Int) -> bool {
    // |v| <= sqrt(m/2), checked as 2 v^2 <= m.
    (v * v) * 2 <= *m
}

/// Reconstructs `n/d` from `a mod m` with `|n|, d <= sqrt(m/2)` and
/// `gcd(d, m) = 1`, if such a fraction exists.
pub fn rat_reconstruct(a: &Int, m: &Int) -> Option<Rat> {
    let a = a.mod_floor(m);
    // Invariant: r1 = t1 * a (mod m).
    let (mut r0, mut r1) = (m.clone(), a);
    let (mut t0, mut t1) = (Int::zero(), Int::one());
    while !within_bound(&r1, m) {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || !within_bound(&t1, m) {
        return None;
    }
    let (num, den) = if t1.is_negative() {
        (-r1, -t1)
    } else {
        (r1, t1)
    };
    if !num.gcd(&den).is_one() || !den.gcd(m).is_one() {
        return None;
    }
    Some(Rat::new(num, den))
}

/// Entry-wise reconstruction of a vector of residues, with the usual common
/// denominator speedup: once one entry has been reconstructed, later entries
/// are first tried as `integer / known_denominator`, which succeeds for every
/// remaining entry when the vector has a single modest denominator.
pub fn vec_reconstruct(residues: &[Int], m: &Int) -> Option<Vec<Rat>> {
    let mut den = Int::one();
    let half: Int = m / 2;
    let mut out = Vec::with_capacity(residues.len());
    for a in residues {
        if within_bound(&den, m) {
            let scaled = (a * &den).mod_floor(m);
            let lifted = if scaled > half {
                &scaled - m
            } else {
                scaled.clone()
            };
            if within_bound(&lifted, m) {
                out.push(Rat::new(lifted, den.clone()));
                continue;
            }
        }
        let r = rat_reconstruct(a, m)?;
        den = den.lcm(r.denom());
        out.push(r);
    }
    Some(out)
}
