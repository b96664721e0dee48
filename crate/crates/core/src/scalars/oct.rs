//! Exact octonion arithmetic over the rationals.
//!
//! The multiplication table is not hard-coded: it is generated at first use
//! by Cayley–Dickson doubling ℝ→ℂ→ℍ→𝕆 with the product
//!
//! ```text
//! (a, b)(c, d) = (ac − d*b, da + bc*)
//! ```
//!
//! and conjugation `(a, b)* = (a*, −b)`. The resulting table (all 64 signed
//! unit products) is serialized into every report and folded into the
//! convention hash, so a certificate is never read against the wrong sign
//! convention. Units are written `e0..e7` with `e0 = 1`; the quaternion
//! subalgebra is spanned by `e0..e3`.

use crate::error::Error;
use crate::linalg::mat::MatR;
use crate::scalars::rat::Rat;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;
use sha2::{Digest, Sha256};

/// Signed unit product: `e_i * e_j = sign * e_k`.
fn cd_mul_basis(dim: usize, i: usize, j: usize) -> (i8, usize) {
    debug_assert!(i < dim && j < dim);
    if dim == 1 {
        return (1, 0);
    }
    let h = dim / 2;
    match (i < h, j < h) {
        (true, true) => cd_mul_basis(h, i, j),
        (false, true) => {
            // (0,b)(c,0) = (0, b c*)
            let (s1, k) = cd_conj_basis(j);
            let (s2, m) = cd_mul_basis(h, i - h, k);
            (s1 * s2, m + h)
        }
        (true, false) => {
            // (a,0)(0,d) = (0, d a)
            let (s, m) = cd_mul_basis(h, j - h, i);
            (s, m + h)
        }
        (false, false) => {
            // (0,b)(0,d) = (−d* b, 0)
            let (s1, k) = cd_conj_basis(j - h);
            let (s2, m) = cd_mul_basis(h, k, i - h);
            (-s1 * s2, m)
        }
    }
}

fn cd_conj_basis(i: usize) -> (i8, usize) {
    if i == 0 {
        (1, 0)
    } else {
        (-1, i)
    }
}

static OCT_TABLE: Lazy<[[(i8, u8); 8]; 8]> = Lazy::new(|| {
    let mut t = [[(0i8, 0u8); 8]; 8];
    for i in 0..8 {
        for j in 0..8 {
            let (s, k) = cd_mul_basis(8, i, j);
            t[i][j] = (s, k as u8);
        }
    }
    t
});

pub fn oct_table() -> &'static [[(i8, u8); 8]; 8] {
    &OCT_TABLE
}

/// Canonical text form of the multiplication table, one product per line.
pub fn table_text() -> String {
    let t = oct_table();
    let mut out = String::new();
    for i in 0..8 {
        for j in 0..8 {
            let (s, k) = t[i][j];
            let sign = if s >= 0 { '+' } else { '-' };
            out.push_str(&format!("e{i}*e{j}={sign}e{k}\n"));
        }
    }
    out
}

pub fn table_digest() -> String {
    let mut h = Sha256::new();
    h.update(table_text().as_bytes());
    hex_string(&h.finalize())
}

pub(crate) fn hex_string(bytes: &[u8]) -> String {
    let mut s = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        s.push_str(&format!("{b:02x}"));
    }
    s
}

/// An octonion with rational coordinates in the basis `e0..e7`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Oct(pub [Rat; 8]);

impl Oct {
    pub fn zero() -> Self {
        Oct(std::array::from_fn(|_| Rat::zero()))
    }

    pub fn one() -> Self {
        Oct::unit(0)
    }

    pub fn unit(m: usize) -> Self {
        assert!(m < 8);
        let mut c = Oct::zero();
        c.0[m] = Rat::one();
        c
    }

    pub fn real(r: Rat) -> Self {
        let mut c = Oct::zero();
        c.0[0] = r;
        c
    }

    pub fn from_coords(c: [Rat; 8]) -> Self {
        Oct(c)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn is_real(&self) -> bool {
        self.0[1..].iter().all(|c| c.is_zero())
    }

    /// True when the coordinates outside the quaternion subalgebra vanish.
    pub fn is_quaternion(&self) -> bool {
        self.0[4..].iter().all(|c| c.is_zero())
    }

    pub fn re(&self) -> Rat {
        self.0[0].clone()
    }

    pub fn conj(&self) -> Self {
        let mut c = self.clone();
        for k in 1..8 {
            c.0[k] = -c.0[k].clone();
        }
        c
    }

    pub fn add(&self, other: &Oct) -> Self {
        Oct(std::array::from_fn(|k| &self.0[k] + &other.0[k]))
    }

    pub fn sub(&self, other: &Oct) -> Self {
        Oct(std::array::from_fn(|k| &self.0[k] - &other.0[k]))
    }

    pub fn neg(&self) -> Self {
        Oct(std::array::from_fn(|k| -self.0[k].clone()))
    }

    pub fn scale(&self, s: &Rat) -> Self {
        Oct(std::array::from_fn(|k| &self.0[k] * s))
    }

    pub fn mul(&self, other: &Oct) -> Self {
        let t = oct_table();
        let mut out = Oct::zero();
        for i in 0..8 {
            if self.0[i].is_zero() {
                continue;
            }
            for j in 0..8 {
                if other.0[j].is_zero() {
                    continue;
                }
                let (s, k) = t[i][j];
                let term = &self.0[i] * &other.0[j];
                if s > 0 {
                    out.0[k as usize] += term;
                } else {
                    out.0[k as usize] -= term;
                }
            }
        }
        out
    }

    /// Euclidean inner product of coordinate vectors; equals the real part
    /// of `x y*` (see `inner_product_matches_algebraic_form` below).
    pub fn inner(&self, other: &Oct) -> Rat {
        let mut acc = Rat::zero();
        for k in 0..8 {
            acc += &self.0[k] * &other.0[k];
        }
        acc
    }

    pub fn norm2(&self) -> Rat {
        self.inner(self)
    }
}

/// Associator `(ab)c − a(bc)`; identically zero on any quaternion subalgebra,
/// alternating and nonzero in general.
pub fn associator(a: &Oct, b: &Oct, c: &Oct) -> Oct {
    a.mul(b).mul(c).sub(&a.mul(&b.mul(c)))
}

/// 4×4 matrices of left and right multiplication by a quaternion `u`, in the
/// basis `e0..e3` with column-vector convention: `L(u) x = u*x`, `R(u) x = x*u`.
/// Matrix composition therefore satisfies `L(u)L(v) = L(uv)` and
/// `R(u)R(v) = R(vu)`.
pub fn quat_lr_matrices(u: &Oct) -> Result<(MatR, MatR), Error> {
    for m in 4..8 {
        if !u.0[m].is_zero() {
            return Err(Error::NotQuaternion(m));
        }
    }
    let t = oct_table();
    let mut l = MatR::zeros(4, 4);
    let mut r = MatR::zeros(4, 4);
    for k in 0..4 {
        if u.0[k].is_zero() {
            continue;
        }
        for j in 0..4 {
            // u_k e_k * e_j contributes to column j of L(u).
            let (s, idx) = t[k][j];
            let term = if s > 0 {
                u.0[k].clone()
            } else {
                -u.0[k].clone()
            };
            l.add_at(idx as usize, j, &term);
            // e_j * u_k e_k contributes to column j of R(u).
            let (s, idx) = t[j][k];
            let term = if s > 0 {
                u.0[k].clone()
            } else {
                -u.0[k].clone()
            };
            r.add_at(idx as usize, j, &term);
        }
    }
    Ok((l, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat::{rat, ratio};

    fn e(m: usize) -> Oct {
        Oct::unit(m)
    }

    #[test]
    fn unit_is_identity() {
        for m in 0..8 {
            assert_eq!(e(0).mul(&e(m)), e(m));
            assert_eq!(e(m).mul(&e(0)), e(m));
        }
    }

    #[test]
    fn imaginary_units_square_to_minus_one() {
        for m in 1..8 {
            assert_eq!(e(m).mul(&e(m)), e(0).neg());
        }
    }

    #[test]
    fn distinct_imaginary_units_anticommute() {
        for i in 1..8 {
            for j in 1..8 {
                if i != j {
                    assert_eq!(e(i).mul(&e(j)), e(j).mul(&e(i)).neg());
                }
            }
        }
    }

    // Hand-computed products from the doubling construction. These pin the
    // sign convention; any change to the table construction must fail here.
    #[test]
    fn pinned_table_entries() {
        let cases = [
            (1, 2, 1, 3),  // e1 e2 = e3
            (1, 4, 1, 5),  // e1 e4 = e5
            (2, 4, 1, 6),  // e2 e4 = e6
            (4, 3, -1, 7), // e4 e3 = -e7
            (4, 1, -1, 5), // e4 e1 = -e5
            (3, 4, 1, 7),  // e3 e4 = e7
            (2, 1, -1, 3), // e2 e1 = -e3
        ];
        let t = oct_table();
        for (i, j, s, k) in cases {
            assert_eq!(t[i][j], (s as i8, k as u8), "e{i} e{j}");
        }
    }

    #[test]
    fn quaternion_subalgebra_is_closed() {
        let t = oct_table();
        for i in 0..4 {
            for j in 0..4 {
                assert!(t[i][j].1 < 4);
            }
        }
    }

    #[test]
    fn associator_of_first_doubling_triple() {
        // (e4 e1) e2 = e7 while e4 (e1 e2) = -e7.
        let two_e7 = e(7).scale(&rat(2));
        assert_eq!(associator(&e(4), &e(1), &e(2)), two_e7);
        assert_eq!(associator(&e(1), &e(2), &e(4)), two_e7);
        // Alternating: repeating an argument kills it.
        assert!(associator(&e(4), &e(4), &e(2)).is_zero());
        assert!(associator(&e(1), &e(2), &e(2)).is_zero());
    }

    #[test]
    fn associator_vanishes_on_quaternions() {
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    assert!(associator(&e(i), &e(j), &e(k)).is_zero());
                }
            }
        }
    }

    #[test]
    fn norm_from_conjugate_product() {
        // x = 1 + 2 e5 has |x|^2 = 5.
        let mut x = Oct::one();
        x.0[5] = rat(2);
        assert_eq!(x.mul(&x.conj()), Oct::real(rat(5)));
        assert_eq!(x.conj().mul(&x), Oct::real(rat(5)));
        assert_eq!(x.norm2(), rat(5));
    }

    #[test]
    fn inner_product_matches_algebraic_form() {
        // <x,y> 1 = (x y* + y x*)/2 for a few rational octonions.
        let x = Oct::from_coords(std::array::from_fn(|k| ratio(k as i64 - 3, 2)));
        let y = Oct::from_coords(std::array::from_fn(|k| ratio(2 * k as i64 + 1, 3)));
        let lhs = x.mul(&y.conj()).add(&y.mul(&x.conj())).scale(&ratio(1, 2));
        assert_eq!(lhs, Oct::real(x.inner(&y)));
    }

    #[test]
    fn product_conjugate_reverses() {
        let x = Oct::from_coords(std::array::from_fn(|k| rat(k as i64 + 1)));
        let y = Oct::from_coords(std::array::from_fn(|k| rat((k as i64) - 5)));
        assert_eq!(x.mul(&y).conj(), y.conj().mul(&x.conj()));
    }

    #[test]
    fn norm_is_multiplicative_spot_check() {
        let x = Oct::from_coords(std::array::from_fn(|k| ratio(k as i64 - 2, 3)));
        let y = Oct::from_coords(std::array::from_fn(|k| ratio(1 - k as i64, 2)));
        assert_eq!(x.mul(&y).norm2(), x.norm2() * y.norm2());
    }

    #[test]
    fn left_right_matrices_compose_and_commute() {
        let (li, ri) = quat_lr_matrices(&e(1)).unwrap();
        let (lj, rj) = quat_lr_matrices(&e(2)).unwrap();
        let (lk, rk) = quat_lr_matrices(&e(3)).unwrap();
        // L(u)L(v) = L(uv): e1 e2 = e3.
        assert_eq!(li.matmul(&lj), lk);
        // R(u)R(v) = R(vu): e2 e1 = -e3.
        assert_eq!(ri.matmul(&rj), rk.scale(&rat(-1)));
        // Left and right multiplications always commute.
        for a in [&li, &lj, &lk] {
            for b in [&ri, &rj, &rk] {
                assert_eq!(a.matmul(b), b.matmul(a));
            }
        }
    }

    #[test]
    fn lr_matrices_transpose_to_conjugate() {
        for m in 0..4 {
            let u = e(m);
            let (l, r) = quat_lr_matrices(&u).unwrap();
            let (lc, rc) = quat_lr_matrices(&u.conj()).unwrap();
            assert_eq!(l.transpose(), lc);
            assert_eq!(r.transpose(), rc);
        }
    }

    #[test]
    fn lr_matrices_act_by_multiplication() {
        let u = Oct::from_coords([
            rat(2),
            rat(-1),
            rat(3),
            ratio(1, 2),
            rat(0),
            rat(0),
            rat(0),
            rat(0),
        ]);
        let x = Oct::from_coords([
            rat(1),
            ratio(2, 3),
            rat(0),
            rat(-2),
            rat(0),
            rat(0),
            rat(0),
            rat(0),
        ]);
        let (l, r) = quat_lr_matrices(&u).unwrap();
        let lx = l.matvec(&x.0[..4].to_vec());
        let rx = r.matvec(&x.0[..4].to_vec());
        let ux = u.mul(&x);
        let xu = x.mul(&u);
        assert_eq!(&lx[..], &ux.0[..4]);
        assert_eq!(&rx[..], &xu.0[..4]);
    }

    #[test]
    fn rejects_non_quaternions() {
        let mut u = Oct::one();
        u.0[6] = rat(1);
        match quat_lr_matrices(&u) {
            Err(Error::NotQuaternion(6)) => {}
            other => panic!("expected NotQuaternion(6), got {other:?}"),
        }
    }

    #[test]
    fn table_digest_is_stable() {
        let d1 = table_digest();
        let d2 = table_digest();
        assert_eq!(d1, d2);
        assert_eq!(d1.len(), 64);
        assert!(table_text().contains("e1*e2=+e3"));
        assert!(table_text().contains("e4*e1=-e5"));
    }
}
