//! Polynomials on pairs of vectors, homogeneous of degree 2 in each factor.
//!
//! A form is stored by its coefficients on the monomials
//! `X_i X_j P_k P_l` with `i <= j` and `k <= l`; every ordered contribution
//! is folded into that packed bucket at build time, so evaluation never
//! multiplies by symmetry factors.

use crate::error::Error;
use crate::linalg::mat::MatR;
use crate::scalars::rat::Rat;
use num_traits::Zero;

/// Packed index of the unordered pair `(i, j)`, `i <= j`, among `dim` slots.
pub fn pair_index(dim: usize, i: usize, j: usize) -> usize {
    debug_assert!(i <= j && j < dim);
    i * dim - i * (i + 1) / 2 + j
}

/// Number of unordered pairs on `dim` slots.
pub fn pair_count(dim: usize) -> usize {
    dim * (dim + 1) / 2
}

/// Enumerates unordered pairs in the order matching [`pair_index`].
pub fn pairs(dim: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..dim).flat_map(move |i| (i..dim).map(move |j| (i, j)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bihom22 {
    dim: usize,
    /// Row-major over (X-pair, P-pair) packed indices.
    coeffs: Vec<Rat>,
}

impl Bihom22 {
    pub fn zero(dim: usize) -> Self {
        let t = pair_count(dim);
        Bihom22 {
            dim,
            coeffs: vec![Rat::zero(); t * t],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Raw packed coefficients, row-major over (X-pair, P-pair). The layout
    /// is the contract for coefficient-level linear algebra on forms.
    pub fn packed(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, xi: usize, xj: usize, pk: usize, pl: usize) -> &Rat {
        let t = pair_count(self.dim);
        let a = pair_index(self.dim, xi.min(xj), xi.max(xj));
        let b = pair_index(self.dim, pk.min(pl), pk.max(pl));
        &self.coeffs[a * t + b]
    }

    fn add_monomial(&mut self, xi: usize, xj: usize, pk: usize, pl: usize, v: Rat) {
        if v.is_zero() {
            return;
        }
        let t = pair_count(self.dim);
        let a = pair_index(self.dim, xi.min(xj), xi.max(xj));
        let b = pair_index(self.dim, pk.min(pl), pk.max(pl));
        self.coeffs[a * t + b] += v;
    }

    /// Builds `sum over pairs of <M X, P> <M' X, P>` as a packed form.
    ///
    /// Only nonzero matrix entries contribute, so sparse factors cost
    /// `O(nnz(M) * nnz(M'))` per pair.
    pub fn from_skew_pairs(dim: usize, pairs: &[(MatR, MatR)]) -> Result<Self, Error> {
        let mut out = Bihom22::zero(dim);
        for (m, mp) in pairs {
            if m.rows() != dim || m.cols() != dim || mp.rows() != dim || mp.cols() != dim {
                return Err(Error::invalid(format!(
                    "factor shape {}x{} / {}x{} does not match dimension {}",
                    m.rows(),
                    m.cols(),
                    mp.rows(),
                    mp.cols(),
                    dim
                )));
            }
            let m_entries = nonzero_entries(m);
            let mp_entries = nonzero_entries(mp);
            for &(k, i, ref a) in &m_entries {
                for &(l, j, ref b) in &mp_entries {
                    out.add_monomial(i, j, k, l, a * b);
                }
            }
        }
        Ok(out)
    }

    pub fn eval(&self, x: &[Rat], p: &[Rat]) -> Rat {
        assert_eq!(x.len(), self.dim);
        assert_eq!(p.len(), self.dim);
        let t = pair_count(self.dim);
        let xprods: Vec<Rat> = pairs(self.dim).map(|(i, j)| &x[i] * &x[j]).collect();
        let pprods: Vec<Rat> = pairs(self.dim).map(|(k, l)| &p[k] * &p[l]).collect();
        let mut acc = Rat::zero();
        for a in 0..t {
            if xprods[a].is_zero() {
                continue;
            }
            let row = &self.coeffs[a * t..(a + 1) * t];
            let mut inner = Rat::zero();
            for (c, pp) in row.iter().zip(&pprods) {
                if !c.is_zero() && !pp.is_zero() {
                    inner += c * pp;
                }
            }
            acc += &xprods[a] * inner;
        }
        acc
    }

    pub fn add_assign(&mut self, other: &Bihom22) {
        assert_eq!(self.dim, other.dim);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    pub fn sub_assign(&mut self, other: &Bihom22) {
        assert_eq!(self.dim, other.dim);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a -= b;
        }
    }

    pub fn scale(&mut self, s: &Rat) {
        for a in self.coeffs.iter_mut() {
            *a *= s;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

fn nonzero_entries(m: &MatR) -> Vec<(usize, usize, Rat)> {
    let mut out = Vec::new();
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let v = m.at(r, c);
            if !v.is_zero() {
                out.push((r, c, v.clone()));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat::{rat, ratio};

    fn skew2() -> MatR {
        MatR::from_rows(vec![vec![rat(0), rat(1)], vec![rat(-1), rat(0)]])
    }

    #[test]
    fn pair_indexing_is_a_bijection() {
        for dim in 1..7 {
            let collected: Vec<(usize, usize)> = pairs(dim).collect();
            assert_eq!(collected.len(), pair_count(dim));
            for (n, (i, j)) in collected.iter().enumerate() {
                assert_eq!(pair_index(dim, *i, *j), n);
            }
        }
    }

    #[test]
    fn square_of_symplectic_pairing_matches_hand_expansion() {
        // <M X, P> = X_2 P_1 - X_1 P_2 for the 2x2 skew matrix, so the
        // square has coefficients 1, -2, 1 on the three packed monomials.
        let m = skew2();
        let q = Bihom22::from_skew_pairs(2, &[(m.clone(), m)]).unwrap();
        assert_eq!(*q.coeff(1, 1, 0, 0), rat(1));
        assert_eq!(*q.coeff(0, 1, 0, 1), rat(-2));
        assert_eq!(*q.coeff(0, 0, 1, 1), rat(1));
        assert_eq!(*q.coeff(0, 0, 0, 0), rat(0));

        let x = [rat(3), ratio(1, 2)];
        let p = [rat(-2), rat(5)];
        let bracket = &x[1] * &p[0] - &x[0] * &p[1];
        assert_eq!(q.eval(&x, &p), &bracket * &bracket);
    }

    #[test]
    fn eval_is_bihomogeneous_of_bidegree_two_two() {
        let m = skew2();
        let id_like = MatR::from_rows(vec![vec![rat(1), rat(2)], vec![rat(0), rat(-1)]]);
        let q = Bihom22::from_skew_pairs(2, &[(m, id_like)]).unwrap();
        let x = [ratio(2, 3), rat(-1)];
        let p = [rat(4), ratio(-1, 5)];
        let lam = ratio(7, 2);
        let mu = rat(-3);
        let xs: Vec<Rat> = x.iter().map(|v| v * &lam).collect();
        let ps: Vec<Rat> = p.iter().map(|v| v * &mu).collect();
        let lhs = q.eval(&xs, &ps);
        let rhs = q.eval(&x, &p) * (&lam * &lam) * (&mu * &mu);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn sums_and_differences_of_forms() {
        let m = skew2();
        let q1 = Bihom22::from_skew_pairs(2, &[(m.clone(), m.clone())]).unwrap();
        let mut q2 = q1.clone();
        q2.add_assign(&q1);
        let x = [rat(1), rat(2)];
        let p = [rat(3), rat(-1)];
        assert_eq!(q2.eval(&x, &p), q1.eval(&x, &p) * rat(2));
        q2.sub_assign(&q1);
        q2.sub_assign(&q1);
        assert!(q2.is_zero());

        let mut q3 = q1.clone();
        q3.scale(&rat(0));
        assert!(q3.is_zero());
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let bad = MatR::zeros(2, 3);
        assert!(Bihom22::from_skew_pairs(2, &[(bad.clone(), bad)]).is_err());
    }
}
