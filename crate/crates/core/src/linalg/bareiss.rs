//! Exact elimination over the rationals.
//!
//! Forward elimination is fraction-free (Bareiss one-step division), done on
//! row-scaled integer copies so intermediate entries stay integers of minor
//! size. Pivoting is deterministic: columns are processed left to right and
//! the pivot is the first row with a nonzero entry in the current column.
//! The reduced form is then normalized over the rationals.

use crate::linalg::mat::MatR;
use crate::scalars::rat::{primitive_scale, rat_of, Int, Rat};
use num_traits::{One, Zero};

/// Reduced row echelon form. Returns `(rref, rank, pivot_cols)`.
pub fn rref_exact(m: &MatR) -> (MatR, usize, Vec<usize>) {
    let rows = m.rows();
    let cols = m.cols();
    // Row-scale to integers; row scaling does not change the RREF.
    let mut a: Vec<Vec<Int>> = (0..rows)
        .map(|i| primitive_scale(m.row(i)).0)
        .collect();

    let mut pivot_cols = Vec::new();
    let mut prev = Int::one();
    let mut r = 0usize;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, pr);
        let pivot = a[r][c].clone();
        for i in 0..rows {
            if i == r || a[i][c].is_zero() {
                if i != r {
                    // Still must rescale the row to keep the Bareiss minor
                    // invariant: entries are divided by the previous pivot.
                    for j in 0..cols {
                        if !a[i][j].is_zero() {
                            let t = &a[i][j] * &pivot;
                            a[i][j] = exact_div(t, &prev);
                        }
                    }
                }
                continue;
            }
            let factor = a[i][c].clone();
            for j in 0..cols {
                let t = &a[i][j] * &pivot - &factor * &a[r][j];
                a[i][j] = exact_div(t, &prev);
            }
        }
        prev = pivot;
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let rank = pivot_cols.len();

    // Normalize: each pivot row divided by its pivot entry. Off-pivot rows
    // are identically zero at this point (we eliminated above and below).
    let mut out = MatR::zeros(rows, cols);
    for (i, &c) in pivot_cols.iter().enumerate() {
        let p = rat_of(a[i][c].clone());
        for j in 0..cols {
            if !a[i][j].is_zero() {
                out.set(i, j, rat_of(a[i][j].clone()) / &p);
            }
        }
    }
    debug_assert!(a[rank..].iter().all(|row| row.iter().all(|v| v.is_zero())));
    (out, rank, pivot_cols)
}

fn exact_div(t: Int, d: &Int) -> Int {
    debug_assert!(!d.is_zero());
    debug_assert!((&t % d).is_zero(), "non-exact division in Bareiss step");
    t / d
}

/// Kernel basis read off an RREF: one vector per free column, with entry 1
/// at the free column and minus the reduced column at the pivot positions.
pub fn kernel_from_rref(rref: &MatR, pivot_cols: &[usize]) -> Vec<Vec<Rat>> {
    let cols = rref.cols();
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; cols];
        for &c in pivot_cols {
            v[c] = true;
        }
        v
    };
    let mut basis = Vec::new();
    for f in 0..cols {
        if is_pivot[f] {
            continue;
        }
        let mut v = vec![Rat::zero(); cols];
        v[f] = Rat::one();
        for (i, &c) in pivot_cols.iter().enumerate() {
            let e = rref.at(i, f);
            if !e.is_zero() {
                v[c] = -e.clone();
            }
        }
        basis.push(v);
    }
    basis
}

/// Exact rank of a rational matrix by fraction-free forward elimination.
pub fn rank_exact(m: &MatR) -> usize {
    rank_exact_rows((0..m.rows()).map(|i| primitive_scale(m.row(i)).0).collect(), m.cols())
}

/// Exact rank of integer row data (consumed).
pub fn rank_exact_rows(mut a: Vec<Vec<Int>>, cols: usize) -> usize {
    let rows = a.len();
    let mut prev = Int::one();
    let mut r = 0usize;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, pr);
        let pivot = a[r][c].clone();
        for i in (r + 1)..rows {
            if a[i][c].is_zero() {
                for j in c..cols {
                    if !a[i][j].is_zero() {
                        let t = &a[i][j] * &pivot;
                        a[i][j] = exact_div(t, &prev);
                    }
                }
                continue;
            }
            let factor = a[i][c].clone();
            for j in c..cols {
                let t = &a[i][j] * &pivot - &factor * &a[r][j];
                a[i][j] = exact_div(t, &prev);
            }
        }
        prev = pivot;
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat::{rat, ratio};

    #[test]
    fn rref_of_hand_matrix() {
        // [1 2 1; 2 4 0; 3 6 0] has rank 2, pivots at columns 0 and 2,
        // and RREF [1 2 0; 0 0 1; 0 0 0].
        let m = MatR::from_rows(vec![
            vec![rat(1), rat(2), rat(1)],
            vec![rat(2), rat(4), rat(0)],
            vec![rat(3), rat(6), rat(0)],
        ]);
        let (r, rank, piv) = rref_exact(&m);
        assert_eq!(rank, 2);
        assert_eq!(piv, vec![0, 2]);
        let want = MatR::from_rows(vec![
            vec![rat(1), rat(2), rat(0)],
            vec![rat(0), rat(0), rat(1)],
            vec![rat(0), rat(0), rat(0)],
        ]);
        assert_eq!(r, want);
    }

    #[test]
    fn rref_with_rational_entries() {
        let m = MatR::from_rows(vec![
            vec![ratio(1, 2), ratio(1, 3)],
            vec![ratio(1, 4), ratio(1, 5)],
        ]);
        let (r, rank, piv) = rref_exact(&m);
        assert_eq!(rank, 2);
        assert_eq!(piv, vec![0, 1]);
        assert_eq!(r, MatR::identity(2));
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let m = MatR::from_rows(vec![
            vec![rat(1), rat(2), rat(3), rat(4)],
            vec![rat(2), rat(4), rat(6), rat(8)],
            vec![rat(0), rat(1), rat(1), rat(1)],
        ]);
        let (r, rank, piv) = rref_exact(&m);
        assert_eq!(rank, 2);
        let basis = kernel_from_rref(&r, &piv);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            for y in m.matvec(v) {
                assert!(y.is_zero());
            }
        }
    }

    #[test]
    fn zero_and_empty_shapes() {
        let z = MatR::zeros(3, 2);
        let (_, rank, piv) = rref_exact(&z);
        assert_eq!((rank, piv.len()), (0, 0));
        let e = MatR::zeros(0, 5);
        let (r, rank, _) = rref_exact(&e);
        assert_eq!(rank, 0);
        assert_eq!(r.rows(), 0);
        let basis = kernel_from_rref(&r, &[]);
        assert_eq!(basis.len(), 5);
    }

    #[test]
    fn rank_matches_rref() {
        let m = MatR::from_rows(vec![
            vec![rat(1), rat(2), rat(3)],
            vec![rat(4), rat(5), rat(6)],
            vec![rat(7), rat(8), rat(9)],
        ]);
        assert_eq!(rank_exact(&m), 2);
        let (_, rank, _) = rref_exact(&m);
        assert_eq!(rank, 2);
    }
}
