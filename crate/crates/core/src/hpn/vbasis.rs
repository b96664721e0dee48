//! The distinguished basis of symmetric operators commuting with the
//! quaternionic structure, and the combinatorics built on top of it.
//!
//! Basis order is fixed once and recorded in reports: first the n+1
//! diagonal elements (identity in one 4x4 block), then the off-diagonal
//! elements ordered lexicographically by (i, j, u) with u running over
//! the quaternion units (1, i, j, k). Quadratic forms on the span are
//! stored packed over unordered index pairs in the same order.

use crate::bihom::{pair_count, pair_index, pairs};
use crate::error::Error;
use crate::linalg::intmat::IntMat;
use crate::linalg::mat::MatR;
use crate::scalars::oct::{quat_lr_matrices, Oct};
use crate::scalars::rat::{ratio, Rat};
use num_traits::Zero;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VBasisIndex {
    /// 1-based block index, 1 <= i <= n+1.
    Diag(usize),
    /// 1 <= i < j <= n+1; u in 0..4 indexes the quaternion unit.
    Off { i: usize, j: usize, u: usize },
}

pub fn vcount(n: usize) -> usize {
    (n + 1) * (2 * n + 1)
}

pub fn v_basis_indices(n: usize) -> Vec<VBasisIndex> {
    let blocks = n + 1;
    let mut out = Vec::with_capacity(vcount(n));
    for i in 1..=blocks {
        out.push(VBasisIndex::Diag(i));
    }
    for i in 1..=blocks {
        for j in (i + 1)..=blocks {
            for u in 0..4 {
                out.push(VBasisIndex::Off { i, j, u });
            }
        }
    }
    debug_assert_eq!(out.len(), vcount(n));
    out
}

/// Position of an index in the fixed basis order.
pub fn basis_position(idx: &VBasisIndex, n: usize) -> usize {
    let blocks = n + 1;
    match *idx {
        VBasisIndex::Diag(i) => i - 1,
        VBasisIndex::Off { i, j, u } => {
            // Off elements for rows before i, then pairs (i, i+1..j).
            let before_i: usize = (1..i).map(|r| blocks - r).sum();
            blocks + 4 * (before_i + (j - i - 1)) + u
        }
    }
}

pub fn basis_element(idx: &VBasisIndex, n: usize) -> Result<MatR, Error> {
    let blocks = n + 1;
    let dim = 4 * blocks;
    let mut m = MatR::zeros(dim, dim);
    match *idx {
        VBasisIndex::Diag(i) => {
            if i == 0 || i > blocks {
                return Err(Error::invalid(format!("diagonal block index {i} out of range")));
            }
            for k in 0..4 {
                m.set(4 * (i - 1) + k, 4 * (i - 1) + k, Rat::from_integer(1.into()));
            }
        }
        VBasisIndex::Off { i, j, u } => {
            if i == 0 || j <= i || j > blocks || u > 3 {
                return Err(Error::invalid(format!(
                    "off-diagonal index ({i},{j},{u}) out of range"
                )));
            }
            let (l, _) = quat_lr_matrices(&Oct::unit(u))?;
            // L(u*) = L(u)^T, so the whole matrix is symmetric.
            let lt = l.transpose();
            for r in 0..4 {
                for c in 0..4 {
                    m.set(4 * (i - 1) + r, 4 * (j - 1) + c, l.at(r, c).clone());
                    m.set(4 * (j - 1) + r, 4 * (i - 1) + c, lt.at(r, c).clone());
                }
            }
        }
    }
    Ok(m)
}

pub fn basis_matrices(n: usize) -> Result<Vec<MatR>, Error> {
    v_basis_indices(n)
        .iter()
        .map(|idx| basis_element(idx, n))
        .collect()
}

/// Indicator of the diagonal basis elements (the trace covector up to the
/// block size factor).
pub fn trace_indicator(n: usize) -> Vec<bool> {
    let mut t = vec![false; vcount(n)];
    for flag in t.iter_mut().take(n + 1) {
        *flag = true;
    }
    t
}

/// Packed coefficients of the quadratic form pairing the trace covector
/// symmetrically with the c-th basis covector. These forms evaluate to
/// (sum of diagonal coordinates) * (c-th coordinate), and the first factor
/// vanishes identically on horizontal data, so every one of these vectors
/// must lie in the kernel of the sampled evaluation matrix.
pub fn tr_odot_packed(c: usize, n: usize) -> Vec<Rat> {
    let v = vcount(n);
    let t = trace_indicator(n);
    let mut out = vec![Rat::zero(); pair_count(v)];
    for p in 0..(n + 1) {
        if p == c {
            continue;
        }
        let (a, b) = (p.min(c), p.max(c));
        out[pair_index(v, a, b)] = ratio(1, 2);
    }
    if t[c] {
        out[pair_index(v, c, c)] = Rat::from_integer(1.into());
    }
    out
}

/// Linear conditions cutting out the kernel, written directly on packed
/// quadratic-form coordinates:
///
/// * entries with both indices off-diagonal vanish;
/// * the pairing of an off-diagonal element with a diagonal one does not
///   depend on which diagonal element;
/// * the diagonal-diagonal block b satisfies b_pq + b_rs = b_ps + b_rq,
///   i.e. it has the form beta_p + beta_q.
///
/// The solution space of these conditions has dimension vcount(n) for
/// every n; the rows are integer with entries in {-1, 0, 1}.
pub fn coefficient_condition_rows(n: usize) -> IntMat {
    let v = vcount(n);
    let t = pair_count(v);
    let blocks = n + 1;
    let mut m = IntMat::zeros(0, t);

    // Both indices off-diagonal: coefficient is zero.
    for (a, b) in pairs(v) {
        if a >= blocks && b >= blocks {
            let mut row = vec![0i128; t];
            row[pair_index(v, a, b)] = 1;
            m.push_row(&row);
        }
    }
    // Diagonal-off pairings agree across consecutive diagonal indices.
    for o in blocks..v {
        for p in 0..n {
            let mut row = vec![0i128; t];
            row[pair_index(v, p, o)] += 1;
            row[pair_index(v, p + 1, o)] -= 1;
            m.push_row(&row);
        }
    }
    // Exchange conditions on the diagonal-diagonal block, over all tuples.
    for p in 0..blocks {
        for q in 0..blocks {
            for r in 0..blocks {
                for s in 0..blocks {
                    let mut row = vec![0i128; t];
                    row[pair_index(v, p.min(q), p.max(q))] += 1;
                    row[pair_index(v, r.min(s), r.max(s))] += 1;
                    row[pair_index(v, p.min(s), p.max(s))] -= 1;
                    row[pair_index(v, r.min(q), r.max(q))] -= 1;
                    if row.iter().any(|&e| e != 0) {
                        m.push_row(&row);
                    }
                }
            }
        }
    }
    m
}

/// Rank the condition rows must have: everything except one solution
/// dimension per basis element.
pub fn expected_condition_rank(n: usize) -> usize {
    pair_count(vcount(n)) - vcount(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hpn::structure::build_quat_structure;
    use crate::linalg::bareiss::rank_exact;
    use crate::scalars::rat::rat;

    #[test]
    fn basis_count_and_positions_are_consistent() {
        for n in 1..=4 {
            let idxs = v_basis_indices(n);
            assert_eq!(idxs.len(), vcount(n));
            for (k, idx) in idxs.iter().enumerate() {
                assert_eq!(basis_position(idx, n), k, "position mismatch at {idx:?}");
            }
        }
    }

    #[test]
    fn elements_are_symmetric_commute_with_structure_and_have_pinned_traces() {
        let n = 2;
        let qs = build_quat_structure(n).unwrap();
        for idx in v_basis_indices(n) {
            let s = basis_element(&idx, n).unwrap();
            assert_eq!(s.transpose(), s, "{idx:?} not symmetric");
            let expected_trace = match idx {
                VBasisIndex::Diag(_) => rat(4),
                VBasisIndex::Off { .. } => rat(0),
            };
            assert_eq!(s.trace(), expected_trace);
            for alpha in 1..=3 {
                let j = qs.j(alpha);
                assert_eq!(s.matmul(j), j.matmul(&s), "{idx:?} fails to commute with J{alpha}");
                // The products S J_alpha are skew, which is what makes the
                // geodesic values parameter-independent downstream.
                let sj = s.matmul(j);
                assert_eq!(sj.transpose(), sj.scale(&rat(-1)));
            }
        }
    }

    #[test]
    fn diagonal_elements_sum_to_identity() {
        let n = 3;
        let mut sum = MatR::zeros(4 * (n + 1), 4 * (n + 1));
        for i in 1..=(n + 1) {
            sum = sum.add(&basis_element(&VBasisIndex::Diag(i), n).unwrap());
        }
        assert_eq!(sum, MatR::identity(4 * (n + 1)));
    }

    #[test]
    fn tr_odot_vectors_are_independent() {
        let n = 2;
        let v = vcount(n);
        let mut m = IntMat::zeros(0, pair_count(v));
        for c in 0..v {
            let packed = tr_odot_packed(c, n);
            let doubled: Vec<i128> = packed
                .iter()
                .map(|r| {
                    let two = r * rat(2);
                    assert!(two.is_integer());
                    i128::try_from(two.to_integer()).unwrap()
                })
                .collect();
            m.push_row(&doubled);
        }
        assert_eq!(rank_exact(&m.to_matr()), v);
    }

    #[test]
    fn condition_rank_leaves_one_solution_per_basis_element() {
        let n = 1;
        let rows = coefficient_condition_rows(n);
        assert_eq!(rank_exact(&rows.to_matr()), expected_condition_rank(n));

        let n = 2;
        let rows = coefficient_condition_rows(n);
        assert_eq!(rank_exact(&rows.to_matr()), expected_condition_rank(n));
    }

    #[test]
    fn tr_odot_vectors_solve_the_conditions() {
        let n = 2;
        let rows = coefficient_condition_rows(n);
        for c in 0..vcount(n) {
            let packed = tr_odot_packed(c, n);
            let doubled: Vec<crate::scalars::rat::Int> = packed
                .iter()
                .map(|r| (r * rat(2)).to_integer())
                .collect();
            let image = rows.matvec_big(&doubled);
            assert!(image.iter().all(|x| x.is_zero()), "conditions fail at c={c}");
        }
    }
}
