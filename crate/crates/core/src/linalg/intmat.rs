//! Integer matrices with fixed-width entries.
//!
//! The sampling code produces rational matrices whose rows have small common
//! denominators. Scaling each row to a primitive integer vector preserves
//! row spaces, kernels and column-relation structure, and lets the modular
//! and lifting stages work on `i128` entries instead of big rationals. The
//! row scales are kept so results can be mapped back exactly.

use crate::error::Error;
use crate::linalg::mat::MatR;
use crate::scalars::rat::{primitive_scale, rat_of, Int, Rat};
use num_traits::{ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<i128>,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<i128>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Row-scales a rational matrix to primitive integer rows. Returns the
    /// integer matrix and, per row, the positive factor `f_i` with
    /// `int_row_i = f_i * rat_row_i`.
    pub fn from_matr_row_scaled(m: &MatR) -> Result<(Self, Vec<Rat>), Error> {
        let mut data = Vec::with_capacity(m.rows() * m.cols());
        let mut scales = Vec::with_capacity(m.rows());
        for i in 0..m.rows() {
            let (ints, f) = primitive_scale(m.row(i));
            for v in ints {
                data.push(int_to_i128(&v)?);
            }
            scales.push(f);
        }
        Ok((
            IntMat {
                rows: m.rows(),
                cols: m.cols(),
                data,
            },
            scales,
        ))
    }

    pub fn to_matr(&self) -> MatR {
        MatR::from_fn(self.rows, self.cols, |i, j| Rat::from_integer(self.at(i, j).into()))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> i128 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i128) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[i128] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn push_row(&mut self, row: &[i128]) {
        assert_eq!(row.len(), self.cols);
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    pub fn transpose(&self) -> IntMat {
        let mut out = IntMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.at(i, j));
            }
        }
        out
    }

    pub fn submatrix(&self, row_ids: &[usize], col_ids: &[usize]) -> IntMat {
        let mut out = IntMat::zeros(row_ids.len(), col_ids.len());
        for (i, &ri) in row_ids.iter().enumerate() {
            for (j, &cj) in col_ids.iter().enumerate() {
                out.set(i, j, self.at(ri, cj));
            }
        }
        out
    }

    pub fn max_abs(&self) -> u128 {
        self.data.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0)
    }

    /// Digest of the canonical text form (`rows cols` header, then one
    /// space-joined line per row); the anchor evaluation reports use to
    /// pin down which matrix a certificate refers to.
    pub fn sha256_hex(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut h = Sha256::new();
        h.update(format!("{} {}\n", self.rows, self.cols).as_bytes());
        let mut line = String::new();
        for i in 0..self.rows {
            line.clear();
            for j in 0..self.cols {
                if j > 0 {
                    line.push(' ');
                }
                line.push_str(&self.at(i, j).to_string());
            }
            line.push('\n');
            h.update(line.as_bytes());
        }
        let out = h.finalize();
        out.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Exact `M v` over big integers.
    pub fn matvec_big(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Int::zero();
                for j in 0..self.cols {
                    let a = self.at(i, j);
                    if a != 0 && !v[j].is_zero() {
                        acc += Int::from(a) * &v[j];
                    }
                }
                acc
            })
            .collect()
    }

    /// Exact `w^T M` over big integers for a row vector `w`.
    pub fn vecmat_big(&self, w: &[Int]) -> Vec<Int> {
        assert_eq!(self.rows, w.len());
        let mut out = vec![Int::zero(); self.cols];
        for i in 0..self.rows {
            if w[i].is_zero() {
                continue;
            }
            let wi = &w[i];
            for j in 0..self.cols {
                let a = self.at(i, j);
                if a != 0 {
                    out[j] += wi * Int::from(a);
                }
            }
        }
        out
    }
}

pub fn int_to_i128(v: &Int) -> Result<i128, Error> {
    v.to_i128()
        .ok_or_else(|| Error::Overflow(format!("integer {v} does not fit in 128 bits")))
}

/// Exact dot product of an `i128` row with a big-integer vector.
pub fn dot_big(row: &[i128], v: &[Int]) -> Int {
    assert_eq!(row.len(), v.len());
    let mut acc = Int::zero();
    for (a, x) in row.iter().zip(v) {
        if *a != 0 && !x.is_zero() {
            acc += Int::from(*a) * x;
        }
    }
    acc
}

/// Scales a rational vector to primitive integers, returning `(ints, f)` with
/// `ints = f * input` (re-export of the scalar helper with i128 narrowing).
pub fn int_vec_from_rats(v: &[Rat]) -> Result<(Vec<i128>, Rat), Error> {
    let (ints, f) = primitive_scale(v);
    let narrowed = ints
        .iter()
        .map(int_to_i128)
        .collect::<Result<Vec<_>, _>>()?;
    Ok((narrowed, f))
}

/// Exact equality `ints == f * rats`, used by tests and re-verification.
pub fn int_vec_matches(ints: &[i128], f: &Rat, rats: &[Rat]) -> bool {
    ints.len() == rats.len()
        && ints
            .iter()
            .zip(rats)
            .all(|(i, r)| rat_of(Int::from(*i)) == r * f)
}
