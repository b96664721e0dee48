//! Dense matrices over the rationals, row-major.
//!
//! The JSON form is `{"rows": r, "cols": c, "entries": ["p/q", ...]}` with
//! entries in row-major order; it is shared by every artifact that stores a
//! matrix.

use crate::error::Error;
use crate::scalars::rat::{parse_rat, rat_str, Rat};
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MatR {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl MatR {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatR {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = MatR::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        MatR { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        MatR {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: &Rat) {
        self.data[i * self.cols + j] += v;
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[Rat]> {
        self.data.chunks_exact(self.cols.max(1))
    }

    pub fn col(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> MatR {
        MatR::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn matmul(&self, other: &MatR) -> MatR {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = MatR::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if !b.is_zero() {
                        out.add_at(i, j, &(a * b));
                    }
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len(), "shape mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = Rat::zero();
                for j in 0..self.cols {
                    let a = self.at(i, j);
                    if !a.is_zero() && !v[j].is_zero() {
                        acc += a * &v[j];
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &MatR) -> MatR {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        MatR::from_fn(self.rows, self.cols, |i, j| self.at(i, j) + other.at(i, j))
    }

    pub fn sub(&self, other: &MatR) -> MatR {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        MatR::from_fn(self.rows, self.cols, |i, j| self.at(i, j) - other.at(i, j))
    }

    pub fn scale(&self, s: &Rat) -> MatR {
        MatR::from_fn(self.rows, self.cols, |i, j| self.at(i, j) * s)
    }

    pub fn commutator(&self, other: &MatR) -> MatR {
        self.matmul(other).sub(&other.matmul(self))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.at(i, j) == self.at(j, i)))
    }

    pub fn is_skew_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..=i).all(|j| {
                    let s = self.at(i, j) + self.at(j, i);
                    s.is_zero()
                })
            })
    }

    pub fn trace(&self) -> Rat {
        assert_eq!(self.rows, self.cols);
        let mut t = Rat::zero();
        for i in 0..self.rows {
            t += self.at(i, i);
        }
        t
    }

    /// Copies `block` into `self` with top-left corner at `(i0, j0)`.
    pub fn set_block(&mut self, i0: usize, j0: usize, block: &MatR) {
        assert!(i0 + block.rows <= self.rows && j0 + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(i0 + i, j0 + j, block.at(i, j).clone());
            }
        }
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &MatR) -> MatR {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        MatR {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Concatenates columns: `[self | other]`.
    pub fn hstack(&self, other: &MatR) -> MatR {
        assert_eq!(self.rows, other.rows);
        MatR::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.at(i, j).clone()
            } else {
                other.at(i, j - self.cols).clone()
            }
        })
    }

    pub fn submatrix(&self, row_ids: &[usize], col_ids: &[usize]) -> MatR {
        MatR::from_fn(row_ids.len(), col_ids.len(), |i, j| {
            self.at(row_ids[i], col_ids[j]).clone()
        })
    }
}

#[derive(Serialize, Deserialize)]
struct MatJson {
    rows: usize,
    cols: usize,
    entries: Vec<String>,
}

impl Serialize for MatR {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        MatJson {
            rows: self.rows,
            cols: self.cols,
            entries: self.data.iter().map(rat_str).collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for MatR {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let raw = MatJson::deserialize(de)?;
        if raw.entries.len() != raw.rows * raw.cols {
            return Err(D::Error::custom(format!(
                "matrix entry count {} does not match shape {}x{}",
                raw.entries.len(),
                raw.rows,
                raw.cols
            )));
        }
        let data = raw
            .entries
            .iter()
            .map(|s| parse_rat(s))
            .collect::<Result<Vec<_>, Error>>()
            .map_err(|e| D::Error::custom(e.to_string()))?;
        Ok(MatR {
            rows: raw.rows,
            cols: raw.cols,
            data,
        })
    }
}
