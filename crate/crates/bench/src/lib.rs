#![forbid(unsafe_code)]

//! Deterministic input builders shared by the benchmarks.

use kt_core::linalg::intmat::IntMat;
use kt_core::linalg::mat::MatR;
use kt_core::scalars::rat::Rat;
use kt_core::seeding::suite_rng;
use rand::Rng;

pub fn int_matrix(rows: usize, cols: usize, seed: u64) -> IntMat {
    let mut rng = suite_rng(seed, "bench.int");
    let data: Vec<Vec<i128>> = (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-50i128..=50)).collect())
        .collect();
    IntMat::from_rows(data)
}

pub fn rat_matrix(rows: usize, cols: usize, seed: u64) -> MatR {
    let mut rng = suite_rng(seed, "bench.rat");
    MatR::from_rows(
        (0..rows)
            .map(|_| {
                (0..cols)
                    .map(|_| Rat::from_integer(rng.gen_range(-20i64..=20).into()))
                    .collect()
            })
            .collect(),
    )
}
