//! Rank evidence records.
//!
//! A `RankReport` separates what was *proved* from what was *observed*:
//! modular ranks are lower bounds on the rational rank (elimination mod p
//! can only lose pivots), `exact_rank` is present only when an exact method
//! established it. Reports embed these verbatim so a re-verifier can see
//! which kind of claim it is holding.

use crate::linalg::bareiss::rank_exact_rows;
use crate::linalg::intmat::IntMat;
use crate::linalg::modular::ModMat;
use crate::scalars::rat::Int;
use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct PrimeRank {
    pub prime: u64,
    pub rank: usize,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum RankMethod {
    ModularOnly,
    Exact,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct RankReport {
    pub matrix_id: String,
    pub rows: usize,
    pub cols: usize,
    pub modular_ranks: Vec<PrimeRank>,
    pub exact_rank: Option<usize>,
    pub method: RankMethod,
}

impl RankReport {
    /// Largest modular rank: a certified lower bound for the rational rank.
    pub fn lower_bound(&self) -> usize {
        self.modular_ranks
            .iter()
            .map(|pr| pr.rank)
            .max()
            .unwrap_or(0)
            .max(self.exact_rank.unwrap_or(0))
    }

    /// Internal consistency: no modular rank may exceed a known exact rank.
    pub fn is_consistent(&self) -> bool {
        match self.exact_rank {
            None => true,
            Some(e) => self.modular_ranks.iter().all(|pr| pr.rank <= e),
        }
    }
}

pub fn modular_ranks(m: &IntMat, primes: &[u64]) -> Vec<PrimeRank> {
    primes
        .iter()
        .map(|&p| PrimeRank {
            prime: p,
            rank: ModMat::from_intmat(m, p).rank(),
        })
        .collect()
}

pub fn rank_report(matrix_id: &str, m: &IntMat, primes: &[u64], exact: bool) -> RankReport {
    let modular = modular_ranks(m, primes);
    let exact_rank = exact.then(|| {
        let rows: Vec<Vec<Int>> = (0..m.rows())
            .map(|i| m.row(i).iter().map(|&v| Int::from(v)).collect())
            .collect();
        rank_exact_rows(rows, m.cols())
    });
    RankReport {
        matrix_id: matrix_id.to_string(),
        rows: m.rows(),
        cols: m.cols(),
        modular_ranks: modular,
        exact_rank,
        method: if exact {
            RankMethod::Exact
        } else {
            RankMethod::ModularOnly
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::modular::default_primes;

    #[test]
    fn modular_rank_can_undershoot_but_never_overshoot() {
        let p0 = default_primes()[0];
        // [[1, 0], [0, p0]] has rational rank 2 but rank 1 mod p0.
        let m = IntMat::from_rows(vec![vec![1, 0], vec![0, p0 as i128]]);
        let report = rank_report("drop_at_first_prime", &m, default_primes(), true);
        assert_eq!(report.exact_rank, Some(2));
        assert!(report.is_consistent());
        let at_p0 = &report.modular_ranks[0];
        assert_eq!((at_p0.prime, at_p0.rank), (p0, 1));
        for pr in &report.modular_ranks[1..] {
            assert_eq!(pr.rank, 2);
        }
        assert_eq!(report.lower_bound(), 2);
    }

    #[test]
    fn json_shape_is_stable() {
        let m = IntMat::from_rows(vec![vec![1, 2], vec![2, 4]]);
        let report = rank_report("rank_one", &m, &default_primes()[..2], false);
        assert_eq!(report.exact_rank, None);
        let js = serde_json::to_value(&report).unwrap();
        assert_eq!(js["method"], "modular_only");
        assert_eq!(js["modular_ranks"][0]["rank"], 1);
        let back: RankReport = serde_json::from_value(js).unwrap();
        assert_eq!(back, report);
    }
}
