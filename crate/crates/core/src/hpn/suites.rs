//! Verification suites for the quaternionic family. Each suite returns a
//! serializable outcome embedding everything a later reader needs to
//! re-check the run: configuration echo, matrix digests, and the exact
//! certificates themselves.

use crate::bihom::{pair_count, pairs, Bihom22};
use crate::error::Error;
use crate::hpn::ideal::{IdealBasis, IdealWitness};
use crate::hpn::isometry::{isometry_algebra_basis, isometry_count};
use crate::hpn::samples::{
    sample_horizontal, sample_horizontal_plan, HorizontalSample, SampleTier,
};
use crate::hpn::structure::{build_quat_structure, QuatStructure};
use crate::hpn::tensors::lie_derivative_poly;
use crate::hpn::vbasis::{
    basis_matrices, coefficient_condition_rows, expected_condition_rank, tr_odot_packed, vcount,
};
use crate::linalg::bareiss::rank_exact;
use crate::linalg::certify::{kernel_certified, pairing_certificate, ColEchelon, KernelCert, PairingCert};
use crate::linalg::intmat::IntMat;
use crate::linalg::mat::MatR;
use crate::linalg::modular::{i128_mod, ModMat};
use crate::scalars::rat::{parse_rat, rat, Int, Rat};
use crate::seeding::suite_rng;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

// ---------------------------------------------------------------------------
// Integer evaluation tables
// ---------------------------------------------------------------------------

/// Dense row-major i128 copies of exact integer matrices.
fn mat_to_i128(m: &MatR) -> Result<Vec<i128>, Error> {
    let mut out = Vec::with_capacity(m.rows() * m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let v = m.at(i, j);
            if !v.is_integer() {
                return Err(Error::invalid("matrix entry is not an integer"));
            }
            out.push(crate::linalg::intmat::int_to_i128(&v.to_integer())?);
        }
    }
    Ok(out)
}

fn apply_dense(t: &[i128], d: usize, v: &[i128]) -> Vec<i128> {
    let mut out = vec![0i128; d];
    for (r, slot) in out.iter_mut().enumerate() {
        let row = &t[r * d..(r + 1) * d];
        let mut acc = 0i128;
        for (a, b) in row.iter().zip(v) {
            if *a != 0 && *b != 0 {
                acc += a * b;
            }
        }
        *slot = acc;
    }
    out
}

fn dot_i(a: &[i128], b: &[i128]) -> i128 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Per-coordinate bounds guaranteed by the samplers: numerator vectors for
/// X stay within 10, the projected P within 5000 * dim.
fn check_pairing_overflow(d: usize, max_table: u128, factors: u32) -> Result<(), Error> {
    let x_bound = 10u128;
    let p_bound = 5000 * d as u128;
    let u_bound = (d as u128) * (d as u128) * max_table * x_bound * p_bound;
    let entry_bound = 2u128
        .checked_mul(factors as u128)
        .and_then(|v| v.checked_mul(u_bound.checked_mul(u_bound)?));
    match entry_bound {
        Some(b) if b <= i128::MAX as u128 => Ok(()),
        _ => Err(Error::Overflow(
            "evaluation entries could exceed 128 bits; basis entries too large".into(),
        )),
    }
}

/// The products S_A J_alpha as dense integer tables, A-major.
fn phi_tables(qs: &QuatStructure, basis: &[MatR]) -> Result<Vec<Vec<i128>>, Error> {
    let mut tables = Vec::with_capacity(basis.len() * 3);
    for s in basis {
        for alpha in 1..=3 {
            tables.push(mat_to_i128(&s.matmul(qs.j(alpha)))?);
        }
    }
    Ok(tables)
}

/// Row of packed evaluations of the quadratic family on one sample:
/// column (A <= B) carries (2 - delta_AB) sum_alpha u_A u_B.
fn phi_row(tables: &[Vec<i128>], count: usize, d: usize, smp: &HorizontalSample) -> Vec<i128> {
    let mut u = vec![0i128; count * 3];
    for a in 0..count {
        for al in 0..3 {
            let tx = apply_dense(&tables[a * 3 + al], d, smp.x_int());
            u[a * 3 + al] = dot_i(smp.p_int(), &tx);
        }
    }
    let mut row = Vec::with_capacity(pair_count(count));
    for (a, b) in pairs(count) {
        let s: i128 = (0..3).map(|al| u[a * 3 + al] * u[b * 3 + al]).sum();
        row.push(if a == b { s } else { 2 * s });
    }
    row
}

/// Row of packed products of the isometry pairings on one sample.
fn product_row(values: &[i128]) -> Vec<i128> {
    let count = values.len();
    let mut row = Vec::with_capacity(pair_count(count));
    for (a, b) in pairs(count) {
        let s = values[a] * values[b];
        row.push(if a == b { s } else { 2 * s });
    }
    row
}

// ---------------------------------------------------------------------------
// Outcomes
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlgebraOutcome {
    pub n: usize,
    pub dim: usize,
    pub operator_count: usize,
    pub structure_verified: bool,
    pub diagonal_sum_is_identity: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KillingOutcome {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub operators: usize,
    pub tuples: usize,
    pub comparisons: usize,
    pub control_rejected: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LieOutcome {
    pub n: usize,
    pub operators: usize,
    pub control_rejected: bool,
    pub isometry_dim: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub rows: usize,
    pub prime: u64,
    pub modular_rank: usize,
    pub expected_rank: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KernelOutcome {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub vcount: usize,
    pub packed_cols: usize,
    pub matrix_sha256: String,
    pub guard_rows: usize,
    pub guard_rank: usize,
    pub trace_family_rank: usize,
    pub cert: KernelCert,
    pub condition: Option<ConditionCheck>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairingOutcome {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub isometry_dim: usize,
    pub g_cols: usize,
    pub f_cols: usize,
    pub g_sha256: String,
    pub f_sha256: String,
    pub expected_rank: usize,
    pub guard_rows: usize,
    pub guard_rank: usize,
    pub cert: PairingCert,
    /// For rank-zero targets: per-column multipliers certifying that the
    /// decomposition residue vanishes on all horizontal pairs, making the
    /// containment claim sample-independent.
    pub ideal_witnesses: Option<Vec<IdealWitness>>,
}

/// Dimension of the quotient the pairing suite must certify.
pub fn expected_pairing_rank(n: usize) -> usize {
    if n < 3 {
        0
    } else {
        (n - 2) * (n + 1) * (2 * n + 1) * (2 * n + 3) / 6
    }
}

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

pub fn algebra_suite(n: usize) -> Result<AlgebraOutcome, Error> {
    let qs = build_quat_structure(n)?;
    let basis = basis_matrices(n)?;
    if basis.len() != vcount(n) {
        return Err(Error::UnexpectedDimension {
            what: "operator basis".into(),
            expected: vcount(n),
            got: basis.len(),
        });
    }
    let mut diag_sum = MatR::zeros(qs.dim(), qs.dim());
    for (k, s) in basis.iter().enumerate() {
        if !s.is_symmetric() {
            return Err(Error::claim(format!("basis element {k} is not symmetric")));
        }
        let expected_trace = if k < n + 1 { rat(4) } else { rat(0) };
        if s.trace() != expected_trace {
            return Err(Error::claim(format!("basis element {k} has wrong trace")));
        }
        for alpha in 1..=3 {
            let j = qs.j(alpha);
            if !s.commutator(j).is_zero() {
                return Err(Error::claim(format!(
                    "basis element {k} does not commute with J{alpha}"
                )));
            }
            if !s.matmul(j).is_skew_symmetric() {
                return Err(Error::claim(format!(
                    "product of basis element {k} with J{alpha} is not skew"
                )));
            }
        }
        if k < n + 1 {
            diag_sum = diag_sum.add(s);
        }
    }
    let diag_ok = diag_sum == MatR::identity(qs.dim());
    if !diag_ok {
        return Err(Error::claim("diagonal elements do not sum to the identity"));
    }
    Ok(AlgebraOutcome {
        n,
        dim: qs.dim(),
        operator_count: basis.len(),
        structure_verified: true,
        diagonal_sum_is_identity: diag_ok,
    })
}

/// Exact constancy of every operator's tensor along rational great-circle
/// geodesics: with (a, b, h) a Pythagorean triple and (X, P) horizontal,
/// the value at (aX + bP, -bX + aP) must equal h^4 times the value at
/// (X, P). A non-invariant control operator must fail at least once.
pub fn killing_suite(n: usize, trials: usize, seed: u64) -> Result<KillingOutcome, Error> {
    let qs = build_quat_structure(n)?;
    let d = qs.dim();
    let basis = basis_matrices(n)?;
    let tables = phi_tables(&qs, &basis)?;
    check_pairing_overflow(d, 1, 3)?;
    let mut rng = suite_rng(seed, "hpn.killing");
    let samples = sample_horizontal(&qs, trials, &mut rng)?;
    let tuples: [(i128, i128, i128); 3] = [(3, 4, 5), (5, 12, 13), (8, 15, 17)];

    let value = |table_base: usize, x: &[i128], p: &[i128]| -> Int {
        let mut acc = Int::zero();
        for al in 0..3 {
            let tx = apply_dense(&tables[table_base + al], d, x);
            let u = dot_i(p, &tx);
            acc += Int::from(u) * Int::from(u);
        }
        acc
    };

    let mut comparisons = 0usize;
    for a_idx in 0..basis.len() {
        for smp in &samples {
            let base = value(a_idx * 3, smp.x_int(), smp.p_int());
            for &(a, b, h) in &tuples {
                let g: Vec<i128> = smp
                    .x_int()
                    .iter()
                    .zip(smp.p_int())
                    .map(|(&xe, &pe)| a * xe + b * pe)
                    .collect();
                let gdot: Vec<i128> = smp
                    .x_int()
                    .iter()
                    .zip(smp.p_int())
                    .map(|(&xe, &pe)| a * pe - b * xe)
                    .collect();
                let moved = value(a_idx * 3, &g, &gdot);
                let h4 = Int::from(h * h * h * h);
                if moved != base.clone() * h4 {
                    return Err(Error::claim(format!(
                        "tensor of operator {a_idx} is not constant along the ({a},{b},{h}) circle"
                    )));
                }
                comparisons += 1;
            }
        }
    }

    // Control: the tensor of a non-invariant operator must move.
    let mut e11 = MatR::zeros(d, d);
    e11.set(0, 0, rat(1));
    let mut control_tables = Vec::with_capacity(3);
    for alpha in 1..=3 {
        control_tables.push(mat_to_i128(&e11.matmul(qs.j(alpha)))?);
    }
    let control_value = |x: &[i128], p: &[i128]| -> Int {
        let mut acc = Int::zero();
        for t in &control_tables {
            let tx = apply_dense(t, d, x);
            let u = dot_i(p, &tx);
            acc += Int::from(u) * Int::from(u);
        }
        acc
    };
    let mut control_rejected = false;
    'outer: for smp in &samples {
        let base = control_value(smp.x_int(), smp.p_int());
        for &(a, b, h) in &tuples {
            let g: Vec<i128> = smp
                .x_int()
                .iter()
                .zip(smp.p_int())
                .map(|(&xe, &pe)| a * xe + b * pe)
                .collect();
            let gdot: Vec<i128> = smp
                .x_int()
                .iter()
                .zip(smp.p_int())
                .map(|(&xe, &pe)| a * pe - b * xe)
                .collect();
            if control_value(&g, &gdot) != base.clone() * Int::from(h * h * h * h) {
                control_rejected = true;
                break 'outer;
            }
        }
    }
    if !control_rejected {
        return Err(Error::claim(
            "control operator passed the constancy test; the test has no teeth",
        ));
    }

    Ok(KillingOutcome {
        n,
        trials,
        seed,
        operators: basis.len(),
        tuples: tuples.len(),
        comparisons,
        control_rejected,
    })
}

/// The Lie derivative of every operator's tensor along the three structure
/// rotations vanishes as a polynomial, with exact coefficients; a control
/// operator's derivative does not. Also pins the isometry algebra dimension.
pub fn lie_suite(n: usize) -> Result<LieOutcome, Error> {
    let qs = build_quat_structure(n)?;
    let basis = basis_matrices(n)?;
    for (k, s) in basis.iter().enumerate() {
        for beta in 1..=3 {
            if !lie_derivative_poly(s, &qs, beta)?.is_zero() {
                return Err(Error::claim(format!(
                    "Lie derivative of operator {k} along rotation {beta} is nonzero"
                )));
            }
        }
    }
    let mut e11 = MatR::zeros(qs.dim(), qs.dim());
    e11.set(0, 0, rat(1));
    let control_rejected = (1..=3).any(|beta| {
        lie_derivative_poly(&e11, &qs, beta)
            .map(|p| !p.is_zero())
            .unwrap_or(false)
    });
    if !control_rejected {
        return Err(Error::claim(
            "control operator has vanishing Lie derivative; the test has no teeth",
        ));
    }
    let iso = isometry_algebra_basis(&qs)?;
    Ok(LieOutcome {
        n,
        operators: basis.len(),
        control_rejected,
        isometry_dim: iso.len(),
    })
}

/// The kernel suite: sampled evaluation of the packed quadratic family,
/// certified kernel, exact containment of the trace family, and (where the
/// coefficient conditions are pinned) the condition-matrix cross-check.
/// Evaluation matrix of the quadratic family on seeded horizontal samples;
/// shared by the kernel suite and report re-verification.
pub(crate) fn kernel_matrix(n: usize, samples: usize, seed: u64) -> Result<IntMat, Error> {
    let qs = build_quat_structure(n)?;
    let d = qs.dim();
    let v = vcount(n);
    let basis = basis_matrices(n)?;
    let tables = phi_tables(&qs, &basis)?;
    check_pairing_overflow(d, 1, 3)?;

    let mut rng = suite_rng(seed, "hpn.kernel");
    let draws = sample_horizontal(&qs, samples, &mut rng)?;
    let mut g = IntMat::zeros(0, pair_count(v));
    for smp in &draws {
        g.push_row(&phi_row(&tables, v, d, smp));
    }
    Ok(g)
}

pub fn phi_kernel_suite(
    n: usize,
    samples: usize,
    seed: u64,
    primes: &[u64],
) -> Result<KernelOutcome, Error> {
    let v = vcount(n);
    let packed = pair_count(v);
    let g = kernel_matrix(n, samples, seed)?;
    let matrix_sha256 = g.sha256_hex();

    let cert = kernel_certified(&g, primes)?;
    if n >= 3 && cert.dim() != v {
        return Err(Error::UnexpectedDimension {
            what: "kernel of the evaluation matrix".into(),
            expected: v,
            got: cert.dim(),
        });
    }

    // The trace-pairing family must lie in the kernel exactly, and span a
    // space of full dimension; together with the modular rank this pins the
    // kernel completely for n >= 3.
    let mut family = Vec::with_capacity(v);
    for c in 0..v {
        let doubled: Vec<Int> = tr_odot_packed(c, n)
            .iter()
            .map(|r| (r * rat(2)).to_integer())
            .collect();
        if !g.matvec_big(&doubled).iter().all(|e| e.is_zero()) {
            return Err(Error::claim(format!(
                "trace pairing {c} is not annihilated by the evaluation matrix"
            )));
        }
        family.push(doubled);
    }
    let fam_mat = MatR::from_rows(
        family
            .iter()
            .map(|row| row.iter().map(|e| Rat::from_integer(e.clone())).collect())
            .collect(),
    );
    let trace_family_rank = rank_exact(&fam_mat);
    if trace_family_rank != v {
        return Err(Error::claim("trace pairings are not independent"));
    }

    // Saturation guard: the first half of the samples must already achieve
    // the final modular rank, otherwise the sample count is too low to
    // trust the span.
    let guard_rows = g.rows() / 2;
    let half = g.submatrix(&(0..guard_rows).collect::<Vec<_>>(), &(0..packed).collect::<Vec<_>>());
    let guard_rank = ModMat::from_intmat(&half, cert.prime).rank();
    if guard_rank != cert.modular_rank {
        return Err(Error::UndersampledRank {
            context: "kernel evaluation matrix".into(),
            base_rank: cert.modular_rank,
            guard_rank,
        });
    }

    let condition = if n == 3 {
        let cond = coefficient_condition_rows(n);
        let expected = expected_condition_rank(n);
        let mut modular_rank = 0usize;
        let mut used_prime = cert.prime;
        let mut pool = vec![cert.prime];
        pool.extend_from_slice(primes);
        for &p in &pool {
            modular_rank = ModMat::from_intmat(&cond, p).rank();
            used_prime = p;
            if modular_rank == expected {
                break;
            }
        }
        if modular_rank != expected {
            return Err(Error::claim(format!(
                "condition rows have modular rank {modular_rank}, expected {expected}"
            )));
        }
        // Every certified kernel vector solves the conditions, and the
        // dimensions agree, so the two descriptions of the kernel coincide.
        for (k, vec) in cert.basis_ints()?.iter().enumerate() {
            if !cond.matvec_big(vec).iter().all(|e| e.is_zero()) {
                return Err(Error::claim(format!(
                    "kernel vector {k} violates the coefficient conditions"
                )));
            }
        }
        if packed - expected != cert.dim() {
            return Err(Error::claim(
                "condition rank and kernel dimension disagree on the solution space",
            ));
        }
        Some(ConditionCheck {
            rows: cond.rows(),
            prime: used_prime,
            modular_rank,
            expected_rank: expected,
        })
    } else {
        None
    };

    Ok(KernelOutcome {
        n,
        samples: g.rows(),
        seed,
        vcount: v,
        packed_cols: packed,
        matrix_sha256,
        guard_rows,
        guard_rank,
        trace_family_rank,
        cert,
        condition,
    })
}

/// Tiny tiers first (their small entries make better pivots for the exact
/// solves), then generic rows for coverage. Returns the plan together with
/// the guard prefix length: all tiny rows plus half of the generic rows,
/// so saturation is judged on the generic tier alone.
fn tier_plan(samples: usize) -> (Vec<(SampleTier, usize)>, usize) {
    let eighth = (samples / 8).min(100);
    let generic = samples.saturating_sub(3 * eighth).max(1);
    let plan = vec![
        (SampleTier::Axis, eighth),
        (SampleTier::Pair, eighth),
        (SampleTier::Small, eighth),
        (SampleTier::Generic, generic),
    ];
    (plan, 3 * eighth + generic / 2)
}

/// Product and family evaluation matrices on shared seeded samples;
/// shared by the pairing suite and report re-verification.
pub(crate) fn pairing_matrices(
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<(IntMat, IntMat), Error> {
    let qs = build_quat_structure(n)?;
    let d = qs.dim();
    let v = vcount(n);
    let basis = basis_matrices(n)?;
    let phi_tabs = phi_tables(&qs, &basis)?;

    let iso = isometry_algebra_basis(&qs)?;
    let s_count = iso.len();
    debug_assert_eq!(s_count, isometry_count(n));
    let iso_tabs: Vec<Vec<i128>> = iso.iter().map(mat_to_i128).collect::<Result<_, _>>()?;
    let max_iso: u128 = iso_tabs
        .iter()
        .flat_map(|t| t.iter().map(|e| e.unsigned_abs()))
        .max()
        .unwrap_or(1);
    check_pairing_overflow(d, max_iso.max(1), 3)?;

    let mut rng = suite_rng(seed, "hpn.indecomposable");
    let (plan, _) = tier_plan(samples);
    let draws = sample_horizontal_plan(&qs, &plan, &mut rng)?;

    let mut g = IntMat::zeros(0, pair_count(s_count));
    let mut f = IntMat::zeros(0, pair_count(v));
    for smp in &draws {
        let w: Vec<i128> = iso_tabs
            .iter()
            .map(|t| dot_i(smp.p_int(), &apply_dense(t, d, smp.x_int())))
            .collect();
        g.push_row(&product_row(&w));
        f.push_row(&phi_row(&phi_tabs, v, d, smp));
    }
    Ok((g, f))
}

/// The pairing suite: evaluates products of isometry pairings (G) and the
/// packed quadratic family (F) on shared samples and certifies the rank of
/// F modulo the span of G. Witness count is an exact lower bound; for
/// rank-zero targets the containment is upgraded to a sample-independent
/// statement via ideal membership of the decomposition residues.
pub fn indecomposability_suite(
    n: usize,
    samples: usize,
    seed: u64,
    primes: &[u64],
) -> Result<PairingOutcome, Error> {
    let (g, f) = pairing_matrices(n, samples, seed)?;
    let (_, guard_rows) = tier_plan(samples);
    let g_sha256 = g.sha256_hex();
    let f_sha256 = f.sha256_hex();

    let cert = pairing_certificate(&g, &f, primes)?;
    let expected = expected_pairing_rank(n);
    if cert.pairing_rank() != expected {
        return Err(Error::claim(format!(
            "pairing rank {} does not match the expected {expected}",
            cert.pairing_rank()
        )));
    }

    // Saturation guard on the stacked matrix.
    let mut ech = ColEchelon::new(cert.prime, guard_rows);
    let mut guard_rank = 0usize;
    for c in 0..g.cols() {
        let col: Vec<u64> = (0..guard_rows).map(|i| i128_mod(g.at(i, c), cert.prime)).collect();
        if ech.offer(col).is_some() {
            guard_rank += 1;
        }
    }
    for c in 0..f.cols() {
        let col: Vec<u64> = (0..guard_rows).map(|i| i128_mod(f.at(i, c), cert.prime)).collect();
        if ech.offer(col).is_some() {
            guard_rank += 1;
        }
    }
    if guard_rank != cert.gf_rank_mod_p {
        return Err(Error::UndersampledRank {
            context: "pairing evaluation matrix".into(),
            base_rank: cert.gf_rank_mod_p,
            guard_rank,
        });
    }

    let ideal_witnesses = if expected == 0 {
        let qs = build_quat_structure(n)?;
        let basis = basis_matrices(n)?;
        let iso = isometry_algebra_basis(&qs)?;
        Some(certify_decomposition_residues(&qs, &basis, &iso, &cert, primes)?)
    } else {
        None
    };

    Ok(PairingOutcome {
        n,
        samples: g.rows(),
        seed,
        isometry_dim: isometry_count(n),
        g_cols: g.cols(),
        f_cols: f.cols(),
        g_sha256,
        f_sha256,
        expected_rank: expected,
        guard_rows,
        guard_rank,
        cert,
        ideal_witnesses,
    })
}

/// Packed coefficient vector of one column of the quadratic family.
pub fn phi_column_poly(
    qs: &QuatStructure,
    basis: &[MatR],
    a: usize,
    b: usize,
) -> Result<Bihom22, Error> {
    let pairs: Vec<(MatR, MatR)> = (1..=3)
        .map(|alpha| {
            (
                basis[a].matmul(qs.j(alpha)),
                basis[b].matmul(qs.j(alpha)),
            )
        })
        .collect();
    let mut q = Bihom22::from_skew_pairs(qs.dim(), &pairs)?;
    if a != b {
        q.scale(&rat(2));
    }
    Ok(q)
}

/// Packed coefficient vector of one product column of the isometry family.
pub fn product_column_poly(iso: &[MatR], dim: usize, a: usize, b: usize) -> Result<Bihom22, Error> {
    let mut q = Bihom22::from_skew_pairs(dim, &[(iso[a].clone(), iso[b].clone())])?;
    if a != b {
        q.scale(&rat(2));
    }
    Ok(q)
}

/// For each decomposition `f = G c` recorded by the certificate, the
/// coefficient-level residue `poly(f) - sum c_a poly(g_a)`, labeled by the
/// `F` column; shared by the pairing suite and report re-verification.
pub(crate) fn decomposition_residue_targets(
    qs: &QuatStructure,
    basis: &[MatR],
    iso: &[MatR],
    cert: &PairingCert,
) -> Result<Vec<(usize, Vec<Rat>)>, Error> {
    let v = basis.len();
    let f_pairs: Vec<(usize, usize)> = pairs(v).collect();
    let g_pairs: Vec<(usize, usize)> = pairs(iso.len()).collect();
    let t = pair_count(qs.dim());
    let packed = t * t;

    // Cache sparse forms of the G columns that actually appear.
    let mut g_cache: std::collections::BTreeMap<usize, Vec<(usize, Rat)>> =
        std::collections::BTreeMap::new();
    for deco in &cert.decompositions {
        for &gc in &deco.coeff_cols {
            if !g_cache.contains_key(&gc) {
                let (a, b) = g_pairs[gc];
                let poly = product_column_poly(iso, qs.dim(), a, b)?;
                let sparse: Vec<(usize, Rat)> = poly
                    .packed()
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| (i, c.clone()))
                    .collect();
                g_cache.insert(gc, sparse);
            }
        }
    }

    let mut targets = Vec::with_capacity(cert.decompositions.len());
    for deco in &cert.decompositions {
        let (a, b) = f_pairs[deco.f_col];
        let mut residue = phi_column_poly(qs, basis, a, b)?.packed().to_vec();
        debug_assert_eq!(residue.len(), packed);
        for (gc, cs) in deco.coeff_cols.iter().zip(&deco.coeffs) {
            let coeff = parse_rat(cs)?;
            for (idx, val) in &g_cache[gc] {
                residue[*idx] -= &coeff * val;
            }
        }
        targets.push((deco.f_col, residue));
    }
    Ok(targets)
}

/// Certifies that every decomposition residue lies in the horizontality
/// ideal, upgrading the containment claim to a sample-independent one.
fn certify_decomposition_residues(
    qs: &QuatStructure,
    basis: &[MatR],
    iso: &[MatR],
    cert: &PairingCert,
    primes: &[u64],
) -> Result<Vec<IdealWitness>, Error> {
    let targets = decomposition_residue_targets(qs, basis, iso, cert)?;
    let ideal = IdealBasis::build(qs);
    ideal.certify(&targets, primes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::modular::default_primes;

    #[test]
    fn expected_pairing_ranks_match_the_closed_form() {
        assert_eq!(expected_pairing_rank(1), 0);
        assert_eq!(expected_pairing_rank(2), 0);
        assert_eq!(expected_pairing_rank(3), 42);
        assert_eq!(expected_pairing_rank(4), 165);
    }

    #[test]
    fn algebra_suite_passes_for_small_ranks() {
        for n in 1..=2 {
            let out = algebra_suite(n).unwrap();
            assert_eq!(out.operator_count, vcount(n));
            assert!(out.diagonal_sum_is_identity);
        }
    }

    #[test]
    fn killing_suite_holds_with_exact_arithmetic() {
        let out = killing_suite(1, 8, 7).unwrap();
        assert_eq!(out.comparisons, out.operators * 8 * 3);
        assert!(out.control_rejected);
    }

    #[test]
    fn lie_suite_holds_and_pins_isometry_dimension() {
        let out = lie_suite(1).unwrap();
        assert_eq!(out.isometry_dim, isometry_count(1));
        assert!(out.control_rejected);
    }

    #[test]
    fn kernel_suite_certifies_trace_family_at_rank_one() {
        let out = phi_kernel_suite(1, 80, 42, default_primes()).unwrap();
        assert_eq!(out.vcount, 6);
        assert_eq!(out.packed_cols, 21);
        assert!(out.cert.dim() >= 6);
        assert_eq!(out.cert.dim() + out.cert.modular_rank, out.packed_cols);
        assert_eq!(out.trace_family_rank, 6);
        assert_eq!(out.guard_rank, out.cert.modular_rank);
    }

    #[test]
    fn kernel_suite_flags_undersampling() {
        let err = phi_kernel_suite(1, 6, 42, default_primes()).unwrap_err();
        match err {
            Error::UndersampledRank { .. } => {}
            other => panic!("expected an undersampling error, got {other}"),
        }
    }

    #[test]
    fn pairing_suite_certifies_containment_at_rank_one() {
        let out = indecomposability_suite(1, 240, 42, default_primes()).unwrap();
        assert_eq!(out.expected_rank, 0);
        assert_eq!(out.cert.pairing_rank(), 0);
        assert_eq!(out.cert.decompositions.len(), out.f_cols);
        let witnesses = out.ideal_witnesses.as_ref().unwrap();
        assert_eq!(witnesses.len(), out.f_cols);
    }
}
