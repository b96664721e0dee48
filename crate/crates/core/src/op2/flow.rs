//! Floating-point advisory checks: geodesics generated by exponentiated
//! derivations keep the plane constraints and the quadratic forms K_A
//! within tolerance. Nothing here feeds a certificate; exact claims are
//! established elsewhere, and this layer only guards against a systematic
//! modelling error.

use crate::error::Error;
use crate::op2::deriv::{derivation_basis, Derivation};
use crate::scalars::oct::oct_table;
use crate::seeding::suite_rng;
use rand::Rng;
use serde::{Deserialize, Serialize};

const D: usize = 27;

type Coords = [f64; 27];
type OctF = [f64; 8];

fn oct_mul_f(a: &OctF, b: &OctF) -> OctF {
    let t = oct_table();
    let mut out = [0.0; 8];
    for i in 0..8 {
        if a[i] == 0.0 {
            continue;
        }
        for j in 0..8 {
            let (s, k) = t[i][j];
            out[k as usize] += f64::from(s) * a[i] * b[j];
        }
    }
    out
}

fn oct_inner_f(a: &OctF, b: &OctF) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn slot(v: &Coords, k: usize) -> OctF {
    std::array::from_fn(|i| v[3 + 8 * k + i])
}

fn trace3_f(v: &Coords) -> f64 {
    v[0] + v[1] + v[2]
}

fn inner3_f(a: &Coords, b: &Coords) -> f64 {
    let mut out = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    for k in 0..3 {
        out += 2.0 * oct_inner_f(&slot(a, k), &slot(b, k));
    }
    out
}

fn det3_f(v: &Coords) -> f64 {
    let (x1, x2, x3) = (slot(v, 0), slot(v, 1), slot(v, 2));
    v[0] * v[1] * v[2] + 2.0 * oct_inner_f(&oct_mul_f(&x1, &x2), &x3)
        - v[0] * oct_inner_f(&x1, &x1)
        - v[1] * oct_inner_f(&x2, &x2)
        - v[2] * oct_inner_f(&x3, &x3)
}

fn add_scaled(a: &Coords, b: &Coords, w: f64) -> Coords {
    std::array::from_fn(|i| a[i] + w * b[i])
}

fn phi3_f(a: &Coords, b: &Coords, c: &Coords) -> f64 {
    let ab = add_scaled(a, b, 1.0);
    let abc = add_scaled(&ab, c, 1.0);
    let ac = add_scaled(a, c, 1.0);
    let bc = add_scaled(b, c, 1.0);
    (det3_f(&abc) - det3_f(&ab) - det3_f(&ac) - det3_f(&bc)
        + det3_f(a)
        + det3_f(b)
        + det3_f(c))
        / 6.0
}

/// Hermitian square via the 3x3 octonion matrix product, flattened back to
/// coordinates; enough for the sharp residual.
fn square_f(v: &Coords) -> Coords {
    let conj = |o: &OctF| -> OctF { std::array::from_fn(|i| if i == 0 { o[0] } else { -o[i] }) };
    let (x1, x2, x3) = (slot(v, 0), slot(v, 1), slot(v, 2));
    let zero = [0.0; 8];
    let real = |r: f64| -> OctF { std::array::from_fn(|i| if i == 0 { r } else { 0.0 }) };
    let m: [[OctF; 3]; 3] = [
        [real(v[0]), conj(&x3), conj(&x2)],
        [x3, real(v[1]), x1],
        [x2, conj(&x1), real(v[2])],
    ];
    let mut sq = [[zero; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut acc = [0.0; 8];
            for k in 0..3 {
                let term = oct_mul_f(&m[i][k], &m[k][j]);
                for (a, t) in acc.iter_mut().zip(&term) {
                    *a += t;
                }
            }
            sq[i][j] = acc;
        }
    }
    let mut out = [0.0; 27];
    out[0] = sq[0][0][0];
    out[1] = sq[1][1][0];
    out[2] = sq[2][2][0];
    for (k, (i, j)) in [(1, 2), (2, 0), (1, 0)].into_iter().enumerate() {
        for c in 0..8 {
            out[3 + 8 * k + c] = sq[i][j][c];
        }
    }
    out
}

fn sharp_f(v: &Coords) -> Coords {
    let sq = square_f(v);
    let tr = trace3_f(v);
    let sigma2 = 0.5 * (tr * tr - inner3_f(v, v));
    let mut out = std::array::from_fn(|i| sq[i] - tr * v[i]);
    out[0] += sigma2;
    out[1] += sigma2;
    out[2] += sigma2;
    out
}

fn norm1(m: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    for c in 0..D {
        let s: f64 = (0..D).map(|r| m[r * D + c].abs()).sum();
        worst = worst.max(s);
    }
    worst
}

fn matmul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; D * D];
    for r in 0..D {
        for k in 0..D {
            let v = a[r * D + k];
            if v == 0.0 {
                continue;
            }
            for c in 0..D {
                out[r * D + c] += v * b[k * D + c];
            }
        }
    }
    out
}

fn matvec(m: &[f64], v: &Coords) -> Coords {
    std::array::from_fn(|r| (0..D).map(|c| m[r * D + c] * v[c]).sum())
}

/// Gauss elimination with partial pivoting; solves A X = B with B given in
/// row-major form, overwriting both.
fn solve(a: &mut [f64], b: &mut [f64]) {
    for col in 0..D {
        let pivot = (col..D)
            .max_by(|&r, &s| {
                a[r * D + col]
                    .abs()
                    .partial_cmp(&a[s * D + col].abs())
                    .unwrap()
            })
            .unwrap();
        if pivot != col {
            for c in 0..D {
                a.swap(pivot * D + c, col * D + c);
                b.swap(pivot * D + c, col * D + c);
            }
        }
        let inv = 1.0 / a[col * D + col];
        for r in 0..D {
            if r == col {
                continue;
            }
            let f = a[r * D + col] * inv;
            if f == 0.0 {
                continue;
            }
            for c in 0..D {
                a[r * D + c] -= f * a[col * D + c];
                b[r * D + c] -= f * b[col * D + c];
            }
        }
    }
    for r in 0..D {
        let inv = 1.0 / a[r * D + r];
        for c in 0..D {
            b[r * D + c] *= inv;
        }
    }
}

/// Matrix exponential: diagonal Pade approximant of order (6,6) with
/// scaling and squaring down to 1-norm 1/2.
fn expm(m: &[f64]) -> Vec<f64> {
    let norm = norm1(m);
    let mut scalings = 0u32;
    while norm / f64::from(2u32.pow(scalings) as u32) > 0.5 {
        scalings += 1;
    }
    let scale = 1.0 / f64::from(2u32.pow(scalings));
    let b: Vec<f64> = m.iter().map(|v| v * scale).collect();
    let coeff = [
        1.0,
        0.5,
        5.0 / 44.0,
        1.0 / 66.0,
        1.0 / 792.0,
        1.0 / 15840.0,
        1.0 / 665_280.0,
    ];
    let mut num = vec![0.0; D * D];
    let mut den = vec![0.0; D * D];
    let mut power = vec![0.0; D * D];
    for r in 0..D {
        power[r * D + r] = 1.0;
    }
    for (k, c) in coeff.iter().enumerate() {
        if k > 0 {
            power = matmul(&power, &b);
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        for i in 0..D * D {
            num[i] += c * power[i];
            den[i] += sign * c * power[i];
        }
    }
    solve(&mut den, &mut num);
    let mut out = num;
    for _ in 0..scalings {
        out = matmul(&out, &out);
    }
    out
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FlowOutcome {
    pub trials: usize,
    pub grid_points: usize,
    pub seed: u64,
    pub tol: f64,
    pub derivation_dim: usize,
    pub max_form_drift: f64,
    pub max_trace_residual: f64,
    pub max_det_residual: f64,
    pub max_sharp_residual: f64,
}

fn random_combination(rng: &mut impl Rng, basis: &[Derivation]) -> Vec<f64> {
    let mut m = vec![0.0; D * D];
    for d in basis {
        let w = f64::from(rng.gen_range(-2i32..=2));
        if w == 0.0 {
            continue;
        }
        for (slot, &e) in m.iter_mut().zip(d.entries()) {
            *slot += w * e as f64;
        }
    }
    let n = norm1(&m);
    if n > 0.0 {
        for v in &mut m {
            *v /= n;
        }
    }
    m
}

/// Runs the advisory flow checks: moves the standard unit-speed geodesic
/// by products of exponentiated derivations and verifies, on a parameter
/// grid, that the curve stays on the plane and that every sampled K_A is
/// constant along it up to `tol`.
pub fn flow_suite(trials: usize, grid: usize, seed: u64, tol: f64) -> Result<FlowOutcome, Error> {
    if trials == 0 || grid < 2 {
        return Err(Error::invalid("flow checks need trials >= 1 and grid >= 2"));
    }
    let basis = derivation_basis()?;
    let mut rng = suite_rng(seed, "op2.flow");
    let mut worst_drift = 0.0f64;
    let mut worst_trace = 0.0f64;
    let mut worst_det = 0.0f64;
    let mut worst_sharp = 0.0f64;

    for trial in 0..trials {
        // First trial uses the identity isometry so the exact standard
        // geodesic is always in the sample.
        let factors = if trial == 0 { 0 } else { rng.gen_range(1..=3) };
        let mut g = vec![0.0; D * D];
        for r in 0..D {
            g[r * D + r] = 1.0;
        }
        for _ in 0..factors {
            let generator = random_combination(&mut rng, &basis);
            let t: f64 = rng.gen_range(-1.0..1.0);
            let scaled: Vec<f64> = generator.iter().map(|v| v * t).collect();
            g = matmul(&expm(&scaled), &g);
        }

        let mut a = [0.0f64; 27];
        a[0] = f64::from(rng.gen_range(-3i32..=3));
        a[1] = f64::from(rng.gen_range(-3i32..=3));
        a[2] = -a[0] - a[1];
        for v in a.iter_mut().skip(3) {
            *v = f64::from(rng.gen_range(-3i32..=3));
        }

        let mut values = Vec::with_capacity(grid);
        for j in 0..grid {
            let s = 2.0 * std::f64::consts::PI * (j as f64) / (grid as f64);
            let (c, sn) = (s.cos(), s.sin());
            let mut point = [0.0f64; 27];
            point[0] = c * c;
            point[1] = sn * sn;
            point[3 + 16] = c * sn;
            let mut speed = [0.0f64; 27];
            speed[0] = -2.0 * c * sn;
            speed[1] = 2.0 * c * sn;
            speed[3 + 16] = c * c - sn * sn;
            let x = matvec(&g, &point);
            let xi = matvec(&g, &speed);

            worst_trace = worst_trace.max((trace3_f(&x) - 1.0).abs());
            worst_det = worst_det.max(det3_f(&x).abs());
            let sh = sharp_f(&x);
            worst_sharp = worst_sharp.max(sh.iter().fold(0.0f64, |m, v| m.max(v.abs())));
            values.push(phi3_f(&xi, &xi, &a));
        }
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let drift = values
            .iter()
            .fold(0.0f64, |m, v| m.max((v - mean).abs()))
            / (mean.abs() + 1.0);
        worst_drift = worst_drift.max(drift);
    }

    let checks = [
        ("form drift along flowed geodesics", worst_drift),
        ("trace residual", worst_trace),
        ("determinant residual", worst_det),
        ("sharp residual", worst_sharp),
    ];
    for (what, worst) in checks {
        if !(worst < tol) {
            return Err(Error::ToleranceExceeded {
                what: what.into(),
                worst,
                tol,
            });
        }
    }

    Ok(FlowOutcome {
        trials,
        grid_points: grid,
        seed,
        tol,
        derivation_dim: basis.len(),
        max_form_drift: worst_drift,
        max_trace_residual: worst_trace,
        max_det_residual: worst_det,
        max_sharp_residual: worst_sharp,
    })
}
