//! Exact horizontal samples.
//!
//! A sample is a pair (X, P) with P orthogonal to X and to J_1 X, J_2 X,
//! J_3 X. Candidates are drawn with small rational coordinates and then
//! projected by an integer Gram-Schmidt step, which is exact because the
//! four vectors X, J_a X are pairwise orthogonal with equal norms:
//!
//!   P = |X|^2 Y - <Y,X> X - sum_a <Y, J_a X> J_a X.
//!
//! All constraints are re-verified in integer arithmetic on construction,
//! so downstream suites may rely on exact horizontality.

use crate::error::Error;
use crate::hpn::structure::QuatStructure;
use crate::scalars::rat::Rat;
use rand::Rng;

#[derive(Clone, Debug)]
pub struct HorizontalSample {
    x: Vec<Rat>,
    p: Vec<Rat>,
    xi: Vec<i128>,
    pi: Vec<i128>,
}

/// Coordinate size class for drawing the raw (X, Y) pair. The tiny tiers
/// exist so that certificate pivots can be steered toward rows with small
/// entries before generic rows are even offered.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleTier {
    /// X is a signed standard basis vector, Y has entries in {-1, 0, 1}.
    Axis,
    /// X is a signed sum of two basis vectors, Y has entries in {-1, 0, 1}.
    Pair,
    /// Integer entries in [-3, 3].
    Small,
    /// Rational entries: numerators in [-10, 10] over one denominator <= 16
    /// per vector.
    Generic,
}

fn rat_over(n: i128, d: i128) -> Rat {
    Rat::new(n.into(), d.into())
}

fn dot(a: &[i128], b: &[i128]) -> i128 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn content_reduce(v: &mut [i128]) {
    let mut g: i128 = 0;
    for &e in v.iter() {
        g = num_integer::gcd(g, e.abs());
    }
    if g > 1 {
        for e in v.iter_mut() {
            *e /= g;
        }
    }
}

impl HorizontalSample {
    /// Builds a sample from integer direction vectors together with the
    /// denominators the rational coordinates carry. Fails if P comes out
    /// zero or any horizontality constraint is violated.
    fn from_integer_pair(
        qs: &QuatStructure,
        xi: Vec<i128>,
        yi: &[i128],
        dx: i128,
        dy: i128,
    ) -> Result<Option<Self>, Error> {
        let nx2 = dot(&xi, &xi);
        if nx2 == 0 {
            return Ok(None);
        }
        let mut pi: Vec<i128> = yi.iter().map(|&e| nx2 * e).collect();
        let cx = dot(yi, &xi);
        for (e, &xe) in pi.iter_mut().zip(&xi) {
            *e -= cx * xe;
        }
        for alpha in 1..=3 {
            let jx = qs.j_apply_int(alpha, &xi);
            let c = dot(yi, &jx);
            for (e, &je) in pi.iter_mut().zip(&jx) {
                *e -= c * je;
            }
        }
        if pi.iter().all(|&e| e == 0) {
            return Ok(None);
        }
        content_reduce(&mut pi);
        let mut xi = xi;
        content_reduce(&mut xi);

        // Exact horizontality check, in integers.
        if dot(&pi, &xi) != 0 {
            return Err(Error::claim("projected sample is not orthogonal to X"));
        }
        for alpha in 1..=3 {
            let jx = qs.j_apply_int(alpha, &xi);
            if dot(&pi, &jx) != 0 {
                return Err(Error::claim("projected sample is not horizontal"));
            }
        }

        let x: Vec<Rat> = xi.iter().map(|&e| rat_over(e, dx)).collect();
        // P inherits the product denominator of the two draws; any positive
        // rescaling of either vector is immaterial downstream.
        let p: Vec<Rat> = pi.iter().map(|&e| rat_over(e, dx * dy)).collect();
        Ok(Some(HorizontalSample { x, p, xi, pi }))
    }

    pub fn x(&self) -> &[Rat] {
        &self.x
    }

    pub fn p(&self) -> &[Rat] {
        &self.p
    }

    /// Primitive integer vector parallel to X.
    pub fn x_int(&self) -> &[i128] {
        &self.xi
    }

    /// Primitive integer vector parallel to P.
    pub fn p_int(&self) -> &[i128] {
        &self.pi
    }
}

fn draw_raw(tier: SampleTier, dim: usize, rng: &mut impl Rng) -> (Vec<i128>, Vec<i128>, i128, i128) {
    match tier {
        SampleTier::Axis => {
            let mut x = vec![0i128; dim];
            x[rng.gen_range(0..dim)] = if rng.gen::<bool>() { 1 } else { -1 };
            let y = (0..dim).map(|_| rng.gen_range(-1..=1)).collect();
            (x, y, 1, 1)
        }
        SampleTier::Pair => {
            let mut x = vec![0i128; dim];
            let s = rng.gen_range(0..dim);
            let mut t = rng.gen_range(0..dim);
            while t == s {
                t = rng.gen_range(0..dim);
            }
            x[s] = if rng.gen::<bool>() { 1 } else { -1 };
            x[t] = if rng.gen::<bool>() { 1 } else { -1 };
            let y = (0..dim).map(|_| rng.gen_range(-1..=1)).collect();
            (x, y, 1, 1)
        }
        SampleTier::Small => {
            let x = (0..dim).map(|_| rng.gen_range(-3..=3)).collect();
            let y = (0..dim).map(|_| rng.gen_range(-3..=3)).collect();
            (x, y, 1, 1)
        }
        SampleTier::Generic => {
            let x = (0..dim).map(|_| rng.gen_range(-10..=10)).collect();
            let y = (0..dim).map(|_| rng.gen_range(-10..=10)).collect();
            (x, y, rng.gen_range(1..=16), rng.gen_range(1..=16))
        }
    }
}

/// Draws `count` exact horizontal samples in the given tier, resampling
/// degenerate candidates. The resampling budget is generous but bounded so
/// a broken generator cannot loop forever.
pub fn sample_horizontal_tier(
    qs: &QuatStructure,
    tier: SampleTier,
    count: usize,
    rng: &mut impl Rng,
) -> Result<Vec<HorizontalSample>, Error> {
    let mut out = Vec::with_capacity(count);
    let mut budget = 64 * count + 64;
    while out.len() < count {
        if budget == 0 {
            return Err(Error::invalid("horizontal sampling exhausted its retry budget"));
        }
        budget -= 1;
        let (x, y, dx, dy) = draw_raw(tier, qs.dim(), rng);
        if let Some(s) = HorizontalSample::from_integer_pair(qs, x, &y, dx, dy)? {
            out.push(s);
        }
    }
    Ok(out)
}

/// Generic-tier sampling; the main entry point for the kernel suites.
pub fn sample_horizontal(
    qs: &QuatStructure,
    count: usize,
    rng: &mut impl Rng,
) -> Result<Vec<HorizontalSample>, Error> {
    sample_horizontal_tier(qs, SampleTier::Generic, count, rng)
}

/// Mixed plan used by the pairing suites: tiny rows first so they are
/// preferred as pivots, then generic rows for coverage.
pub fn sample_horizontal_plan(
    qs: &QuatStructure,
    plan: &[(SampleTier, usize)],
    rng: &mut impl Rng,
) -> Result<Vec<HorizontalSample>, Error> {
    let mut out = Vec::new();
    for &(tier, count) in plan {
        out.extend(sample_horizontal_tier(qs, tier, count, rng)?);
    }
    Ok(out)
}
