//! Arbitrary-precision rationals and their canonical string form.
//!
//! `Rat` is always kept reduced with a positive denominator (the `num`
//! constructors guarantee this). The string form is `"p"` for integers and
//! `"p/q"` otherwise; it round-trips exactly and is the only form that ever
//! appears in JSON artifacts.

use crate::error::Error;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub type Int = BigInt;
pub type Rat = num_rational::BigRational;

pub fn int(n: i64) -> Int {
    Int::from(n)
}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(int(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    assert!(d != 0, "zero denominator");
    Rat::new(int(n), int(d))
}

pub fn rat_of(n: Int) -> Rat {
    Rat::from_integer(n)
}

pub fn rat_str(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rat(s: &str) -> Result<Rat, Error> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<Int, Error> {
        t.parse::<Int>()
            .map_err(|_| Error::invalid(format!("bad integer literal {t:?}")))
    };
    match s.split_once('/') {
        None => Ok(Rat::from_integer(parse_int(s)?)),
        Some((p, q)) => {
            let num = parse_int(p)?;
            let den = parse_int(q)?;
            if den.is_zero() {
                return Err(Error::invalid(format!("zero denominator in {s:?}")));
            }
            Ok(Rat::new(num, den))
        }
    }
}

/// Least common multiple of the denominators of a slice of rationals.
pub fn denom_lcm(rs: &[Rat]) -> Int {
    let mut l = Int::one();
    for r in rs {
        l = num_integer::lcm(l, r.denom().clone());
    }
    l
}

/// Greatest common divisor of the numerators, ignoring zeros.
pub fn numer_gcd(rs: &[Rat]) -> Int {
    let mut g = Int::zero();
    for r in rs {
        if !r.is_zero() {
            g = num_integer::gcd(g, r.numer().abs());
        }
    }
    g
}

/// Scales a vector of rationals to a primitive integer vector: multiplies by
/// the denominator lcm and divides by the numerator gcd. Returns the integer
/// vector together with the positive rational factor `f` such that
/// `ints = f * input`. All-zero input returns the zero vector and factor 1.
pub fn primitive_scale(rs: &[Rat]) -> (Vec<Int>, Rat) {
    let l = denom_lcm(rs);
    let scaled: Vec<Int> = rs
        .iter()
        .map(|r| r.numer() * (&l / r.denom()))
        .collect();
    let mut g = Int::zero();
    for v in &scaled {
        if !v.is_zero() {
            g = num_integer::gcd(g, v.abs());
        }
    }
    if g.is_zero() {
        return (scaled, Rat::one());
    }
    let ints: Vec<Int> = scaled.iter().map(|v| v / &g).collect();
    (ints, Rat::new(l, g))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn string_form_round_trips() {
        for s in ["0", "7", "-3", "22/7", "-5/9"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(rat_str(&r), s);
        }
    }

    #[test]
    fn parse_reduces_to_canonical_form() {
        assert_eq!(rat_str(&parse_rat("4/6").unwrap()), "2/3");
        assert_eq!(rat_str(&parse_rat("3/-6").unwrap()), "-1/2");
        assert_eq!(rat_str(&parse_rat("-0/5").unwrap()), "0");
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("a/2").is_err());
        assert!(parse_rat("1/2/3").is_err());
        assert!(parse_rat("").is_err());
    }

    #[test]
    fn primitive_scaling() {
        let v = [ratio(2, 3), ratio(-4, 9), rat(0), rat(2)];
        let (ints, f) = primitive_scale(&v);
        assert_eq!(ints, vec![int(3), int(-2), int(0), int(9)]);
        // f = 9/2: (2/3)*(9/2) = 3.
        assert_eq!(f, ratio(9, 2));
        for (i, r) in v.iter().enumerate() {
            assert_eq!(rat_of(ints[i].clone()), r * &f);
        }
    }

    #[test]
    fn primitive_scale_of_zero_vector() {
        let v = [rat(0), rat(0)];
        let (ints, f) = primitive_scale(&v);
        assert_eq!(ints, vec![int(0), int(0)]);
        assert_eq!(f, rat(1));
    }
}
