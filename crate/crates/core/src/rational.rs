//! Arbitrary-precision rationals and small integer utilities.
//!
//! `Rational` is always in lowest terms with positive denominator; that
//! invariant is maintained by `num-rational` itself.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    acc
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Canonical string form: `p/q` in lowest terms, `p` when the denominator
/// is one. This is the only rational syntax accepted by manifests.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `p` or `p/q` with optional leading `-`. Rejects q = 0 and empty
/// input; whitespace is not trimmed.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = |m: &str| Error::Domain(format!("bad rational {s:?}: {m}"));
    let (np, dp) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let num: BigInt = np.parse().map_err(|_| bad("unparseable numerator"))?;
    let den: BigInt = match dp {
        Some(d) => d.parse().map_err(|_| bad("unparseable denominator"))?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Rational::new(num, den))
}

/// `true` when |r| can round-trip through f64 exactly enough for display.
pub fn to_f64(r: &Rational) -> f64 {
    // num_rational's to_f64 handles overflow to infinity, which is fine for
    // the float-only lattice oracle display paths.
    num_traits::ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
}

pub fn is_negative(r: &Rational) -> bool {
    r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "5", "-5", "1/120", "-1/252", "355/113"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(format_rational(&r), s);
        }
        // non-canonical input parses to canonical form
        assert_eq!(format_rational(&parse_rational("2/4").unwrap()), "1/2");
        assert_eq!(format_rational(&parse_rational("3/1").unwrap()), "3");
        assert_eq!(format_rational(&parse_rational("4/-2").unwrap()), "-2");
    }

    #[test]
    fn parse_rejects_garbage() {
        for s in ["", "/", "1/", "/2", "1/0", "a", "1.5", "1 /2"] {
            assert!(parse_rational(s).is_err(), "accepted {s:?}");
        }
    }

    #[test]
    fn binomial_matches_pascal() {
        for n in 0..12u64 {
            for k in 0..=n {
                let lhs = binomial(n + 1, k + 1);
                let rhs = binomial(n, k) + binomial(n, k + 1);
                assert_eq!(lhs, rhs);
            }
        }
        assert_eq!(binomial(10, 3), BigInt::from(120));
    }

    #[test]
    fn factorial_small() {
        assert_eq!(factorial(0), BigInt::from(1));
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(factorial(10), BigInt::from(3628800));
    }
}
