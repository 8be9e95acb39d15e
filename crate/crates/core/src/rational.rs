//! Exact rational scalars.
//!
//! Every coefficient, Gram entry, weight and mode index in the crate is a
//! [`Rational`]; nothing is ever rounded.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

pub use num_rational::BigRational as Rational;

/// Builds `num / den` in lowest terms. Panics if `den == 0`.
pub fn q(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// The integer `n` as a rational.
pub fn qi(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Returns `Some(n)` when `r` is an integer that fits in an `i64`.
pub fn to_i64(r: &Rational) -> Option<i64> {
    if r.is_integer() {
        r.to_integer().to_i64()
    } else {
        None
    }
}

/// Generalized binomial coefficient `C(n, k)` for any integer `n` and `k >= 0`.
pub fn binomial(n: i64, k: u64) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k as i64 {
        acc *= qi(n - i);
        acc /= qi(i + 1);
    }
    acc
}

/// `1 / k!` as a rational.
pub fn inv_factorial(k: u64) -> Rational {
    let mut den = BigInt::one();
    for i in 2..=k {
        den *= BigInt::from(i);
    }
    Rational::new(BigInt::one(), den)
}

/// Formats `r` as `p` or `p/q`, the textual form used throughout reports
/// and the element grammar.
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `-p`, `p/q` or `-p/q`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let valid_int = |t: &str, signed: bool| {
        let digits = if signed { t.strip_prefix('-').unwrap_or(t) } else { t };
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid_int(num, true) {
        return None;
    }
    let n: BigInt = num.parse().ok()?;
    match den {
        None => Some(Rational::from_integer(n)),
        Some(d) => {
            if !valid_int(d, false) {
                return None;
            }
            let d: BigInt = d.parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
    }
}

/// Least common multiple of the denominators of `values` (1 for an empty list).
pub fn denominator_lcm<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let r = q(6, -4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
        assert_eq!(fmt_rational(&r), "-3/2");
        assert_eq!(fmt_rational(&qi(7)), "7");
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["0", "-4", "2/3", "-17/6"] {
            assert_eq!(fmt_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(parse_rational("4/6").unwrap(), q(2, 3));
        for bad in ["", "-", "1/0", "1/-2", "x", "1.5", "--1"] {
            assert!(parse_rational(bad).is_none(), "{bad}");
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), qi(10));
        assert_eq!(binomial(-1, 3), qi(-1));
        assert_eq!(binomial(-2, 2), qi(3));
        assert_eq!(binomial(3, 5), qi(0));
        assert_eq!(inv_factorial(4), q(1, 24));
    }
}
