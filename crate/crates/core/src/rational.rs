//! Exact rational helpers: parsing from `"p/q"` and decimal strings, canonical
//! formatting, and serde adapters that store rationals as strings.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Parses `"p/q"`, an integer, or a plain decimal such as `"0.35"` exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = |reason| Error::Rational {
        text: text.to_string(),
        reason,
    };
    let s = text.trim();
    if s.is_empty() {
        return Err(bad("empty string"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = parse_integer(num).ok_or_else(|| bad("bad numerator"))?;
        let den: BigInt = parse_integer(den).ok_or_else(|| bad("bad denominator"))?;
        if den.is_zero() {
            return Err(bad("zero denominator"));
        }
        return Ok(Rational::new(num, den));
    }
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad("no digits"));
    }
    let all_digits = |p: &str| p.bytes().all(|b| b.is_ascii_digit());
    if !all_digits(int_part) || !all_digits(frac_part) {
        return Err(bad("not a decimal or p/q rational"));
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| bad("bad digits"))?
    };
    let denom = num_traits::pow(BigInt::from(10u32), frac_part.len());
    let value = Rational::new(numer, denom);
    Ok(if negative { -value } else { value })
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let s = s.trim();
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Canonical `"p/q"` form, or `"p"` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Shortest round-trip decimal form of the nearest `f64`.
pub fn format_decimal(r: &Rational) -> String {
    format!("{}", to_f64(r))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Huge numerator/denominator pairs overflow the direct conversion.
        let shift = r.numer().bits().max(r.denom().bits()) as i64 - 1000;
        let shift = shift.max(0) as usize;
        let n = (r.numer() >> shift).to_f64().unwrap_or(0.0);
        let d = (r.denom() >> shift).to_f64().unwrap_or(1.0);
        n / d
    })
}

/// Exact conversion of a finite `f64`.
pub fn from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `2^n` for any integer `n`.
pub fn pow2(n: i64) -> Rational {
    let p = BigInt::one() << n.unsigned_abs() as usize;
    if n >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

/// The unique `n` with `2^n < v <= 2^(n+1)`, for `v > 0`.
pub fn dyadic_exponent(v: &Rational) -> i64 {
    assert!(v.is_positive(), "dyadic exponent of a nonpositive value");
    let guess = v.numer().bits() as i64 - v.denom().bits() as i64;
    let mut n = guess - 1;
    // The bit-length estimate is off by at most one in either direction.
    while pow2(n + 1) < *v {
        n += 1;
    }
    while pow2(n) >= *v {
        n -= 1;
    }
    n
}

/// Smallest integer `j >= 1` with `j >= x`.
pub fn ceil_at_least_one(x: &Rational) -> BigInt {
    x.ceil().to_integer().max(BigInt::one())
}

pub fn is_probability_open(p: &Rational) -> bool {
    p.is_positive() && *p < Rational::one()
}

/// serde adapter: a rational stored as its canonical string.
pub mod serde_string {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(de::Error::custom)
    }
}

/// serde adapter for `Option<Rational>`.
pub mod serde_opt_string {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        r: &Option<Rational>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_str(&format_rational(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|t| parse_rational(&t).map_err(de::Error::custom))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("7/20").unwrap(), ratio(7, 20));
        assert_eq!(parse_rational("0.35").unwrap(), ratio(7, 20));
        assert_eq!(parse_rational("2").unwrap(), int(2));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("-1.25").unwrap(), ratio(-5, 4));
        assert_eq!(parse_rational("6/4").unwrap(), ratio(3, 2));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "1/0", "abc", "1e-3", "1.2.3", "/3", "."] {
            assert!(parse_rational(bad).is_err(), "{bad:?} accepted");
        }
    }

    #[test]
    fn canonical_formatting() {
        assert_eq!(format_rational(&ratio(14, 40)), "7/20");
        assert_eq!(format_rational(&int(3)), "3");
        assert_eq!(format_rational(&int(0)), "0");
    }

    #[test]
    fn dyadic_exponents() {
        assert_eq!(dyadic_exponent(&ratio(7, 10)), -1);
        assert_eq!(dyadic_exponent(&ratio(3, 2)), 0);
        assert_eq!(dyadic_exponent(&int(2)), 0);
        assert_eq!(dyadic_exponent(&int(1)), -1);
        assert_eq!(dyadic_exponent(&ratio(1, 1024)), -11);
        assert_eq!(dyadic_exponent(&int(1000)), 9);
    }

    #[test]
    fn ceil_at_least_one_cases() {
        assert_eq!(ceil_at_least_one(&int(4)), BigInt::from(4));
        assert_eq!(ceil_at_least_one(&ratio(9, 2)), BigInt::from(5));
        assert_eq!(ceil_at_least_one(&ratio(1, 9)), BigInt::from(1));
        assert_eq!(ceil_at_least_one(&int(0)), BigInt::from(1));
    }


    proptest::proptest! {
        #[test]
        fn format_parse_roundtrip(n in -10_000i64..10_000, d in 1i64..10_000) {
            let r = ratio(n, d);
            let text = format_rational(&r);
            proptest::prop_assert_eq!(parse_rational(&text).unwrap(), r);
        }

        #[test]
        fn dyadic_exponent_brackets(n in 1i64..1_000_000, d in 1i64..1_000_000) {
            let v = ratio(n, d);
            let e = dyadic_exponent(&v);
            proptest::prop_assert!(pow2(e) < v && v <= pow2(e + 1));
        }
    }
}
