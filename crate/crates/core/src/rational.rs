//! Exact rational scalars and their `"p/q"` wire form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Always writes `numer/denom`, including integers (`"3/1"`).
pub fn to_wire(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `"p/q"` or a bare integer `"p"`; the result is reduced.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Schema(format!("malformed rational {s:?}"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    if p.contains('.') || q.contains('.') {
        return Err(bad());
    }
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(Error::Schema(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(p, q))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wire_form_is_reduced() {
        assert_eq!(to_wire(&parse("2/4").unwrap()), "1/2");
        assert_eq!(to_wire(&parse("-3").unwrap()), "-3/1");
        assert_eq!(to_wire(&parse("0/7").unwrap()), "0/1");
        assert_eq!(parse("1/-2").unwrap(), ratio(-1, 2));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse("1/0").is_err());
        assert!(parse("0.5").is_err());
        assert!(parse("x").is_err());
    }
}
