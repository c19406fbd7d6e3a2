//! Exact rational helpers on top of `num`'s arbitrary-precision types.

use num::bigint::BigInt;
use num::integer::Integer;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn from_big(n: &BigInt) -> Rational {
    Rational::from_integer(n.clone())
}

/// Canonical exact rendering: `p` for integers, `p/q` otherwise.
pub fn render(q: &Rational) -> String {
    q.to_string()
}

/// Parses `a`, `-a`, `a/b` with arbitrary-precision components.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::Parse(format!("invalid rational '{text}'"));
    if t.is_empty() {
        return Err(bad());
    }
    match t.split_once('/') {
        None => t
            .parse::<BigInt>()
            .map(Rational::from_integer)
            .map_err(|_| bad()),
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in '{text}'")));
            }
            Ok(Rational::new(n, d))
        }
    }
}

/// Least integer strictly greater than `q`.
pub fn least_integer_above(q: &Rational) -> BigInt {
    q.floor().to_integer() + BigInt::one()
}

/// Least integer greater than or equal to `q`.
pub fn least_integer_at_least(q: &Rational) -> BigInt {
    q.ceil().to_integer()
}

/// Decimal approximation rounded half away from zero to at most `digits`
/// fractional digits, trailing zeros trimmed.
pub fn to_decimal(q: &Rational, digits: usize) -> String {
    let scale = num::pow(BigInt::from(10), digits);
    let abs = q.abs();
    let scaled = abs.numer() * &scale;
    let (mut units, rem) = scaled.div_rem(abs.denom());
    if rem.clone() * 2 >= *abs.denom() {
        units += 1;
    }
    let (whole, frac) = units.div_rem(&scale);
    let mut out = String::new();
    if q.is_negative() && !units.is_zero() {
        out.push('-');
    }
    out.push_str(&whole.to_string());
    if !frac.is_zero() {
        let s = format!("{:0>width$}", frac.to_string(), width = digits);
        out.push('.');
        out.push_str(s.trim_end_matches('0'));
    }
    out
}

/// Exact square root when `q` is the square of a rational.
pub fn exact_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Rational bracket `[lo, hi]` around `sqrt(q)` with `hi - lo <= width`.
/// Degenerates to a single point when the root is rational.
pub fn sqrt_bracket(q: &Rational, width: &Rational) -> (Rational, Rational) {
    assert!(!q.is_negative(), "sqrt of negative rational");
    if let Some(s) = exact_sqrt(q) {
        return (s.clone(), s);
    }
    let a = q.floor().to_integer().sqrt();
    let mut lo = Rational::from_integer(a.clone());
    let mut hi = Rational::from_integer(a + 1);
    let two = int(2);
    while &hi - &lo > *width {
        let mid = (&lo + &hi) / &two;
        if &mid * &mid <= *q {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// Integer upper bound on `sqrt(q)` for `q >= 0`.
pub fn sqrt_ceil(q: &Rational) -> BigInt {
    let c = q.ceil().to_integer();
    if c.is_negative() {
        return BigInt::zero();
    }
    let s = c.sqrt();
    if &s * &s < c {
        s + 1
    } else {
        s
    }
}
