//! Exact rationals as used in the file formats: `"p/q"`, integers, or
//! finite decimals such as `"0.125"`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

pub type Rational = BigRational;

pub fn parse(text: &str) -> Result<Rational> {
    let t = text.trim();
    if t.is_empty() {
        return Err(Error::input("empty rational"));
    }
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = parse_int(p, text)?;
        let q: BigInt = parse_int(q, text)?;
        if q.is_zero() {
            return Err(Error::input(format!("zero denominator in `{text}`")));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        let negative = whole.trim_start().starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::input(format!("malformed decimal `{text}`")));
        }
        let w: BigInt = if whole_digits.is_empty() {
            BigInt::zero()
        } else {
            parse_int(whole_digits, text)?
        };
        let f: BigInt = parse_int(frac, text)?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let mag = Rational::new(w * &scale + f, scale);
        return Ok(if negative { -mag } else { mag });
    }
    Ok(Rational::from_integer(parse_int(t, text)?))
}

fn parse_int(part: &str, whole: &str) -> Result<BigInt> {
    let p = part.trim();
    let digits = p.strip_prefix(['-', '+']).unwrap_or(p);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::input(format!("malformed rational `{whole}`")));
    }
    p.parse::<BigInt>()
        .map_err(|_| Error::input(format!("malformed rational `{whole}`")))
}

/// Reduced `p/q`, or just `p` when the value is an integer.
pub fn format(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

pub fn from_ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}
