//! Exact rational parsing and rendering shared by the parameter types.

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Ratio};
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Parses `"3/10"`, `"0.3"`, `"1"` or `"2.5e-3"`-free decimals into an
/// exact reduced ratio of machine integers.
pub fn parse_ratio(text: &str) -> Result<Ratio<u64>> {
    let big = parse_big_ratio(text)?;
    if big < BigRational::zero() {
        return Err(Error::InvalidParameter(format!("{text:?} is negative")));
    }
    let num = big.numer().to_u64();
    let den = big.denom().to_u64();
    match (num, den) {
        (Some(n), Some(d)) => Ok(Ratio::new(n, d)),
        _ => Err(Error::InvalidParameter(format!(
            "{text:?} does not fit a 64-bit ratio"
        ))),
    }
}

pub fn parse_big_ratio(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || Error::InvalidParameter(format!("cannot parse {text:?} as an exact number"));
    if let Some((a, b)) = t.split_once('/') {
        let num: BigInt = a.trim().parse().map_err(|_| bad())?;
        let den: BigInt = b.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(num, den));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let all_digits = |s: &str| s.chars().all(|c| c.is_ascii_digit());
    if !all_digits(int_part) || !all_digits(frac_part) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let num: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad())? };
    let den = BigInt::from(10u32).pow(frac_part.len() as u32);
    let r = BigRational::new(num, den);
    Ok(if neg { -r } else { r })
}

pub fn to_big(r: Ratio<u64>) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

pub fn big_int(n: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(n.clone()))
}

/// `"a/b"`, or `"a"` for integers.
pub fn exact_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn ratio_string(r: Ratio<u64>) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Display-only decimal rendering.
pub fn decimal(x: f64) -> String {
    if x == 0.0 || (1e-4..1e15).contains(&x.abs()) {
        let s = format!("{x:.10}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        s.to_string()
    } else {
        format!("{x:.10e}")
    }
}

pub fn big_decimal(r: &BigRational) -> String {
    decimal(r.to_f64().unwrap_or(f64::NAN))
}

/// `ceil(a / b)` on machine integers.
#[inline]
pub fn ceil_div(a: u128, b: u128) -> u128 {
    a.div_ceil(b)
}
