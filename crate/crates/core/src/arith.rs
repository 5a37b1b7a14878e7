//! Exact scalars.
//!
//! Every quantity in the crate is a [`Rat`], an arbitrary-precision rational
//! kept in canonical form (`gcd(|p|, q) = 1`, `q > 0`). The helpers here cover
//! the factorial-type products that show up in the formulas: ordinary
//! factorials, odd double factorials (extended to `-1` and `-3`), and ratios of
//! Gamma functions at half-integer arguments.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{CheckedDiv, One, Zero};

use crate::error::{domain, Error, Result};

pub type Rat = BigRational;

pub fn int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

pub fn frac(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

pub fn checked_div(a: &Rat, b: &Rat) -> Result<Rat> {
    a.checked_div(b)
        .ok_or_else(|| domain!("division of {a} by zero"))
}

/// `base^exp` for a possibly negative exponent.
pub fn pow(base: &Rat, exp: i64) -> Result<Rat> {
    if exp >= 0 {
        return Ok(num_traits::pow(base.clone(), exp as usize));
    }
    if base.is_zero() {
        return Err(domain!("zero raised to negative power {exp}"));
    }
    Ok(num_traits::pow(base.recip(), exp.unsigned_abs() as usize))
}

pub fn factorial(k: i64) -> Result<Rat> {
    if k < 0 {
        return Err(domain!("factorial of negative integer {k}"));
    }
    let mut acc = BigInt::one();
    for j in 2..=k {
        acc *= j;
    }
    Ok(Rat::from_integer(acc))
}

/// `k!!` for odd `k >= -3`, with `(-1)!! = 1` and `(-3)!! = -1`.
pub fn double_factorial_odd(k: i64) -> Result<Rat> {
    if k % 2 == 0 || k < -3 {
        return Err(domain!("odd double factorial needs odd k >= -3, got {k}"));
    }
    match k {
        -3 => Ok(-Rat::one()),
        -1 => Ok(Rat::one()),
        _ => {
            let mut acc = BigInt::one();
            let mut j = k;
            while j > 1 {
                acc *= j;
                j -= 2;
            }
            Ok(Rat::from_integer(acc))
        }
    }
}

/// `Γ(a/2 + shift) / Γ(a/2)` for odd `a`, as the telescoping product
/// `Π_{j=0}^{shift-1} (a/2 + j)` (reciprocal product for negative shifts).
pub fn gamma_half_ratio(a_num: i64, shift: i64) -> Result<Rat> {
    if a_num % 2 == 0 {
        return Err(domain!("gamma_half_ratio needs an odd numerator, got {a_num}"));
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    if shift >= 0 {
        for j in 0..shift {
            num *= a_num + 2 * j;
            den *= 2;
        }
    } else {
        // Γ(x - m)/Γ(x) = 1 / Π_{j=1}^{m} (x - j)
        for j in 1..=(-shift) {
            den *= a_num - 2 * j;
            num *= 2;
        }
    }
    Ok(Rat::new(num, den))
}

/// Canonical text: `p/q`, or `p` when `q = 1`.
pub fn format_rat(r: &Rat) -> String {
    r.to_string()
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p, q),
        None => (s, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(p, q))
}

/// Parse and insist the text was already canonical.
pub fn parse_rat_canonical(s: &str) -> Result<Rat> {
    let r = parse_rat(s)?;
    if format_rat(&r) != s.trim() {
        return Err(Error::Parse(format!("non-canonical rational {s:?}")));
    }
    Ok(r)
}
