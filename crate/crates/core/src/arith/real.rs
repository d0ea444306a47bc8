//! Outward-rounded transcendental operations on [`CertifiedValue`].
//!
//! Every function maps an enclosure to an enclosure: lower endpoints are
//! computed with MPFR rounding toward -inf and upper endpoints toward +inf,
//! and monotonicity of the underlying function carries the bound through.

use rug::float::Round;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use super::certified::CertifiedValue;
use crate::error::{Error, Result};

pub(crate) fn down(q: &Rational, prec: u32) -> Float {
    Float::with_val_round(prec, q, Round::Down).0
}

pub(crate) fn up(q: &Rational, prec: u32) -> Float {
    Float::with_val_round(prec, q, Round::Up).0
}

/// Exponent magnitude above which rational powers go through `exp(e ln b)`
/// instead of exact integer powering.
const EXACT_POWER_LIMIT: u32 = 256;

pub fn ln(x: &CertifiedValue, prec: u32) -> Result<CertifiedValue> {
    if *x.lo() <= 0 {
        return Err(Error::domain("logarithm of a non-positive enclosure"));
    }
    if x.exact_value().is_some_and(|v| *v == 1) {
        return Ok(CertifiedValue::exact(0));
    }
    let mut lo = down(x.lo(), prec);
    lo.ln_round(Round::Down);
    let mut hi = up(x.hi(), prec);
    hi.ln_round(Round::Up);
    Ok(CertifiedValue::from_floats(&lo, &hi))
}

pub fn ln_rational(q: &Rational, prec: u32) -> Result<CertifiedValue> {
    ln(&CertifiedValue::exact(q.clone()), prec)
}

pub fn exp(x: &CertifiedValue, prec: u32) -> CertifiedValue {
    if x.exact_value().is_some_and(|v| *v == 0) {
        return CertifiedValue::exact(1);
    }
    let mut lo = down(x.lo(), prec);
    lo.exp_round(Round::Down);
    let mut hi = up(x.hi(), prec);
    hi.exp_round(Round::Up);
    CertifiedValue::from_floats(&lo, &hi)
}

/// Exact `k`-th root of a non-negative integer, if it is a perfect power.
pub fn exact_root(m: &Integer, k: u32) -> Option<Integer> {
    if *m < 0 {
        return None;
    }
    let r = Integer::from(m.root_ref(k));
    (Integer::from((&r).pow(k)) == *m).then_some(r)
}

/// Enclosure of `m^(1/k)` for an integer `m >= 0`; exact for perfect powers.
pub fn root_integer(m: &Integer, k: u32, prec: u32) -> CertifiedValue {
    if let Some(r) = exact_root(m, k) {
        return CertifiedValue::exact(r);
    }
    let mut lo = Float::with_val_round(prec, m, Round::Down).0;
    lo.root_round(k, Round::Down);
    let mut hi = Float::with_val_round(prec, m, Round::Up).0;
    hi.root_round(k, Round::Up);
    CertifiedValue::from_floats(&lo, &hi)
}

/// Enclosure of `q^(1/k)` for a rational `q > 0`; exact when both numerator
/// and denominator are perfect `k`-th powers.
pub fn root_rational(q: &Rational, k: u32, prec: u32) -> Result<CertifiedValue> {
    if *q <= 0 {
        return Err(Error::domain("root of a non-positive rational"));
    }
    if let (Some(n), Some(d)) = (exact_root(q.numer(), k), exact_root(q.denom(), k)) {
        return Ok(CertifiedValue::exact(Rational::from((n, d))));
    }
    let mut lo = down(q, prec);
    lo.root_round(k, Round::Down);
    let mut hi = up(q, prec);
    hi.root_round(k, Round::Up);
    Ok(CertifiedValue::from_floats(&lo, &hi))
}

/// Enclosure of `base^e` for rational `base > 0` and rational `e`.
pub fn pow_rational(base: &Rational, e: &Rational, prec: u32) -> Result<CertifiedValue> {
    if *base <= 0 {
        return Err(Error::domain("power of a non-positive base"));
    }
    if *e == 0 || *base == 1 {
        return Ok(CertifiedValue::exact(1));
    }
    let num = e.numer().clone().abs();
    let den = e.denom();
    match (num.to_u32(), den.to_u32()) {
        (Some(p), Some(q)) if p <= EXACT_POWER_LIMIT => {
            let powered = Rational::from(base.pow(p));
            let v = if q == 1 {
                CertifiedValue::exact(powered)
            } else {
                root_rational(&powered, q, prec)?
            };
            if *e < 0 {
                v.recip()
            } else {
                Ok(v)
            }
        }
        _ => {
            let l = ln_rational(base, prec)?;
            Ok(exp(&l.scale(e), prec))
        }
    }
}

/// Enclosure of `base^e` for rational `base > 0` and a certified exponent.
pub fn pow_real(base: &Rational, e: &CertifiedValue, prec: u32) -> Result<CertifiedValue> {
    if let Some(v) = e.exact_value() {
        return pow_rational(base, v, prec);
    }
    if *base == 1 {
        return Ok(CertifiedValue::exact(1));
    }
    let l = ln_rational(base, prec)?;
    Ok(exp(&e.mul(&l).round_out(prec + 16), prec))
}
