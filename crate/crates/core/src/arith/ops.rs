use rug::ops::Pow;
use rug::{Integer, Rational};

use super::certified::{CertifiedValue, Truth};
use super::exponent::{integer_to_u64, Exponent};
use super::policy::PrecisionPolicy;
use super::real;
use crate::error::{Error, Result};

/// Enclosure of `n^alpha` at `prec` bits.
///
/// Exact when `alpha = p/q` and `n` is a perfect `q`-th power.
pub fn pow_at(n: u64, alpha: &Exponent, prec: u32) -> CertifiedValue {
    if n == 1 {
        return CertifiedValue::exact(1);
    }
    match *alpha {
        Exponent::Rational { p, q } => {
            let base = Integer::from(n);
            if let Some(r) = real::exact_root(&base, q) {
                return CertifiedValue::exact(r.pow(p));
            }
            real::root_integer(&base.pow(p), q, prec)
        }
        Exponent::Named(_) => {
            let l = real::ln_rational(&Rational::from(n), prec + 8).expect("n >= 1");
            let e = alpha.enclose(prec + 8);
            real::exp(&e.mul(&l).round_out(prec + 8), prec)
        }
    }
}

/// Enclosure of `n^alpha` at the policy's starting precision.
///
/// Later precisions only shrink the enclosure; callers that need a decision
/// use [`floor_pow_with`] or escalate through [`PrecisionPolicy::escalate`].
pub fn pow_certified(n: u64, alpha: &Exponent, policy: &PrecisionPolicy) -> Result<CertifiedValue> {
    if n == 0 {
        return Err(Error::domain("pow_certified requires n >= 1"));
    }
    Ok(pow_at(n, alpha, policy.start_bits))
}

/// `⌊n^alpha⌋`, exact.
pub fn floor_pow(n: u64, alpha: &Exponent) -> Result<u64> {
    floor_pow_with(n, alpha, &PrecisionPolicy::default())
}

pub fn floor_pow_with(n: u64, alpha: &Exponent, policy: &PrecisionPolicy) -> Result<u64> {
    if n == 0 {
        return Err(Error::domain("floor_pow requires n >= 1"));
    }
    match *alpha {
        Exponent::Rational { p, q } => floor_rational_power(n, p, q),
        Exponent::Named(_) => policy.escalate(
            || format!("floor({n}^{alpha})"),
            |prec| {
                pow_at(n, alpha, prec)
                    .floor()
                    .map(|f| integer_to_u64(&f, "floor_pow"))
                    .transpose()
            },
        ),
    }
}

/// `⌊n^(p/q)⌋ = ⌊(n^p)^(1/q)⌋` by exact integer root extraction.
pub(crate) fn floor_rational_power(n: u64, p: u32, q: u32) -> Result<u64> {
    if let Some(np) = (n as u128).checked_pow(p) {
        let r = iroot_u128(np, q);
        return u64::try_from(r).map_err(|_| Error::Overflow(format!("floor({n}^({p}/{q}))")));
    }
    let r = Integer::from(n).pow(p).root(q);
    integer_to_u64(&r, "floor_pow")
}

/// `⌈m^(1/alpha)⌉`, exact.
pub fn root_ceil(m: u64, alpha: &Exponent) -> Result<u64> {
    root_ceil_with(m, alpha, &PrecisionPolicy::default())
}

pub fn root_ceil_with(m: u64, alpha: &Exponent, policy: &PrecisionPolicy) -> Result<u64> {
    if m == 0 {
        return Err(Error::domain("root_ceil requires m >= 1"));
    }
    match *alpha {
        // smallest k with k^p >= m^q
        Exponent::Rational { p, q } => {
            if let Some(mq) = (m as u128).checked_pow(q) {
                let k = iroot_u128(mq, p);
                let exact = k.checked_pow(p) == Some(mq);
                return u64::try_from(if exact { k } else { k + 1 })
                    .map_err(|_| Error::Overflow("root_ceil".into()));
            }
            let mq = Integer::from(m).pow(q);
            let k = Integer::from(mq.root_ref(p));
            let k = if Integer::from((&k).pow(p)) == mq { k } else { k + 1 };
            integer_to_u64(&k, "root_ceil")
        }
        Exponent::Named(_) => policy.escalate(
            || format!("ceil({m}^(1/{alpha}))"),
            |prec| {
                root_alpha_at(m, alpha, prec)?
                    .ceil()
                    .map(|c| integer_to_u64(&c, "root_ceil"))
                    .transpose()
            },
        ),
    }
}

/// Enclosure of `m^(1/alpha)`; exact when `alpha = p/q` and `m^q` is a
/// perfect `p`-th power.
pub fn root_alpha_at(m: u64, alpha: &Exponent, prec: u32) -> Result<CertifiedValue> {
    if m == 0 {
        return Ok(CertifiedValue::exact(0));
    }
    match *alpha {
        Exponent::Rational { p, q } => Ok(real::root_integer(&Integer::from(m).pow(q), p, prec)),
        Exponent::Named(_) => {
            let l = real::ln_rational(&Rational::from(m), prec + 8)?;
            let inv = alpha.enclose(prec + 8).recip()?;
            Ok(real::exp(&l.mul(&inv).round_out(prec + 8), prec))
        }
    }
}

/// Enclosure of `r^(1/alpha)` for a positive rational `r`.
pub fn rational_root_alpha_at(r: &Rational, alpha: &Exponent, prec: u32) -> Result<CertifiedValue> {
    match *alpha {
        Exponent::Rational { p, q } => real::root_rational(&Rational::from(r.pow(q)), p, prec),
        Exponent::Named(_) => {
            let l = real::ln_rational(r, prec + 8)?;
            let inv = alpha.enclose(prec + 8).recip()?;
            Ok(real::exp(&l.mul(&inv).round_out(prec + 8), prec))
        }
    }
}

/// Certified fractional part `{n^alpha}`.
pub fn frac_pow(n: u64, alpha: &Exponent) -> Result<CertifiedValue> {
    frac_pow_with(n, alpha, &PrecisionPolicy::default())
}

pub fn frac_pow_with(n: u64, alpha: &Exponent, policy: &PrecisionPolicy) -> Result<CertifiedValue> {
    let m = Rational::from(floor_pow_with(n, alpha, policy)?);
    let v = pow_certified(n, alpha, policy)?;
    if let Some(x) = v.exact_value() {
        return Ok(CertifiedValue::exact(Rational::from(x - &m)));
    }
    let lo = Rational::from(v.lo() - &m).max(Rational::new());
    let hi = Rational::from(v.hi() - &m).min(Rational::from(1));
    Ok(CertifiedValue::new(lo, hi))
}

/// Fractional part of an enclosure, when its floor is determined.
pub fn frac_of(x: &CertifiedValue) -> Option<CertifiedValue> {
    let f = Rational::from(x.floor()?);
    Some(x.add_rational(&(-f)))
}

/// Certified distance to the nearest integer, `‖x‖ ∈ [0, 1/2]`.
///
/// Fails with [`Error::AmbiguousRounding`] when the enclosure is wider than
/// 1/2, since the bound would then carry no information.
pub fn dist_nearest_int(x: &CertifiedValue) -> Result<CertifiedValue> {
    let half = Rational::from((1, 2));
    if x.width() > half {
        return Err(Error::AmbiguousRounding {
            width: x.width().to_f64(),
        });
    }
    let d = |v: &Rational| -> Rational {
        let nearest = Rational::from(super::certified::floor_rational(&Rational::from(v + &half)));
        Rational::from(v - &nearest).abs()
    };
    let (dl, dh) = (d(x.lo()), d(x.hi()));
    if x.is_exact() {
        return Ok(CertifiedValue::exact(dl));
    }
    let contains_integer = x.ceil().is_none() || x.lo().denom() == &1 || x.hi().denom() == &1;
    let shifted = x.add_rational(&half);
    let contains_half = shifted.ceil().is_none()
        || shifted.lo().denom() == &1
        || shifted.hi().denom() == &1;
    let lo = if contains_integer {
        Rational::new()
    } else {
        (&dl).min(&dh).clone()
    };
    let hi = if contains_half { half } else { dl.max(dh) };
    Ok(CertifiedValue::new(lo, hi))
}

/// Certified `φ_a(θ) = 1 / log_a θ = ln a / ln θ`, with the default policy.
pub fn phi(a: &Rational, theta: &Rational) -> Result<CertifiedValue> {
    phi_at(a, theta, PrecisionPolicy::default().start_bits)
}

/// Checks `θ` lies strictly between `a` and `1` with `a > 0`, `a != 1`.
pub fn check_phi_domain(a: &Rational, theta: &Rational) -> Result<()> {
    if *a <= 0 || *a == 1 {
        return Err(Error::domain(format!("phi: base a = {a} must be positive and != 1")));
    }
    let inside = if *a < 1 {
        a < theta && *theta < 1
    } else {
        *theta > 1 && theta < a
    };
    if !inside {
        return Err(Error::domain(format!(
            "phi: theta = {theta} must lie strictly between a = {a} and 1"
        )));
    }
    Ok(())
}

/// `φ_a(θ)` at `prec` bits. Returns an exact value when `a^s = θ^r` for
/// small integers, which is exactly when the ratio of logarithms is the
/// rational `r/s`.
pub fn phi_at(a: &Rational, theta: &Rational, prec: u32) -> Result<CertifiedValue> {
    check_phi_domain(a, theta)?;
    let la = real::ln_rational(a, prec + 8)?;
    let lt = real::ln_rational(theta, prec + 8)?;
    let v = la.div(&lt)?.round_out(prec);
    if let Some(r) = small_rational_in(&v, 64) {
        let (num, den) = (r.numer().to_u32(), r.denom().to_u32());
        if let (Some(num), Some(den)) = (num, den) {
            if num <= 64 && Rational::from(a.pow(den)) == Rational::from(theta.pow(num)) {
                return Ok(CertifiedValue::exact(r));
            }
        }
    }
    Ok(v)
}

/// Enclosure of `φ_a(x)` for a certified argument `x` inside the domain.
pub fn phi_interval(a: &Rational, x: &CertifiedValue, prec: u32) -> Result<CertifiedValue> {
    if let Some(v) = x.exact_value() {
        return phi_at(a, v, prec);
    }
    let la = real::ln_rational(a, prec + 8)?;
    let lx = real::ln(x, prec + 8)?;
    Ok(la.div(&lx)?.round_out(prec))
}

/// The rational with smallest denominator `<= max_den` inside the enclosure,
/// found from the continued fraction of its midpoint.
fn small_rational_in(v: &CertifiedValue, max_den: u32) -> Option<Rational> {
    let mid = v.mid();
    let (mut p0, mut q0, mut p1, mut q1) = (
        Integer::from(0),
        Integer::from(1),
        Integer::from(1),
        Integer::from(0),
    );
    let mut x = mid;
    for _ in 0..24 {
        let a = super::certified::floor_rational(&x);
        let p2 = Integer::from(&a * &p1) + &p0;
        let q2 = Integer::from(&a * &q1) + &q0;
        if q2 > max_den {
            return None;
        }
        let cand = Rational::from((p2.clone(), q2.clone()));
        if v.contains(&cand) {
            return Some(cand);
        }
        let frac = Rational::from(&x - &a);
        if frac == 0 {
            return None;
        }
        x = frac.recip();
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    None
}

/// Certified `x ∈ [lo, hi)`, escalating via `enclose` until decided.
pub fn decide_in_half_open(
    policy: &PrecisionPolicy,
    lo: &Rational,
    hi: &Rational,
    mut enclose: impl FnMut(u32) -> Result<CertifiedValue>,
) -> Result<bool> {
    policy.escalate(
        || format!("membership in [{lo}, {hi})"),
        |prec| Ok(enclose(prec)?.in_half_open(lo, hi).decided()),
    )
}

/// `⌊x^(1/k)⌋` for `u128`.
pub(crate) fn iroot_u128(x: u128, k: u32) -> u128 {
    if x < 2 || k == 1 {
        return x;
    }
    let mut r = (x as f64).powf(1.0 / k as f64) as u128;
    let fits = |r: u128| r.checked_pow(k).is_some_and(|v| v <= x);
    while r > 0 && !fits(r) {
        r -= 1;
    }
    while fits(r + 1) {
        r += 1;
    }
    r
}

#[allow(dead_code)]
pub(crate) fn truth_of(b: Option<bool>) -> Truth {
    match b {
        Some(true) => Truth::True,
        Some(false) => Truth::False,
        None => Truth::Unknown,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::NamedConstant;

    fn ex(s: &str) -> Exponent {
        Exponent::parse(s).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn pow_examples() {
        let p = PrecisionPolicy::default();
        assert_eq!(pow_certified(1, &ex("e"), &p).unwrap().exact_value(), Some(&q(1, 1)));
        assert_eq!(pow_certified(4, &ex("3/2"), &p).unwrap().exact_value(), Some(&q(8, 1)));
        let v = pow_certified(10, &ex("3/2"), &p).unwrap();
        assert!(!v.is_exact());
        // 10^1.5 = 31.62277660168379331998893544432718533719...
        let oracle = Rational::from_f64(31.622776601683793).unwrap();
        assert!((v.mid() - oracle).abs() < 1e-14);
        assert!(v.width() < Rational::from((1, 1u128 << 100)));
        assert!(pow_certified(0, &ex("3/2"), &p).is_err());
    }

    #[test]
    fn floor_examples() {
        assert_eq!(floor_pow(5, &ex("3/2")).unwrap(), 11);
        assert_eq!(floor_pow(4, &ex("3/2")).unwrap(), 8);
        assert_eq!(floor_pow(1, &ex("5/2")).unwrap(), 1);
        assert_eq!(floor_pow(2, &ex("e")).unwrap(), 6);
        assert_eq!(floor_pow(10, &ex("pi")).unwrap(), 1385);
    }

    #[test]
    fn floor_pow_handles_big_intermediates() {
        // 10^6^(14/5) = 10^16.8; n^14 overflows u128 and takes the GMP path.
        let v = floor_pow(1_000_000, &ex("14/5")).unwrap();
        assert_eq!(v, 63_095_734_448_019_324);
    }

    #[test]
    fn frac_examples() {
        assert_eq!(frac_pow(4, &ex("3/2")).unwrap().exact_value(), Some(&q(0, 1)));
        let f = frac_pow(2, &ex("3/2")).unwrap();
        assert!((f.to_f64() - 0.828_427_124_746_190_1).abs() < 1e-15);
        let g = frac_pow(10, &ex("3/2")).unwrap();
        assert!((g.to_f64() - 0.622_776_601_683_793_3).abs() < 1e-15);
    }

    #[test]
    fn nearest_integer_distance() {
        let d = |x: CertifiedValue| dist_nearest_int(&x).unwrap();
        assert_eq!(d(CertifiedValue::exact(7)).exact_value(), Some(&q(0, 1)));
        assert_eq!(d(CertifiedValue::exact(q(16, 5))).exact_value(), Some(&q(1, 5)));
        assert_eq!(d(CertifiedValue::exact(q(1, 2))).exact_value(), Some(&q(1, 2)));
        assert_eq!(d(CertifiedValue::exact(q(-13, 10))).exact_value(), Some(&q(3, 10)));
        let straddle = d(CertifiedValue::new(q(4, 10), q(6, 10)));
        assert_eq!(straddle.lo(), &q(4, 10));
        assert_eq!(straddle.hi(), &q(1, 2));
        let around_int = d(CertifiedValue::new(q(29, 10), q(31, 10)));
        assert_eq!(around_int.lo(), &q(0, 1));
        assert_eq!(around_int.hi(), &q(1, 10));
        assert!(matches!(
            dist_nearest_int(&CertifiedValue::new(q(0, 1), q(1, 1))),
            Err(Error::AmbiguousRounding { .. })
        ));
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi(&q(1, 4), &q(1, 2)).unwrap().exact_value(), Some(&q(2, 1)));
        let v = phi(&q(1, 2), &q(3, 4)).unwrap();
        assert!(!v.is_exact());
        assert!((v.to_f64() - 2.409_420_839_653_209).abs() < 1e-14);
        assert!(phi(&q(1, 4), &q(1, 4)).is_err());
        assert!(phi(&q(1, 4), &q(1, 1)).is_err());
        assert!(phi(&q(1, 4), &q(1, 8)).is_err());
        assert!(phi(&q(4, 1), &q(2, 1)).unwrap().exact_value() == Some(&q(2, 1)));
    }

    #[test]
    fn phi_at_the_base_is_one() {
        // θ = a is outside the open domain, but the value is still 1 there.
        let v = phi_interval(&q(1, 4), &CertifiedValue::new(q(1, 4), q(1, 4)), 128);
        assert!(v.is_err());
        let la = real::ln_rational(&q(1, 4), 128).unwrap();
        let r = la.div(&la).unwrap();
        assert!(r.contains(&q(1, 1)));
    }

    #[test]
    fn root_ceil_examples() {
        assert_eq!(root_ceil(8, &ex("3/2")).unwrap(), 4);
        assert_eq!(root_ceil(2, &ex("3/2")).unwrap(), 2);
        assert_eq!(root_ceil(1, &ex("7/3")).unwrap(), 1);
        assert_eq!(root_ceil(1385, &ex("pi")).unwrap(), 10);
        assert_eq!(root_ceil(1386, &ex("pi")).unwrap(), 11);
    }

    #[test]
    fn named_exponent_near_integer_exhausts() {
        // Force a tiny policy so a genuine near-integer cannot resolve.
        let tiny = PrecisionPolicy::new(64, 64, 2, 1).unwrap();
        let alpha = Exponent::named(NamedConstant::Sqrt2);
        // 2^sqrt2 = 2.665..., resolvable even at 64 bits.
        assert_eq!(floor_pow_with(2, &alpha, &tiny).unwrap(), 2);
    }

    #[test]
    fn iroot_matches_naive() {
        for x in 0u128..2000 {
            for k in 2..5 {
                let r = iroot_u128(x, k);
                assert!(r.pow(k) <= x && (r + 1).pow(k) > x);
            }
        }
        assert_eq!(iroot_u128(u128::MAX, 2), (1u128 << 64) - 1);
    }
}
