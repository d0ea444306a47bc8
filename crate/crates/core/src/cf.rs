//! Certified continued fraction expansions.

use rug::{Integer, Rational};
use serde::Serialize;

use crate::arith::{
    floor_rational, parse_rational, real, rational_root_alpha_at, CertifiedValue, Exponent,
    NamedConstant, PrecisionPolicy,
};
use crate::error::{Error, Result};

/// A real number that can be enclosed at any requested precision.
pub trait Enclose: Sync {
    fn enclose(&self, bits: u32) -> Result<CertifiedValue>;
}

impl<F> Enclose for F
where
    F: Fn(u32) -> Result<CertifiedValue> + Sync,
{
    fn enclose(&self, bits: u32) -> Result<CertifiedValue> {
        self(bits)
    }
}

/// Targets accepted by the command line: `p/q`, decimals, named constants,
/// `B^E` with rational `B, E`, and `a^(1/alpha)` for an exponent.
#[derive(Clone, Debug, PartialEq)]
pub enum CfTarget {
    Rational(Rational),
    Named(NamedConstant),
    Power { base: Rational, exp: Rational },
    RootOf { a: Rational, alpha: Exponent },
}

impl CfTarget {
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        if let Some(c) = NamedConstant::from_token(t) {
            return Ok(CfTarget::Named(c));
        }
        if let Some((b, e)) = t.split_once('^') {
            let strip = |x: &str| x.trim().trim_start_matches('(').trim_end_matches(')').to_string();
            let base = parse_rational(&strip(b))?;
            let exp = parse_rational(&strip(e))?;
            if base <= 0 {
                return Err(Error::domain("power base must be positive"));
            }
            return Ok(CfTarget::Power { base, exp });
        }
        Ok(CfTarget::Rational(parse_rational(t)?))
    }
}

impl Enclose for CfTarget {
    fn enclose(&self, bits: u32) -> Result<CertifiedValue> {
        match self {
            CfTarget::Rational(q) => Ok(CertifiedValue::exact(q.clone())),
            CfTarget::Named(c) => Ok(c.enclose(bits)),
            CfTarget::Power { base, exp } => real::pow_rational(base, exp, bits),
            CfTarget::RootOf { a, alpha } => rational_root_alpha_at(a, alpha, bits),
        }
    }
}

impl std::fmt::Display for CfTarget {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CfTarget::Rational(q) => write!(f, "{q}"),
            CfTarget::Named(c) => f.write_str(c.token()),
            CfTarget::Power { base, exp } => write!(f, "{base}^({exp})"),
            CfTarget::RootOf { a, alpha } => write!(f, "{a}^(1/({alpha}))"),
        }
    }
}

/// Partial quotients and convergents `p_k/q_k` of a positive real.
#[derive(Clone, Debug, Serialize)]
pub struct ContinuedFraction {
    /// Enclosure of the target at the precision that decided every quotient.
    #[serde(skip)]
    pub target: CertifiedValue,
    #[serde(serialize_with = "ser_ints")]
    pub quotients: Vec<Integer>,
    #[serde(serialize_with = "ser_pairs")]
    pub convergents: Vec<(Integer, Integer)>,
    /// The target is rational and the expansion terminated.
    pub exact_rational: bool,
    pub bits: u32,
}

fn ser_ints<S: serde::Serializer>(v: &[Integer], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|i| i.to_string()))
}

fn ser_pairs<S: serde::Serializer>(
    v: &[(Integer, Integer)],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|(p, q)| [p.to_string(), q.to_string()]))
}

impl ContinuedFraction {
    /// `p_k q_{k−1} − p_{k−1} q_k = (−1)^{k−1}` for every `k`, with
    /// `p_{−1} = 1, q_{−1} = 0`.
    pub fn determinant_identity_holds(&self) -> bool {
        let mut prev = (Integer::from(1), Integer::from(0));
        for (k, (p, q)) in self.convergents.iter().enumerate() {
            let det = Integer::from(p * &prev.1) - Integer::from(&prev.0 * q);
            let expected = if k % 2 == 0 { -1 } else { 1 };
            if det != expected {
                return false;
            }
            prev = (p.clone(), q.clone());
        }
        true
    }

    /// `|x − p_k/q_k| < 1/q_k²` for every convergent, certified at the
    /// stored precision. Returns `None` where the enclosure is too wide.
    pub fn approximation_law(&self) -> Vec<Option<bool>> {
        self.convergents
            .iter()
            .map(|(p, q)| {
                let c = Rational::from((p.clone(), q.clone()));
                let err = self.target.add_rational(&(-c)).abs();
                let bound = Rational::from((Integer::from(1), Integer::from(q * q)));
                err.lt_rational(&bound).decided()
            })
            .collect()
    }

    /// `q_k` strictly increasing from `k = 1` on (`q_0 = q_1 = 1` when the
    /// first partial quotient after the integer part is 1).
    pub fn denominators_increase(&self) -> bool {
        self.convergents
            .iter()
            .skip(1)
            .collect::<Vec<_>>()
            .windows(2)
            .all(|w| w[0].1 < w[1].1)
    }

    pub fn denominators(&self) -> impl Iterator<Item = &Integer> {
        self.convergents.iter().map(|(_, q)| q)
    }
}

fn convergents_of(quotients: &[Integer]) -> Vec<(Integer, Integer)> {
    let (mut p0, mut q0) = (Integer::from(1), Integer::from(0));
    let (mut p1, mut q1): (Integer, Integer);
    let mut out = Vec::with_capacity(quotients.len());
    let Some(a0) = quotients.first() else {
        return out;
    };
    p1 = a0.clone();
    q1 = Integer::from(1);
    out.push((p1.clone(), q1.clone()));
    for a in &quotients[1..] {
        let p2 = Integer::from(a * &p1) + &p0;
        let q2 = Integer::from(a * &q1) + &q0;
        (p0, q0, p1, q1) = (p1, q1, p2.clone(), q2.clone());
        out.push((p2, q2));
    }
    out
}

/// Runs the expansion on a single enclosure. `None` means some quotient
/// among the first `k` was ambiguous at this precision.
fn expand_once(x: &CertifiedValue, k: usize) -> Option<(Vec<Integer>, bool)> {
    let mut quotients = Vec::with_capacity(k);
    if let Some(v) = x.exact_value() {
        let mut v = v.clone();
        while quotients.len() < k {
            let a = floor_rational(&v);
            let frac = Rational::from(&v - &a);
            quotients.push(a);
            if frac == 0 {
                return Some((quotients, true));
            }
            v = frac.recip();
        }
        return Some((quotients, false));
    }
    let (mut lo, mut hi) = (x.lo().clone(), x.hi().clone());
    while quotients.len() < k {
        let a = floor_rational(&lo);
        if floor_rational(&hi) != a {
            return None;
        }
        let flo = Rational::from(&lo - &a);
        let fhi = Rational::from(&hi - &a);
        quotients.push(a);
        if quotients.len() == k {
            break;
        }
        if flo == 0 {
            // the target may be exactly rational here; undecidable from an
            // enclosure
            return None;
        }
        (lo, hi) = (fhi.recip(), flo.recip());
    }
    Some((quotients, false))
}

/// First `k` partial quotients of a positive real, escalating precision
/// until every one is certain.
pub fn cf_expand(x: &dyn Enclose, k: usize) -> Result<ContinuedFraction> {
    cf_expand_with(x, k, &PrecisionPolicy::default())
}

pub fn cf_expand_with(x: &dyn Enclose, k: usize, policy: &PrecisionPolicy) -> Result<ContinuedFraction> {
    if k == 0 {
        return Err(Error::domain("need at least one partial quotient"));
    }
    policy.escalate(
        || format!("{k} partial quotients"),
        |bits| {
            let enc = x.enclose(bits)?;
            if *enc.lo() <= 0 {
                return if *enc.hi() <= 0 {
                    Err(Error::domain("continued fraction target must be positive"))
                } else {
                    Ok(None)
                };
            }
            Ok(expand_once(&enc, k).map(|(quotients, exact_rational)| ContinuedFraction {
                convergents: convergents_of(&quotients),
                quotients,
                exact_rational,
                target: enc,
                bits,
            }))
        },
    )
}

/// Expansion plus a certified check of `|x − p_k/q_k| < 1/q_k²`, raising
/// the precision until every convergent is decided.
pub fn cf_expand_checked(x: &dyn Enclose, k: usize, policy: &PrecisionPolicy) -> Result<(ContinuedFraction, bool)> {
    let mut cf = cf_expand_with(x, k, policy)?;
    let start = cf.bits;
    for bits in policy.precisions().into_iter().filter(|&b| b >= start) {
        if bits > cf.bits {
            cf.target = x.enclose(bits)?;
            cf.bits = bits;
        }
        let law = cf.approximation_law();
        if law.iter().all(Option::is_some) {
            // exact rationals hit their last convergent exactly; 0 < 1/q² holds
            return Ok((cf, law.into_iter().all(|b| b == Some(true))));
        }
    }
    Err(Error::exhausted(policy.max_bits, "convergent error bounds"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quotients(t: &str, k: usize) -> Vec<i64> {
        let cf = cf_expand(&CfTarget::parse(t).unwrap(), k).unwrap();
        cf.quotients.iter().map(|q| q.to_i64().unwrap()).collect()
    }

    #[test]
    fn golden_ratio_is_all_ones() {
        assert_eq!(quotients("golden", 30), vec![1; 30]);
    }

    #[test]
    fn known_expansions() {
        assert_eq!(quotients("2^(2/3)", 6), vec![1, 1, 1, 2, 2, 1]);
        assert_eq!(quotients("e", 12), vec![2, 1, 2, 1, 1, 4, 1, 1, 6, 1, 1, 8]);
        assert_eq!(quotients("pi", 5), vec![3, 7, 15, 1, 292]);
        assert_eq!(quotients("sqrt2", 6), vec![1, 2, 2, 2, 2, 2]);
    }

    #[test]
    fn rationals_terminate() {
        let cf = cf_expand(&CfTarget::parse("3/2").unwrap(), 10).unwrap();
        assert!(cf.exact_rational);
        assert_eq!(cf.quotients, vec![Integer::from(1), Integer::from(2)]);
        assert_eq!(cf.convergents.last().unwrap(), &(Integer::from(3), Integer::from(2)));
        let cf = cf_expand(&CfTarget::parse("5").unwrap(), 3).unwrap();
        assert!(cf.exact_rational);
        assert_eq!(cf.quotients.len(), 1);
    }

    #[test]
    fn identities_hold() {
        for t in ["golden", "2^(2/3)", "pi", "355/113", "3^(1/3)"] {
            let (cf, ok) = cf_expand_checked(&CfTarget::parse(t).unwrap(), 15, &PrecisionPolicy::default()).unwrap();
            assert!(ok, "{t}");
            assert!(cf.determinant_identity_holds(), "{t}");
            assert!(cf.denominators_increase(), "{t}");
        }
    }

    #[test]
    fn long_expansions_escalate() {
        // 300 quotients of sqrt 3 need more than the starting 128 bits.
        let cf = cf_expand(&CfTarget::parse("sqrt3").unwrap(), 300).unwrap();
        assert!(cf.bits > 128);
        assert!(cf.quotients[1..].iter().enumerate().all(|(i, q)| *q == if i % 2 == 0 { 1 } else { 2 }));
    }

    #[test]
    fn rejects_nonpositive_targets() {
        assert!(cf_expand(&CfTarget::Rational(Rational::from(-1)), 3).is_err());
        assert!(cf_expand(&CfTarget::Rational(Rational::from(2)), 0).is_err());
    }
}
