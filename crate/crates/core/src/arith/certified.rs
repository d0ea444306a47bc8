use std::cmp::Ordering;
use std::fmt;

use rug::float::Round;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

/// Three-valued outcome of a certified comparison.
///
/// `Unknown` means the enclosures overlap and the caller should retry at a
/// higher precision. It is never promoted to `True`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Truth {
    True,
    False,
    Unknown,
}

impl Truth {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Truth::True
        } else {
            Truth::False
        }
    }

    pub fn and(self, other: Truth) -> Truth {
        match (self, other) {
            (Truth::False, _) | (_, Truth::False) => Truth::False,
            (Truth::True, Truth::True) => Truth::True,
            _ => Truth::Unknown,
        }
    }

    pub fn not(self) -> Truth {
        match self {
            Truth::True => Truth::False,
            Truth::False => Truth::True,
            Truth::Unknown => Truth::Unknown,
        }
    }

    pub fn is_true(self) -> bool {
        self == Truth::True
    }

    pub fn is_known(self) -> bool {
        self != Truth::Unknown
    }

    /// `Some(bool)` when decided.
    pub fn decided(self) -> Option<bool> {
        match self {
            Truth::True => Some(true),
            Truth::False => Some(false),
            Truth::Unknown => None,
        }
    }
}

impl fmt::Display for Truth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Truth::True => "true",
            Truth::False => "false",
            Truth::Unknown => "unknown",
        })
    }
}

/// A real number known to lie in the closed interval `[lo, hi]`.
///
/// Endpoints are exact rationals, so exactly known values such as `16/5`
/// stay exact. Values produced by transcendental operations have dyadic
/// endpoints obtained with outward rounding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedValue {
    lo: Rational,
    hi: Rational,
}

impl CertifiedValue {
    pub fn exact(v: impl Into<Rational>) -> Self {
        let v = v.into();
        CertifiedValue { lo: v.clone(), hi: v }
    }

    /// Builds an enclosure from ordered endpoints.
    ///
    /// Panics if `lo > hi`.
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "CertifiedValue requires lo <= hi");
        CertifiedValue { lo, hi }
    }

    pub(crate) fn from_floats(lo: &Float, hi: &Float) -> Self {
        let lo = lo.to_rational().expect("finite lower endpoint");
        let hi = hi.to_rational().expect("finite upper endpoint");
        CertifiedValue::new(lo, hi)
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    /// The exact value, if known.
    pub fn exact_value(&self) -> Option<&Rational> {
        self.is_exact().then_some(&self.lo)
    }

    pub fn width(&self) -> Rational {
        Rational::from(&self.hi - &self.lo)
    }

    pub fn mid(&self) -> Rational {
        Rational::from(&self.lo + &self.hi) / 2u32
    }

    /// Nearest `f64` to the midpoint.
    pub fn to_f64(&self) -> f64 {
        self.mid().to_f64()
    }

    /// Half-width, rounded up to an `f64`.
    pub fn radius_f64(&self) -> f64 {
        let r = self.width() / 2u32;
        Float::with_val_round(53, &r, Round::Up).0.to_f64()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// Smallest enclosure containing both.
    pub fn hull(&self, other: &CertifiedValue) -> CertifiedValue {
        CertifiedValue {
            lo: (&self.lo).min(&other.lo).clone(),
            hi: (&self.hi).max(&other.hi).clone(),
        }
    }

    pub fn neg(&self) -> CertifiedValue {
        CertifiedValue {
            lo: Rational::from(-&self.hi),
            hi: Rational::from(-&self.lo),
        }
    }

    pub fn add(&self, other: &CertifiedValue) -> CertifiedValue {
        CertifiedValue {
            lo: Rational::from(&self.lo + &other.lo),
            hi: Rational::from(&self.hi + &other.hi),
        }
    }

    pub fn sub(&self, other: &CertifiedValue) -> CertifiedValue {
        CertifiedValue {
            lo: Rational::from(&self.lo - &other.hi),
            hi: Rational::from(&self.hi - &other.lo),
        }
    }

    pub fn add_rational(&self, q: &Rational) -> CertifiedValue {
        CertifiedValue {
            lo: Rational::from(&self.lo + q),
            hi: Rational::from(&self.hi + q),
        }
    }

    pub fn scale(&self, q: &Rational) -> CertifiedValue {
        let a = Rational::from(&self.lo * q);
        let b = Rational::from(&self.hi * q);
        if a <= b {
            CertifiedValue { lo: a, hi: b }
        } else {
            CertifiedValue { lo: b, hi: a }
        }
    }

    pub fn mul(&self, other: &CertifiedValue) -> CertifiedValue {
        if self.lo >= 0 && other.lo >= 0 {
            return CertifiedValue {
                lo: Rational::from(&self.lo * &other.lo),
                hi: Rational::from(&self.hi * &other.hi),
            };
        }
        let cands = [
            Rational::from(&self.lo * &other.lo),
            Rational::from(&self.lo * &other.hi),
            Rational::from(&self.hi * &other.lo),
            Rational::from(&self.hi * &other.hi),
        ];
        let lo = cands.iter().min().unwrap().clone();
        let hi = cands.iter().max().unwrap().clone();
        CertifiedValue { lo, hi }
    }

    /// `1/x`; fails if the enclosure touches zero.
    pub fn recip(&self) -> Result<CertifiedValue> {
        if self.lo <= 0 && self.hi >= 0 {
            return Err(Error::domain("reciprocal of an enclosure containing 0"));
        }
        Ok(CertifiedValue {
            lo: Rational::from(self.hi.recip_ref()),
            hi: Rational::from(self.lo.recip_ref()),
        })
    }

    pub fn div(&self, other: &CertifiedValue) -> Result<CertifiedValue> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn abs(&self) -> CertifiedValue {
        if self.lo >= 0 {
            self.clone()
        } else if self.hi <= 0 {
            self.neg()
        } else {
            let hi = Rational::from(-&self.lo).max(self.hi.clone());
            CertifiedValue {
                lo: Rational::new(),
                hi,
            }
        }
    }

    /// Widens non-exact endpoints to dyadic rationals with `prec` significant
    /// bits. Keeps enclosure sizes bounded through long formula chains.
    pub fn round_out(&self, prec: u32) -> CertifiedValue {
        if self.is_exact() {
            return self.clone();
        }
        let lo = Float::with_val_round(prec, &self.lo, Round::Down).0;
        let hi = Float::with_val_round(prec, &self.hi, Round::Up).0;
        CertifiedValue::from_floats(&lo, &hi)
    }

    /// `⌊x⌋` when every point of the enclosure has the same floor.
    pub fn floor(&self) -> Option<Integer> {
        let a = floor_rational(&self.lo);
        if self.is_exact() || a == floor_rational(&self.hi) {
            Some(a)
        } else {
            None
        }
    }

    /// `⌈x⌉` when every point of the enclosure has the same ceiling.
    pub fn ceil(&self) -> Option<Integer> {
        let b = ceil_rational(&self.hi);
        if self.is_exact() || b == ceil_rational(&self.lo) {
            Some(b)
        } else {
            None
        }
    }

    /// Certified `self < other`.
    pub fn lt(&self, other: &CertifiedValue) -> Truth {
        if self.hi < other.lo {
            Truth::True
        } else if self.lo >= other.hi {
            Truth::False
        } else {
            Truth::Unknown
        }
    }

    /// Certified `self <= other`.
    pub fn le(&self, other: &CertifiedValue) -> Truth {
        if self.hi <= other.lo {
            Truth::True
        } else if self.lo > other.hi {
            Truth::False
        } else {
            Truth::Unknown
        }
    }

    pub fn lt_rational(&self, q: &Rational) -> Truth {
        if &self.hi < q {
            Truth::True
        } else if &self.lo >= q {
            Truth::False
        } else {
            Truth::Unknown
        }
    }

    pub fn le_rational(&self, q: &Rational) -> Truth {
        if &self.hi <= q {
            Truth::True
        } else if &self.lo > q {
            Truth::False
        } else {
            Truth::Unknown
        }
    }

    pub fn gt_rational(&self, q: &Rational) -> Truth {
        self.le_rational(q).not()
    }

    pub fn ge_rational(&self, q: &Rational) -> Truth {
        self.lt_rational(q).not()
    }

    /// Certified membership in the half-open interval `[lo, hi)`.
    pub fn in_half_open(&self, lo: &Rational, hi: &Rational) -> Truth {
        self.ge_rational(lo).and(self.lt_rational(hi))
    }

    /// Ordering against a rational when decided.
    pub fn cmp_rational(&self, q: &Rational) -> Option<Ordering> {
        if &self.hi < q {
            Some(Ordering::Less)
        } else if &self.lo > q {
            Some(Ordering::Greater)
        } else if self.is_exact() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }
}

impl fmt::Display for CertifiedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(v) = self.exact_value() {
            write!(f, "{v}")
        } else {
            write!(f, "{:.17e} ± {:.3e}", self.to_f64(), self.radius_f64())
        }
    }
}

pub(crate) fn floor_rational(q: &Rational) -> Integer {
    q.clone().floor().into_numer_denom().0
}

pub(crate) fn ceil_rational(q: &Rational) -> Integer {
    q.clone().ceil().into_numer_denom().0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn truth_table() {
        assert_eq!(Truth::True.and(Truth::Unknown), Truth::Unknown);
        assert_eq!(Truth::False.and(Truth::Unknown), Truth::False);
        assert_eq!(Truth::Unknown.not(), Truth::Unknown);
    }

    #[test]
    fn floor_and_ceil_of_enclosures() {
        let x = CertifiedValue::new(q(31, 10), q(32, 10));
        assert_eq!(x.floor(), Some(Integer::from(3)));
        assert_eq!(x.ceil(), Some(Integer::from(4)));
        let y = CertifiedValue::new(q(29, 10), q(31, 10));
        assert_eq!(y.floor(), None);
        let z = CertifiedValue::exact(-7);
        assert_eq!(z.floor(), Some(Integer::from(-7)));
        assert_eq!(z.ceil(), Some(Integer::from(-7)));
        assert_eq!(floor_rational(&q(-1, 2)), -1);
        assert_eq!(ceil_rational(&q(-1, 2)), 0);
    }

    #[test]
    fn comparisons_are_three_valued() {
        let x = CertifiedValue::new(q(1, 3), q(1, 2));
        let y = CertifiedValue::exact(q(1, 2));
        assert_eq!(x.lt(&y), Truth::Unknown);
        assert_eq!(x.le(&y), Truth::True);
        assert_eq!(y.lt(&y), Truth::False);
        assert_eq!(y.in_half_open(&q(0, 1), &q(1, 2)), Truth::False);
        assert_eq!(y.in_half_open(&q(1, 2), &q(1, 1)), Truth::True);
    }

    #[test]
    fn interval_products_cover_sign_cases() {
        let x = CertifiedValue::new(q(-2, 1), q(3, 1));
        let y = CertifiedValue::new(q(-5, 1), q(1, 1));
        let p = x.mul(&y);
        assert_eq!(p.lo(), &q(-15, 1));
        assert_eq!(p.hi(), &q(10, 1));
        assert!(x.recip().is_err());
        assert_eq!(x.abs().hi(), &q(3, 1));
    }

    #[test]
    fn round_out_keeps_enclosure() {
        let x = CertifiedValue::new(q(1, 3), q(2, 3));
        let r = x.round_out(64);
        assert!(r.lo() <= x.lo() && r.hi() >= x.hi());
        let e = CertifiedValue::exact(q(1, 3));
        assert!(e.round_out(64).is_exact());
    }
}
