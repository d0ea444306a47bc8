use std::fmt;
use std::str::FromStr;

use rug::float::{Constant, Round};
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use super::certified::CertifiedValue;
use super::parse::{looks_decimal, parse_rational};
use crate::error::{Error, Result};

/// Irrational exponents available by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NamedConstant {
    /// Euler's number, about 2.718.
    E,
    /// About 3.1416.
    Pi,
    /// About 1.4142.
    Sqrt2,
    /// About 1.7321.
    Sqrt3,
    /// `(1 + sqrt 5) / 2`, about 1.618.
    Golden,
    /// `1 + sqrt 2`, about 2.4142.
    Sqrt2Plus1,
}

impl NamedConstant {
    pub const ALL: [NamedConstant; 6] = [
        NamedConstant::E,
        NamedConstant::Pi,
        NamedConstant::Sqrt2,
        NamedConstant::Sqrt3,
        NamedConstant::Golden,
        NamedConstant::Sqrt2Plus1,
    ];

    pub fn token(self) -> &'static str {
        match self {
            NamedConstant::E => "e",
            NamedConstant::Pi => "pi",
            NamedConstant::Sqrt2 => "sqrt2",
            NamedConstant::Sqrt3 => "sqrt3",
            NamedConstant::Golden => "golden",
            NamedConstant::Sqrt2Plus1 => "sqrt2plus1",
        }
    }

    pub fn from_token(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.token() == s)
    }

    /// Value rounded in direction `round` at `prec` bits.
    fn value_round(self, prec: u32, round: Round) -> Float {
        match self {
            NamedConstant::E => {
                let mut f = Float::with_val(prec, 1);
                f.exp_round(round);
                f
            }
            NamedConstant::Pi => Float::with_val_round(prec, Constant::Pi, round).0,
            NamedConstant::Sqrt2 | NamedConstant::Sqrt3 => {
                let base = if self == NamedConstant::Sqrt2 { 2 } else { 3 };
                let mut f = Float::with_val(prec, base);
                f.sqrt_round(round);
                f
            }
            NamedConstant::Golden | NamedConstant::Sqrt2Plus1 => {
                let (radicand, halve) = if self == NamedConstant::Golden { (5, true) } else { (2, false) };
                let mut f = Float::with_val(prec + 8, radicand);
                f.sqrt_round(round);
                let (g, _) = Float::with_val_round(prec, &f + 1u32, round);
                if halve {
                    g / 2u32
                } else {
                    g
                }
            }
        }
    }

    pub fn enclose(self, prec: u32) -> CertifiedValue {
        let lo = self.value_round(prec, Round::Down);
        let hi = self.value_round(prec, Round::Up);
        CertifiedValue::from_floats(&lo, &hi)
    }
}

/// A non-integral exponent `alpha > 1`.
///
/// Rational exponents are kept in lowest terms so that `n^alpha` can be
/// decided with exact integer roots.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Exponent {
    Rational { p: u32, q: u32 },
    Named(NamedConstant),
}

impl Exponent {
    pub fn rational(p: u32, q: u32) -> Result<Self> {
        if q == 0 {
            return Err(Error::domain("exponent denominator is zero"));
        }
        let g = gcd(p, q);
        let (p, q) = (p / g, q / g);
        if q == 1 {
            return Err(Error::domain(format!(
                "exponent {p} is integral; Piatetski-Shapiro exponents must be non-integral"
            )));
        }
        if p <= q {
            return Err(Error::domain(format!("exponent {p}/{q} must exceed 1")));
        }
        Ok(Exponent::Rational { p, q })
    }

    pub fn named(c: NamedConstant) -> Self {
        Exponent::Named(c)
    }

    /// Parses `"p/q"` or a constant token (`e`, `pi`, `sqrt2`, `sqrt3`,
    /// `golden`, `sqrt2plus1`). Decimal literals are rejected.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        if let Some(c) = NamedConstant::from_token(t) {
            return Ok(Exponent::Named(c));
        }
        if looks_decimal(t) {
            return Err(Error::Parse(format!(
                "decimal exponent {t:?} rejected; give an exact fraction p/q or a named constant"
            )));
        }
        let r = parse_rational(t)
            .map_err(|_| Error::Parse(format!("unrecognised exponent {t:?}")))?;
        let (p, q) = match (r.numer().to_u32(), r.denom().to_u32()) {
            (Some(p), Some(q)) if *r.numer() > 0 => (p, q),
            _ => {
                return Err(Error::domain(format!(
                    "exponent {t:?} must be a positive fraction with 32-bit parts"
                )))
            }
        };
        Exponent::rational(p, q)
    }

    pub fn as_rational(&self) -> Option<(u32, u32)> {
        match *self {
            Exponent::Rational { p, q } => Some((p, q)),
            Exponent::Named(_) => None,
        }
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.as_rational().map(|(p, q)| Rational::from((p, q)))
    }

    /// Enclosure of the exponent's value.
    pub fn enclose(&self, prec: u32) -> CertifiedValue {
        match *self {
            Exponent::Rational { p, q } => CertifiedValue::exact(Rational::from((p, q))),
            Exponent::Named(c) => c.enclose(prec),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match *self {
            Exponent::Rational { p, q } => p as f64 / q as f64,
            Exponent::Named(c) => c.enclose(64).to_f64(),
        }
    }

    /// Certified `alpha < 2`. Never `Unknown` for the supported constants.
    pub fn below_two(&self) -> bool {
        match *self {
            Exponent::Rational { p, q } => (p as u64) < 2 * q as u64,
            Exponent::Named(c) => *c.enclose(64).hi() < 2,
        }
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Rational { p, q } => write!(f, "{p}/{q}"),
            Exponent::Named(c) => f.write_str(c.token()),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Exponent::parse(s)
    }
}

impl TryFrom<String> for Exponent {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        Exponent::parse(&s)
    }
}

impl From<Exponent> for String {
    fn from(e: Exponent) -> String {
        e.to_string()
    }
}

/// Integer-valued helper used by callers that need `⌊x⌋` as a `u64`.
pub(crate) fn integer_to_u64(i: &Integer, what: &str) -> Result<u64> {
    i.to_u64()
        .ok_or_else(|| Error::Overflow(format!("{what} = {i}")))
}
