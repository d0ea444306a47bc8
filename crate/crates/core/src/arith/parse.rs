use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::error::{Error, Result};

/// Parses an exact rational from `"p/q"`, an integer, or a finite decimal
/// such as `"0.25"` or `"-1.5e-3"`.
///
/// Decimals are converted exactly (`"0.1"` is `1/10`).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::Parse("empty number".into()));
    }
    if let Some((num, den)) = t.split_once('/') {
        let n = parse_integer(num)?;
        let d = parse_integer(den)?;
        if d == 0 {
            return Err(Error::Parse(format!("zero denominator in {t:?}")));
        }
        return Ok(Rational::from((n, d)));
    }
    if is_plain_integer(t) {
        return Ok(Rational::from(parse_integer(t)?));
    }
    parse_decimal(t)
}

/// True when `s` is a decimal literal rather than `p/q` or an integer.
pub fn looks_decimal(s: &str) -> bool {
    let t = s.trim();
    !t.contains('/') && !is_plain_integer(t) && parse_decimal(t).is_ok()
}

fn is_plain_integer(t: &str) -> bool {
    let body = t.strip_prefix(['-', '+']).unwrap_or(t);
    !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit())
}

fn parse_integer(s: &str) -> Result<Integer> {
    let t = s.trim();
    if !is_plain_integer(t) {
        return Err(Error::Parse(format!("not an integer: {t:?}")));
    }
    Integer::from_str_radix(t.trim_start_matches('+'), 10)
        .map_err(|e| Error::Parse(format!("{t:?}: {e}")))
}

fn parse_decimal(t: &str) -> Result<Rational> {
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => {
            let e: i32 = t[i + 1..]
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in {t:?}")))?;
            (&t[..i], e)
        }
        None => (t, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.bytes().all(|b| b.is_ascii_digit())
        || !frac_part.bytes().all(|b| b.is_ascii_digit())
    {
        return Err(Error::Parse(format!("not a number: {t:?}")));
    }
    let digits = format!("{int_part}{frac_part}");
    let mut v = Rational::from(
        Integer::from_str_radix(if digits.is_empty() { "0" } else { &digits }, 10)
            .map_err(|e| Error::Parse(e.to_string()))?,
    );
    let shift = exp - frac_part.len() as i32;
    let ten = Integer::from(10);
    if shift >= 0 {
        v *= Integer::from((&ten).pow(shift as u32));
    } else {
        v /= Integer::from((&ten).pow((-shift) as u32));
    }
    if neg {
        v = -v;
    }
    Ok(v)
}

/// Parses a comma-separated list of rationals.
pub fn parse_rational_list(s: &str) -> Result<Vec<Rational>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(parse_rational)
        .collect()
}

/// Serde adapter storing a `Rational` as its `"p/q"` string.
pub mod serde_rational {
    use rug::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&q.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Int(i64),
            Float(f64),
        }
        let text = match Raw::deserialize(d)? {
            Raw::Text(s) => s,
            Raw::Int(i) => i.to_string(),
            Raw::Float(f) => f.to_string(),
        };
        super::parse_rational(&text).map_err(serde::de::Error::custom)
    }
}
