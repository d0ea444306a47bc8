//! The equation `y = ax + b` with `x, y ∈ PS(α)`.
//!
//! For `x = ⌊n^α⌋`, put `y = ax + b`. Then `y ∈ PS(α)` exactly when `y` is
//! an integer (a congruence on `x` modulo `a2`) and the window
//! `J_n = [y^{1/α}, (y+1)^{1/α})` contains an integer `k`, in which case
//! `y = ⌊k^α⌋`. Endpoints of `J_n` are computed as certified roots, so the
//! test holds for every `n`, not only asymptotically.

use std::io::Write;

use rayon::prelude::*;
use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::arith::{
    floor_pow, integer_to_u64, pow_certified, rational_root_alpha_at, root_alpha_at,
    CertifiedValue, Exponent, PrecisionPolicy, Truth,
};
use crate::error::{Error, Result};
use crate::ps::{is_member, PSWindow};

/// `y = (a1/a2)·x + b` with `gcd(a1, a2) = 1` and `a2·b ∈ ℤ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearEq {
    a1: u64,
    a2: u64,
    b: Rational,
    a2b: i64,
    d: u64,
}

impl LinearEq {
    /// Normalises `a` and `b` and derives the residue `d`, the class of `x`
    /// modulo `a2` for which `ax + b` is an integer.
    pub fn new(a: &Rational, b: &Rational) -> Result<Self> {
        if *a <= 0 {
            return Err(Error::domain(format!(
                "slope a = {a} must be positive; a <= 0 admits only finitely many positive pairs"
            )));
        }
        let a1 = a
            .numer()
            .to_u64()
            .ok_or_else(|| Error::Overflow(format!("numerator of a = {a}")))?;
        let a2 = a
            .denom()
            .to_u64()
            .ok_or_else(|| Error::Overflow(format!("denominator of a = {a}")))?;
        let a2b_q = Rational::from(b * Integer::from(a2));
        if *a2b_q.denom() != 1 {
            return Err(Error::NotSolvableInN(format!(
                "a2*b = {a2b_q} is not an integer for a = {a}, b = {b}"
            )));
        }
        let a2b = a2b_q
            .numer()
            .to_i64()
            .ok_or_else(|| Error::Overflow(format!("a2*b = {a2b_q}")))?;
        let d = if a2 == 1 {
            0
        } else {
            let m = Integer::from(a2);
            let inv = Integer::from(a1)
                .invert(&m)
                .expect("a1 and a2 are coprime");
            let r = (Integer::from(-a2b) * inv).modulo(&m);
            r.to_u64().expect("residue below a2")
        };
        Ok(LinearEq {
            a1,
            a2,
            b: b.clone(),
            a2b,
            d,
        })
    }

    pub fn parse(a: &str, b: &str) -> Result<Self> {
        LinearEq::new(&crate::arith::parse_rational(a)?, &crate::arith::parse_rational(b)?)
    }

    pub fn a1(&self) -> u64 {
        self.a1
    }

    pub fn a2(&self) -> u64 {
        self.a2
    }

    pub fn a(&self) -> Rational {
        Rational::from((self.a1, self.a2))
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn residue(&self) -> u64 {
        self.d
    }

    /// `x = (y − b)/a`, i.e. the equation with `1/a` and `−b/a`.
    pub fn inverse(&self) -> Result<LinearEq> {
        let a = self.a();
        let inv = Rational::from(a.recip_ref());
        let nb = -Rational::from(&self.b / &a);
        LinearEq::new(&inv, &nb)
    }

    /// `ax + b` as an exact rational.
    pub fn apply(&self, x: u64) -> Rational {
        (self.a() * Integer::from(x)) + &self.b
    }

    /// `ax + b` when `x ≡ d (mod a2)`, as an integer.
    fn image(&self, x: u64) -> Option<i128> {
        if x % self.a2 != self.d {
            return None;
        }
        let num = self.a1 as i128 * x as i128 + self.a2b as i128;
        Some(num / self.a2 as i128)
    }
}

/// Shorthand for [`LinearEq::new`].
pub fn make_eq(a: &Rational, b: &Rational) -> Result<LinearEq> {
    LinearEq::new(a, b)
}

/// `⌊n^α⌋ ≡ d (mod a2)`.
pub fn residue_test(eq: &LinearEq, n: u64, alpha: &Exponent) -> Result<bool> {
    Ok(floor_pow(n, alpha)? % eq.a2 == eq.d)
}

/// Certified endpoints of `J_n` and the decision `J_n ∩ ℕ ≠ ∅`.
#[derive(Clone, Debug)]
pub struct WindowLR {
    pub n: u64,
    pub x: u64,
    pub y: u64,
    pub left: CertifiedValue,
    pub right: CertifiedValue,
    /// The unique integer in `J_n`, if any.
    pub k: Option<u64>,
    /// Precision at which the decision was made.
    pub bits: u32,
}

impl WindowLR {
    pub fn hit(&self) -> bool {
        self.k.is_some()
    }

    /// `L_n = left − a^{1/α} n` and `R_n = right − a^{1/α} n`.
    pub fn offsets(&self, eq: &LinearEq, alpha: &Exponent) -> Result<(CertifiedValue, CertifiedValue)> {
        let root = rational_root_alpha_at(&eq.a(), alpha, self.bits)?;
        let shift = root.scale(&Rational::from(self.n)).neg();
        Ok((self.left.add(&shift), self.right.add(&shift)))
    }
}

/// `J_n` for an `n` that passes the residue test.
///
/// Left endpoint closed, right open: an integer equal to `y^{1/α}` counts,
/// one equal to `(y+1)^{1/α}` does not. Exact roots are detected, so these
/// boundary cases never need escalation.
pub fn window(eq: &LinearEq, n: u64, alpha: &Exponent) -> Result<WindowLR> {
    window_with(eq, n, alpha, &PrecisionPolicy::default())
}

pub fn window_with(eq: &LinearEq, n: u64, alpha: &Exponent, policy: &PrecisionPolicy) -> Result<WindowLR> {
    let x = floor_pow(n, alpha)?;
    let y = eq.image(x).ok_or_else(|| {
        Error::domain(format!("n = {n}: x = {x} fails the residue test, a*x + b is not an integer"))
    })?;
    if y < 1 {
        return Err(Error::domain(format!("n = {n}: a*x + b = {y} < 1")));
    }
    let y = u64::try_from(y).map_err(|_| Error::Overflow(format!("a*x + b = {y}")))?;
    let y1 = y.checked_add(1).ok_or_else(|| Error::Overflow("y + 1".into()))?;
    policy.escalate(
        || format!("window J_{n} for y = {y}"),
        |bits| {
            let left = root_alpha_at(y, alpha, bits)?;
            let right = root_alpha_at(y1, alpha, bits)?;
            let Some(k0) = left.ceil() else {
                return Ok(None);
            };
            let decided = match right.gt_rational(&Rational::from(&k0)) {
                Truth::Unknown => return Ok(None),
                t => t.is_true(),
            };
            let k = if decided { Some(integer_to_u64(&k0, "k")?) } else { None };
            Ok(Some(WindowLR {
                n,
                x,
                y,
                left,
                right,
                k,
                bits,
            }))
        },
    )
}

/// One solution of `y = ax + b` with `x = ⌊n^α⌋`, `y = ⌊k^α⌋`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub n: u64,
    pub x: u64,
    pub k: u64,
    pub y: u64,
    /// True where `a⌊n^α⌋ + b + 1 ≤ 2a n^α` is not yet certified, i.e. the
    /// asymptotic window bounds would not apply at this `n`.
    pub pre_asymptotic: bool,
}

impl SolutionRecord {
    /// Re-checks both memberships and `y = ax + b` exactly.
    pub fn verify(&self, eq: &LinearEq, alpha: &Exponent) -> Result<bool> {
        Ok(floor_pow(self.n, alpha)? == self.x
            && floor_pow(self.k, alpha)? == self.y
            && is_member(self.x, alpha)?
            && is_member(self.y, alpha)?
            && eq.apply(self.x) == self.y)
    }
}

fn reduction_hit(eq: &LinearEq, n: u64, alpha: &Exponent) -> Result<Option<WindowLR>> {
    if !residue_test(eq, n, alpha)? {
        return Ok(None);
    }
    let x = floor_pow(n, alpha)?;
    if eq.image(x).is_some_and(|y| y < 1) {
        return Ok(None);
    }
    let w = window(eq, n, alpha)?;
    Ok(w.hit().then_some(w))
}

fn pre_asymptotic(eq: &LinearEq, w: &WindowLR, alpha: &Exponent) -> Result<bool> {
    let pow = pow_certified(w.n, alpha, &PrecisionPolicy::default())?;
    let bound = pow.scale(&(eq.a() * 2u32));
    let lhs = Rational::from(w.y + 1);
    Ok(!bound.ge_rational(&lhs).is_true())
}

/// All `n ≤ N` for which the reduction finds a solution, each re-verified.
pub fn solve_linear(eq: &LinearEq, alpha: &Exponent, limit: u64) -> Result<Vec<SolutionRecord>> {
    if limit == 0 {
        return Err(Error::domain("N must be >= 1"));
    }
    let hits = (1..=limit)
        .into_par_iter()
        .map(|n| reduction_hit(eq, n, alpha))
        .filter_map(|r| r.transpose())
        .collect::<Result<Vec<WindowLR>>>()?;
    hits.into_iter()
        .map(|w| {
            let rec = SolutionRecord {
                n: w.n,
                x: w.x,
                k: w.k.expect("hit"),
                y: w.y,
                pre_asymptotic: pre_asymptotic(eq, &w, alpha)?,
            };
            if !rec.verify(eq, alpha)? {
                return Err(Error::Verification(format!("solution record {rec:?}")));
            }
            Ok(rec)
        })
        .collect()
}

/// CSV with header `n,x,k,y`.
pub fn write_solutions_csv<W: Write>(records: &[SolutionRecord], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["n", "x", "k", "y", "pre_asymptotic"])?;
    for r in records {
        out.write_record([
            r.n.to_string(),
            r.x.to_string(),
            r.k.to_string(),
            r.y.to_string(),
            r.pre_asymptotic.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Outcome of comparing direct membership with the reduction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub checked: u64,
    pub first_violation: Option<u64>,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.first_violation.is_none()
    }
}

/// Direct test: `ax + b` is a positive integer in `PS(α)`, by exact
/// rational arithmetic and integer root extraction.
fn direct_member(eq: &LinearEq, x: u64, alpha: &Exponent) -> Result<bool> {
    let y = eq.apply(x);
    if *y.denom() != 1 || *y.numer() < 1 {
        return Ok(false);
    }
    let y = integer_to_u64(y.numer(), "a*x + b")?;
    is_member(y, alpha)
}

/// For each `n ≤ N`, compares `a⌊n^α⌋ + b ∈ PS(α)` with
/// `residue ∧ J_n ∩ ℕ ≠ ∅`. Returns the smallest disagreeing `n`, if any.
pub fn check_equivalence(eq: &LinearEq, alpha: &Exponent, limit: u64) -> Result<EquivalenceReport> {
    if limit == 0 {
        return Err(Error::domain("N must be >= 1"));
    }
    let agree = (1..=limit)
        .into_par_iter()
        .map(|n| {
            let x = floor_pow(n, alpha)?;
            let direct = direct_member(eq, x, alpha)?;
            let reduced = reduction_hit(eq, n, alpha)?.is_some();
            Ok(direct == reduced)
        })
        .collect::<Result<Vec<bool>>>()?;
    Ok(EquivalenceReport {
        checked: limit,
        first_violation: agree.iter().position(|ok| !ok).map(|i| i as u64 + 1),
    })
}

/// Solution counts at checkpoints and the log-log slope.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountFit {
    pub checkpoints: Vec<u64>,
    pub counts: Vec<u64>,
    pub slope: f64,
    pub stderr: f64,
    /// Checkpoints that entered the regression (count ≥ 5).
    pub used: Vec<u64>,
}

pub const MIN_FIT_COUNT: u64 = 5;

/// Counts `|{n ≤ N : n solves}|` at each checkpoint and fits
/// `log count ≈ slope · log N + c` over checkpoints with at least
/// [`MIN_FIT_COUNT`] solutions.
pub fn count_fit(eq: &LinearEq, alpha: &Exponent, checkpoints: &[u64]) -> Result<CountFit> {
    if checkpoints.len() < 3 {
        return Err(Error::InsufficientData {
            usable: checkpoints.len(),
            needed: 3,
        });
    }
    if checkpoints[0] == 0 || checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("checkpoints must be positive and strictly ascending"));
    }
    let max = *checkpoints.last().expect("non-empty");
    let hits: Vec<u64> = (1..=max)
        .into_par_iter()
        .map(|n| Ok(reduction_hit(eq, n, alpha)?.map(|_| n)))
        .filter_map(|r: Result<Option<u64>>| r.transpose())
        .collect::<Result<Vec<u64>>>()?;
    let counts: Vec<u64> = checkpoints
        .iter()
        .map(|&c| hits.partition_point(|&n| n <= c) as u64)
        .collect();
    let pts: Vec<(f64, f64, u64)> = checkpoints
        .iter()
        .zip(&counts)
        .filter(|(_, &k)| k >= MIN_FIT_COUNT)
        .map(|(&c, &k)| ((c as f64).ln(), (k as f64).ln(), c))
        .collect();
    if pts.len() < 3 {
        return Err(Error::InsufficientData {
            usable: pts.len(),
            needed: 3,
        });
    }
    let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let (slope, stderr) = least_squares_slope(&xs, &ys);
    Ok(CountFit {
        checkpoints: checkpoints.to_vec(),
        counts,
        slope,
        stderr,
        used: pts.iter().map(|p| p.2).collect(),
    })
}

/// Ordinary least-squares slope and its standard error.
pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let stderr = if xs.len() > 2 {
        (ssr / (m - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    (slope, stderr)
}

/// A solution of `x + y = z` inside `PS(α)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triple {
    pub x: u64,
    pub y: u64,
    pub z: u64,
}

/// All `x ≤ y` among `⌊n^α⌋, n ≤ N` with `x + y ∈ PS(α)`, sorted.
pub fn solve_xyz(alpha: &Exponent, limit: u64) -> Result<Vec<Triple>> {
    if limit == 0 {
        return Err(Error::domain("N must be >= 1"));
    }
    let top = floor_pow(limit, alpha)?;
    let big = PSWindow::new(alpha, top.checked_mul(2).ok_or_else(|| Error::Overflow("2*x".into()))?)?;
    let members = &big.members()[..limit as usize];
    let set = big.member_set();
    let rows: Vec<Vec<Triple>> = members
        .par_iter()
        .enumerate()
        .map(|(i, &x)| {
            members[i..]
                .iter()
                .filter(|&&y| set.contains(&(x + y)))
                .map(|&y| Triple { x, y, z: x + y })
                .collect()
        })
        .collect();
    Ok(rows.into_iter().flatten().collect())
}
