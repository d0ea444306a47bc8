use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use super::interval_set::{Component, IntervalSet};
use crate::arith::{ceil_rational, floor_rational, real, serde_rational, CertifiedValue};
use crate::error::{Error, Result};
use crate::system::DiophSystem;

/// Working precision for inverted endpoints of `F_n`.
pub const ENDPOINT_BITS: u32 = 128;

/// Open interval `(lo, hi)` of `θ` values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaRange {
    #[serde(with = "serde_rational")]
    pub lo: Rational,
    #[serde(with = "serde_rational")]
    pub hi: Rational,
}

impl ThetaRange {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo >= hi {
            return Err(Error::domain(format!("empty theta range ({lo}, {hi})")));
        }
        Ok(ThetaRange { lo, hi })
    }

    pub fn width(&self) -> Rational {
        Rational::from(&self.hi - &self.lo)
    }

    pub fn as_set(&self) -> IntervalSet {
        IntervalSet::interval(Component::open(self.lo.clone(), self.hi.clone()))
    }

    /// Checks `a ≤ lo < hi < 1` and that the range does not cross `√a`.
    pub fn check_twist_domain(&self, a: &Rational) -> Result<()> {
        if *a <= 0 || *a >= 1 {
            return Err(Error::domain(format!("a = {a} must lie in (0, 1)")));
        }
        if self.lo < *a || self.hi >= 1 {
            return Err(Error::domain(format!(
                "theta range ({}, {}) must lie in [a, 1) = [{a}, 1)",
                self.lo, self.hi
            )));
        }
        let lo2 = Rational::from(self.lo.square_ref());
        let hi2 = Rational::from(self.hi.square_ref());
        if lo2 < *a && hi2 > *a {
            return Err(Error::domain(format!(
                "theta range ({}, {}) crosses sqrt(a)",
                self.lo, self.hi
            )));
        }
        Ok(())
    }
}

/// `(a, c, γ, I)` together with `θ1 < θ2` and the margin `η`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricalParams {
    pub sys: DiophSystem,
    #[serde(with = "serde_rational")]
    pub theta1: Rational,
    #[serde(with = "serde_rational")]
    pub theta2: Rational,
    #[serde(with = "serde_rational")]
    pub eta: Rational,
}

impl MetricalParams {
    pub fn new(sys: DiophSystem, theta1: Rational, theta2: Rational, eta: Rational) -> Result<Self> {
        let p = MetricalParams { sys, theta1, theta2, eta };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        self.sys.validate()?;
        self.range()?.check_twist_domain(&self.sys.a)?;
        let third = Rational::from(&self.theta2 - &self.theta1) / 3u32;
        let room = Rational::from(1 - &self.theta2);
        let cap = self.theta1.clone().min(room).min(third);
        if self.eta <= 0 || self.eta >= cap {
            return Err(Error::domain(format!(
                "eta = {} must lie in (0, {cap})",
                self.eta
            )));
        }
        Ok(())
    }

    pub fn range(&self) -> Result<ThetaRange> {
        ThetaRange::new(self.theta1.clone(), self.theta2.clone())
    }

    /// Whether `θ2 < √a`, the side on which the second system is solvable.
    pub fn solvable_side(&self) -> bool {
        Rational::from(self.theta2.square_ref()) <= self.sys.a
    }
}

/// `ψ(n) = 1/n`.
pub fn psi(n: u64) -> Rational {
    Rational::from((1, n.max(1)))
}

/// `E_{n,m} = [m/n − ψ(n)/n, m/n + ψ(n)/n]`.
pub fn window_nm(n: u64, m: i64) -> Component {
    let centre = Rational::from((m, n));
    let r = Rational::from((Integer::from(1), Integer::from(n) * n));
    Component::closed(Rational::from(&centre - &r), centre + r)
}

/// `E_n = {θ ∈ range : ‖θn‖ ≤ ψ(n)}`, exactly.
pub fn set_e(n: u64, range: &ThetaRange) -> Result<IntervalSet> {
    if n == 0 {
        return Err(Error::domain("n must be >= 1"));
    }
    let nn = Rational::from(n);
    let first = floor_rational(&Rational::from(&range.lo * &nn)) - 1;
    let last = ceil_rational(&Rational::from(&range.hi * &nn)) + 1;
    let (first, last) = (to_i64(&first)?, to_i64(&last)?);
    let clip = range.as_set();
    let windows = IntervalSet::from_components((first..=last).map(|m| window_nm(n, m)));
    Ok(windows.intersect(&clip))
}

fn to_i64(i: &Integer) -> Result<i64> {
    i.to_i64().ok_or_else(|| Error::Overflow(format!("{i} does not fit in 64 bits")))
}

/// Shared pieces of the inversion `θ = exp(ln a · ln n / ln s)` where
/// `s = n^{φ_a(θ)}`.
struct Inverter {
    ln_a: CertifiedValue,
    ln_n: CertifiedValue,
    bits: u32,
}

impl Inverter {
    fn new(a: &Rational, n: u64, bits: u32) -> Result<Self> {
        Ok(Inverter {
            ln_a: real::ln_rational(a, bits + 16)?,
            ln_n: real::ln_rational(&Rational::from(n), bits + 16)?,
            bits,
        })
    }

    /// `n^{φ_a(θ)}`.
    fn power(&self, theta: &Rational) -> Result<CertifiedValue> {
        let lt = real::ln_rational(theta, self.bits + 16)?;
        let phi = self.ln_a.div(&lt)?;
        Ok(real::exp(&phi.mul(&self.ln_n).round_out(self.bits + 16), self.bits))
    }

    /// `θ` with `n^{φ_a(θ)} = s`, for `s > 1`.
    fn theta(&self, s: &Rational) -> Result<CertifiedValue> {
        let ls = real::ln_rational(s, self.bits + 16)?;
        let e = self.ln_a.mul(&self.ln_n).div(&ls)?;
        Ok(real::exp(&e.round_out(self.bits + 16), self.bits))
    }
}

/// `F_n ∩ domain`, where `F_n = {θ : {γ n^{φ_a(θ)}} ∈ I}`.
///
/// On each domain component `θ ↦ s = n^{φ_a(θ)}` is increasing, so the
/// condition `γ s ∈ k + I` is an interval in `s` and hence in `θ`. Inverted
/// endpoints are replaced by the midpoints of their enclosures; the widths
/// go into the error bound of the result.
pub fn set_f_on(n: u64, sys: &DiophSystem, domain: &IntervalSet) -> Result<IntervalSet> {
    sys.validate()?;
    if n < 2 {
        return Err(Error::domain("F_n needs n >= 2"));
    }
    if let (Some(first), Some(last)) = (domain.components().first(), domain.components().last()) {
        ThetaRange::new(first.lo.clone(), last.hi.clone())?.check_twist_domain(&sys.a)?;
    }
    if sys.i_lo == 0 && sys.i_hi == 1 {
        return Ok(domain.clone());
    }
    let inv = Inverter::new(&sys.a, n, ENDPOINT_BITS)?;
    let mut parts = Vec::new();
    let mut error = Rational::new();
    for comp in domain.components() {
        let s_lo = inv.power(&comp.lo)?;
        let s_hi = inv.power(&comp.hi)?;
        let t_a = s_lo.scale(&sys.gamma);
        let t_b = s_hi.scale(&sys.gamma);
        let t = t_a.hull(&t_b);
        let k_first = to_i64(&floor_rational(t.lo()))?;
        let k_last = to_i64(&floor_rational(t.hi()))?;
        for k in k_first..=k_last {
            let kq = Rational::from(k);
            let ends = (
                Rational::from(&kq + &sys.i_lo) / &sys.gamma,
                Rational::from(&kq + &sys.i_hi) / &sys.gamma,
            );
            // `s` over `k + [lo, hi)`: closed at `lo` in `t`, which is the left
            // end in `s` exactly when `γ > 0`
            let (s_left, s_right, left_closed, right_closed) = if sys.gamma > 0 {
                (ends.0, ends.1, true, false)
            } else {
                (ends.1, ends.0, false, true)
            };
            if s_right <= 1 {
                continue;
            }
            let (left, e_left) = endpoint(&inv, &s_left, &comp.lo)?;
            let (right, e_right) = endpoint(&inv, &s_right, &comp.lo)?;
            error += e_left;
            error += e_right;
            let piece = Component {
                lo: left,
                hi: right,
                lo_closed: left_closed,
                hi_closed: right_closed,
            };
            let clipped = IntervalSet::interval(piece).intersect(&IntervalSet::interval(comp.clone()));
            parts.extend(clipped.components().iter().cloned());
        }
    }
    Ok(IntervalSet::with_error(parts, error + domain.error()))
}

/// Rational stand-in for `θ(s)` and the width it may be off by. `s ≤ 1`
/// lies below every domain point and maps to `floor`.
fn endpoint(inv: &Inverter, s: &Rational, floor: &Rational) -> Result<(Rational, Rational)> {
    if *s <= 1 {
        return Ok((floor.clone() - 1u32, Rational::new()));
    }
    let th = inv.theta(s)?;
    Ok((th.mid(), th.width()))
}

/// `F_n` over a whole range.
pub fn set_f(n: u64, sys: &DiophSystem, range: &ThetaRange) -> Result<IntervalSet> {
    range.check_twist_domain(&sys.a)?;
    set_f_on(n, sys, &range.as_set())
}

/// `G_n = E_n ∩ F_n`, computing `F_n` only on the components of `E_n`.
pub fn set_g(n: u64, sys: &DiophSystem, range: &ThetaRange) -> Result<IntervalSet> {
    range.check_twist_domain(&sys.a)?;
    let e = set_e(n, range)?;
    set_f_on(n, sys, &e)
}

/// Index ranges `S_n ⊂ T_n`:
/// `S_n = {m : θ1 + η < m/n < θ2 − η}`, `T_n = {m : θ1 − η < m/n < θ2 + η}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexSets {
    pub n: u64,
    pub s: (i64, i64),
    pub t: (i64, i64),
}

impl IndexSets {
    pub fn new(n: u64, params: &MetricalParams) -> Result<Self> {
        let inner = |lo: Rational, hi: Rational| -> Result<(i64, i64)> {
            let nn = Rational::from(n);
            let first = floor_rational(&(lo * &nn)) + 1;
            let last = ceil_rational(&(hi * &nn)) - 1;
            Ok((to_i64(&first)?, to_i64(&last)?))
        };
        let eta = &params.eta;
        Ok(IndexSets {
            n,
            s: inner(
                Rational::from(&params.theta1 + eta),
                Rational::from(&params.theta2 - eta),
            )?,
            t: inner(
                Rational::from(&params.theta1 - eta),
                Rational::from(&params.theta2 + eta),
            )?,
        })
    }

    pub fn s_len(&self) -> u64 {
        (self.s.1 - self.s.0 + 1).max(0) as u64
    }

    pub fn t_len(&self) -> u64 {
        (self.t.1 - self.t.0 + 1).max(0) as u64
    }

    pub fn s_subset_of_t(&self) -> bool {
        self.s_len() == 0 || (self.t.0 <= self.s.0 && self.s.1 <= self.t.1)
    }
}

/// Where `ln n / n^{2−φ_a(θ2)} < λ(I)/3` starts to hold for good.
#[derive(Clone, Debug, Serialize)]
pub struct ClaimThreshold {
    /// `2 − φ_a(θ2)`.
    pub beta: f64,
    /// Natural log of the threshold `n0`.
    pub ln_n0: f64,
    /// `n0` when it fits in 64 bits.
    pub n0: Option<u64>,
}

/// The left side is `u e^{−βu}` with `u = ln n`, increasing up to `u = 1/β`
/// and decreasing after, so the threshold is the crossing past the peak.
pub fn claim_threshold(params: &MetricalParams) -> Result<ClaimThreshold> {
    params.validate()?;
    if !params.solvable_side() {
        return Err(Error::domain("the threshold needs theta2 < sqrt(a)"));
    }
    let a = params.sys.a.to_f64();
    let beta = 2.0 - a.ln() / params.theta2.to_f64().ln();
    let target = Rational::from(&params.sys.i_hi - &params.sys.i_lo).to_f64() / 3.0;
    let f = |u: f64| u * (-beta * u).exp();
    let peak = 1.0 / beta;
    let ln_n0 = if f(peak) < target {
        0.0
    } else {
        let (mut lo, mut hi) = (peak, 2.0 * peak);
        while f(hi) >= target {
            lo = hi;
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) >= target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    };
    let n0 = if ln_n0 < 43.0 {
        // refine on integers near the float estimate
        let mut n = (ln_n0.exp().floor() as u64).max(1);
        let g = |n: u64| f((n as f64).ln());
        while n > 1 && g(n - 1) < target {
            n -= 1;
        }
        while g(n) >= target {
            n += 1;
        }
        Some(n)
    } else {
        None
    };
    Ok(ClaimThreshold { beta, ln_n0, n0 })
}

/// Empirical mirror of the perturbation claim at one `n`: for `m ∈ S_n`
/// with `{γ n^{φ_a(m/n)}}` in the middle third of `I`, is `E_{n,m} ⊆ F_n`?
#[derive(Clone, Debug, Serialize)]
pub struct ClaimCheck {
    pub n: u64,
    pub s_count: u64,
    pub in_middle_third: u64,
    pub contained: u64,
    pub violations: Vec<i64>,
}

pub fn claim_check(n: u64, params: &MetricalParams) -> Result<ClaimCheck> {
    params.validate()?;
    let idx = IndexSets::new(n, params)?;
    let inv = Inverter::new(&params.sys.a, n, ENDPOINT_BITS)?;
    let (i0_lo, i0_hi) = params.sys.middle_third();
    let mut out = ClaimCheck {
        n,
        s_count: idx.s_len(),
        in_middle_third: 0,
        contained: 0,
        violations: Vec::new(),
    };
    for m in idx.s.0..=idx.s.1 {
        let centre = Rational::from((m, n));
        let t = inv.power(&centre)?.scale(&params.sys.gamma);
        let Some(frac) = crate::arith::frac_of(&t) else {
            continue;
        };
        if frac.in_half_open(&i0_lo, &i0_hi).decided() != Some(true) {
            continue;
        }
        out.in_middle_third += 1;
        let window = IntervalSet::interval(window_nm(n, m));
        let f = set_f_on(n, &params.sys, &window)?;
        let missing = window.length() - f.length() ;
        if missing <= *f.error() && f.len() == 1 {
            out.contained += 1;
        } else {
            out.violations.push(m);
        }
    }
    Ok(out)
}
