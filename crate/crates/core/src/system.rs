//! Solvers for the twisted approximation systems
//!
//! ```text
//!   ‖a^{1/α} n‖ ≤ c / n^{α−1},   {γ n^α} ∈ I          (first system)
//!   ‖θ n‖       ≤ c / n^{φ−1},   {γ n^φ} ∈ I,  φ = ln a / ln θ   (second)
//! ```
//!
//! `I = [lo, hi)` is closed on the left and open on the right.

use std::io::Write;

use rayon::prelude::*;
use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::arith::{
    check_phi_domain, dist_nearest_int, frac_of, phi_at, pow_at, rational_root_alpha_at, real,
    serde_rational, CertifiedValue, Exponent, PrecisionPolicy, Truth,
};
use crate::cf::{cf_expand_with, CfTarget};
use crate::error::{Error, Result};

/// Parameters `(a, c, γ, I)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiophSystem {
    #[serde(with = "serde_rational")]
    pub a: Rational,
    #[serde(with = "serde_rational")]
    pub c: Rational,
    #[serde(with = "serde_rational")]
    pub gamma: Rational,
    #[serde(with = "serde_rational")]
    pub i_lo: Rational,
    #[serde(with = "serde_rational")]
    pub i_hi: Rational,
}

impl DiophSystem {
    pub fn new(a: Rational, c: Rational, gamma: Rational, i_lo: Rational, i_hi: Rational) -> Result<Self> {
        let s = DiophSystem { a, c, gamma, i_lo, i_hi };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.a <= 0 || self.a == 1 {
            return Err(Error::domain(format!("a = {} must be positive and != 1", self.a)));
        }
        if self.c <= 0 {
            return Err(Error::domain(format!("c = {} must be positive", self.c)));
        }
        if self.gamma == 0 {
            return Err(Error::domain("gamma must be nonzero"));
        }
        if self.i_lo < 0 || self.i_hi > 1 || self.i_lo >= self.i_hi {
            return Err(Error::domain(format!(
                "I = [{}, {}) must be a non-empty sub-interval of [0, 1)",
                self.i_lo, self.i_hi
            )));
        }
        Ok(())
    }

    /// Middle third of `I`, with exact endpoints.
    pub fn middle_third(&self) -> (Rational, Rational) {
        let third = Rational::from(&self.i_hi - &self.i_lo) / 3u32;
        (
            Rational::from(&self.i_lo + &third),
            Rational::from(&self.i_hi - &third),
        )
    }

    /// `√a` as an enclosure; the threshold between the two sides for the
    /// second system.
    pub fn sqrt_a(&self, bits: u32) -> CertifiedValue {
        real::root_rational(&self.a, 2, bits).expect("a > 0")
    }

    fn twist(&self, power: &CertifiedValue) -> Option<(CertifiedValue, Truth)> {
        let scaled = power.scale(&self.gamma);
        let f = frac_of(&scaled)?;
        let t = f.in_half_open(&self.i_lo, &self.i_hi);
        Some((f, t))
    }
}

/// Exponent of the system: `α` directly, or `φ_a(θ)` for rational `θ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Twist {
    Alpha(Exponent),
    Theta(Rational),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Scan,
    Convergent,
    Multiple,
}

impl Source {
    pub fn as_str(&self) -> &'static str {
        match self {
            Source::Scan => "scan",
            Source::Convergent => "convergent",
            Source::Multiple => "multiple",
        }
    }
}

/// An accepted `n` with certified bounds on both quantities.
#[derive(Clone, Debug)]
pub struct SystemSolution {
    pub n: u64,
    pub dist: CertifiedValue,
    pub bound: CertifiedValue,
    pub frac: CertifiedValue,
    pub source: Source,
}

#[derive(Clone, Debug, Serialize)]
pub struct Skipped {
    pub n: u64,
    pub reason: String,
}

#[derive(Clone, Debug, Copy, PartialEq, Eq)]
pub struct SolverOptions {
    /// Every `n` up to this bound is tested.
    pub scan_cutoff: u64,
    /// Multiples `j q_k`, `j ≤ multiples`, of convergent denominators are
    /// tested beyond the cutoff.
    pub multiples: u64,
    /// Cap on partial quotients computed for candidate generation.
    pub cf_terms: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            scan_cutoff: 1_000_000,
            multiples: 8,
            cf_terms: 200,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SystemReport {
    pub solutions: Vec<SystemSolution>,
    /// All `n ≤ scan_limit` were tested.
    pub scan_limit: u64,
    pub candidates_tested: u64,
    pub candidates_accepted: u64,
    pub skipped: Vec<Skipped>,
    /// `(q_k, {γ q_k^α})` for convergent denominators up to the budget.
    /// Exploratory only.
    pub convergent_twists: Vec<(u64, f64)>,
    /// Whether every `n ≤ budget` is accounted for.
    pub complete: bool,
    pub budget: u64,
}

impl SystemReport {
    pub fn label(&self) -> String {
        if self.solutions.is_empty() {
            format!("no solution <= {}", self.budget)
        } else {
            format!("{} solution(s) <= {}", self.solutions.len(), self.budget)
        }
    }

    pub fn ns(&self) -> Vec<u64> {
        self.solutions.iter().map(|s| s.n).collect()
    }

    /// CSV with header `n,dist,dist_err,bound,frac,frac_err,source`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["n", "dist", "dist_err", "bound", "frac", "frac_err", "source"])?;
        for s in &self.solutions {
            out.write_record([
                s.n.to_string(),
                format!("{:.17e}", s.dist.to_f64()),
                format!("{:.3e}", s.dist.radius_f64()),
                format!("{:.17e}", s.bound.to_f64()),
                format!("{:.17e}", s.frac.to_f64()),
                format!("{:.3e}", s.frac.radius_f64()),
                s.source.as_str().to_string(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

enum Outcome {
    Accept(SystemSolution),
    Reject,
}

/// Evaluates the first system at `n` along the precision ladder.
fn eval_one(sys: &DiophSystem, alpha: &Exponent, n: u64, policy: &PrecisionPolicy, source: Source) -> Result<Outcome> {
    policy.escalate(
        || format!("first system at n = {n}"),
        |bits| {
            let root = rational_root_alpha_at(&sys.a, alpha, bits)?;
            let t = root.scale(&Rational::from(n));
            let dist = match dist_nearest_int(&t) {
                Ok(d) => d,
                Err(Error::AmbiguousRounding { .. }) => return Ok(None),
                Err(e) => return Err(e),
            };
            let pow = pow_at(n, alpha, bits);
            let bound = pow.recip()?.scale(&Rational::from(&sys.c * Integer::from(n)));
            match dist.le(&bound) {
                Truth::Unknown => return Ok(None),
                Truth::False => return Ok(Some(Outcome::Reject)),
                Truth::True => {}
            }
            let Some((frac, t)) = sys.twist(&pow) else {
                return Ok(None);
            };
            Ok(match t {
                Truth::Unknown => None,
                Truth::False => Some(Outcome::Reject),
                Truth::True => Some(Outcome::Accept(SystemSolution {
                    n,
                    dist,
                    bound,
                    frac,
                    source: source.clone(),
                })),
            })
        },
    )
}

fn test_candidates(
    ns: &[u64],
    source: Source,
    eval: impl Fn(u64, Source) -> Result<Outcome> + Sync,
) -> Result<(Vec<SystemSolution>, Vec<Skipped>)> {
    let results: Vec<(u64, Result<Outcome>)> =
        ns.par_iter().map(|&n| (n, eval(n, source.clone()))).collect();
    let mut sols = Vec::new();
    let mut skipped = Vec::new();
    for (n, r) in results {
        match r {
            Ok(Outcome::Accept(s)) => sols.push(s),
            Ok(Outcome::Reject) => {}
            Err(e @ Error::PrecisionExhausted { .. }) => skipped.push(Skipped {
                n,
                reason: e.to_string(),
            }),
            Err(e) => return Err(e),
        }
    }
    Ok((sols, skipped))
}

/// All `n ≤ budget` found for the first system: an exhaustive certified scan
/// up to the cutoff, then multiples of convergent denominators of
/// `a^{1/α}`.
pub fn solve_system_one(
    sys: &DiophSystem,
    alpha: &Exponent,
    budget: u64,
    opts: &SolverOptions,
    policy: &PrecisionPolicy,
) -> Result<SystemReport> {
    sys.validate()?;
    if budget == 0 {
        return Err(Error::domain("budget must be >= 1"));
    }
    let scan_limit = budget.min(opts.scan_cutoff);
    let eval = |n: u64, src: Source| eval_one(sys, alpha, n, policy, src);
    let scan: Vec<u64> = (1..=scan_limit).collect();
    let (mut solutions, mut skipped) = test_candidates(&scan, Source::Scan, eval)?;
    let mut tested = scan_limit;

    let target = CfTarget::RootOf {
        a: sys.a.clone(),
        alpha: alpha.clone(),
    };
    let cf = convergent_denominators(&target, budget, opts.cf_terms, policy)?;
    let mut extra: Vec<u64> = cf
        .iter()
        .flat_map(|&q| (1..=opts.multiples).filter_map(move |j| q.checked_mul(j)))
        .filter(|&m| m > scan_limit && m <= budget)
        .collect();
    extra.sort_unstable();
    extra.dedup();
    tested += extra.len() as u64;
    let (more, more_skipped) = test_candidates(&extra, Source::Convergent, eval)?;
    solutions.extend(more);
    skipped.extend(more_skipped);
    solutions.sort_by_key(|s| s.n);

    let convergent_twists = cf
        .iter()
        .map(|&q| {
            let v = pow_at(q, alpha, policy.start_bits).scale(&sys.gamma);
            let f = v.to_f64();
            (q, f - f.floor())
        })
        .collect();
    let accepted = solutions.len() as u64;
    Ok(SystemReport {
        solutions,
        scan_limit,
        candidates_tested: tested,
        candidates_accepted: accepted,
        skipped,
        convergent_twists,
        complete: scan_limit == budget,
        budget,
    })
}

/// Convergent denominators `q_k ≤ budget`, deduplicated and ascending.
fn convergent_denominators(target: &CfTarget, budget: u64, cap: usize, policy: &PrecisionPolicy) -> Result<Vec<u64>> {
    let mut terms = 16.min(cap.max(1));
    loop {
        let cf = cf_expand_with(target, terms, policy)?;
        let qs: Vec<u64> = cf.denominators().filter_map(|q| q.to_u64()).collect();
        let reached = cf.exact_rational
            || cf.denominators().last().is_some_and(|q| *q > budget)
            || terms >= cap;
        if reached {
            let mut out: Vec<u64> = qs.into_iter().filter(|&q| q <= budget).collect();
            out.dedup();
            return Ok(out);
        }
        terms = (terms * 2).min(cap);
    }
}

/// Evaluates the second system at `n`. `‖θn‖` is exact; the exponent
/// `φ = φ_a(θ)` is re-enclosed at every precision.
fn eval_two(
    sys: &DiophSystem,
    theta: &Rational,
    phi0: &CertifiedValue,
    n: u64,
    policy: &PrecisionPolicy,
    source: Source,
) -> Result<Outcome> {
    let t = Rational::from(theta * Integer::from(n));
    let dist = dist_nearest_int(&CertifiedValue::exact(t))?;
    policy.escalate(
        || format!("second system at n = {n}"),
        |bits| {
            let phi = if bits == policy.start_bits {
                phi0.clone()
            } else {
                phi_at(&sys.a, theta, bits)?
            };
            let pow = real::pow_real(&Rational::from(n), &phi, bits)?;
            let bound = pow.recip()?.scale(&Rational::from(&sys.c * Integer::from(n)));
            match dist.le(&bound) {
                Truth::Unknown => return Ok(None),
                Truth::False => return Ok(Some(Outcome::Reject)),
                Truth::True => {}
            }
            let Some((frac, t)) = sys.twist(&pow) else {
                return Ok(None);
            };
            Ok(match t {
                Truth::Unknown => None,
                Truth::False => Some(Outcome::Reject),
                Truth::True => Some(Outcome::Accept(SystemSolution {
                    n,
                    dist: dist.clone(),
                    bound,
                    frac,
                    source: source.clone(),
                })),
            })
        },
    )
}

/// Largest `n` for which a non-multiple of the denominator `v` of `θ` can
/// still satisfy `1/v ≤ ‖θn‖ ≤ c/n^{φ−1}`, rounded up. `None` if it does
/// not fit in 64 bits.
fn near_miss_limit(sys: &DiophSystem, theta: &Rational, policy: &PrecisionPolicy) -> Result<Option<u64>> {
    let v = Rational::from(theta.denom());
    let phi = phi_at(&sys.a, theta, policy.start_bits)?;
    let e = phi.add_rational(&Rational::from(-1)).recip()?;
    // (c v)^{1/(φ−1)} is increasing in the exponent when c v ≥ 1
    let base = Rational::from(&sys.c * &v);
    let r = real::pow_real(&base, &e, policy.start_bits)?;
    let hi = r.hi().to_f64().ceil() + 1.0;
    Ok((hi < 1.8e19).then_some(hi as u64))
}

/// All `n ≤ budget` found for the second system with rational `θ`.
///
/// Multiples of the denominator `v` of `θ` have `‖θn‖ = 0`. Any other `n`
/// has `‖θn‖ ≥ 1/v`, which bounds how far non-multiples need scanning.
pub fn solve_system_two(
    sys: &DiophSystem,
    theta: &Rational,
    budget: u64,
    opts: &SolverOptions,
    policy: &PrecisionPolicy,
) -> Result<SystemReport> {
    sys.validate()?;
    check_phi_domain(&sys.a, theta)?;
    if budget == 0 {
        return Err(Error::domain("budget must be >= 1"));
    }
    let v = theta
        .denom()
        .to_u64()
        .ok_or_else(|| Error::Overflow("denominator of theta".into()))?;
    let needed = near_miss_limit(sys, theta, policy)?.unwrap_or(u64::MAX);
    let scan_limit = budget.min(opts.scan_cutoff).min(needed.max(1));
    let phi0 = phi_at(&sys.a, theta, policy.start_bits)?;
    let eval = |n: u64, src: Source| eval_two(sys, theta, &phi0, n, policy, src);
    let scan: Vec<u64> = (1..=scan_limit).collect();
    let (mut solutions, mut skipped) = test_candidates(&scan, Source::Scan, eval)?;
    let mut tested = scan_limit;
    let first = scan_limit / v + 1;
    let multiples: Vec<u64> = (first..)
        .map_while(|j| j.checked_mul(v).filter(|&m| m <= budget))
        .collect();
    tested += multiples.len() as u64;
    let (more, more_skipped) = test_candidates(&multiples, Source::Multiple, eval)?;
    solutions.extend(more);
    skipped.extend(more_skipped);
    solutions.sort_by_key(|s| s.n);
    let accepted = solutions.len() as u64;
    Ok(SystemReport {
        solutions,
        scan_limit,
        candidates_tested: tested,
        candidates_accepted: accepted,
        skipped,
        convergent_twists: Vec::new(),
        complete: scan_limit == budget || needed <= scan_limit,
        budget,
    })
}

/// Independent re-check of one `n`.
#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub n: u64,
    pub approx: Truth,
    pub twist: Truth,
    /// Precisions tried, in order.
    pub precision_trace: Vec<u32>,
    pub dist: f64,
    pub bound: f64,
    pub frac: f64,
}

impl Certificate {
    pub fn accepted(&self) -> bool {
        self.approx.is_true() && self.twist.is_true()
    }
}

/// `(r, s)` with `a^s = θ^r`, `1 ≤ r, s ≤ 12`, by exact powering; then
/// `φ_a(θ) = r/s`.
fn exact_ratio(a: &Rational, theta: &Rational) -> Option<(u32, u32)> {
    use rug::ops::Pow;
    for s in 1..=12u32 {
        let lhs = Rational::from(a.pow(s));
        for r in 1..=12u32 {
            if Rational::from(theta.pow(r)) == lhs {
                return Some((r, s));
            }
        }
    }
    None
}

/// `m` with `m^k = x`, found from a floating estimate.
fn perfect_root(x: &Integer, k: u32) -> Option<Integer> {
    use rug::ops::Pow;
    let est = x.to_f64().powf(1.0 / k as f64).round();
    for d in [-1.0, 0.0, 1.0] {
        let m = Integer::from_f64(est + d)?;
        if m >= 0 && Integer::from((&m).pow(k)) == *x {
            return Some(m);
        }
    }
    None
}

/// `n^e` for rational `e = p/q`, exact if `n^p` is a perfect `q`-th power.
fn exact_power(n: u64, p: u32, q: u32) -> Option<Rational> {
    use rug::ops::Pow;
    let np = Integer::from(n).pow(p);
    perfect_root(&np, q).map(Rational::from)
}

/// Re-evaluates both conditions from logarithms and exponentials only,
/// starting at 256 bits. Shares no solver intermediates.
pub fn verify_solution(sys: &DiophSystem, twist: &Twist, n: u64, policy: &PrecisionPolicy) -> Result<Certificate> {
    sys.validate()?;
    if n == 0 {
        return Err(Error::domain("n must be >= 1"));
    }
    let ladder: Vec<u32> = policy
        .starting_at(policy.start_bits.max(256).min(policy.max_bits))
        .precisions();
    let mut trace = Vec::new();
    let mut last = (Truth::Unknown, Truth::Unknown, f64::NAN, f64::NAN, f64::NAN);
    let ln_n_exact = n == 1;
    // exponent as an exact rational where one is available
    let exact_exp: Option<(u32, u32)> = match twist {
        Twist::Alpha(al) => al.as_rational(),
        Twist::Theta(th) => {
            check_phi_domain(&sys.a, th)?;
            exact_ratio(&sys.a, th)
        }
    };
    for bits in ladder {
        trace.push(bits);
        let w = bits + 16;
        let ln_n = if ln_n_exact {
            CertifiedValue::exact(0)
        } else {
            real::ln_rational(&Rational::from(n), w)?
        };
        let ln_a = real::ln_rational(&sys.a, w)?;
        let (dist, expo) = match twist {
            Twist::Alpha(al) => {
                // a^{1/α} n = exp(ln a / α + ln n)
                let inv = al.enclose(w).recip()?;
                let t = real::exp(&ln_a.mul(&inv).add(&ln_n).round_out(w), w);
                let t = match (al.as_rational(), sys.a.denom() == &1) {
                    // detect integer roots of integer a independently
                    (Some((p, q)), true) => {
                        let aq = Integer::from(rug::ops::Pow::pow(sys.a.numer(), q));
                        match perfect_root(&aq, p) {
                            Some(r) => CertifiedValue::exact(Rational::from(r * Integer::from(n))),
                            None => t,
                        }
                    }
                    _ => t,
                };
                (dist_nearest_int(&t), al.enclose(w))
            }
            Twist::Theta(th) => {
                let r = (th.numer() * Integer::from(n)) % th.denom();
                let r = r.to_u64().unwrap_or(0);
                let v = th.denom().to_u64().unwrap_or(1);
                let d = Rational::from((r.min(v - r), v));
                let lt = real::ln_rational(th, w)?;
                let phi = match exact_exp {
                    Some((p, q)) => CertifiedValue::exact(Rational::from((p, q))),
                    None => ln_a.div(&lt)?,
                };
                (Ok(CertifiedValue::exact(d)), phi)
            }
        };
        let dist = match dist {
            Ok(d) => d,
            Err(Error::AmbiguousRounding { .. }) => continue,
            Err(e) => return Err(e),
        };
        // n^e = exp(e ln n), or exact when n^e is an integer
        let pow = match exact_exp.and_then(|(p, q)| exact_power(n, p, q)) {
            Some(v) => CertifiedValue::exact(v),
            None => real::exp(&expo.mul(&ln_n).round_out(w), w),
        };
        let bound = pow.recip()?.scale(&Rational::from(&sys.c * Integer::from(n)));
        let approx = dist.le(&bound);
        let g = pow.scale(&sys.gamma);
        let (tw, frac) = match g.floor() {
            Some(f) => {
                let fr = g.add_rational(&Rational::from(-f));
                (fr.in_half_open(&sys.i_lo, &sys.i_hi), fr.to_f64())
            }
            None => (Truth::Unknown, f64::NAN),
        };
        last = (approx, tw, dist.to_f64(), bound.to_f64(), frac);
        if approx == Truth::False || (approx.is_known() && tw.is_known()) {
            break;
        }
    }
    Ok(Certificate {
        n,
        approx: last.0,
        twist: last.1,
        precision_trace: trace,
        dist: last.2,
        bound: last.3,
        frac: last.4,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        crate::arith::parse_rational(s).unwrap()
    }

    fn sys(a: &str, c: &str, g: &str, lo: &str, hi: &str) -> DiophSystem {
        DiophSystem::new(q(a), q(c), q(g), q(lo), q(hi)).unwrap()
    }

    fn ex(s: &str) -> Exponent {
        Exponent::parse(s).unwrap()
    }

    #[test]
    fn validation() {
        assert!(DiophSystem::new(q("1"), q("1"), q("1"), q("0"), q("1")).is_err());
        assert!(DiophSystem::new(q("2"), q("0"), q("1"), q("0"), q("1")).is_err());
        assert!(DiophSystem::new(q("2"), q("1"), q("0"), q("0"), q("1")).is_err());
        assert!(DiophSystem::new(q("2"), q("1"), q("1"), q("1/2"), q("1/2")).is_err());
        let s = sys("2", "1", "1", "0", "1/2");
        assert_eq!(s.middle_third(), (q("1/6"), q("1/3")));
    }

    #[test]
    fn first_system_solvable_side() {
        let s = sys("2", "1", "1", "0", "1");
        let p = PrecisionPolicy::default();
        let r = solve_system_one(&s, &ex("3/2"), 10_000, &SolverOptions::default(), &p).unwrap();
        assert!(!r.solutions.is_empty());
        assert!(r.complete);
        for sol in &r.solutions {
            let c = verify_solution(&s, &Twist::Alpha(ex("3/2")), sol.n, &p).unwrap();
            assert!(c.accepted(), "{c:?}");
        }
        // convergent denominators of 2^{2/3} solve the untwisted inequality
        assert!(r.ns().contains(&1) || r.ns().contains(&2));
    }

    #[test]
    fn convergent_candidates_beyond_cutoff() {
        let s = sys("2", "1", "1", "0", "1");
        let p = PrecisionPolicy::default();
        let opts = SolverOptions {
            scan_cutoff: 100,
            ..SolverOptions::default()
        };
        let r = solve_system_one(&s, &ex("3/2"), 1_000_000, &opts, &p).unwrap();
        assert!(!r.complete);
        assert!(r.solutions.iter().any(|s| s.source == Source::Convergent));
        assert!(r.candidates_tested > 100);
        assert!(!r.convergent_twists.is_empty());
    }

    #[test]
    fn verify_rejects_a_far_point() {
        let s = sys("2", "1/10", "1", "0", "1");
        let c = verify_solution(&s, &Twist::Alpha(ex("3/2")), 1, &PrecisionPolicy::default()).unwrap();
        assert_eq!(c.approx, Truth::False);
        assert!(!c.accepted());
        assert!((c.dist - 0.412_598_948_031_800_6).abs() < 1e-12);
    }

    #[test]
    fn verify_handles_exact_boundaries() {
        // a = 8, α = 3/2: 8^{2/3} = 4 exactly, so the distance is exactly 0;
        // n = 4: 4^{3/2} = 8 lands on the left end of I = [0, 1/2).
        let s = sys("8", "1", "1", "0", "1/2");
        let c = verify_solution(&s, &Twist::Alpha(ex("3/2")), 4, &PrecisionPolicy::default()).unwrap();
        assert!(c.accepted(), "{c:?}");
        let s = sys("8", "1", "1", "1/2", "1");
        let c = verify_solution(&s, &Twist::Alpha(ex("3/2")), 4, &PrecisionPolicy::default()).unwrap();
        assert_eq!(c.twist, Truth::False);
    }

    #[test]
    fn second_system_rational_theta() {
        let s = sys("1/4", "1", "1", "0", "1");
        let p = PrecisionPolicy::default();
        let r = solve_system_two(&s, &q("3/10"), 10_000, &SolverOptions::default(), &p).unwrap();
        let ns = r.ns();
        for m in (10..=10_000).step_by(10) {
            assert!(ns.contains(&m), "multiple {m}");
        }
        for sol in r.solutions.iter().take(50) {
            let c = verify_solution(&s, &Twist::Theta(q("3/10")), sol.n, &p).unwrap();
            assert!(c.accepted(), "{c:?}");
        }
        assert!(solve_system_two(&s, &q("1"), 100, &SolverOptions::default(), &p).is_err());
        assert!(solve_system_two(&s, &q("1/5"), 100, &SolverOptions::default(), &p).is_err());
    }

    #[test]
    fn label_is_never_unsolvable() {
        let s = sys("2", "1/1000", "1", "0", "1/1000");
        let r = solve_system_one(&s, &ex("5/2"), 200, &SolverOptions::default(), &PrecisionPolicy::default()).unwrap();
        assert!(r.solutions.is_empty());
        assert_eq!(r.label(), "no solution <= 200");
    }
}
