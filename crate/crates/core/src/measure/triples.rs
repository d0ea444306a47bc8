use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::arith::{ceil_rational, floor_rational, serde_rational};
use crate::error::{Error, Result};
use crate::primes::{is_prime, primes_between};

/// Number of integers strictly inside `(lo, hi)`.
fn open_count(lo: &Rational, hi: &Rational) -> u64 {
    let first: Integer = floor_rational(lo) + 1;
    let last: Integer = ceil_rational(hi) - 1;
    let n: Integer = Integer::from(&last - &first) + 1;
    if n <= 0 {
        0
    } else {
        n.to_u64().unwrap_or(u64::MAX)
    }
}

/// Primes `q` with `Q < q < min(2Q, N + 1)`.
pub fn triple_primes(n: u64, big_q: u64) -> Vec<u64> {
    let hi = (2 * big_q).min(n + 1);
    if hi <= big_q + 1 {
        return Vec::new();
    }
    primes_between(big_q, hi)
}

/// Counts `(q, r, s)` with `q` a prime in `(Q, min(2Q, N+1))`,
/// `r/p, s/q ∈ (η1, η2)` and `|sp − rq| < L`.
pub fn count_triples(
    n: u64,
    big_q: u64,
    p: u64,
    l: &Rational,
    eta1: &Rational,
    eta2: &Rational,
) -> Result<u64> {
    if !is_prime(p) || p > big_q {
        return Err(Error::domain(format!("p = {p} must be a prime <= Q = {big_q}")));
    }
    if *l <= 0 {
        return Err(Error::domain("L must be positive"));
    }
    if *eta1 <= 0 || eta1 >= eta2 || *eta2 >= 1 {
        return Err(Error::domain("need 0 < eta1 < eta2 < 1"));
    }
    let pq = Rational::from(p);
    let r_lo: Integer = floor_rational(&Rational::from(eta1 * &pq)) + 1;
    let r_hi: Integer = ceil_rational(&Rational::from(eta2 * &pq)) - 1;
    let mut total = 0u64;
    for q in triple_primes(n, big_q) {
        let qq = Rational::from(q);
        let s_lo = Rational::from(eta1 * &qq);
        let s_hi = Rational::from(eta2 * &qq);
        let mut r = r_lo.clone();
        while r <= r_hi {
            // |sp − rq| < L  ⟺  s ∈ ((rq − L)/p, (rq + L)/p)
            let rq = Rational::from(Integer::from(&r * q));
            let lo = (Rational::from(&rq - l) / &pq).max(s_lo.clone());
            let hi = (rq + l) / &pq;
            let hi = hi.min(s_hi.clone());
            total += open_count(&lo, &hi);
            r += 1;
        }
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleRow {
    pub n: u64,
    pub q: u64,
    pub p: u64,
    #[serde(with = "serde_rational")]
    pub l: Rational,
}

#[derive(Clone, Debug, Serialize)]
pub struct TripleOutcome {
    pub n: u64,
    pub q: u64,
    pub p: u64,
    pub l: f64,
    pub count: u64,
    pub prime_count: u64,
    /// `(η2 − η1) · L · #{q}`.
    pub main_term: f64,
}

/// Fitted constants for `count ≤ C (η2 − η1) L #{q} + K Q`.
#[derive(Clone, Debug, Serialize)]
pub struct TripleBoundCheck {
    pub rows: Vec<TripleOutcome>,
    /// Smallest `K` with `C = 1`.
    pub k_unit: f64,
    /// Least-squares `C` through the origin over rows with a main term.
    pub c_fit: f64,
    /// Smallest `K` with `C = c_fit`.
    pub k_fit: f64,
    /// Rows whose count exceeds the main term alone at `C = 1`.
    pub violations: Vec<usize>,
}

pub fn bound_check_triples(rows: &[TripleRow], eta1: &Rational, eta2: &Rational) -> Result<TripleBoundCheck> {
    if rows.is_empty() {
        return Err(Error::EmptyInput);
    }
    let width = Rational::from(eta2 - eta1).to_f64();
    let outcomes: Vec<TripleOutcome> = rows
        .iter()
        .map(|r| {
            let count = count_triples(r.n, r.q, r.p, &r.l, eta1, eta2)?;
            let prime_count = triple_primes(r.n, r.q).len() as u64;
            Ok(TripleOutcome {
                n: r.n,
                q: r.q,
                p: r.p,
                l: r.l.to_f64(),
                count,
                prime_count,
                main_term: width * r.l.to_f64() * prime_count as f64,
            })
        })
        .collect::<Result<_>>()?;
    let k_for = |c: f64| {
        outcomes
            .iter()
            .map(|o| (o.count as f64 - c * o.main_term) / o.q as f64)
            .fold(0.0f64, f64::max)
    };
    let (num, den) = outcomes
        .iter()
        .filter(|o| o.main_term > 0.0)
        .fold((0.0, 0.0), |(n, d), o| (n + o.count as f64 * o.main_term, d + o.main_term * o.main_term));
    let c_fit = if den > 0.0 { num / den } else { 0.0 };
    let violations = outcomes
        .iter()
        .enumerate()
        .filter(|(_, o)| o.count as f64 > o.main_term)
        .map(|(i, _)| i)
        .collect();
    Ok(TripleBoundCheck {
        k_unit: k_for(1.0),
        k_fit: k_for(c_fit),
        c_fit,
        violations,
        rows: outcomes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn naive(n: u64, big_q: u64, p: u64, l: &Rational, e1: &Rational, e2: &Rational) -> u64 {
        let mut c = 0;
        for qq in big_q + 1..(2 * big_q).min(n + 1) {
            if !is_prime(qq) {
                continue;
            }
            for r in 1..p {
                if !(Rational::from((r, p)) > *e1 && Rational::from((r, p)) < *e2) {
                    continue;
                }
                for s in 1..qq {
                    let sq = Rational::from((s, qq));
                    let d = (s as i64 * p as i64 - r as i64 * qq as i64).abs();
                    if sq > *e1 && sq < *e2 && Rational::from(d) < *l {
                        c += 1;
                    }
                }
            }
        }
        c
    }

    #[test]
    fn small_example() {
        assert_eq!(count_triples(10, 2, 2, &q(3, 1), &q(1, 5), &q(4, 5)).unwrap(), 2);
    }

    #[test]
    fn matches_naive_loop() {
        let (e1, e2) = (q(1, 5), q(4, 5));
        for (n, big_q, p, l) in [(100, 30, 7, q(5, 2)), (60, 40, 13, q(10, 1)), (1000, 50, 47, q(1, 1)), (25, 20, 3, q(7, 3))] {
            assert_eq!(count_triples(n, big_q, p, &l, &e1, &e2).unwrap(), naive(n, big_q, p, &l, &e1, &e2));
        }
    }

    #[test]
    fn short_reach_forces_zero() {
        // s < q and distinct primes make sp − rq nonzero
        assert_eq!(count_triples(1000, 100, 97, &q(1, 1), &q(1, 10), &q(9, 10)).unwrap(), 0);
    }

    #[test]
    fn empty_prime_range() {
        assert_eq!(count_triples(5, 10, 7, &q(3, 1), &q(1, 5), &q(4, 5)).unwrap(), 0);
        assert!(count_triples(100, 10, 9, &q(3, 1), &q(1, 5), &q(4, 5)).is_err());
        assert!(count_triples(100, 10, 7, &q(0, 1), &q(1, 5), &q(4, 5)).is_err());
    }

    #[test]
    fn fitted_constants_cover_the_grid() {
        let rows: Vec<TripleRow> = [10u64, 100, 1000]
            .iter()
            .flat_map(|&big_q| {
                [2u64, 7].into_iter().flat_map(move |p| {
                    [1i64, 4, 16].into_iter().map(move |l| TripleRow { n: 4 * big_q, q: big_q, p, l: q(l, 1) })
                })
            })
            .collect();
        let b = bound_check_triples(&rows, &q(1, 5), &q(4, 5)).unwrap();
        assert!(b.c_fit.is_finite() && b.k_fit.is_finite());
        for o in &b.rows {
            assert!(o.count as f64 <= b.c_fit * o.main_term + b.k_fit * o.q as f64 + 1e-9);
            assert!(o.count as f64 <= o.main_term + b.k_unit * o.q as f64 + 1e-9);
        }
    }
}
