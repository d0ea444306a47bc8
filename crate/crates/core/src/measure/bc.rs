use rayon::prelude::*;
use rug::Rational;
use serde::Serialize;

use super::interval_set::IntervalSet;
use super::sets::{set_g, MetricalParams};
use crate::error::{Error, Result};
use crate::primes::primes_below;

/// Second-moment statistics of `G_p` over primes `p < P`.
#[derive(Clone, Debug, Serialize)]
pub struct BcReport {
    pub limit: u64,
    pub primes: Vec<u64>,
    /// `λ(G_p)` per prime.
    pub measures: Vec<f64>,
    /// `λ(G_p) · p / (θ2 − θ1)`.
    pub normalized: Vec<f64>,
    pub sum: f64,
    /// `Σ_{p,q} λ(G_p ∩ G_q)` over ordered pairs, diagonal included.
    pub pair_sum: f64,
    /// `(Σ λ(G_p))² / Σ_{p,q} λ(G_p ∩ G_q)`.
    pub ratio: f64,
    /// Fitted constant in `λ(G_p) ≥ κ (θ2 − θ1) / p`.
    pub kappa: f64,
    /// Smallest prime from which the fitted bound holds up to `P`.
    pub p0: u64,
    /// Accumulated endpoint error on `sum` and `pair_sum`.
    pub error: f64,
}

pub fn bc_statistics(params: &MetricalParams, limit: u64) -> Result<BcReport> {
    params.validate()?;
    if limit < 3 {
        return Err(Error::domain("prime limit must be >= 3"));
    }
    let range = params.range()?;
    let primes = primes_below(limit);
    let sets: Vec<IntervalSet> = primes
        .par_iter()
        .map(|&p| set_g(p, &params.sys, &range))
        .collect::<Result<_>>()?;
    let measures: Vec<f64> = sets.iter().map(|s| s.length().to_f64()).collect();
    let sum: f64 = measures.iter().sum();
    let off_diagonal: Vec<(Rational, Rational)> = (0..sets.len())
        .into_par_iter()
        .map(|i| {
            let mut len = Rational::new();
            let mut err = Rational::new();
            for j in i + 1..sets.len() {
                let x = sets[i].intersect(&sets[j]);
                len += x.length();
                err += x.error();
            }
            (len, err)
        })
        .collect();
    let cross: f64 = off_diagonal.iter().map(|(l, _)| l.to_f64()).sum();
    let pair_sum = sum + 2.0 * cross;
    let own_err: f64 = sets.iter().map(|s| s.error().to_f64()).sum();
    let cross_err: f64 = off_diagonal.iter().map(|(_, e)| e.to_f64()).sum();
    let width = range.width().to_f64();
    let normalized: Vec<f64> = primes
        .iter()
        .zip(&measures)
        .map(|(&p, m)| m * p as f64 / width)
        .collect();
    let (kappa, p0) = fit_kappa(&primes, &normalized);
    Ok(BcReport {
        limit,
        ratio: if pair_sum > 0.0 { sum * sum / pair_sum } else { 0.0 },
        primes,
        measures,
        normalized,
        sum,
        pair_sum,
        kappa,
        p0,
        error: own_err + 2.0 * cross_err,
    })
}

/// `κ` is half the median normalised measure over the upper half of the
/// primes; `p0` is the first prime after the last one falling below `κ`.
fn fit_kappa(primes: &[u64], normalized: &[f64]) -> (f64, u64) {
    let upper = &normalized[normalized.len() / 2..];
    let mut sorted = upper.to_vec();
    sorted.sort_by(f64::total_cmp);
    let kappa = sorted.get(sorted.len() / 2).copied().unwrap_or(0.0) / 2.0;
    let start = normalized
        .iter()
        .rposition(|&r| r < kappa)
        .map_or(0, |i| i + 1);
    let p0 = primes.get(start).copied().unwrap_or(u64::MAX);
    (kappa, p0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::DiophSystem;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn params(lo: Rational, hi: Rational) -> MetricalParams {
        let sys = DiophSystem::new(q(1, 4), q(1, 1), q(1, 1), lo, hi).unwrap();
        MetricalParams::new(sys, q(13, 50), q(49, 100), q(1, 100)).unwrap()
    }

    #[test]
    fn single_prime() {
        let r = bc_statistics(&params(q(1, 10), q(2, 5)), 3).unwrap();
        assert_eq!(r.primes, vec![2]);
        assert!((r.ratio - r.measures[0]).abs() < 1e-12);
    }

    #[test]
    fn untwisted_sum_follows_prime_harmonics() {
        let r = bc_statistics(&params(q(0, 1), q(1, 1)), 400).unwrap();
        let width = 0.23;
        let mut expected = 0.0;
        let mut slack = 0.0;
        for &p in &r.primes {
            expected += 2.0 * width / p as f64;
            slack += 4.0 / (p * p) as f64;
        }
        assert!((r.sum - expected).abs() <= slack, "{} vs {expected}", r.sum);
        assert!(r.ratio > 0.0 && r.ratio <= width + 1e-12);
    }

    #[test]
    fn kappa_bound_holds_past_p0() {
        let r = bc_statistics(&params(q(1, 10), q(2, 5)), 300).unwrap();
        assert!(r.kappa > 0.0);
        for (&p, &v) in r.primes.iter().zip(&r.normalized) {
            if p >= r.p0 {
                assert!(v >= r.kappa, "p = {p}");
            }
        }
    }
}
