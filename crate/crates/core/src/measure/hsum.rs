use std::io::Write;

use rug::Rational;
use serde::Serialize;

use crate::arith::{ceil_rational, phi_at, real, CertifiedValue};
use crate::error::{Error, Result};

const BITS: u32 = 128;

/// `λ{θ ∈ (θ3, 1) : ‖θn‖ ≤ w}` for a rational `w ≥ 0`, exactly.
pub fn h_measure(n: u64, w: &Rational, theta3: &Rational) -> Rational {
    let width = Rational::from(1 - theta3);
    if Rational::from(w * 2u32) >= 1 {
        return width;
    }
    let nq = Rational::from(n);
    let a = Rational::from(theta3 * &nq);
    let overlap = |m: &Rational| -> Rational {
        let hi = Rational::from(m + w).min(nq.clone());
        let lo = Rational::from(m - w).max(a.clone());
        Rational::from(&hi - &lo).max(Rational::new())
    };
    // windows wholly inside (A, n) each add 2w; the rest are clipped
    let inner_first = ceil_rational(&Rational::from(&a + w));
    let inner_last = rug::Integer::from(n) - 1;
    let inner = Rational::from(rug::Integer::from(&inner_last - &inner_first) + 1).max(Rational::new());
    let mut total = inner * w * 2u32;
    let mut m = ceil_rational(&Rational::from(&a - w));
    while m < inner_first && m < n {
        total += overlap(&Rational::from(&m));
        m += 1;
    }
    total += overlap(&nq);
    total / nq
}

#[derive(Clone, Debug, Serialize)]
pub struct HSumRow {
    pub n: u64,
    pub measure: f64,
    pub partial: f64,
    pub partial_err: f64,
    /// `((1 − θ3) n + 2) · 2c / n^φ`.
    pub union_bound: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct HSumReport {
    pub theta3: f64,
    pub phi: f64,
    pub rows: Vec<HSumRow>,
    pub total: f64,
    /// Integral-comparison bound on the whole series.
    pub series_bound: f64,
    /// Integral-comparison bound on `Σ_{n > N} λ(H_n)`.
    pub tail_bound: f64,
    pub monotone: bool,
    pub union_bound_holds: bool,
    pub bounded: bool,
    /// Significant digits of the full sum fixed by `total`, from the tail.
    pub stable_digits: u32,
    /// `tail_bound ≤ tolerance · total`.
    pub cauchy: bool,
    pub tolerance: f64,
}

impl HSumReport {
    pub fn partial_at(&self, n: u64) -> Option<f64> {
        self.rows.get((n as usize).checked_sub(1)?).map(|r| r.partial)
    }

    /// CSV with header `n,measure,partial,partial_err,union_bound`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["n", "measure", "partial", "partial_err", "union_bound"])?;
        for r in &self.rows {
            out.write_record([
                r.n.to_string(),
                format!("{:.17e}", r.measure),
                format!("{:.17e}", r.partial),
                format!("{:.3e}", r.partial_err),
                format!("{:.17e}", r.union_bound),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Partial sums `Σ_{n ≤ N} λ(H_n)` with
/// `H_n = {θ ∈ (θ3, 1) : ‖θn‖ ≤ c / n^{φ_a(θ3) − 1}}`.
///
/// Needs `φ_a(θ3) > 2`, i.e. `√a < θ3 < 1`.
pub fn set_h_sum(a: &Rational, c: &Rational, theta3: &Rational, limit: u64, tolerance: f64) -> Result<HSumReport> {
    if *a <= 0 || *a >= 1 {
        return Err(Error::domain(format!("a = {a} must lie in (0, 1)")));
    }
    if *c <= 0 {
        return Err(Error::domain("c must be positive"));
    }
    if *theta3 >= 1 || Rational::from(theta3.square_ref()) <= *a {
        return Err(Error::domain(format!(
            "phi_a(theta3) must exceed 2: need sqrt(a) < theta3 < 1, got theta3 = {theta3}"
        )));
    }
    if limit == 0 {
        return Err(Error::domain("N must be >= 1"));
    }
    let phi = phi_at(a, theta3, BITS)?;
    let one_minus = phi.neg().add_rational(&Rational::from(1));
    let cf = c.to_f64();
    let phif = phi.to_f64();
    let width = Rational::from(1 - theta3).to_f64();
    let mut rows = Vec::with_capacity(limit as usize);
    let mut sum = CertifiedValue::exact(0);
    let mut union_ok = true;
    for n in 1..=limit {
        // w = c n^{1−φ}
        let ln_n = real::ln_rational(&Rational::from(n), BITS + 16)?;
        let w = real::exp(&one_minus.mul(&ln_n).round_out(BITS + 16), BITS).scale(c);
        let m = CertifiedValue::new(h_measure(n, w.lo(), theta3), h_measure(n, w.hi(), theta3));
        sum = sum.add(&m).round_out(2 * BITS);
        let union_bound = (width * n as f64 + 2.0) * 2.0 * cf / (n as f64).powf(phif);
        union_ok &= m.lo().to_f64() <= union_bound * (1.0 + 1e-12);
        rows.push(HSumRow {
            n,
            measure: m.to_f64(),
            partial: sum.to_f64(),
            partial_err: sum.radius_f64(),
            union_bound,
        });
    }
    let monotone = rows.windows(2).all(|p| p[1].partial >= p[0].partial);
    let nf = limit as f64;
    // Σ_{n ≥ 1} f(n) ≤ f(1) + ∫_1^∞ f for decreasing f
    let series_bound = 2.0 * cf * width * (1.0 + 1.0 / (phif - 2.0)) + 4.0 * cf * (1.0 + 1.0 / (phif - 1.0));
    let tail_bound = 2.0 * cf * width * nf.powf(2.0 - phif) / (phif - 2.0) + 4.0 * cf * nf.powf(1.0 - phif) / (phif - 1.0);
    let total = sum.to_f64();
    let stable_digits = if tail_bound > 0.0 && total > 0.0 {
        (-(tail_bound / total).log10()).floor().max(0.0) as u32
    } else {
        0
    };
    Ok(HSumReport {
        theta3: theta3.to_f64(),
        phi: phif,
        rows,
        total,
        series_bound,
        tail_bound,
        monotone,
        union_bound_holds: union_ok,
        bounded: total <= series_bound,
        stable_digits,
        cauchy: tail_bound <= tolerance * total,
        tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    /// Direct sum over every window, no bulk counting.
    fn slow(n: u64, w: &Rational, t3: &Rational) -> Rational {
        if Rational::from(w * 2u32) >= 1 {
            return Rational::from(1 - t3);
        }
        let mut tot = Rational::new();
        for m in 0..=n + 1 {
            let lo = (Rational::from((m as i64, n)) - Rational::from(w / n)).max(t3.clone());
            let hi = (Rational::from((m as i64, n)) + Rational::from(w / n)).min(Rational::from(1));
            if hi > lo {
                tot += hi - lo;
            }
        }
        tot
    }

    #[test]
    fn closed_form_matches_window_sum() {
        for n in [1u64, 2, 3, 7, 10, 33, 100] {
            for w in [q(1, 3), q(1, 7), q(1, 100), q(49, 100)] {
                for t3 in [q(3, 5), q(51, 100), q(9, 10)] {
                    assert_eq!(h_measure(n, &w, &t3), slow(n, &w, &t3), "n={n} w={w} t3={t3}");
                }
            }
        }
    }

    #[test]
    fn converges_for_quarter() {
        let r = set_h_sum(&q(1, 4), &q(1, 1), &q(3, 5), 2000, 5e-5).unwrap();
        assert!(r.monotone && r.union_bound_holds && r.bounded);
        assert!((r.phi - 2.7138).abs() < 1e-3);
        assert!(r.total > 1.19 && r.total < 1.21, "{}", r.total);
    }

    #[test]
    fn scales_with_c() {
        let a = set_h_sum(&q(1, 4), &q(1, 1000), &q(3, 5), 300, 1e-3).unwrap();
        let b = set_h_sum(&q(1, 4), &q(1, 2000), &q(3, 5), 300, 1e-3).unwrap();
        // tiny c keeps every window narrow, so the sum is linear in c
        assert!((a.total / b.total - 2.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_the_solvable_side() {
        assert!(set_h_sum(&q(1, 4), &q(1, 1), &q(2, 5), 10, 1e-4).is_err());
        assert!(set_h_sum(&q(1, 4), &q(1, 1), &q(1, 2), 10, 1e-4).is_err());
    }
}
