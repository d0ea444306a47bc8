//! Fractional parts `{γ n^{φ_a(m/n)}}`, their discrepancy and Weyl sums,
//! and the derivatives of `g_n(x) = γ n^{φ_a((x + ⌊η1 n⌋)/n)}`.
//!
//! With `u = (x + ⌊η1 n⌋)/n`, `ℓ = ln u`, `λ = ln a`, `L = ln n` and
//! `φ(u) = λ/ℓ`:
//!
//! ```text
//! φ'(u)   = −λ / (u ℓ²)
//! φ''(u)  =  λ (ℓ + 2) / (u² ℓ³)
//! φ'''(u) = −λ (2ℓ² + 6ℓ + 6) / (u³ ℓ⁴)
//! ```
//!
//! and with `ψ_k = L φ^{(k)}(u) / n^k` (the `x`-derivatives of `L φ(u)`):
//!
//! ```text
//! g'   = g ψ1
//! g''  = g (ψ2 + ψ1²)
//! g''' = g (ψ3 + 3 ψ1 ψ2 + ψ1³)
//! ```

use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::io::Write;

use rayon::prelude::*;
use rug::{Integer, Rational};
use serde::Serialize;

use crate::arith::{
    ceil_rational, floor_rational, frac_of, phi_at, real, CertifiedValue, PrecisionPolicy,
};
use crate::error::{Error, Result};

/// `(a, γ, η1, η2)` for a sample family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleParams {
    pub a: Rational,
    pub gamma: Rational,
    pub eta1: Rational,
    pub eta2: Rational,
}

impl SampleParams {
    pub fn new(a: Rational, gamma: Rational, eta1: Rational, eta2: Rational) -> Result<Self> {
        let p = SampleParams { a, gamma, eta1, eta2 };
        p.validate()?;
        Ok(p)
    }

    /// `(η1, η2)` must sit strictly between `a` and `√a`, where `1 < φ < 2`.
    pub fn validate(&self) -> Result<()> {
        if self.a <= 0 || self.a == 1 {
            return Err(Error::domain(format!("a = {} must be positive and != 1", self.a)));
        }
        if self.gamma == 0 {
            return Err(Error::domain("gamma must be nonzero"));
        }
        if self.eta1 >= self.eta2 {
            return Err(Error::domain("need eta1 < eta2"));
        }
        let inside = |t: &Rational| -> bool {
            let t2 = Rational::from(t * t);
            if self.a < 1 {
                *t > self.a && t2 < self.a
            } else {
                t2 > self.a && *t < self.a
            }
        };
        if !inside(&self.eta1) || !inside(&self.eta2) {
            return Err(Error::domain(format!(
                "(eta1, eta2) = ({}, {}) must lie strictly between a = {} and sqrt(a)",
                self.eta1, self.eta2, self.a
            )));
        }
        Ok(())
    }

    /// Integers `m` with `η1 < m/n < η2`.
    pub fn m_range(&self, n: u64) -> std::ops::RangeInclusive<i64> {
        let nn = Integer::from(n);
        let lo = floor_rational(&Rational::from(&self.eta1 * &nn)) + 1u32;
        let hi = ceil_rational(&Rational::from(&self.eta2 * &nn)) - 1u32;
        lo.to_i64().unwrap_or(i64::MAX)..=hi.to_i64().unwrap_or(i64::MIN)
    }
}

/// The multiset `{γ n^{φ_a(m/n)}}` for `m/n ∈ (η1, η2)`.
#[derive(Clone, Debug, Serialize)]
pub struct SamplePoints {
    pub n: u64,
    /// `N_n`, the number of admissible `m`.
    pub count: u64,
    /// Certified to within `2^-60`, then rounded to `f64`.
    pub points: Vec<f64>,
    /// `m` whose point could not be certified; excluded from `points`.
    pub flagged: Vec<i64>,
}

/// Width below which a fractional part counts as certified for output.
fn output_tolerance() -> Rational {
    Rational::from((1, 1u64 << 60))
}

/// `γ n^{φ_a(u)}` at `bits`, for rational `u`.
fn g_at(params: &SampleParams, n: u64, u: &Rational, bits: u32) -> Result<CertifiedValue> {
    let phi = phi_at(&params.a, u, bits)?;
    Ok(real::pow_real(&Rational::from(n), &phi, bits)?.scale(&params.gamma))
}

fn sample_point(params: &SampleParams, n: u64, m: i64, policy: &PrecisionPolicy) -> Result<f64> {
    let u = Rational::from((m, n));
    let tol = output_tolerance();
    policy.escalate(
        || format!("sample point m = {m}, n = {n}"),
        |bits| {
            let v = g_at(params, n, &u, bits)?;
            Ok(frac_of(&v).filter(|f| f.width() < tol).map(|f| f.to_f64()))
        },
    )
}

pub fn equid_sample(params: &SampleParams, n: u64, policy: &PrecisionPolicy) -> Result<SamplePoints> {
    params.validate()?;
    if n == 0 {
        return Err(Error::domain("n must be >= 1"));
    }
    let ms: Vec<i64> = params.m_range(n).collect();
    let results: Vec<(i64, Result<f64>)> = ms
        .par_iter()
        .map(|&m| (m, sample_point(params, n, m, policy)))
        .collect();
    let mut points = Vec::with_capacity(ms.len());
    let mut flagged = Vec::new();
    for (m, r) in results {
        match r {
            Ok(x) => points.push(x),
            Err(Error::PrecisionExhausted { .. }) => flagged.push(m),
            Err(e) => return Err(e),
        }
    }
    Ok(SamplePoints {
        n,
        count: ms.len() as u64,
        points,
        flagged,
    })
}

/// `D*_N = max_i max(i/N − x_(i), x_(i) − (i−1)/N)` over the sorted points.
pub fn star_discrepancy(points: &[f64]) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut xs = points.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    Ok(xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let i = i as f64;
            ((i + 1.0) / n - x).max(x - i / n)
        })
        .fold(0.0, f64::max))
}

/// `|N^{-1} Σ e(b x_j)|`.
pub fn weyl_sum(b: i64, points: &[f64]) -> Result<f64> {
    if b == 0 {
        return Err(Error::domain("frequency b must be nonzero"));
    }
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let (mut re, mut im) = (0.0f64, 0.0f64);
    for &x in points {
        // reduce b·x mod 1 before the trig call
        let t = (b as f64 * x).rem_euclid(1.0) * TAU;
        re += t.cos();
        im += t.sin();
    }
    Ok(re.hypot(im) / points.len() as f64)
}

/// One row of the equidistribution table.
#[derive(Clone, Debug, Serialize)]
pub struct EquidRow {
    pub n: u64,
    pub count: u64,
    pub discrepancy: f64,
    pub weyl: [f64; 3],
    pub flagged: usize,
}

pub fn equid_row(sample: &SamplePoints) -> Result<EquidRow> {
    let p = &sample.points;
    Ok(EquidRow {
        n: sample.n,
        count: sample.count,
        discrepancy: star_discrepancy(p)?,
        weyl: [weyl_sum(1, p)?, weyl_sum(2, p)?, weyl_sum(3, p)?],
        flagged: sample.flagged.len(),
    })
}

/// CSV with header `n,N_n,D_star,weyl_b1,weyl_b2,weyl_b3`.
pub fn write_equid_csv<W: Write>(rows: &[EquidRow], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["n", "N_n", "D_star", "weyl_b1", "weyl_b2", "weyl_b3", "flagged"])?;
    for r in rows {
        out.write_record([
            r.n.to_string(),
            r.count.to_string(),
            format!("{:.12e}", r.discrepancy),
            format!("{:.12e}", r.weyl[0]),
            format!("{:.12e}", r.weyl[1]),
            format!("{:.12e}", r.weyl[2]),
            r.flagged.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Static SVG histogram of points in `[0, 1)`.
pub fn svg_histogram(points: &[f64], bins: usize, title: &str) -> String {
    let bins = bins.max(1);
    let mut counts = vec![0usize; bins];
    for &x in points {
        let i = ((x * bins as f64) as usize).min(bins - 1);
        counts[i] += 1;
    }
    let (w, h, pad) = (640.0, 320.0, 30.0);
    let max = counts.iter().copied().max().unwrap_or(0).max(1) as f64;
    let bw = (w - 2.0 * pad) / bins as f64;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(s, r#"<title>{}</title>"#, escape(title));
    let _ = writeln!(
        s,
        r#"<text x="{pad}" y="18" font-family="sans-serif" font-size="12">{}</text>"#,
        escape(title)
    );
    for (i, &c) in counts.iter().enumerate() {
        let bh = (h - 2.0 * pad) * c as f64 / max;
        let _ = writeln!(
            s,
            r##"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="#4a6fa5"/>"##,
            pad + i as f64 * bw,
            h - pad - bh,
            (bw - 1.0).max(0.5),
            bh
        );
    }
    // expected height under the uniform distribution
    let uy = h - pad - (h - 2.0 * pad) * (points.len() as f64 / bins as f64) / max;
    let _ = writeln!(
        s,
        r##"<line x1="{pad}" y1="{uy:.2}" x2="{:.2}" y2="{uy:.2}" stroke="#c0392b" stroke-dasharray="4 3"/>"##,
        w - pad
    );
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Evaluator for `g_n`, `g_{n,h}` and the first three derivatives.
#[derive(Clone, Debug)]
pub struct GFuncs {
    params: SampleParams,
    n: u64,
    base: Integer,
}

/// `(g, g', g'', g''')` at one point.
#[derive(Clone, Debug)]
pub struct GDerivs {
    pub g: CertifiedValue,
    pub d1: CertifiedValue,
    pub d2: CertifiedValue,
    pub d3: CertifiedValue,
}

impl GFuncs {
    pub fn new(params: &SampleParams, n: u64) -> Result<Self> {
        params.validate()?;
        if n < 2 {
            return Err(Error::domain("g_n needs n >= 2"));
        }
        Ok(GFuncs {
            params: params.clone(),
            n,
            base: floor_rational(&Rational::from(&params.eta1 * Integer::from(n))),
        })
    }

    /// `⌊η1 n⌋`.
    pub fn base(&self) -> &Integer {
        &self.base
    }

    fn u(&self, x: &Rational) -> Result<Rational> {
        let u = Rational::from(x + &self.base) / Integer::from(self.n);
        if u <= self.params.eta1 || u >= self.params.eta2 {
            return Err(Error::domain(format!(
                "(x + floor(eta1 n))/n = {u} is outside (eta1, eta2)"
            )));
        }
        Ok(u)
    }

    pub fn g(&self, x: &Rational, bits: u32) -> Result<CertifiedValue> {
        g_at(&self.params, self.n, &self.u(x)?, bits)
    }

    /// `g_n(x + h) − g_n(x)`; exactly zero for `h = 0`.
    pub fn g_h(&self, x: &Rational, h: &Rational, bits: u32) -> Result<CertifiedValue> {
        if *h == 0 {
            self.u(x)?;
            return Ok(CertifiedValue::exact(0));
        }
        let xh = Rational::from(x + h);
        Ok(self.g(&xh, bits)?.sub(&self.g(x, bits)?))
    }

    /// Closed-form derivatives in `x`.
    pub fn derivs(&self, x: &Rational, bits: u32) -> Result<GDerivs> {
        let u = self.u(x)?;
        let w = bits + 16;
        let g = self.g(x, w)?;
        let ell = real::ln_rational(&u, w)?;
        let la = real::ln_rational(&self.params.a, w)?;
        let big_l = real::ln_rational(&Rational::from(self.n), w)?;
        let uc = CertifiedValue::exact(u);
        let l2 = ell.mul(&ell);
        let l3 = l2.mul(&ell);
        let l4 = l3.mul(&ell);
        let u2 = uc.mul(&uc);
        let u3 = u2.mul(&uc);
        // φ^{(k)}(u)
        let p1 = la.neg().div(&uc.mul(&l2))?;
        let p2 = la.mul(&ell.add_rational(&Rational::from(2))).div(&u2.mul(&l3))?;
        let poly = l2
            .scale(&Rational::from(2))
            .add(&ell.scale(&Rational::from(6)))
            .add_rational(&Rational::from(6));
        let p3 = la.mul(&poly).neg().div(&u3.mul(&l4))?;
        let n = Rational::from(self.n);
        let inv_n = Rational::from(n.recip_ref());
        let s1 = big_l.mul(&p1).scale(&inv_n);
        let s2 = big_l.mul(&p2).scale(&Rational::from(&inv_n * &inv_n));
        let s3 = big_l
            .mul(&p3)
            .scale(&(Rational::from(&inv_n * &inv_n) * &inv_n));
        let d1 = g.mul(&s1);
        let d2 = g.mul(&s2.add(&s1.mul(&s1)));
        let three = Rational::from(3);
        let d3 = g.mul(
            &s3.add(&s1.mul(&s2).scale(&three))
                .add(&s1.mul(&s1).mul(&s1)),
        );
        let r = |v: CertifiedValue| v.round_out(bits);
        Ok(GDerivs {
            g: r(g),
            d1: r(d1),
            d2: r(d2),
            d3: r(d3),
        })
    }

    /// `x` for a relative position `t ∈ (0, 1)` across `(η1 n, η2 n)`.
    pub fn x_at(&self, t: &Rational) -> Rational {
        let n = Integer::from(self.n);
        let span = Rational::from(&self.params.eta2 - &self.params.eta1);
        let u_n = (&self.params.eta1 + Rational::from(&span * t)) * n;
        u_n - &self.base
    }
}

/// Result of checking `C1 L³/n^{3−σ1} ≤ |g_n'''| ≤ C2 L³/n^{3−σ2}`.
#[derive(Clone, Debug, Serialize)]
pub struct BandReport {
    pub sigma1: f64,
    pub sigma2: f64,
    /// Constants from the leading term `|γ| n^φ |L φ'(u)/n|³`, with a
    /// factor 2 either way for lower-order terms.
    pub c1: f64,
    pub c2: f64,
    /// Smallest grid `n` from which the band holds at every larger grid
    /// point; `None` if it fails at the largest `n`.
    pub n0: Option<u64>,
    /// `(n, t)` where the band with `(c1, c2)` fails.
    pub violations: Vec<(u64, f64)>,
    /// `min |g'''| n^{3−σ1}/L³` over the grid.
    pub empirical_c1: f64,
    /// `max |g'''| n^{3−σ2}/L³` over the grid.
    pub empirical_c2: f64,
    /// Whether one constant works for both sides on this grid.
    pub common_feasible: bool,
    /// Sign of `g'''` is the same at every grid point.
    pub constant_sign: bool,
}

/// Checks the third-derivative band over `n_grid × t_grid`, with `t` the
/// relative position in `(η1, η2)`.
pub fn third_derivative_band(
    params: &SampleParams,
    n_grid: &[u64],
    t_grid: &[Rational],
    bits: u32,
) -> Result<BandReport> {
    params.validate()?;
    if n_grid.is_empty() || t_grid.is_empty() {
        return Err(Error::EmptyInput);
    }
    if t_grid.iter().any(|t| *t <= 0 || *t >= 1) {
        return Err(Error::domain("relative positions must lie in (0, 1)"));
    }
    let f1 = phi_at(&params.a, &params.eta1, bits)?.to_f64();
    let f2 = phi_at(&params.a, &params.eta2, bits)?.to_f64();
    let (sigma1, sigma2) = (f1.min(f2), f1.max(f2));
    let la = params.a.to_f64().ln().abs();
    let gamma = params.gamma.to_f64().abs();
    // M(u) = φ(u)⁶ / (u³ |ln a|³) sampled across the range
    let (mut mmin, mut mmax) = (f64::INFINITY, 0.0f64);
    let (e1, e2) = (params.eta1.to_f64(), params.eta2.to_f64());
    for i in 0..=1000 {
        let u = e1 + (e2 - e1) * i as f64 / 1000.0;
        let phi = (params.a.to_f64().ln() / u.ln()).abs();
        let m = phi.abs().powi(6) / (u.powi(3) * la.powi(3));
        mmin = mmin.min(m);
        mmax = mmax.max(m);
    }
    let c1 = gamma * mmin / 2.0;
    let c2 = 2.0 * gamma * mmax;

    let mut ns = n_grid.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let rows: Vec<Result<Vec<(u64, f64, f64, f64)>>> = ns
        .par_iter()
        .map(|&n| {
            let gf = GFuncs::new(params, n)?;
            let big_l3 = (n as f64).ln().powi(3);
            t_grid
                .iter()
                .map(|t| {
                    let x = gf.x_at(t);
                    let d3 = gf.derivs(&x, bits)?.d3.to_f64();
                    let r1 = d3.abs() * (n as f64).powf(3.0 - sigma1) / big_l3;
                    let r2 = d3.abs() * (n as f64).powf(3.0 - sigma2) / big_l3;
                    Ok((n, t.to_f64(), r1, r2 * d3.signum()))
                })
                .collect()
        })
        .collect();
    let mut pts = Vec::new();
    for r in rows {
        pts.extend(r?);
    }
    let first_sign = pts[0].3.signum();
    let constant_sign = pts.iter().all(|p| p.3.signum() == first_sign);
    let empirical_c1 = pts.iter().map(|p| p.2).fold(f64::INFINITY, f64::min);
    let empirical_c2 = pts.iter().map(|p| p.3.abs()).fold(0.0, f64::max);
    let violations: Vec<(u64, f64)> = pts
        .iter()
        .filter(|p| p.2 < c1 || p.3.abs() > c2)
        .map(|p| (p.0, p.1))
        .collect();
    let last_bad = violations.iter().map(|v| v.0).max();
    let n0 = match last_bad {
        None => ns.first().copied(),
        Some(b) => ns.iter().copied().find(|&n| n > b),
    };
    Ok(BandReport {
        sigma1,
        sigma2,
        c1,
        c2,
        n0,
        violations,
        empirical_c1,
        empirical_c2,
        common_feasible: empirical_c2 <= empirical_c1,
        constant_sign,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        crate::arith::parse_rational(s).unwrap()
    }

    fn reference() -> SampleParams {
        SampleParams::new(q("1/4"), q("1"), q("0.3"), q("0.45")).unwrap()
    }

    #[test]
    fn sample_counts() {
        let p = reference();
        let s = equid_sample(&p, 20, &PrecisionPolicy::default()).unwrap();
        assert_eq!(s.count, 2);
        assert_eq!(p.m_range(20).collect::<Vec<_>>(), vec![7, 8]);
        assert!(s.points.iter().all(|x| (0.0..1.0).contains(x)));
        let s1 = equid_sample(&p, 1, &PrecisionPolicy::default()).unwrap();
        assert!(s1.count <= 1);
    }

    #[test]
    fn gamma_changes_points() {
        let p = reference();
        let mut p2 = p.clone();
        p2.gamma = q("2");
        let a = equid_sample(&p, 100, &PrecisionPolicy::default()).unwrap();
        let b = equid_sample(&p2, 100, &PrecisionPolicy::default()).unwrap();
        assert_eq!(a.count, b.count);
        assert_ne!(a.points, b.points);
    }

    #[test]
    fn params_validated() {
        assert!(SampleParams::new(q("1/4"), q("1"), q("0.3"), q("0.55")).is_err());
        assert!(SampleParams::new(q("1/4"), q("0"), q("0.3"), q("0.45")).is_err());
        assert!(SampleParams::new(q("4"), q("1"), q("2.5"), q("3.5")).is_ok());
    }

    #[test]
    fn discrepancy_examples() {
        assert_eq!(star_discrepancy(&[0.5]).unwrap(), 0.5);
        let grid: Vec<f64> = (0..10).map(|i| i as f64 / 10.0).collect();
        assert!((star_discrepancy(&grid).unwrap() - 0.1).abs() < 1e-15);
        assert!(matches!(star_discrepancy(&[]), Err(Error::EmptyInput)));
    }

    #[test]
    fn weyl_examples() {
        assert!((weyl_sum(1, &[0.3; 7]).unwrap() - 1.0).abs() < 1e-15);
        let grid: Vec<f64> = (0..16).map(|i| i as f64 / 16.0).collect();
        assert!(weyl_sum(1, &grid).unwrap() < 1e-14);
        assert!(weyl_sum(0, &grid).is_err());
        assert!(weyl_sum(1, &[]).is_err());
    }

    #[test]
    fn g_h_zero_step() {
        let g = GFuncs::new(&reference(), 1000).unwrap();
        let x = q("50");
        assert!(g.g_h(&x, &q("0"), 128).unwrap().exact_value() == Some(&q("0")));
        assert!(g.g(&q("-5"), 128).is_err());
    }

    #[test]
    fn band_single_point_common_constant() {
        let r = third_derivative_band(&reference(), &[1000], &[q("1/2")], 128).unwrap();
        assert!(r.common_feasible);
        assert!(r.sigma1 > 1.0 && r.sigma2 < 2.0 && r.sigma1 < r.sigma2);
    }

    #[test]
    fn svg_is_well_formed() {
        let s = svg_histogram(&[0.1, 0.2, 0.25, 0.9], 4, "a<b");
        assert!(s.starts_with("<svg"));
        assert!(s.trim_end().ends_with("</svg>"));
        assert_eq!(s.matches("<rect").count(), 4);
        assert!(s.contains("a&lt;b"));
    }
}
