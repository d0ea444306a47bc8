//! Discrepancy and Weyl sums of `{γ n^{φ_a(m/n)}}`, plus the derivative band.

use pslab::arith::parse_rational;
use pslab::equidist::{equid_row, equid_sample, svg_histogram, third_derivative_band, SampleParams};
use pslab::PrecisionPolicy;
use rug::Rational;

fn main() -> pslab::Result<()> {
    let q = parse_rational;
    let params = SampleParams::new(q("1/4")?, q("1")?, q("0.3")?, q("0.45")?)?;
    let policy = PrecisionPolicy::default();
    let mut last = None;
    println!("{:>7} {:>6} {:>9} {:>9} {:>9} {:>9}", "n", "N_n", "D*", "W1", "W2", "W3");
    for n in [1_000u64, 10_000, 100_000] {
        let s = equid_sample(&params, n, &policy)?;
        let r = equid_row(&s)?;
        println!("{:>7} {:>6} {:>9.5} {:>9.5} {:>9.5} {:>9.5}", r.n, r.count, r.discrepancy, r.weyl[0], r.weyl[1], r.weyl[2]);
        last = Some(s);
    }
    if let Some(s) = last {
        let svg = svg_histogram(&s.points, 20, "n = 100000");
        println!("histogram SVG: {} bytes", svg.len());
    }

    let t: Vec<Rational> = (1..=50).map(|i| Rational::from((2 * i - 1, 100))).collect();
    let band = third_derivative_band(&params, &[10, 100, 1_000, 10_000], &t, 128)?;
    println!(
        "sigma = ({:.4}, {:.4}), C1 = {:.2}, C2 = {:.2}, n0 = {:?}, sign constant: {}",
        band.sigma1, band.sigma2, band.c1, band.c2, band.n0, band.constant_sign
    );
    Ok(())
}
