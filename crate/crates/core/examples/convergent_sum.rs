//! Partial sums of `λ(H_n)` on the unsolvable side.

use pslab::arith::parse_rational;
use pslab::measure::set_h_sum;

fn main() -> pslab::Result<()> {
    let q = parse_rational;
    let r = set_h_sum(&q("1/4")?, &q("1")?, &q("0.6")?, 10_000, 5e-5)?;
    println!("phi = {:.6}", r.phi);
    for n in [10u64, 100, 1_000, 5_000, 10_000] {
        println!("  S({n:>5}) = {:.6}", r.partial_at(n).unwrap());
    }
    println!("series bound {:.4}, tail bound {:.2e}, stable digits {}, Cauchy at 5e-5: {}", r.series_bound, r.tail_bound, r.stable_digits, r.cauchy);
    Ok(())
}
