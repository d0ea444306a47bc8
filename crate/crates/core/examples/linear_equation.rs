//! Solutions of `y = ax + b` with `x, y ∈ PS(α)`.

use pslab::linear::{check_equivalence, count_fit, solve_linear, window, LinearEq};
use pslab::Exponent;

fn main() -> pslab::Result<()> {
    let eq = LinearEq::parse("2", "0")?;
    let alpha = Exponent::parse("3/2")?;
    let sols = solve_linear(&eq, &alpha, 10_000)?;
    println!("y = 2x in PS(3/2), n <= 10^4: {} solutions", sols.len());
    for s in sols.iter().take(5) {
        println!("  n = {:>5}  x = {:>7}  y = {:>7}  (k = {})", s.n, s.x, s.y, s.k);
    }

    let w = window(&eq, 3, &alpha)?;
    println!("window at n = 3: [{:.6}, {:.6}), hit = {}", w.left.to_f64(), w.right.to_f64(), w.hit());

    let rep = check_equivalence(&eq, &alpha, 20_000)?;
    println!("window test vs direct membership up to 2*10^4: {} checked, violation {:?}", rep.checked, rep.first_violation);

    let fit = count_fit(&eq, &alpha, &[1_000, 10_000, 100_000])?;
    println!("count growth slope {:.3} +- {:.3} (expected near 2 - alpha = 0.5)", fit.slope, fit.stderr);

    let steep = Exponent::parse("5/2")?;
    println!("y = 2x in PS(5/2) up to 10^5: {} solutions", solve_linear(&eq, &steep, 100_000)?.len());

    let shifted = LinearEq::parse("3/2", "1/2")?;
    println!("y = (3/2)x + 1/2: residue d = {}, first solutions {:?}",
        shifted.residue(),
        solve_linear(&shifted, &alpha, 2_000)?.iter().take(4).map(|s| (s.x, s.y)).collect::<Vec<_>>());
    Ok(())
}
