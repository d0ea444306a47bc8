//! Second-system hit counts for θ on both sides of `√a`.

use pslab::arith::{parse_rational, parse_rational_list};
use pslab::measure::dichotomy_scan;
use pslab::system::{DiophSystem, SolverOptions};
use pslab::PrecisionPolicy;

fn main() -> pslab::Result<()> {
    let q = parse_rational;
    let sys = DiophSystem::new(q("1/4")?, q("1")?, q("1")?, q("0")?, q("1/2")?)?;
    let grid = parse_rational_list("0.30,0.35,0.40,0.45,0.55,0.60,0.65,0.70")?;
    let rep = dichotomy_scan(&sys, &grid, 20_000, &SolverOptions::default(), &PrecisionPolicy::default())?;
    for r in &rep.rows {
        println!("theta = {:>5}  phi = {:.4}  {:>5} hits  {}", r.theta, r.phi, r.solutions, if r.below_sqrt_a { "below" } else { "above" });
    }
    println!("below sqrt(a): {} hits, above: {}", rep.below.total, rep.above.total);
    Ok(())
}
