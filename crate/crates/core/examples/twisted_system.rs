//! Both twisted approximation systems, with independent re-verification.

use pslab::arith::parse_rational;
use pslab::system::{solve_system_one, solve_system_two, verify_solution, DiophSystem, SolverOptions, Twist};
use pslab::{Exponent, PrecisionPolicy};

fn main() -> pslab::Result<()> {
    let q = parse_rational;
    let policy = PrecisionPolicy::default();
    let opts = SolverOptions { scan_cutoff: 100_000, ..SolverOptions::default() };

    let sys = DiophSystem::new(q("2")?, q("1")?, q("1")?, q("0")?, q("1/2")?)?;
    let alpha = Exponent::parse("3/2")?;
    let rep = solve_system_one(&sys, &alpha, 1_000_000, &opts, &policy)?;
    println!("first system, a = 2, alpha = 3/2: {}", rep.label());
    println!("  first few: {:?}", rep.ns().iter().take(8).collect::<Vec<_>>());
    let twist = Twist::Alpha(alpha);
    for s in rep.solutions.iter().take(3) {
        let cert = verify_solution(&sys, &twist, s.n, &policy)?;
        println!("  n = {}: dist {:.3e} <= {:.3e}, frac {:.4}, precision trace {:?}", s.n, cert.dist, cert.bound, cert.frac, cert.precision_trace);
    }

    let sys2 = DiophSystem::new(q("1/4")?, q("1")?, q("1")?, q("0")?, q("1/2")?)?;
    for theta in ["2/5", "3/5"] {
        let rep = solve_system_two(&sys2, &q(theta)?, 20_000, &opts, &policy)?;
        println!("second system, theta = {theta}: {} (complete: {})", rep.label(), rep.complete);
    }
    Ok(())
}
