//! The sets `E_n`, `F_n`, `G_n` as interval unions, and the perturbation
//! threshold.

use pslab::arith::parse_rational;
use pslab::measure::{claim_check, claim_threshold, set_e, set_f, set_g, MetricalParams, ThetaRange};
use pslab::system::DiophSystem;

fn main() -> pslab::Result<()> {
    let q = parse_rational;
    let sys = DiophSystem::new(q("1/4")?, q("1")?, q("1")?, q("0.1")?, q("0.4")?)?;
    let range = ThetaRange::new(q("0.26")?, q("0.49")?)?;
    for n in [10u64, 100, 1000] {
        let (e, f, g) = (set_e(n, &range)?, set_f(n, &sys, &range)?, set_g(n, &sys, &range)?);
        println!(
            "n = {n:>4}: E {:>4} parts {:.6} | F {:>6} parts {:.6} | G {:>4} parts {:.6}",
            e.len(), e.measure().to_f64(), f.len(), f.measure().to_f64(), g.len(), g.measure().to_f64()
        );
    }

    let sys0 = DiophSystem::new(q("1/4")?, q("1")?, q("1")?, q("0")?, q("1/2")?)?;
    let params = MetricalParams::new(sys0, q("0.3")?, q("0.4")?, q("0.01")?)?;
    let t = claim_threshold(&params)?;
    println!("ln n / n^(2 - phi(theta2)) < |I|/3 from n0 = {:?}", t.n0);
    if let Some(n0) = t.n0 {
        for n in [n0, 16 * n0] {
            let c = claim_check(n, &params)?;
            println!("  n = {n}: {} windows over the middle third, {} inside F_n", c.in_middle_third, c.contained);
        }
    }
    Ok(())
}
