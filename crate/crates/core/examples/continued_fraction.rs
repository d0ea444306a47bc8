//! Certified continued fractions and their convergents.

use pslab::arith::parse_rational;
use pslab::cf::{cf_expand, cf_expand_checked, CfTarget};
use pslab::{Exponent, PrecisionPolicy};

fn main() -> pslab::Result<()> {
    for t in ["golden", "e", "pi", "2^(2/3)", "355/113"] {
        let cf = cf_expand(&CfTarget::parse(t)?, 12)?;
        let qs: Vec<String> = cf.quotients.iter().map(|a| a.to_string()).collect();
        println!("{t:>8}: [{}]{}", qs.join(", "), if cf.exact_rational { " (terminates)" } else { "" });
    }

    // a^(1/α), the slope that drives the first twisted system
    let target = CfTarget::RootOf { a: parse_rational("2")?, alpha: Exponent::parse("3/2")? };
    let (cf, law) = cf_expand_checked(&target, 25, &PrecisionPolicy::default())?;
    println!("{target}: |x - p/q| < 1/q^2 for all convergents: {law}, determinant identity: {}", cf.determinant_identity_holds());
    for (p, q) in cf.convergents.iter().skip(18) {
        println!("  {p}/{q}");
    }

    let long = cf_expand(&CfTarget::parse("sqrt3")?, 400)?;
    println!("400 quotients of sqrt3 needed {} bits", long.bits);
    Ok(())
}
