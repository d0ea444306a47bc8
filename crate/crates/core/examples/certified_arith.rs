//! Exact floors of `n^α`, certified enclosures and `φ_a(θ)`.

use pslab::arith::{floor_pow, parse_rational, phi, pow_certified, root_ceil};
use pslab::{Exponent, PrecisionPolicy};

fn main() -> pslab::Result<()> {
    let alpha = Exponent::parse("14/5")?;
    let n = 1_000_000;
    println!("floor({n}^{alpha}) = {}", floor_pow(n, &alpha)?);

    let e = Exponent::parse("e")?;
    let v = pow_certified(10, &e, &PrecisionPolicy::default())?;
    println!("10^e in [{:.20}, {:.20}]", v.lo().to_f64(), v.hi().to_f64());
    println!("floor(10^e) = {}", floor_pow(10, &e)?);

    // smallest n with floor(n^α) >= m
    let m = 1_000;
    let three_halves = Exponent::parse("3/2")?;
    println!("first n with floor(n^(3/2)) >= {m}: {}", root_ceil(m, &three_halves)?);

    let a = parse_rational("1/4")?;
    for t in ["1/2", "0.6", "1/16"] {
        match phi(&a, &parse_rational(t)?) {
            Ok(v) if v.is_exact() => println!("phi_1/4({t}) = {} exactly", v.exact_value().unwrap()),
            Ok(v) => println!("phi_1/4({t}) ~ {:.12} (+- {:.1e})", v.to_f64(), v.radius_f64()),
            Err(err) => println!("phi_1/4({t}): {err}"),
        }
    }
    Ok(())
}
