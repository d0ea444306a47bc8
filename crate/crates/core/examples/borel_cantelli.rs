//! Second-moment ratio over primes and the triple count behind it.

use pslab::arith::parse_rational;
use pslab::measure::{bc_statistics, bound_check_triples, count_triples, MetricalParams, TripleRow};
use pslab::system::DiophSystem;
use rug::Rational;

fn main() -> pslab::Result<()> {
    let q = parse_rational;
    let sys = DiophSystem::new(q("1/4")?, q("1")?, q("1")?, q("0.1")?, q("0.4")?)?;
    let params = MetricalParams::new(sys, q("0.26")?, q("0.49")?, q("0.01")?)?;
    for limit in [100u64, 300, 1000] {
        let r = bc_statistics(&params, limit)?;
        println!(
            "P = {limit:>4}: sum {:.4}, pair sum {:.4}, ratio {:.4}, kappa {:.3} from p0 = {}",
            r.sum, r.pair_sum, r.ratio, r.kappa, r.p0
        );
    }

    let (e1, e2) = (q("0.2")?, q("0.8")?);
    println!("triples for p = 2, Q = 2, N = 10, L = 3: {}", count_triples(10, 2, 2, &Rational::from(3), &e1, &e2)?);
    let rows: Vec<TripleRow> = [10u64, 100, 1000]
        .iter()
        .flat_map(|&big_q| [2u64, 7].map(|p| TripleRow { n: 4 * big_q, q: big_q, p, l: Rational::from(8) }))
        .collect();
    let b = bound_check_triples(&rows, &e1, &e2)?;
    println!("K with C = 1: {:.4}; fitted C = {:.4}, K = {:.4}", b.k_unit, b.c_fit, b.k_fit);
    Ok(())
}
