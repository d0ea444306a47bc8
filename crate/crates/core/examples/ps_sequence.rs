//! Windows of PS(α), membership, gaps and small additive patterns.

use pslab::ps::{find_ap, find_fs3, gap_stats, is_member, member_witness, ps_window};
use pslab::Exponent;

fn main() -> pslab::Result<()> {
    let alpha = Exponent::parse("3/2")?;
    let w = ps_window(&alpha, 200)?;
    println!("PS(3/2) up to 200: {:?}", w.members());
    for m in [3, 31, 125] {
        println!("{m} in PS(3/2): {} (witness {:?})", is_member(m, &alpha)?, member_witness(m, &alpha)?);
    }

    let big = ps_window(&alpha, 1_000_000)?;
    let g = gap_stats(&big)?;
    println!("{} members below 10^6, gaps {}..{}, mean {:.2}", big.len(), g.min, g.max, g.mean);

    if let Some(ap) = find_ap(&alpha, 7, 4, 100_000)? {
        println!("4-term progression with step 7: {:?}", ap.terms().collect::<Vec<_>>());
    }
    if let Some(fs) = find_fs3(&alpha, 10_000)? {
        println!("FS(x, x, z) with x = {}, z = {}: {:?}", fs.x, fs.z, fs.values());
    }

    let pi = Exponent::parse("pi")?;
    println!("PS(pi) up to 1000: {:?}", ps_window(&pi, 1000)?.members());
    Ok(())
}
