/// Primes `p < limit`, by the sieve of Eratosthenes.
pub fn primes_below(limit: u64) -> Vec<u64> {
    if limit < 3 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n];
    let mut out = Vec::new();
    for i in 2..n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i.saturating_mul(i);
        while j < n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// Primes `p` with `lo < p < hi`.
pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    primes_below(hi).into_iter().filter(|&p| p > lo).collect()
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sieve() {
        assert_eq!(primes_below(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert_eq!(primes_below(3), vec![2]);
        assert!(primes_below(2).is_empty());
        assert_eq!(primes_between(10, 20), vec![11, 13, 17, 19]);
    }

    #[test]
    fn sieve_agrees_with_trial_division() {
        let sieved = primes_below(5000);
        let trial: Vec<u64> = (0..5000).filter(|&n| is_prime(n)).collect();
        assert_eq!(sieved, trial);
        assert_eq!(sieved.len(), 669);
    }
}
