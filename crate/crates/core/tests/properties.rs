use num_bigint::BigUint;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rug::{Integer, Rational};

use pslab::arith::{floor_pow, phi_at, pow_certified, root_ceil};
use pslab::cf::{cf_expand, CfTarget};
use pslab::equidist::star_discrepancy;
use pslab::linear::{solve_linear, LinearEq};
use pslab::measure::{count_triples, h_measure, set_e, set_f, set_g, Component, IndexSets, IntervalSet, MetricalParams, ThetaRange};
use pslab::ps::{is_member, ps_window};
use pslab::system::DiophSystem;
use pslab::{CertifiedValue, Exponent, PrecisionPolicy};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

/// Non-integral `p/q` in `(1, 4)`, lowest terms.
fn exponent() -> impl Strategy<Value = (u32, u32)> {
    (2u32..=9, 2u32..=30)
        .prop_filter("non-integral and in range", |&(q, p)| p % q != 0 && p > q && p < 4 * q)
        .prop_map(|(q, p)| {
            let g = gcd(p, q);
            (p / g, q / g)
        })
        .prop_filter("still non-integral", |&(_, q)| q > 1)
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn rational() -> impl Strategy<Value = Rational> {
    (-1000i64..1000, 1i64..200).prop_map(|(n, d)| Rational::from((n, d)))
}

fn unit_rational() -> impl Strategy<Value = Rational> {
    (0i64..=1000).prop_map(|n| Rational::from((n, 1000)))
}

fn interval_set() -> impl Strategy<Value = IntervalSet> {
    prop::collection::vec((unit_rational(), unit_rational(), any::<bool>(), any::<bool>()), 0..6).prop_map(|v| {
        IntervalSet::from_components(v.into_iter().filter(|(a, b, _, _)| a != b).map(|(a, b, lc, hc)| {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            Component { lo, hi, lo_closed: lc, hi_closed: hc }
        }))
    })
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn floor_pow_matches_integer_roots((p, q) in exponent(), n in 1u64..100_000) {
        let al = Exponent::rational(p, q).unwrap();
        let want = BigUint::from(n).pow(p).nth_root(q).to_u64().unwrap();
        prop_assert_eq!(floor_pow(n, &al).unwrap(), want);
    }

    #[test]
    fn floor_pow_brackets_the_power((p, q) in exponent(), n in 1u64..100_000) {
        let al = Exponent::rational(p, q).unwrap();
        let f = floor_pow(n, &al).unwrap();
        let v = pow_certified(n, &al, &PrecisionPolicy::default()).unwrap();
        // the enclosure of n^α meets [f, f + 1)
        prop_assert!(*v.hi() >= Rational::from(f) && *v.lo() < Rational::from(f + 1));
    }

    #[test]
    fn floor_pow_strictly_increases((p, q) in exponent(), n in 2u64..100_000) {
        let al = Exponent::rational(p, q).unwrap();
        prop_assert!(floor_pow(n + 1, &al).unwrap() > floor_pow(n, &al).unwrap());
    }

    #[test]
    fn root_ceil_recovers_the_witness((p, q) in exponent(), n in 1u64..100_000) {
        let al = Exponent::rational(p, q).unwrap();
        let m = floor_pow(n, &al).unwrap();
        prop_assert!(root_ceil(m, &al).unwrap() <= n);
        prop_assert!(is_member(m, &al).unwrap());
    }

    #[test]
    fn phi_is_monotone(a in 1u32..99, t in prop::collection::vec(1u32..1000, 3)) {
        let a = Rational::from((a, 100));
        let mut ts: Vec<Rational> = t.into_iter().map(|x| Rational::from((x, 1000))).filter(|x| *x > a && *x < 1).collect();
        ts.sort();
        ts.dedup();
        let phis: Vec<CertifiedValue> = ts.iter().map(|x| phi_at(&a, x, 128).unwrap()).collect();
        for w in phis.windows(2) {
            prop_assert!(w[0].lt(&w[1]).is_true());
        }
    }

    #[test]
    fn interval_ops_contain_exact_results(x in rational(), y in rational(), bits in 64u32..256) {
        let (cx, cy) = (CertifiedValue::exact(x.clone()), CertifiedValue::exact(y.clone()));
        prop_assert!(cx.add(&cy).round_out(bits).contains(&Rational::from(&x + &y)));
        prop_assert!(cx.sub(&cy).round_out(bits).contains(&Rational::from(&x - &y)));
        prop_assert!(cx.mul(&cy).round_out(bits).contains(&Rational::from(&x * &y)));
        if y != 0 {
            prop_assert!(cx.div(&cy).unwrap().round_out(bits).contains(&Rational::from(&x / &y)));
        }
        let w = cx.round_out(bits);
        prop_assert!(w.lo() <= w.hi() && w.contains(&x));
    }

    #[test]
    fn rational_expansions_terminate(p in 1u64..100_000, q in 1u64..100_000) {
        let x = Rational::from((p, q));
        let cf = cf_expand(&CfTarget::Rational(x.clone()), 60).unwrap();
        prop_assert!(cf.exact_rational);
        let (pk, qk) = cf.convergents.last().unwrap();
        prop_assert_eq!(Rational::from((pk.clone(), qk.clone())), x);
        prop_assert!(cf.determinant_identity_holds());
        prop_assert!(cf.denominators_increase());
    }

    #[test]
    fn inclusion_exclusion(a in interval_set(), b in interval_set()) {
        let lhs = a.intersect(&b).length() + b.union(&a).length();
        prop_assert_eq!(lhs, a.length() + b.length());
    }

    #[test]
    fn set_ops_agree_pointwise(a in interval_set(), b in interval_set(), x in unit_rational()) {
        prop_assert_eq!(a.intersect(&b).contains(&x), a.contains(&x) && b.contains(&x));
        prop_assert_eq!(a.union(&b).contains(&x), a.contains(&x) || b.contains(&x));
    }

    #[test]
    fn star_discrepancy_matches_brute_force(xs in prop::collection::vec(0.0f64..1.0, 1..200)) {
        let n = xs.len() as f64;
        let mut brute = 0.0f64;
        for &t in &xs {
            let below = xs.iter().filter(|&&x| x < t).count() as f64;
            let upto = xs.iter().filter(|&&x| x <= t).count() as f64;
            brute = brute.max((below / n - t).abs()).max((upto / n - t).abs());
        }
        prop_assert!((star_discrepancy(&xs).unwrap() - brute).abs() < 1e-12);
    }

    #[test]
    fn h_measure_is_monotone_in_w(n in 1u64..300, w1 in 0u32..600, w2 in 0u32..600, t in 51u32..99) {
        let t3 = Rational::from((t, 100));
        let (lo, hi) = (w1.min(w2), w1.max(w2));
        let a = h_measure(n, &Rational::from((lo, 1000)), &t3);
        let b = h_measure(n, &Rational::from((hi, 1000)), &t3);
        prop_assert!(a <= b);
        prop_assert!(b <= Rational::from(1 - &t3));
    }
}

proptest! {
    #![proptest_config(config(40))]

    #[test]
    fn triples_grow_with_reach(n in 10u64..400, big_q in 2u64..150, l1 in 1u32..40, l2 in 1u32..40) {
        let p = pslab::primes::primes_below(big_q + 1).into_iter().last().unwrap();
        let (e1, e2) = (Rational::from((1, 5)), Rational::from((4, 5)));
        let (lo, hi) = (l1.min(l2), l1.max(l2));
        let a = count_triples(n, big_q, p, &Rational::from((lo, 2)), &e1, &e2).unwrap();
        let b = count_triples(n, big_q, p, &Rational::from((hi, 2)), &e1, &e2).unwrap();
        prop_assert!(a <= b);
    }

    #[test]
    fn index_sets_nest(n in 1u64..10_000, eta in 1u32..30) {
        let sys = DiophSystem::new(Rational::from((1, 4)), Rational::from(1), Rational::from(1), Rational::new(), Rational::from((1, 2))).unwrap();
        let params = MetricalParams::new(sys, Rational::from((3, 10)), Rational::from((2, 5)), Rational::from((eta, 1000))).unwrap();
        prop_assert!(IndexSets::new(n, &params).unwrap().s_subset_of_t());
    }

    #[test]
    fn g_is_e_meet_f(n in 2u64..120, lo in 26u32..40, width in 2u32..9) {
        let sys = DiophSystem::new(Rational::from((1, 4)), Rational::from(1), Rational::from(1), Rational::from((1, 10)), Rational::from((2, 5))).unwrap();
        let range = ThetaRange::new(Rational::from((lo, 100)), Rational::from((lo + width, 100))).unwrap();
        let e = set_e(n, &range).unwrap();
        let f = set_f(n, &sys, &range).unwrap();
        let g = set_g(n, &sys, &range).unwrap();
        let slack = Rational::from(e.error() + f.error()) + g.error();
        prop_assert!(g.length() <= (e.length().min(f.length()) + &slack));
        let meet = e.intersect(&f);
        prop_assert_eq!(g.components(), meet.components());
    }

    #[test]
    fn linear_solutions_mirror(a in prop::sample::select(vec!["2", "3", "3/2", "5/2"]), b in -3i32..4, al in prop::sample::select(vec!["6/5", "4/3", "3/2"])) {
        let alpha = Exponent::parse(al).unwrap();
        let Ok(eq) = LinearEq::parse(a, &b.to_string()) else { return Ok(()) };
        let Ok(inv) = eq.inverse() else { return Ok(()) };
        let limit = 2_000u64;
        let fwd = solve_linear(&eq, &alpha, limit).unwrap();
        for s in &fwd {
            prop_assert!(s.verify(&eq, &alpha).unwrap());
        }
        // every forward k stays below the inverse search bound
        let k_max = fwd.iter().map(|s| s.k).max().unwrap_or(1);
        let back = solve_linear(&inv, &alpha, k_max).unwrap();
        let mut mirrored: Vec<(u64, u64)> = back.iter().filter(|s| s.k <= limit).map(|s| (s.y, s.x)).collect();
        let mut fwd_pairs: Vec<(u64, u64)> = fwd.iter().map(|s| (s.x, s.y)).collect();
        mirrored.sort();
        fwd_pairs.sort();
        // both searches are exhaustive on x ≤ ⌊limit^α⌋ and y ≤ ⌊k_max^α⌋
        prop_assert_eq!(mirrored, fwd_pairs);
    }
}

#[test]
fn membership_agrees_with_window() {
    for al in ["6/5", "3/2", "5/3", "5/2", "14/5", "e", "sqrt2"] {
        let alpha = Exponent::parse(al).unwrap();
        let w = ps_window(&alpha, 100_000).unwrap();
        let set = w.member_set();
        for m in 1..=100_000u64 {
            assert_eq!(is_member(m, &alpha).unwrap(), set.contains(&m), "alpha {al}, m {m}");
        }
        assert!(w.members().windows(2).all(|p| p[0] < p[1]));
        for (n, m) in w.iter() {
            assert_eq!(floor_pow(n, &alpha).unwrap(), m);
        }
    }
}

#[test]
fn denominators_of_a_root_grow() {
    let t = CfTarget::parse("2^(2/3)").unwrap();
    let cf = cf_expand(&t, 40).unwrap();
    assert!(cf.determinant_identity_holds() && cf.denominators_increase());
    assert!(cf.approximation_law().iter().all(|v| *v == Some(true)));
    let q: Vec<&Integer> = cf.denominators().collect();
    assert!(q.len() == 40 && *q[39] > 1_000_000_000u64);
}
