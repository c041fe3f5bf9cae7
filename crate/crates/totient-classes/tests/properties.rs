//! Property tests: every claim here is checked against an independent
//! brute-force oracle that bypasses the implementation path under test.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use proptest::prelude::*;

use totient_classes::classifier::{Classifier, FactoredModulus, ResidueClass, ScanFilter, Verdict};
use totient_classes::goodness;
use totient_classes::modmath::{
    self, crt_combine_u64, factorize, gcd, mod_mul, mod_pow, period_cap,
};
use totient_classes::valueset::{TableStore, ValueSetTable, DEFAULT_ENUMERATION_CAP};

fn classifier() -> Classifier {
    Classifier::new(Arc::new(TableStore::new(DEFAULT_ENUMERATION_CAP)))
}

// attained values of x^(k-1) (x-1) mod m over units, for k in 1..=k_max,
// computed without tables or exponent reduction
fn attained_direct(m: u64, k_max: u64) -> Vec<Vec<bool>> {
    let mut per_k = Vec::with_capacity(k_max as usize);
    let units: Vec<u64> = (1..m.max(2)).filter(|&x| gcd(x, m) == 1).collect();
    let mut pows: Vec<u64> = units.iter().map(|_| 1).collect();
    for _ in 1..=k_max {
        let mut row = vec![false; m as usize];
        for (i, &x) in units.iter().enumerate() {
            row[mod_mul(pows[i], x - 1, m) as usize] = true;
            pows[i] = mod_mul(pows[i], x, m);
        }
        per_k.push(row);
    }
    per_k
}

proptest! {
    #[test]
    fn factorize_round_trips_random_u64(n in 1u64..) {
        let f = factorize(n);
        prop_assert_eq!(f.value_u64(), Some(n));
        for &(p, _) in f.factors() {
            prop_assert!(modmath::is_prime(p));
        }
        for w in f.factors().windows(2) {
            prop_assert!(w[0].0 < w[1].0);
        }
    }

    #[test]
    fn crt_matches_exhaustive_search(r1 in 0u64..8, r2 in 0u64..27, r3 in 0u64..25) {
        let pairs = [(r1 % 8, 8), (r2 % 27, 27), (r3 % 25, 25)];
        let (x, m) = crt_combine_u64(&pairs).unwrap();
        prop_assert_eq!(m, 5400);
        let brute: Vec<u64> = (0..m)
            .filter(|&c| pairs.iter().all(|&(r, mi)| c % mi == r))
            .collect();
        prop_assert_eq!(brute, vec![x]);
    }

    #[test]
    fn hensel_congruence_holds(pi in 0usize..4, k in 2u32..8, l in 1u32..7) {
        let p = [3u64, 7, 11, 19][pi];
        let q = p.pow(l);
        let x = modmath::hensel_lemma2(p, k, l).unwrap();
        prop_assert!(x % p != 0);
        let lhs = (mod_pow(x, k as u64, q) + q - mod_pow(x, (k - 1) as u64, q)) % q;
        let rhs = (mod_pow(p, k as u64, q) + q - mod_pow(p, (k - 1) as u64, q)) % q;
        prop_assert_eq!(lhs, rhs);
    }

    // the exponent period: solvability over k <= 3 n(m) equals k <= n(m),
    // with the oracle evaluating true powers (no modular exponent reduction)
    #[test]
    fn period_cap_is_complete(seed in 1u64..2000) {
        let m = 2 * seed + 1;
        let f = factorize(m);
        let n = period_cap(&f).unwrap();
        if n > 2000 {
            // keep the brute-force side bounded
            return Ok(());
        }
        let per_k = attained_direct(m, 3 * n);
        for a in 0..m {
            let short = (0..n as usize).any(|i| per_k[i][a as usize]);
            let long = per_k.iter().any(|row| row[a as usize]);
            prop_assert_eq!(short, long, "m = {}, a = {}", m, a);
        }
    }

    // row periodicity of the value-set tables against direct evaluation at
    // unreduced exponents
    #[test]
    fn table_rows_are_lambda_periodic(q_pick in 0usize..6, k in 1u64..1500) {
        let q = [9u64, 27, 49, 121, 169, 343][q_pick];
        let table = ValueSetTable::build(q, DEFAULT_ENUMERATION_CAP).unwrap();
        let k = (k - 1) % (3 * table.lambda()) + 1;
        let p = table.prime();
        let mut direct = vec![false; q as usize];
        for x in (1..q).filter(|x| x % p != 0) {
            direct[mod_mul(mod_pow(x, k - 1, q), x - 1, q) as usize] = true;
        }
        for a in 0..q {
            prop_assert_eq!(table.contains(k, a), direct[a as usize], "q = {}, k = {}, a = {}", q, k, a);
        }
    }

    // extending the k-search never changes solvability of any class
    #[test]
    fn k_cap_sufficiency(seed in 1u64..1500) {
        let m = 2 * seed + 1;
        let f = factorize(m);
        let n = period_cap(&f).unwrap();
        if n > 1200 {
            return Ok(());
        }
        let c = classifier();
        let per_k = attained_direct(m, 3 * n);
        for a in 0..m {
            let solvable = c
                .solvable_mod_m(&BigUint::from(a), &f)
                .unwrap()
                .is_some();
            let extended = per_k.iter().any(|row| row[a as usize]);
            prop_assert_eq!(solvable, extended, "m = {}, a = {}", m, a);
        }
    }

    // witnesses returned by the solver satisfy the congruence they claim
    #[test]
    fn solver_witnesses_verify(seed in 1u64..3000, a in 0u64..10_000) {
        let m = 2 * seed + 1;
        let f = factorize(m);
        let a = a % m;
        if let Some((k, x)) = classifier().solvable_mod_m(&BigUint::from(a), &f).unwrap() {
            let x = (x % m).to_u64().unwrap();
            if m > 1 {
                prop_assert_eq!(gcd(x, m), 1);
                prop_assert_eq!(
                    (mod_pow(x, k, m) + m - mod_pow(x, k - 1, m)) % m,
                    a
                );
            }
        }
    }

    // lemma8_solve honors the k ≡ l (mod L) pin and the congruence
    #[test]
    fn lemma8_pin_holds(pi in 0usize..5, a in 0u64..61, l0 in 1u64..4, cap_l in 1u64..5) {
        let p = [5u64, 13, 31, 43, 61][pi];
        let l = (l0 - 1) % cap_l + 1;
        if let Some((k, x)) = goodness::lemma8_solve(p, a % p, l, cap_l).unwrap() {
            prop_assert_eq!(k % cap_l, l % cap_l);
            prop_assert_eq!(gcd(x, p), 1);
            prop_assert_eq!(
                (mod_pow(x, k, p) + p - mod_pow(x, k - 1, p)) % p,
                a % p
            );
        }
    }
}

#[test]
fn factorize_round_trips_below_a_million() {
    for n in 1..=1_000_000u64 {
        assert_eq!(factorize(n).value_u64(), Some(n), "n = {n}");
    }
}

#[test]
fn classification_is_deterministic() {
    let c1 = classifier();
    let c2 = classifier();
    for (a, m) in [(302u64, 1092u64), (2, 1092), (14, 28860), (1, 12), (6, 720)] {
        let rc = ResidueClass::new(BigUint::from(a), FactoredModulus::from_u64(m).unwrap());
        let first = c1.classify(&rc).unwrap();
        let second = c1.classify(&rc).unwrap();
        let fresh = c2.classify(&rc).unwrap();
        assert_eq!(first, second);
        assert_eq!(first, fresh);
    }
    // whole scans are reproducible across independent classifiers
    let m = FactoredModulus::from_u64(1092).unwrap();
    let s1 = c1.scan_classes(&m, ScanFilter::All, 1_000_000).unwrap();
    let s2 = c2.scan_classes(&m, ScanFilter::All, 1_000_000).unwrap();
    assert_eq!(s1.summary, s2.summary);
    for (a, b) in s1.verdicts.iter().zip(&s2.verdicts) {
        assert_eq!(a.a, b.a);
        assert_eq!(a.classification, b.classification);
    }
}

// Good m stay free of totient-free even classes for every 2^s m, s <= 4
// (the bridge from per-residue solvability to the classification).
#[test]
fn good_moduli_have_no_totient_free_even_class() {
    let c = classifier();
    for m in (1..=50u64).step_by(2) {
        if !goodness::is_good(&c, m).unwrap().good {
            continue;
        }
        for s in 1..=4u32 {
            let modulus = FactoredModulus::from_u64(m << s).unwrap();
            let scan = c.scan_classes(&modulus, ScanFilter::All, 1_000_000).unwrap();
            for v in &scan.verdicts {
                if v.a % 2 == 0 {
                    assert!(
                        matches!(v.classification.verdict, Verdict::InfinitelyMany(_)),
                        "good m = {m}, s = {s}: even class {} is {:?}",
                        v.a,
                        v.classification.verdict
                    );
                }
            }
        }
    }
}

// Every not-good m whose prime factors all exceed the p_0 proxy is divisible
// by a forbidden number; violations would bound p_0 from below. At the
// default proxy 3 the desk-scale range has none.
#[test]
fn not_good_moduli_have_forbidden_divisors() {
    let c = classifier();
    let p0_proxy = 3u64;
    let mut not_good = 0;
    let mut violations = Vec::new();
    for m in (5..=3000u64).step_by(2) {
        if factorize(m).primes().any(|p| p <= p0_proxy) {
            continue;
        }
        if goodness::is_good(&c, m).unwrap().good {
            continue;
        }
        not_good += 1;
        let has_forbidden_divisor = modmath::divisors(m)
            .into_iter()
            .filter(|&d| d > 1)
            .any(|d| goodness::is_forbidden(d).unwrap().forbidden);
        if !has_forbidden_divisor {
            violations.push(m);
        }
    }
    println!(
        "not-good m <= 3000 with prime factors > {p0_proxy}: {not_good}; \
         without forbidden divisor: {violations:?}"
    );
    assert!(not_good > 0, "the desk range is known to contain not-good m");
    assert!(violations.is_empty(), "p_0 proxy violations: {violations:?}");
}

// Spot-check the sieve's multiplicativity through the public surface.
#[test]
fn sieve_multiplicative_spot_checks() {
    let sieve = totient_classes::oracle::TotientSieve::build(10_000).unwrap();
    for (a, b) in [(3u64, 8u64), (5, 9), (7, 16), (11, 13), (25, 27), (49, 64)] {
        assert_eq!(gcd(a, b), 1);
        assert_eq!(
            sieve.phi(a * b),
            sieve.phi(a) * sieve.phi(b),
            "a = {a}, b = {b}"
        );
    }
    for p in [2u64, 3, 5, 7, 97, 991, 9973] {
        assert_eq!(sieve.phi(p), (p - 1) as u32);
    }
}
