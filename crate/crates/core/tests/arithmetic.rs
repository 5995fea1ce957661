use num_bigint::BigUint;
use num_traits::One;
use proptest::prelude::*;

use practium::certificate::{certify_product, CertificateError, PracticalCertificate, VerifyMode};
use practium::factorization::{
    divisors, factor, sigma, FactorError, FactorOptions, DEFAULT_RHO_BUDGET,
};
use practium::practical::{
    is_practical, is_practical_oracle, is_practical_u64, practical_sieve, residue_obstruction,
    DEFAULT_ORACLE_LIMIT,
};

fn fac(n: u64) -> practium::Factorization {
    factor(&BigUint::from(n), &[], DEFAULT_RHO_BUDGET).unwrap()
}

fn naive_factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn naive_sigma(n: u64) -> u64 {
    (1..=n).filter(|d| n % d == 0).sum()
}

#[test]
fn stewart_agrees_with_oracle_up_to_20000() {
    let mut disagreements = Vec::new();
    for m in 1..=20_000u64 {
        let stewart = is_practical(&fac(m)).practical;
        let oracle = is_practical_oracle(m, DEFAULT_ORACLE_LIMIT)
            .unwrap()
            .practical;
        if stewart != oracle {
            disagreements.push(m);
        }
    }
    assert!(disagreements.is_empty(), "{disagreements:?}");
}

#[test]
fn sieve_agrees_with_stewart() {
    let list = practical_sieve(200_000).unwrap();
    let expected: Vec<u64> = (1..=200_000u64).filter(|&m| is_practical_u64(m)).collect();
    assert_eq!(list, expected);
    let stewart: Vec<u64> = (1..=30_000u64)
        .filter(|&m| is_practical(&fac(m)).practical)
        .collect();
    assert_eq!(&list[..stewart.len()], &stewart[..]);
}

#[test]
fn obstruction_implies_never_practical() {
    for b in 0..12u64 {
        for c in 1..=24u64 {
            if residue_obstruction(b, c) {
                for n in 2..300u64 {
                    assert!(!is_practical_u64(n * n + b * n + c), "b={b} c={c} n={n}");
                }
            }
        }
    }
}

#[test]
fn divisors_sum_to_sigma() {
    for n in 1..=2000u64 {
        let f = fac(n);
        let ds = divisors(&f, 10_000).unwrap();
        let s: BigUint = ds.iter().sum();
        assert_eq!(s, sigma(&f));
        assert_eq!(BigUint::from(ds.len()), f.divisor_count());
    }
}

#[test]
fn largest_factorizations_need_rho() {
    // semiprimes with both factors beyond trial division
    for (p, q) in [(1_000_003u64, 1_000_033u64), (4_294_967_291, 4_294_967_279)] {
        let n = BigUint::from(p) * q;
        let f = factor(&n, &[], DEFAULT_RHO_BUDGET).unwrap();
        let primes: Vec<_> = f.factors().iter().map(|pp| pp.prime.clone()).collect();
        assert_eq!(
            primes,
            vec![BigUint::from(q.min(p)), BigUint::from(p.max(q))]
        );
    }
}

#[test]
fn budget_zero_leaves_composites() {
    let n = BigUint::from(1_000_003u64) * 1_000_033u64;
    match factor(&n, &[], 0) {
        Err(FactorError::BudgetExhausted(partial)) => {
            assert_eq!(partial.composites, vec![n.clone()])
        }
        other => panic!("expected exhaustion, got {other:?}"),
    }
    let hinted = FactorOptions {
        hints: vec![BigUint::from(1_000_003u64)],
        budget: 0,
    };
    assert!(hinted.factor(&n).is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn factor_matches_naive(n in 1u64..=1_000_000) {
        let f = fac(n);
        let got: Vec<(u64, u32)> = f
            .factors()
            .iter()
            .map(|pp| (u64::try_from(&pp.prime).unwrap(), pp.exponent))
            .collect();
        prop_assert_eq!(got, naive_factor(n));
        prop_assert_eq!(f.value(), &BigUint::from(n));
    }

    #[test]
    fn sigma_is_multiplicative(a in 1u64..3000, b in 1u64..3000) {
        let g = num_integer::gcd(a, b);
        prop_assume!(g == 1);
        prop_assert_eq!(sigma(&fac(a * b)), sigma(&fac(a)) * sigma(&fac(b)));
        prop_assert_eq!(sigma(&fac(a)), BigUint::from(naive_sigma(a)));
    }

    #[test]
    fn big_products_factor_exactly(a in 2u64..u64::MAX, b in 2u64..1_000_000_000) {
        let n = BigUint::from(a) * b;
        let f = factor(&n, &[], DEFAULT_RHO_BUDGET).unwrap();
        prop_assert_eq!(f.value(), &n);
        prop_assert!(f.factors().iter().all(|pp| practium::is_prime(&pp.prime)));
        prop_assert!(f.factors().windows(2).all(|w| w[0].prime < w[1].prime));
    }

    #[test]
    fn weak_certificates_are_sound(base_idx in 0usize..200, mults in proptest::collection::vec(1u64..60, 0..4)) {
        let practical: Vec<u64> = practical_sieve(2000).unwrap();
        let base = practical[base_idx % practical.len()];
        let target: u64 = mults.iter().product::<u64>() * base;
        prop_assume!(target <= 2_000_000);
        let chain: Vec<BigUint> = mults.iter().map(|&m| BigUint::from(m)).collect();
        let cert = PracticalCertificate::new(fac(base), chain, BigUint::from(target)).unwrap();
        if cert.is_valid(VerifyMode::Weak) {
            prop_assert!(cert.is_valid(VerifyMode::Strong));
        }
        if cert.is_valid(VerifyMode::Strong) {
            let oracle = is_practical_oracle(target, DEFAULT_ORACLE_LIMIT).unwrap();
            prop_assert!(oracle.practical, "target {}", target);
        }
    }

    #[test]
    fn valid_certificates_stay_valid_when_extended(base_idx in 0usize..100, mult in 1u64..1000) {
        let practical: Vec<u64> = practical_sieve(1000).unwrap();
        let base = practical[base_idx % practical.len()];
        let cert = PracticalCertificate::direct(fac(base)).unwrap();
        let next = cert.extend(BigUint::from(mult)).unwrap();
        prop_assert_eq!(next.is_valid(VerifyMode::Weak), mult <= 2 * base);
        prop_assert_eq!(next.target(), &BigUint::from(base * mult));
    }

    #[test]
    fn certify_product_is_order_independent(mut mults in proptest::collection::vec(1u64..50, 1..5)) {
        let sorted = certify_product(fac(6), mults.iter().map(|&m| BigUint::from(m)).collect());
        mults.reverse();
        let reversed = certify_product(fac(6), mults.iter().map(|&m| BigUint::from(m)).collect());
        prop_assert_eq!(sorted.clone(), reversed);
        if let Err(e) = sorted {
            prop_assert!(matches!(e, CertificateError::NotCertifiable(_)));
        }
    }
}

#[test]
fn certificate_for_a_power_of_two() {
    let chain: Vec<BigUint> = (0..10).map(|_| BigUint::from(2u32)).collect();
    let target = BigUint::one() << 11u32;
    let cert = PracticalCertificate::new(fac(2), chain, target).unwrap();
    assert!(cert.is_valid(VerifyMode::Weak));
}
