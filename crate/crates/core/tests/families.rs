use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use proptest::prelude::*;

use practium::certificate::VerifyMode;
use practium::factorization::{read_hints_file, FactorOptions};
use practium::families::{
    power_two_members, power_two_value, pythagorean_family, quadratic_family_stream,
    quadratic_step, FamilyError, QuadraticFamily,
};
use practium::practical::{check_practical, is_practical_oracle, is_practical_u64};

fn shipped_hints() -> FactorOptions {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/hints.txt");
    FactorOptions::with_hints(read_hints_file(path).unwrap())
}

#[test]
fn base_cases_by_direct_factorization() {
    let opts = shipped_hints();
    for k in 0..=2 {
        let v = check_practical(&power_two_value(k).unwrap(), &opts).unwrap();
        assert!(v.practical, "m_{k}");
    }
}

#[test]
fn power_two_chain_to_k6() {
    let members = power_two_members(6, &FactorOptions::default()).unwrap();
    assert_eq!(members.len(), 7);
    for m in &members {
        assert_eq!(m.value, power_two_value(m.k).unwrap());
        assert!(m.certificate.is_valid(VerifyMode::Weak), "m_{}", m.k);
        match m.k {
            0..=2 => assert!(m.certificate.chain().is_empty()),
            k => assert_eq!(m.certificate.chain().len(), 2 * (k as usize - 2)),
        }
    }
    assert!(members[6].value.bits() > 25_000);
}

#[test]
fn pythagorean_families() {
    let opts = FactorOptions::default();
    for d in [4u64, 6] {
        for k in 0..=4 {
            let t = pythagorean_family(d, k, &opts).unwrap();
            assert_eq!(&t.a * &t.a + &t.b * &t.b, &t.c * &t.c);
            assert_eq!(t.a.gcd(&t.b).gcd(&t.c), BigUint::from(d));
            for cert in &t.certificates {
                cert.verify(VerifyMode::Weak).unwrap();
            }
            assert_eq!(t.certificates[0].target(), &t.a);
            assert_eq!(t.certificates[1].target(), &t.b);
            assert_eq!(t.certificates[2].target(), &t.c);
            if k == 0 {
                for cert in [&t.certificates[0], &t.certificates[2]] {
                    assert!(cert.chain().is_empty());
                }
            }
        }
    }
}

#[test]
fn gcd6_k0_values() {
    let t = pythagorean_family(6, 0, &FactorOptions::default()).unwrap();
    let p71 = num_traits::pow(BigUint::from(3u32), 71);
    assert_eq!(t.a, &p71 - 3u32);
    assert_eq!(t.b, num_traits::pow(BigUint::from(3u32), 35) * 6u32);
    assert_eq!(t.c, &p71 + 3u32);
}

#[test]
fn quadratic_streams_match_the_oracle() {
    let opts = FactorOptions::default();
    for (b, c) in [(0u32, 2u32), (1, 2), (2, 4), (0, 6), (4, 12)] {
        let fam = QuadraticFamily::new(b, c).unwrap();
        let seed = (2u64..200)
            .find(|&n| is_practical_u64(n * n + b as u64 * n + c as u64))
            .unwrap();
        let stream = quadratic_family_stream(&fam, &BigUint::from(seed), &opts).unwrap();
        for (n, cert) in stream.take(3) {
            assert_eq!(cert.target(), &fam.eval(&n));
            assert!(cert.is_valid(VerifyMode::Weak));
            if let Ok(v) = u64::try_from(cert.target()) {
                if v <= 10_000_000 {
                    assert!(is_practical_oracle(v, 10_000_000).unwrap().practical);
                }
            }
        }
    }
}

#[test]
fn family_errors() {
    let opts = FactorOptions::default();
    assert!(matches!(
        pythagorean_family(8, 0, &opts),
        Err(FamilyError::InvalidGcdTag(8))
    ));
    let fam = QuadraticFamily::new(0u32, 1u32).unwrap();
    assert!(matches!(
        quadratic_family_stream(&fam, &BigUint::one(), &opts),
        Err(FamilyError::SeedTooSmall(_))
    ));
}

proptest! {
    #[test]
    fn quadratic_step_identity(b in 0u64..10_000, c in 1u64..10_000, n in 2u64..1_000_000_000) {
        let fam = QuadraticFamily::new(b, c).unwrap();
        let n = BigUint::from(n);
        let (next, mult) = quadratic_step(&fam, &n).unwrap();
        prop_assert_eq!(fam.eval(&next), fam.eval(&n) * &mult);
        prop_assert!(mult <= fam.eval(&n) * 2u32);
    }
}
