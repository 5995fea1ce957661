//! Deciding practicality.
//!
//! Three independent routes are provided:
//!
//! * [`is_practical`] applies the structure theorem to a complete
//!   factorization: with primes `p_1 < ... < p_k`, `m` is practical iff
//!   `p_j - 1 <= sigma(p_1^a_1 ... p_{j-1}^a_{j-1})` for every `j`. For `j = 1`
//!   the empty prefix has divisor sum 1, which forces `p_1 = 2`.
//! * [`is_practical_oracle`] works straight from the definition with a
//!   subset-sum reachability bit vector and never looks at a factorization.
//! * [`practical_sieve`] enumerates practical numbers in bulk.
//!
//! [`residue_obstruction`] proves that a quadratic `n^2 + bn + c` never hits a
//! practical value above 2, using only residues mod 12.

mod oracle;
mod sieve;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::factorization::{
    small_primes, FactorError, FactorOptions, Factorization, PartialFactorization, TRIAL_BOUND,
};

pub use oracle::{is_practical_oracle, OracleError, DEFAULT_ORACLE_LIMIT};
pub use sieve::{
    count_practical_upto, practical_sieve, PracticalSet, SieveError, MAX_SIEVE_LIMIT, SEGMENT_WIDTH,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Stewart,
    Oracle,
    Sieve,
    Certificate,
}

/// Why a number was rejected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    /// 1-based index `j` of the first prime with `p_j - 1 > sigma(prefix)`.
    PrimeIndex(usize),
    /// Smallest target in `1..=m` that is not a sum of distinct divisors.
    Unreachable(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PracticalVerdict {
    #[serde(serialize_with = "crate::search::report::ser_decimal")]
    pub value: BigUint,
    pub practical: bool,
    pub method: Method,
    pub witness: Option<Witness>,
}

/// Structure-theorem test on a complete factorization.
pub fn is_practical(f: &Factorization) -> PracticalVerdict {
    let mut prefix_sigma = BigUint::one();
    for (j, pp) in f.factors().iter().enumerate() {
        if &pp.prime - 1u32 > prefix_sigma {
            return PracticalVerdict {
                value: f.value().clone(),
                practical: false,
                method: Method::Stewart,
                witness: Some(Witness::PrimeIndex(j + 1)),
            };
        }
        prefix_sigma *= pp.sigma();
    }
    PracticalVerdict {
        value: f.value().clone(),
        practical: true,
        method: Method::Stewart,
        witness: None,
    }
}

/// Factor `n` and run the structure-theorem test, falling back to
/// [`decide_partial`] when the rho budget runs out.
pub fn check_practical(n: &BigUint, opts: &FactorOptions) -> Result<PracticalVerdict, FactorError> {
    match opts.factor(n) {
        Ok(f) => Ok(is_practical(&f)),
        Err(FactorError::BudgetExhausted(partial)) => {
            decide_partial(&partial).ok_or(FactorError::BudgetExhausted(partial))
        }
        Err(e) => Err(e),
    }
}

/// Settles practicality from an incomplete factorization where possible.
///
/// Trial division finds every prime below [`TRIAL_BOUND`], so the test over
/// those primes is exact, and every unsplit cofactor has only larger prime
/// factors. The answer is no if the test fails among the small primes, or if
/// it passes with `sigma(prefix) + 1 < TRIAL_BOUND` while a cofactor remains.
pub fn decide_partial(p: &PartialFactorization) -> Option<PracticalVerdict> {
    let bound = BigUint::from(TRIAL_BOUND);
    let small: Vec<_> = p
        .primes
        .iter()
        .filter(|pp| pp.prime < bound)
        .cloned()
        .collect();
    let prefix = Factorization::from_prime_powers(small).expect("trial-division primes");
    let verdict = is_practical(&prefix);
    let rejected = |j| PracticalVerdict {
        value: p.value.clone(),
        practical: false,
        method: Method::Stewart,
        witness: Some(Witness::PrimeIndex(j)),
    };
    if let Some(Witness::PrimeIndex(j)) = verdict.witness {
        return Some(rejected(j));
    }
    let sigma = crate::factorization::sigma(&prefix);
    if !p.composites.is_empty() && sigma + 1u32 < bound {
        return Some(rejected(prefix.factors().len() + 1));
    }
    None
}

/// Structure-theorem test for machine integers by trial division.
///
/// Primes are visited in increasing order, so the scan stops as soon as the
/// next candidate prime exceeds `sigma(prefix) + 1`: any prime factor still
/// left would violate the condition.
pub fn is_practical_u64(n: u64) -> bool {
    if n <= 2 {
        return n >= 1;
    }
    if n % 4 != 0 && n % 6 != 0 {
        return false;
    }
    let mut m = n;
    let tz = m.trailing_zeros();
    m >>= tz;
    let mut sigma: u128 = (1u128 << (tz + 1)) - 1;
    let check = |p: u64, m: &mut u64, sigma: &mut u128| -> Option<bool> {
        if (p as u128) > *sigma + 1 {
            return Some(*m == 1);
        }
        if p.saturating_mul(p) > *m {
            // m is 1 or a prime >= p
            return Some(*m == 1 || (*m as u128) <= *sigma + 1);
        }
        if *m % p == 0 {
            let mut term: u128 = 1;
            let mut pk: u128 = 1;
            while *m % p == 0 {
                *m /= p;
                pk *= p as u128;
                term += pk;
            }
            *sigma *= term;
        }
        None
    };
    for &p in &small_primes()[1..] {
        if let Some(answer) = check(p as u64, &mut m, &mut sigma) {
            return answer;
        }
    }
    // odd candidates past the table
    let mut p = *small_primes().last().unwrap() as u64 + 2;
    loop {
        if let Some(answer) = check(p, &mut m, &mut sigma) {
            return answer;
        }
        p += 2;
    }
}

/// True iff `n^2 + bn + c` avoids every residue class mod 12 that a practical
/// number above 2 can occupy.
///
/// A practical number greater than 2 is divisible by 4 or by 6, so it lies in
/// one of the classes 0, 4, 6, 8 mod 12. The value of the quadratic mod 12
/// depends only on `n mod 12`, so checking twelve residues settles every `n`.
pub fn residue_obstruction(b: u64, c: u64) -> bool {
    (0..12u64).all(|r| {
        let v = (r * r + (b % 12) * r + c % 12) % 12;
        v % 4 != 0 && v % 6 != 0
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorization::{factor, DEFAULT_RHO_BUDGET};

    fn stewart(v: u64) -> PracticalVerdict {
        is_practical(&factor(&BigUint::from(v), &[], DEFAULT_RHO_BUDGET).unwrap())
    }

    #[test]
    fn one_is_practical() {
        assert!(is_practical(&Factorization::one()).practical);
        assert!(is_practical_u64(1));
    }

    #[test]
    fn ten_fails_at_second_prime() {
        let v = stewart(10);
        assert!(!v.practical);
        assert_eq!(v.witness, Some(Witness::PrimeIndex(2)));
        assert_eq!(v.method, Method::Stewart);
    }

    #[test]
    fn odd_numbers_fail_at_first_prime() {
        assert_eq!(stewart(15).witness, Some(Witness::PrimeIndex(1)));
    }

    #[test]
    fn m0_is_practical() {
        let m0 = (BigUint::one() << 36u32) + 2u32;
        let v = check_practical(&m0, &FactorOptions::default()).unwrap();
        assert!(v.practical);
    }

    #[test]
    fn u64_path_agrees_with_factorization_path() {
        for v in 1..5000u64 {
            assert_eq!(is_practical_u64(v), stewart(v).practical, "v = {v}");
        }
        for v in [(1u64 << 36) + 2, 5478, 66 * 1_000_003, 2 * 1_000_003] {
            assert_eq!(is_practical_u64(v), stewart(v).practical, "v = {v}");
        }
    }

    #[test]
    fn u64_path_beyond_the_trial_table() {
        // 2^40 * q with q a prime above 10^5: practical since q - 1 < 2^41 - 1
        let q = 1_000_003u64;
        assert!(is_practical_u64((1 << 40) * q));
        assert!(is_practical_u64((1 << 20) * q * q));
        assert!(!is_practical_u64(2 * 3 * q));
    }

    #[test]
    fn obstruction_examples() {
        assert!(residue_obstruction(20, 2));
        assert!(!residue_obstruction(0, 2));
        assert!(!residue_obstruction(20, 4));
        assert!(residue_obstruction(20, 5));
        assert!(residue_obstruction(0, 1) && residue_obstruction(0, 10));
    }

    #[test]
    fn partial_factorizations() {
        use crate::factorization::PrimePower;
        let semiprime = BigUint::from(1_099_511_627_791u64) * 1_099_512_627_793u64;
        let partial = |primes: Vec<(u32, u32)>| {
            let primes: Vec<_> = primes
                .into_iter()
                .map(|(p, e)| PrimePower::new(BigUint::from(p), e))
                .collect();
            let known: BigUint = primes.iter().map(PrimePower::value).product();
            PartialFactorization {
                value: known * &semiprime,
                primes,
                composites: vec![semiprime.clone()],
            }
        };
        let v = decide_partial(&partial(vec![(2, 1), (3, 1)])).unwrap();
        assert!(!v.practical);
        assert_eq!(v.witness, Some(Witness::PrimeIndex(3)));
        let v = decide_partial(&partial(vec![(2, 1), (5, 1)])).unwrap();
        assert_eq!(v.witness, Some(Witness::PrimeIndex(2)));
        assert_eq!(decide_partial(&partial(vec![(2, 20)])), None);
    }
}
