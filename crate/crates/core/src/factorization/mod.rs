//! Prime factorization and divisor sums.
//!
//! [`factor`] runs trial division by every prime below 10^5, then splits the
//! remaining cofactors with caller-supplied hints, then falls back to Pollard
//! rho (Brent variant) until every piece is prime. Every stage is
//! deterministic, so the same inputs always produce the same factorization.

mod hints;
mod primality;
mod rho;

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

pub use hints::{parse_hints, read_hints_file, HintsError};
pub use primality::{is_prime, is_prime_u64, primes_below, small_primes, TRIAL_BOUND};
pub use rho::{rho_big, rho_u64, Budget, RhoOutcome};

/// Default Pollard rho iteration budget per composite cofactor.
pub const DEFAULT_RHO_BUDGET: u64 = 1 << 26;

/// A prime raised to a positive exponent.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrimePower {
    pub prime: BigUint,
    pub exponent: u32,
}

impl PrimePower {
    pub fn new(prime: BigUint, exponent: u32) -> Self {
        debug_assert!(exponent >= 1);
        PrimePower { prime, exponent }
    }

    pub fn value(&self) -> BigUint {
        num_traits::pow(self.prime.clone(), self.exponent as usize)
    }

    /// `1 + p + ... + p^a`
    pub fn sigma(&self) -> BigUint {
        (self.value() * &self.prime - 1u32) / (&self.prime - 1u32)
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 1 {
            write!(f, "{}", self.prime)
        } else {
            write!(f, "{}^{}", self.prime, self.exponent)
        }
    }
}

/// A complete prime factorization with strictly increasing primes.
///
/// Values of this type are always complete; a run that could not finish
/// produces a [`PartialFactorization`] instead.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factorization {
    value: BigUint,
    factors: Vec<PrimePower>,
}

impl Factorization {
    pub fn one() -> Self {
        Factorization {
            value: BigUint::one(),
            factors: Vec::new(),
        }
    }

    /// Builds a factorization from prime powers in any order, merging repeats.
    /// Primality of the bases is checked with [`is_prime`].
    pub fn from_prime_powers(
        powers: impl IntoIterator<Item = PrimePower>,
    ) -> Result<Self, FactorError> {
        let mut factors: Vec<PrimePower> = powers.into_iter().collect();
        for pp in &factors {
            if pp.exponent == 0 || !is_prime(&pp.prime) {
                return Err(FactorError::NotPrime(pp.prime.clone()));
            }
        }
        Ok(Self::assemble(std::mem::take(&mut factors)))
    }

    fn assemble(mut factors: Vec<PrimePower>) -> Self {
        factors.sort_by(|a, b| a.prime.cmp(&b.prime));
        let mut merged: Vec<PrimePower> = Vec::with_capacity(factors.len());
        for pp in factors {
            match merged.last_mut() {
                Some(last) if last.prime == pp.prime => last.exponent += pp.exponent,
                _ => merged.push(pp),
            }
        }
        let value = merged.iter().map(PrimePower::value).product();
        Factorization {
            value,
            factors: merged,
        }
    }

    /// Product of two factorizations.
    pub fn merge(&self, other: &Factorization) -> Factorization {
        Self::assemble(
            self.factors
                .iter()
                .chain(other.factors.iter())
                .cloned()
                .collect(),
        )
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn factors(&self) -> &[PrimePower] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// Number of positive divisors.
    pub fn divisor_count(&self) -> BigUint {
        self.factors
            .iter()
            .map(|pp| BigUint::from(pp.exponent) + 1u32)
            .product()
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, pp) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            write!(f, "{pp}")?;
        }
        Ok(())
    }
}

/// What was achieved before the rho budget ran out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialFactorization {
    pub value: BigUint,
    /// Prime powers found so far, ascending.
    pub primes: Vec<PrimePower>,
    /// Cofactors known to be composite but not yet split, ascending.
    pub composites: Vec<BigUint>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FactorError {
    #[error("cannot factor zero")]
    Zero,
    #[error("hint {hint} does not divide {n}")]
    InvalidHint { hint: BigUint, n: BigUint },
    #[error("rho budget exhausted with {} composite cofactor(s) left", .0.composites.len())]
    BudgetExhausted(Box<PartialFactorization>),
    #[error("{0} is not prime")]
    NotPrime(BigUint),
    #[error("{count} divisors exceed the cap of {cap}")]
    TooManyDivisors { count: BigUint, cap: usize },
}

/// Hints and rho budget threaded into every factoring call.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorOptions {
    pub hints: Vec<BigUint>,
    pub budget: u64,
}

impl Default for FactorOptions {
    fn default() -> Self {
        FactorOptions {
            hints: Vec::new(),
            budget: DEFAULT_RHO_BUDGET,
        }
    }
}

impl FactorOptions {
    pub fn with_hints(hints: Vec<BigUint>) -> Self {
        FactorOptions {
            hints,
            ..Default::default()
        }
    }

    /// Hints that are nontrivial divisors of `n`.
    pub fn relevant_hints(&self, n: &BigUint) -> Vec<BigUint> {
        self.hints
            .iter()
            .filter(|h| !h.is_zero() && !h.is_one() && *h != n && (n % *h).is_zero())
            .cloned()
            .collect()
    }

    /// Factor `n` using only those hints that actually divide it.
    pub fn factor(&self, n: &BigUint) -> Result<Factorization, FactorError> {
        factor(n, &self.relevant_hints(n), self.budget)
    }
}

/// Complete factorization of `n >= 1`.
///
/// Every hint must divide `n`; hints are used to split cofactors left over
/// after trial division (via gcd), so hints need not be prime.
pub fn factor(n: &BigUint, hints: &[BigUint], budget: u64) -> Result<Factorization, FactorError> {
    if n.is_zero() {
        return Err(FactorError::Zero);
    }
    for h in hints {
        if h.is_zero() || !(n % h).is_zero() {
            return Err(FactorError::InvalidHint {
                hint: h.clone(),
                n: n.clone(),
            });
        }
    }

    let (mut found, rest) = trial_divide(n);
    if rest.is_one() {
        return Ok(Factorization::assemble(found));
    }

    let mut pending = vec![(rest, 1u32)];
    for h in hints {
        pending = pending
            .into_iter()
            .flat_map(|(c, e)| split_by(c, h).into_iter().map(move |p| (p, e)))
            .collect();
    }

    let mut composites = Vec::new();
    while let Some((c, e)) = pending.pop() {
        if c.is_one() {
            continue;
        }
        if is_prime(&c) {
            found.push(PrimePower::new(c, e));
            continue;
        }
        if let Some((root, k)) = perfect_power(&c) {
            pending.push((root, e * k));
            continue;
        }
        let mut rho_budget = Budget::new(budget);
        match rho_big(&c, &mut rho_budget) {
            RhoOutcome::Found(d) => {
                let other = &c / &d;
                pending.push((d, e));
                pending.push((other, e));
            }
            RhoOutcome::Exhausted => composites.push((c, e)),
        }
    }

    if composites.is_empty() {
        return Ok(Factorization::assemble(found));
    }
    let partial = Factorization::assemble(found);
    let mut leftover: Vec<BigUint> = composites
        .into_iter()
        .map(|(c, e)| num_traits::pow(c, e as usize))
        .collect();
    leftover.sort();
    Err(FactorError::BudgetExhausted(Box::new(
        PartialFactorization {
            value: n.clone(),
            primes: partial.factors,
            composites: leftover,
        },
    )))
}

// Removes every prime below TRIAL_BOUND; returns the found powers and the
// cofactor. A cofactor below the square of the bound is necessarily prime.
fn trial_divide(n: &BigUint) -> (Vec<PrimePower>, BigUint) {
    let mut found = Vec::new();
    if let Some(mut m) = n.to_u64() {
        for &p in small_primes() {
            let p = p as u64;
            if p * p > m {
                break;
            }
            if m % p == 0 {
                let mut e = 0;
                while m % p == 0 {
                    m /= p;
                    e += 1;
                }
                found.push(PrimePower::new(BigUint::from(p), e));
            }
        }
        return (found, BigUint::from(m));
    }
    let mut m = n.clone();
    let tz = m.trailing_zeros().unwrap_or(0);
    if tz > 0 {
        m >>= tz;
        found.push(PrimePower::new(BigUint::from(2u32), tz as u32));
    }
    for &p in &small_primes()[1..] {
        if (&m % p).is_zero() {
            let mut e = 0;
            while (&m % p).is_zero() {
                m /= p;
                e += 1;
            }
            found.push(PrimePower::new(BigUint::from(p), e));
        }
        if let Some(small) = m.to_u64() {
            let (rest_found, rest) = trial_divide(&BigUint::from(small));
            found.extend(rest_found);
            return (found, rest);
        }
    }
    (found, m)
}

// Splits c against hint h into coprime-ish pieces via repeated gcds.
fn split_by(c: BigUint, h: &BigUint) -> Vec<BigUint> {
    let g = c.gcd(h);
    if g.is_one() || g == c {
        return vec![c];
    }
    let other = &c / &g;
    let mut out = split_by(g, h);
    out.extend(split_by(other, h));
    out
}

fn perfect_power(c: &BigUint) -> Option<(BigUint, u32)> {
    // every prime factor of c exceeds TRIAL_BOUND > 2^16
    let max_k = (c.bits() / 16) as u32;
    for k in (2..=max_k).rev() {
        let r = c.nth_root(k);
        if &num_traits::pow(r.clone(), k as usize) == c {
            return Some((r, k));
        }
    }
    None
}

/// Sum of divisors, multiplied out over prime powers.
pub fn sigma(f: &Factorization) -> BigUint {
    f.factors.iter().map(PrimePower::sigma).product()
}

/// All divisors in ascending order, refusing when there are more than `cap`.
pub fn divisors(f: &Factorization, cap: usize) -> Result<Vec<BigUint>, FactorError> {
    let count = f.divisor_count();
    if count > BigUint::from(cap) {
        return Err(FactorError::TooManyDivisors { count, cap });
    }
    let mut divs = vec![BigUint::one()];
    for pp in &f.factors {
        let mut next = Vec::with_capacity(divs.len() * (pp.exponent as usize + 1));
        for d in &divs {
            let mut t = d.clone();
            next.push(t.clone());
            for _ in 0..pp.exponent {
                t *= &pp.prime;
                next.push(t.clone());
            }
        }
        divs = next;
    }
    divs.sort();
    Ok(divs)
}
