//! Pollard rho with Brent's cycle detection.
//!
//! Products of `|x - y|` are accumulated in batches so that only one gcd is
//! taken per batch; on a gcd equal to `n` the batch is replayed one step at a
//! time. Both the 64-bit and the big-integer variants count every polynomial
//! evaluation against a shared iteration budget.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::primality::mul_mod;

const BATCH: u64 = 128;

/// Outcome of a rho run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RhoOutcome<T> {
    /// A nontrivial divisor of the input.
    Found(T),
    /// The iteration budget ran out first.
    Exhausted,
}

/// Iteration counter shared across restarts on the same cofactor.
#[derive(Debug)]
pub struct Budget {
    remaining: u64,
}

impl Budget {
    pub fn new(iterations: u64) -> Self {
        Budget {
            remaining: iterations,
        }
    }

    #[inline]
    fn take(&mut self, n: u64) -> bool {
        if self.remaining < n {
            self.remaining = 0;
            false
        } else {
            self.remaining -= n;
            true
        }
    }

    pub fn remaining(&self) -> u64 {
        self.remaining
    }
}

/// Split an odd composite `n < 2^64`.
pub fn rho_u64(n: u64, budget: &mut Budget) -> RhoOutcome<u64> {
    if n % 2 == 0 {
        return RhoOutcome::Found(2);
    }
    for c in 1u64.. {
        match brent_u64(n, 2, c, budget) {
            Some(d) if d != n => return RhoOutcome::Found(d),
            Some(_) => continue,
            None => return RhoOutcome::Exhausted,
        }
    }
    unreachable!()
}

// Returns None on budget exhaustion, Some(n) on a failed cycle.
fn brent_u64(n: u64, x0: u64, c: u64, budget: &mut Budget) -> Option<u64> {
    let f = |v: u64| ((v as u128 * v as u128 + c as u128) % n as u128) as u64;
    let mut y = x0 % n;
    let mut r = 1u64;
    let mut q = 1u64;
    let mut g = 1u64;
    let mut x = y;
    let mut ys = y;
    while g == 1 {
        x = y;
        if !budget.take(r) {
            return None;
        }
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            let steps = BATCH.min(r - k);
            if !budget.take(steps) {
                return None;
            }
            for _ in 0..steps {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = q.gcd(&n);
            k += steps;
        }
        r *= 2;
    }
    if g == n {
        loop {
            if !budget.take(1) {
                return None;
            }
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    Some(g)
}

/// Split an odd composite of any size.
pub fn rho_big(n: &BigUint, budget: &mut Budget) -> RhoOutcome<BigUint> {
    if let Some(small) = n.to_u64() {
        return match rho_u64(small, budget) {
            RhoOutcome::Found(d) => RhoOutcome::Found(BigUint::from(d)),
            RhoOutcome::Exhausted => RhoOutcome::Exhausted,
        };
    }
    if n.is_even() {
        return RhoOutcome::Found(BigUint::from(2u32));
    }
    for c in 1u64.. {
        match brent_big(n, c, budget) {
            Some(d) if &d != n => return RhoOutcome::Found(d),
            Some(_) => continue,
            None => return RhoOutcome::Exhausted,
        }
    }
    unreachable!()
}

fn abs_diff(a: &BigUint, b: &BigUint) -> BigUint {
    if a >= b {
        a - b
    } else {
        b - a
    }
}

fn brent_big(n: &BigUint, c: u64, budget: &mut Budget) -> Option<BigUint> {
    let c = BigUint::from(c);
    let f = |v: &BigUint| (v * v + &c) % n;
    let mut y = BigUint::from(2u32);
    let mut r = 1u64;
    let mut q = BigUint::one();
    let mut g = BigUint::one();
    let mut x = y.clone();
    let mut ys = y.clone();
    while g.is_one() {
        x = y.clone();
        if !budget.take(r) {
            return None;
        }
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            let steps = BATCH.min(r - k);
            if !budget.take(steps) {
                return None;
            }
            for _ in 0..steps {
                y = f(&y);
                q = (&q * abs_diff(&x, &y)) % n;
            }
            g = q.gcd(n);
            k += steps;
        }
        r *= 2;
    }
    if &g == n || g.is_zero() {
        loop {
            if !budget.take(1) {
                return None;
            }
            ys = f(&ys);
            g = abs_diff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    Some(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_small_semiprimes() {
        for (p, q) in [(101u64, 103u64), (65537, 65539), (1_000_003, 998_244_353)] {
            let mut budget = Budget::new(1 << 20);
            match rho_u64(p * q, &mut budget) {
                RhoOutcome::Found(d) => assert!(d == p || d == q),
                RhoOutcome::Exhausted => panic!("budget"),
            }
        }
    }

    #[test]
    fn splits_big_semiprime() {
        let p = BigUint::from(77158673929u64);
        let q: BigUint = "11247702599676505481447137991664348691".parse().unwrap();
        let n = &p * &q;
        let mut budget = Budget::new(1 << 24);
        match rho_big(&n, &mut budget) {
            RhoOutcome::Found(d) => assert!(d == p || d == q),
            RhoOutcome::Exhausted => panic!("budget"),
        }
    }

    #[test]
    fn tiny_budget_exhausts() {
        let n = 1_000_003u64 * 998_244_353;
        let mut budget = Budget::new(3);
        assert_eq!(rho_u64(n, &mut budget), RhoOutcome::Exhausted);
        assert_eq!(budget.remaining(), 0);
    }

    #[test]
    fn repeated_prime_square() {
        let n = 1_000_003u64 * 1_000_003;
        let mut budget = Budget::new(1 << 22);
        assert_eq!(rho_u64(n, &mut budget), RhoOutcome::Found(1_000_003));
    }
}
