//! Subset-sum oracle built directly on the definition.
//!
//! `m` is practical when each of `1, ..., m` is a sum of distinct divisors of
//! `m`. (Some statements of the definition say "divisors of n" for the target
//! `n`; that reading is a typo for "divisors of m", which is what is
//! implemented here.)
//!
//! Reachable sums are tracked in a bit vector of length `m + 1`; sums above
//! `m` are dropped, so memory stays at `O(m)` bits instead of `O(sigma(m))`.

use num_bigint::BigUint;
use thiserror::Error;

use super::{Method, PracticalVerdict, Witness};

pub const DEFAULT_ORACLE_LIMIT: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{n} exceeds the oracle limit {limit}")]
    LimitExceeded { n: u64, limit: u64 },
    #[error("the oracle needs n >= 1")]
    Zero,
}

fn divisors_by_trial(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

struct Reach {
    words: Vec<u64>,
    len: usize,
}

impl Reach {
    fn new(len: usize) -> Self {
        let mut words = vec![0u64; len.div_ceil(64)];
        words[0] = 1; // the empty sum
        Reach { words, len }
    }

    // self |= self << shift, truncated to len bits
    fn or_shifted(&mut self, shift: usize) {
        let word_shift = shift / 64;
        let bit_shift = shift % 64;
        let n = self.words.len();
        for i in (word_shift..n).rev() {
            let src = i - word_shift;
            let mut v = self.words[src] << bit_shift;
            if bit_shift != 0 && src > 0 {
                v |= self.words[src - 1] >> (64 - bit_shift);
            }
            self.words[i] |= v;
        }
        let tail = self.len % 64;
        if tail != 0 {
            *self.words.last_mut().unwrap() &= (1u64 << tail) - 1;
        }
    }

    fn first_unset(&self) -> Option<usize> {
        for (i, &w) in self.words.iter().enumerate() {
            if w != u64::MAX {
                let bit = i * 64 + (!w).trailing_zeros() as usize;
                return (bit < self.len).then_some(bit);
            }
        }
        None
    }
}

/// Decide practicality of `n` from the definition alone.
pub fn is_practical_oracle(n: u64, limit: u64) -> Result<PracticalVerdict, OracleError> {
    if n == 0 {
        return Err(OracleError::Zero);
    }
    if n > limit {
        return Err(OracleError::LimitExceeded { n, limit });
    }
    let mut reach = Reach::new(n as usize + 1);
    for d in divisors_by_trial(n) {
        reach.or_shifted(d as usize);
    }
    let unreachable = reach.first_unset().map(|t| t as u64);
    Ok(PracticalVerdict {
        value: BigUint::from(n),
        practical: unreachable.is_none(),
        method: Method::Oracle,
        witness: unreachable.map(Witness::Unreachable),
    })
}
