//! Segmented practical-number sieve.
//!
//! Only `1`, `2` and numbers divisible by 4 or by 6 can be practical, so each
//! segment keeps state for the residues 0, 4, 6, 8 mod 12 alone. Primes are
//! applied in increasing order; each candidate carries its unfactored
//! remainder and the divisor sum of the prime powers removed so far, which is
//! exactly the prefix sum the structure theorem compares against. Whatever is
//! left after all primes up to the square root is a single prime that comes
//! last in the ordering.
//!
//! Segments are independent and run on the rayon pool; results come back in
//! segment order.

use rayon::prelude::*;
use thiserror::Error;

use crate::factorization::primes_below;

pub const SEGMENT_WIDTH: u64 = 1 << 22;

/// Largest supported limit. Output of [`practical_sieve`] at this size is
/// about 3% of the limit in `u64` entries, so memory, not this cap, is the
/// usual constraint; [`count_practical_upto`] only keeps per-segment state.
pub const MAX_SIEVE_LIMIT: u64 = 10_000_000_000;

const CLASSES: [u64; 4] = [0, 4, 6, 8];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SieveError {
    #[error("sieve limit {limit} exceeds maximum {max}")]
    LimitExceeded { limit: u64, max: u64 },
}

fn class_index(r: u64) -> Option<usize> {
    CLASSES.iter().position(|&c| c == r)
}

struct Segment {
    base: u64,
    rem: Vec<u64>,
    sigma: Vec<u64>,
    alive: Vec<bool>,
}

impl Segment {
    fn slot(&self, n: u64) -> usize {
        let off = n - self.base;
        (off / 12) as usize * 4 + class_index(off % 12).unwrap()
    }

    fn value(&self, slot: usize) -> u64 {
        self.base + (slot / 4) as u64 * 12 + CLASSES[slot % 4]
    }
}

fn sieve_segment(lo: u64, hi: u64, primes: &[u32]) -> Vec<u64> {
    let base = lo - lo % 12;
    let blocks = (hi - base).div_ceil(12) as usize;
    let mut seg = Segment {
        base,
        rem: vec![0; blocks * 4],
        sigma: vec![0; blocks * 4],
        alive: vec![false; blocks * 4],
    };
    for slot in 0..blocks * 4 {
        let n = seg.value(slot);
        if n < lo || n >= hi || n == 0 {
            continue;
        }
        // 2 and 3 by hand: every candidate is even, and 3 - 1 <= sigma(2^a)
        let tz = n.trailing_zeros();
        let mut r = n >> tz;
        let mut sigma = (1u64 << (tz + 1)) - 1;
        if r % 3 == 0 {
            let (mut pk, mut term) = (1u64, 1u64);
            while r % 3 == 0 {
                r /= 3;
                pk *= 3;
                term += pk;
            }
            sigma *= term;
        }
        seg.rem[slot] = r;
        seg.sigma[slot] = sigma;
        seg.alive[slot] = true;
    }

    for &p in primes.iter().skip(2) {
        let p = p as u64;
        if p * p >= hi {
            break;
        }
        for &r in &CLASSES {
            // p^-1 = p mod 12 for p coprime to 12
            let t0 = (r * p) % 12;
            let step = 12 * p;
            let first = p * t0;
            let mut n = if first >= lo {
                first
            } else {
                first + (lo - first).div_ceil(step) * step
            };
            while n < hi {
                let slot = seg.slot(n);
                if seg.alive[slot] {
                    if p - 1 > seg.sigma[slot] {
                        seg.alive[slot] = false;
                    } else {
                        let (mut pk, mut term) = (1u64, 1u64);
                        let mut rem = seg.rem[slot];
                        while rem % p == 0 {
                            rem /= p;
                            pk *= p;
                            term += pk;
                        }
                        seg.rem[slot] = rem;
                        seg.sigma[slot] *= term;
                    }
                }
                n += step;
            }
        }
    }

    let mut out = Vec::new();
    if lo <= 1 && hi > 1 {
        out.push(1);
    }
    if lo <= 2 && hi > 2 {
        out.push(2);
    }
    for slot in 0..blocks * 4 {
        if seg.alive[slot] && (seg.rem[slot] == 1 || seg.rem[slot] - 1 <= seg.sigma[slot]) {
            out.push(seg.value(slot));
        }
    }
    out
}

fn segments(limit: u64) -> Vec<(u64, u64)> {
    let end = limit + 1;
    (0..end.div_ceil(SEGMENT_WIDTH))
        .map(|i| {
            let lo = i * SEGMENT_WIDTH;
            (lo, (lo + SEGMENT_WIDTH).min(end))
        })
        .collect()
}

fn sieving_primes(limit: u64) -> Vec<u32> {
    let root = (limit as f64).sqrt() as u64 + 2;
    primes_below(root as u32)
}

fn check_limit(limit: u64) -> Result<(), SieveError> {
    if limit > MAX_SIEVE_LIMIT {
        return Err(SieveError::LimitExceeded {
            limit,
            max: MAX_SIEVE_LIMIT,
        });
    }
    Ok(())
}

/// All practical numbers `<= limit`, ascending.
pub fn practical_sieve(limit: u64) -> Result<Vec<u64>, SieveError> {
    check_limit(limit)?;
    let primes = sieving_primes(limit);
    let parts: Vec<Vec<u64>> = segments(limit)
        .into_par_iter()
        .map(|(lo, hi)| sieve_segment(lo, hi, &primes))
        .collect();
    Ok(parts.concat())
}

/// Number of practical numbers `<= limit`.
pub fn count_practical_upto(limit: u64) -> Result<u64, SieveError> {
    check_limit(limit)?;
    let primes = sieving_primes(limit);
    Ok(segments(limit)
        .into_par_iter()
        .map(|(lo, hi)| sieve_segment(lo, hi, &primes).len() as u64)
        .sum())
}

/// Membership bitmap over `0..=limit`.
#[derive(Debug, Clone)]
pub struct PracticalSet {
    limit: u64,
    bits: Vec<u64>,
    count: u64,
}

impl PracticalSet {
    pub fn new(limit: u64) -> Result<Self, SieveError> {
        let list = practical_sieve(limit)?;
        let mut bits = vec![0u64; (limit as usize + 1).div_ceil(64)];
        for &n in &list {
            bits[(n / 64) as usize] |= 1 << (n % 64);
        }
        Ok(PracticalSet {
            limit,
            bits,
            count: list.len() as u64,
        })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn len(&self) -> u64 {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// # Panics
    /// If `n` is above the sieved limit.
    pub fn contains(&self, n: u64) -> bool {
        assert!(
            n <= self.limit,
            "{n} is beyond the sieved limit {}",
            self.limit
        );
        self.bits[(n / 64) as usize] >> (n % 64) & 1 == 1
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.bits.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as u64;
                w &= w - 1;
                Some(i as u64 * 64 + b)
            })
        })
    }
}
