//! Table reproduction and bounded scans.
//!
//! * [`s_table`]: for even `b`, the `c <= c_max` for which `n^2 + bn + c` is
//!   practical for some `2 <= n <= n_max`, with the smallest such `n`.
//! * Linear scans up to a limit, each resumable from a [`ScanState`]:
//!   sums of two practical numbers, practical triples `m - 2, m, m + 2`,
//!   `q, q + 2, q^2 + 2` all practical, and odd `m = prime + practical`.
//! * [`count_practical`]: `P(x)` and `P(x) log x / x`.

pub mod report;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::factorization::primes_below;
use crate::practical::{
    count_practical_upto, is_practical_u64, residue_obstruction, PracticalSet, SieveError,
};

/// Candidates between two checkpoints.
pub const CHECKPOINT_INTERVAL: u64 = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("b must be even, got {0}")]
    OddB(u64),
    #[error("limit {limit} is below the minimum {min}")]
    LimitTooSmall { limit: u64, min: u64 },
    #[error("parameters too large: {0}")]
    TooLarge(String),
    #[error(transparent)]
    Sieve(#[from] SieveError),
    #[error("checkpoint is for {found}, not {expected}")]
    CheckpointMismatch { expected: String, found: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct STableResult {
    pub b: u64,
    pub c_max: u64,
    pub n_max: u64,
    /// Ascending.
    pub members: Vec<u64>,
    /// Smallest `n >= 2` with `f(n)` practical, per member.
    pub witnesses: BTreeMap<u64, u64>,
    /// Non-members settled by the mod-12 obstruction without scanning.
    pub obstructed: Vec<u64>,
}

impl STableResult {
    pub fn non_members(&self) -> Vec<u64> {
        (1..=self.c_max)
            .filter(|c| !self.witnesses.contains_key(c))
            .collect()
    }
}

fn min_witness(b: u64, c: u64, n_max: u64) -> Option<u64> {
    (2..=n_max).find(|&n| is_practical_u64(n * n + b * n + c))
}

pub fn s_table(b: u64, c_max: u64, n_max: u64) -> Result<STableResult, SearchError> {
    if b % 2 != 0 {
        return Err(SearchError::OddB(b));
    }
    let too_large = || SearchError::TooLarge(format!("b = {b}, c_max = {c_max}, n_max = {n_max}"));
    n_max
        .checked_mul(n_max)
        .and_then(|sq| b.checked_mul(n_max).and_then(|bn| sq.checked_add(bn)))
        .and_then(|v| v.checked_add(c_max))
        .ok_or_else(too_large)?;

    let rows: Vec<(u64, Result<Option<u64>, ()>)> = (1..=c_max)
        .into_par_iter()
        .map(|c| {
            if residue_obstruction(b, c) {
                (c, Err(()))
            } else {
                (c, Ok(min_witness(b, c, n_max)))
            }
        })
        .collect();

    let mut members = Vec::new();
    let mut witnesses = BTreeMap::new();
    let mut obstructed = Vec::new();
    for (c, row) in rows {
        match row {
            Err(()) => obstructed.push(c),
            Ok(Some(n)) => {
                members.push(c);
                witnesses.insert(c, n);
            }
            Ok(None) => {}
        }
    }
    Ok(STableResult {
        b,
        c_max,
        n_max,
        members,
        witnesses,
        obstructed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanKind {
    /// Even `m` that are not a sum of two practical numbers.
    Goldbach,
    /// `m` with `m - 2`, `m`, `m + 2` practical.
    Twin,
    /// `q` with `q`, `q + 2`, `q^2 + 2` practical.
    Sun,
    /// Odd `m >= 3` that are not a prime plus a practical number.
    OddPrime,
}

impl ScanKind {
    pub fn name(self) -> &'static str {
        match self {
            ScanKind::Goldbach => "goldbach",
            ScanKind::Twin => "twin",
            ScanKind::Sun => "sun",
            ScanKind::OddPrime => "odd-prime",
        }
    }

    /// True when hits are counterexamples rather than examples.
    pub fn reports_failures(self) -> bool {
        matches!(self, ScanKind::Goldbach | ScanKind::OddPrime)
    }

    fn min_limit(self) -> u64 {
        match self {
            ScanKind::Goldbach | ScanKind::Sun => 2,
            ScanKind::Twin => 4,
            ScanKind::OddPrime => 3,
        }
    }

    fn first(self) -> u64 {
        self.min_limit()
    }

    fn step(self) -> u64 {
        match self {
            ScanKind::Twin | ScanKind::Sun => 1,
            ScanKind::Goldbach | ScanKind::OddPrime => 2,
        }
    }
}

/// Progress of a linear scan; everything below `next` has been examined.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanState {
    pub kind: ScanKind,
    pub limit: u64,
    pub next: u64,
    pub hits: Vec<u64>,
}

impl ScanState {
    pub fn new(kind: ScanKind, limit: u64) -> Self {
        ScanState {
            kind,
            limit,
            next: kind.first(),
            hits: Vec::new(),
        }
    }

    pub fn is_done(&self) -> bool {
        self.next > self.limit
    }
}

struct Tables {
    practical: PracticalSet,
    list: Vec<u64>,
    prime: Vec<bool>,
}

impl Tables {
    fn new(kind: ScanKind, limit: u64) -> Result<Self, SearchError> {
        let extra = if kind == ScanKind::Twin || kind == ScanKind::Sun {
            2
        } else {
            0
        };
        let practical = PracticalSet::new(limit + extra)?;
        let list = practical.iter().collect();
        let mut prime = Vec::new();
        if kind == ScanKind::OddPrime {
            let bound = u32::try_from(limit + 1)
                .map_err(|_| SearchError::TooLarge(format!("prime table to {limit}")))?;
            prime = vec![false; limit as usize + 1];
            for p in primes_below(bound) {
                prime[p as usize] = true;
            }
        }
        Ok(Tables {
            practical,
            list,
            prime,
        })
    }

    fn is_hit(&self, kind: ScanKind, m: u64) -> bool {
        match kind {
            ScanKind::Goldbach => self.two_practical(m).is_none(),
            ScanKind::Twin => {
                self.practical.contains(m - 2)
                    && self.practical.contains(m)
                    && self.practical.contains(m + 2)
            }
            ScanKind::Sun => {
                self.practical.contains(m)
                    && self.practical.contains(m + 2)
                    && is_practical_u64(m * m + 2)
            }
            ScanKind::OddPrime => self.prime_plus_practical(m).is_none(),
        }
    }

    fn two_practical(&self, m: u64) -> Option<(u64, u64)> {
        self.list
            .iter()
            .take_while(|&&p| p <= m / 2)
            .find(|&&p| self.practical.contains(m - p))
            .map(|&p| (p, m - p))
    }

    fn prime_plus_practical(&self, m: u64) -> Option<(u64, u64)> {
        self.list
            .iter()
            .take_while(|&&p| p < m)
            .find(|&&p| self.prime[(m - p) as usize])
            .map(|&p| (m - p, p))
    }
}

/// Advance `state` to the end of its range, calling `checkpoint` after every
/// [`CHECKPOINT_INTERVAL`] candidates (not after the last one).
pub fn run_scan(
    mut state: ScanState,
    checkpoint: &mut dyn FnMut(&ScanState),
) -> Result<ScanState, SearchError> {
    let kind = state.kind;
    if state.limit < kind.min_limit() {
        return Err(SearchError::LimitTooSmall {
            limit: state.limit,
            min: kind.min_limit(),
        });
    }
    if kind == ScanKind::Sun && state.limit > 4_000_000_000 {
        return Err(SearchError::TooLarge(format!(
            "q^2 + 2 for q up to {}",
            state.limit
        )));
    }
    let tables = Tables::new(kind, state.limit)?;
    let mut since = 0;
    while !state.is_done() {
        let m = state.next;
        if tables.is_hit(kind, m) {
            state.hits.push(m);
        }
        state.next += kind.step();
        since += 1;
        if since == CHECKPOINT_INTERVAL && !state.is_done() {
            checkpoint(&state);
            since = 0;
        }
    }
    Ok(state)
}

fn scan(kind: ScanKind, limit: u64) -> Result<Vec<u64>, SearchError> {
    Ok(run_scan(ScanState::new(kind, limit), &mut |_| {})?.hits)
}

pub fn goldbach_practical(limit: u64) -> Result<Vec<u64>, SearchError> {
    scan(ScanKind::Goldbach, limit)
}

pub fn twin_practical(limit: u64) -> Result<Vec<u64>, SearchError> {
    scan(ScanKind::Twin, limit)
}

pub fn sun_chain_search(limit: u64) -> Result<Vec<u64>, SearchError> {
    scan(ScanKind::Sun, limit)
}

pub fn odd_prime_plus_practical(limit: u64) -> Result<Vec<u64>, SearchError> {
    scan(ScanKind::OddPrime, limit)
}

/// `m = p + q` with both practical and `p` minimal, for even `m <= limit`.
pub fn two_practical_decomposition(m: u64) -> Result<Option<(u64, u64)>, SearchError> {
    Ok(Tables::new(ScanKind::Goldbach, m.max(2))?.two_practical(m))
}

/// `m = prime + practical` with the practical part minimal.
pub fn prime_plus_practical_decomposition(m: u64) -> Result<Option<(u64, u64)>, SearchError> {
    Ok(Tables::new(ScanKind::OddPrime, m.max(3))?.prime_plus_practical(m))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityPoint {
    pub x: u64,
    pub count: u64,
    /// `count * ln(x) / x`, rounded to 6 decimals.
    pub ratio: f64,
}

pub fn count_practical(x: u64) -> Result<DensityPoint, SearchError> {
    if x < 2 {
        return Err(SearchError::LimitTooSmall { limit: x, min: 2 });
    }
    let count = count_practical_upto(x)?;
    let raw = count as f64 * (x as f64).ln() / x as f64;
    Ok(DensityPoint {
        x,
        count,
        ratio: (raw * 1e6).round() / 1e6,
    })
}
