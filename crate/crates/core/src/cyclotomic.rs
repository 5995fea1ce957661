//! Cyclotomic polynomials with exact integer coefficients.
//!
//! `Phi_m` is computed from `x^m - 1 = prod_{d | m} Phi_d(x)` by Mobius
//! inversion: for squarefree `r > 1`, `Phi_r = prod_{d | r} (1 - x^d)^mu(r/d)`,
//! where multiplying or dividing by `1 - x^d` is a single pass over the
//! coefficients truncated at degree `phi(r)`. For general `m`,
//! `Phi_m(x) = Phi_rad(m)(x^(m / rad(m)))`. Results are memoized for the life of
//! the process.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::{BigInt, BigUint, Sign};
#[cfg(test)]
use num_traits::One;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

/// Largest supported index.
pub const MAX_INDEX: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CyclotomicError {
    #[error("index {0} is outside 1..={MAX_INDEX}")]
    IndexTooLarge(u64),
    #[error("coefficient overflow while computing Phi_{0}")]
    CoefficientOverflow(u64),
    #[error("invalid divisibility: {0}")]
    InvalidDivisibility(String),
    #[error("bound checks need x >= 512")]
    HypothesisViolated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CyclotomicPoly {
    index: u64,
    /// Ascending degree.
    coefficients: Vec<i64>,
}

impl CyclotomicPoly {
    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for &c in self.coefficients.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Evaluation at a natural `x`. Every `Phi_m(x)` is nonnegative there
    /// except `Phi_1(0) = -1`, which panics.
    pub fn eval_natural(&self, x: &BigUint) -> BigUint {
        let v = self.eval(&BigInt::from_biguint(Sign::Plus, x.clone()));
        v.to_biguint().expect("Phi_1(0) is negative")
    }
}

fn factorize_small(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

/// Euler's totient.
pub fn totient(m: u64) -> u64 {
    factorize_small(m)
        .iter()
        .fold(m, |acc, &(p, _)| acc / p * (p - 1))
}

/// Positive divisors, ascending.
pub fn divisors_u64(m: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factorize_small(m) {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

fn compute(m: u64) -> Result<CyclotomicPoly, CyclotomicError> {
    if m == 1 {
        return Ok(CyclotomicPoly {
            index: 1,
            coefficients: vec![-1, 1],
        });
    }
    let primes: Vec<u64> = factorize_small(m).iter().map(|&(p, _)| p).collect();
    let rad: u64 = primes.iter().product();
    let stretch = (m / rad) as usize;
    let deg = totient(rad) as usize;

    let mut series = vec![0i128; deg + 1];
    series[0] = 1;
    // numerators first, then denominators
    let subsets = 1usize << primes.len();
    let mut terms: Vec<(usize, bool)> = (0..subsets)
        .map(|mask| {
            let sub: u64 = (0..primes.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| primes[i])
                .product();
            // d = rad / sub, mu(rad/d) = mu(sub) = (-1)^|mask|
            ((rad / sub) as usize, mask.count_ones() % 2 == 0)
        })
        .collect();
    terms.sort_by_key(|&(_, numerator)| !numerator);

    let overflow = || CyclotomicError::CoefficientOverflow(m);
    for (d, numerator) in terms {
        if d > deg {
            continue;
        }
        if numerator {
            for i in (d..=deg).rev() {
                series[i] = series[i].checked_sub(series[i - d]).ok_or_else(overflow)?;
            }
        } else {
            for i in d..=deg {
                series[i] = series[i].checked_add(series[i - d]).ok_or_else(overflow)?;
            }
        }
    }

    let mut coefficients = vec![0i64; deg * stretch + 1];
    for (i, c) in series.into_iter().enumerate() {
        coefficients[i * stretch] = i64::try_from(c).map_err(|_| overflow())?;
    }
    Ok(CyclotomicPoly {
        index: m,
        coefficients,
    })
}

fn cache() -> &'static RwLock<HashMap<u64, Arc<CyclotomicPoly>>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<CyclotomicPoly>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// The `m`-th cyclotomic polynomial.
pub fn cyclotomic_poly(m: u64) -> Result<Arc<CyclotomicPoly>, CyclotomicError> {
    if m == 0 || m > MAX_INDEX {
        return Err(CyclotomicError::IndexTooLarge(m));
    }
    if let Some(p) = cache().read().unwrap().get(&m) {
        return Ok(Arc::clone(p));
    }
    let poly = Arc::new(compute(m)?);
    cache()
        .write()
        .unwrap()
        .entry(m)
        .or_insert_with(|| Arc::clone(&poly));
    Ok(poly)
}

/// `Phi_m(x)` for natural `x` (not defined as a natural for `m = 1, x = 0`).
pub fn phi_at(m: u64, x: &BigUint) -> Result<BigUint, CyclotomicError> {
    Ok(cyclotomic_poly(m)?.eval_natural(x))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum QuotientSign {
    /// `(x^n - 1) / (x^n0 - 1)`
    Minus,
    /// `(x^n + 1) / (x^n0 + 1)`, needs `n / n0` odd
    Plus,
}

/// One factor `Phi_index(x)` of a quotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicValue {
    pub index: u64,
    pub value: BigUint,
}

/// The cyclotomic factors of `(x^n -+ 1) / (x^n0 -+ 1)`, ascending by value.
///
/// Minus: `Phi_d(x)` for `d | n`, `d` not dividing `n0`. Plus: `d | 2n` with
/// `d` dividing neither `n` nor `2 n0`.
pub fn ratio_factors(
    x: &BigUint,
    n: u64,
    n0: u64,
    sign: QuotientSign,
) -> Result<Vec<CyclotomicValue>, CyclotomicError> {
    if n == 0 || n0 == 0 || n % n0 != 0 {
        return Err(CyclotomicError::InvalidDivisibility(format!(
            "{n0} does not divide {n}"
        )));
    }
    let indices: Vec<u64> = match sign {
        QuotientSign::Minus => divisors_u64(n)
            .into_iter()
            .filter(|d| n0 % d != 0)
            .collect(),
        QuotientSign::Plus => {
            if (n / n0) % 2 == 0 {
                return Err(CyclotomicError::InvalidDivisibility(format!(
                    "{n} / {n0} is even"
                )));
            }
            divisors_u64(2 * n)
                .into_iter()
                .filter(|d| n % d != 0 && (2 * n0) % d != 0)
                .collect()
        }
    };
    let mut out = indices
        .into_iter()
        .map(|index| {
            Ok(CyclotomicValue {
                index,
                value: phi_at(index, x)?,
            })
        })
        .collect::<Result<Vec<_>, CyclotomicError>>()?;
    out.sort_by(|a, b| a.value.cmp(&b.value).then(a.index.cmp(&b.index)));
    Ok(out)
}

/// One named inequality and whether it held.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub name: &'static str,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub checks: Vec<BoundCheck>,
}

impl BoundsReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// Size bounds on `Phi_6, Phi_30, Phi_42, Phi_210` at `x >= 512` that drive the
/// `2^(35 * 3^k + 1) + 2` induction, evaluated exactly.
///
/// The first five entries are the bounds on the four polynomials and their
/// product; the last two are the multiplier-chain consequences used for
/// `m = 2(x^35 + 1)`.
pub fn verify_paper_bounds(x: &BigUint) -> Result<BoundsReport, CyclotomicError> {
    if x < &BigUint::from(512u32) {
        return Err(CyclotomicError::HypothesisViolated);
    }
    let pow = |e: usize| num_traits::pow(x.clone(), e);
    let p6 = phi_at(6, x)?;
    let p30 = phi_at(30, x)?;
    let p42 = phi_at(42, x)?;
    let p210 = phi_at(210, x)?;
    let x2 = pow(2);
    let x8 = pow(8);
    let x12 = pow(12);
    let x22 = pow(22);
    let x48 = pow(48);
    let prod = &p6 * &p30 * &p42;
    let m = (pow(35) + 1u32) << 1u32;

    let checks = vec![
        BoundCheck {
            name: "x^2/2 < Phi_6(x) < x^2",
            holds: x2 < (&p6 << 1u32) && p6 < x2,
        },
        BoundCheck {
            name: "x^8 < Phi_30(x) < 2x^8",
            holds: x8 < p30 && p30 < (&x8 << 1u32),
        },
        BoundCheck {
            name: "x^12 < Phi_42(x) < 2x^12",
            holds: x12 < p42 && p42 < (&x12 << 1u32),
        },
        BoundCheck {
            name: "Phi_210(x) < x^48",
            holds: p210 < x48,
        },
        BoundCheck {
            name: "x^22/2 < Phi_6 Phi_30 Phi_42 < 4x^22",
            holds: x22 < (&prod << 1u32) && prod < (&x22 << 2u32),
        },
        BoundCheck {
            name: "Phi_6 Phi_30 Phi_42 < 4(x^35 + 1)",
            holds: prod < (&m << 1u32),
        },
        BoundCheck {
            name: "2(x^35 + 1) Phi_6 Phi_30 Phi_42 > x^48",
            holds: &m * &prod > x48,
        },
    ];
    Ok(BoundsReport { checks })
}

/// `(x^n -+ 1) / (x^n0 -+ 1)` by direct exponentiation.
pub fn quotient_value(x: &BigUint, n: u64, n0: u64, sign: QuotientSign) -> BigUint {
    let pow = |e: u64| num_traits::pow(x.clone(), e as usize);
    match sign {
        QuotientSign::Minus => (pow(n) - 1u32) / (pow(n0) - 1u32),
        QuotientSign::Plus => (pow(n) + 1u32) / (pow(n0) + 1u32),
    }
}

/// Coefficients as `(degree, coefficient)` for nonzero terms, descending.
pub fn nonzero_terms(p: &CyclotomicPoly) -> Vec<(usize, i64)> {
    p.coefficients
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, c)| **c != 0)
        .map(|(i, &c)| (i, c))
        .collect()
}

impl std::fmt::Display for CyclotomicPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (deg, c) in nonzero_terms(self) {
            let mag = c.unsigned_abs();
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c < 0 { '-' } else { '+' })?;
            }
            first = false;
            match (deg, mag) {
                (0, m) => write!(f, "{m}")?,
                (1, 1) => write!(f, "x")?,
                (1, m) => write!(f, "{m}x")?,
                (d, 1) => write!(f, "x^{d}")?,
                (d, m) => write!(f, "{m}x^{d}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coeffs(m: u64) -> Vec<i64> {
        cyclotomic_poly(m).unwrap().coefficients().to_vec()
    }

    #[test]
    fn small_indices() {
        assert_eq!(coeffs(1), vec![-1, 1]);
        assert_eq!(coeffs(2), vec![1, 1]);
        assert_eq!(coeffs(6), vec![1, -1, 1]);
        assert_eq!(coeffs(30), vec![1, 1, 0, -1, -1, -1, 0, 1, 1]);
        assert_eq!(coeffs(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn display_phi_6() {
        assert_eq!(cyclotomic_poly(6).unwrap().to_string(), "x^2 - x + 1");
        assert_eq!(cyclotomic_poly(1).unwrap().to_string(), "x - 1");
    }

    #[test]
    fn evaluations() {
        let two = BigUint::from(2u32);
        assert_eq!(phi_at(6, &two).unwrap(), BigUint::from(3u32));
        assert_eq!(phi_at(2, &two).unwrap(), BigUint::from(3u32));
        assert_eq!(phi_at(1, &two).unwrap(), BigUint::one());
    }

    #[test]
    fn index_bounds() {
        assert_eq!(
            cyclotomic_poly(0).unwrap_err(),
            CyclotomicError::IndexTooLarge(0)
        );
        assert!(cyclotomic_poly(MAX_INDEX + 1).is_err());
    }

    #[test]
    fn large_index_with_many_primes() {
        // 3*5*7*11*13*17
        let p = cyclotomic_poly(255255).unwrap();
        assert_eq!(p.degree() as u64, totient(255255));
        assert_eq!(p.coefficients().iter().map(|c| c.abs()).max(), Some(532));
    }

    #[test]
    fn ratio_examples() {
        let three = BigUint::from(3u32);
        let f = ratio_factors(&three, 210, 70, QuotientSign::Plus).unwrap();
        let mut idx: Vec<u64> = f.iter().map(|v| v.index).collect();
        idx.sort();
        assert_eq!(idx, vec![12, 60, 84, 420]);

        let five = BigUint::from(5u32);
        assert!(ratio_factors(&five, 6, 6, QuotientSign::Minus)
            .unwrap()
            .is_empty());

        assert!(ratio_factors(&five, 6, 4, QuotientSign::Minus).is_err());
        assert!(ratio_factors(&five, 6, 3, QuotientSign::Plus).is_err());
    }

    #[test]
    fn ratio_minus_product() {
        let two = BigUint::from(2u32);
        let f = ratio_factors(&two, 210, 105, QuotientSign::Minus).unwrap();
        let product: BigUint = f.iter().map(|v| v.value.clone()).product();
        assert_eq!(product, quotient_value(&two, 210, 105, QuotientSign::Minus));
        assert!(f.windows(2).all(|w| w[0].value <= w[1].value));
    }

    #[test]
    fn bounds_require_hypothesis() {
        assert_eq!(
            verify_paper_bounds(&BigUint::from(2u32)),
            Err(CyclotomicError::HypothesisViolated)
        );
        assert!(verify_paper_bounds(&BigUint::from(512u32))
            .unwrap()
            .all_hold());
        assert!(verify_paper_bounds(&(BigUint::one() << 27u32))
            .unwrap()
            .all_hold());
    }

    #[test]
    fn totient_and_divisors() {
        assert_eq!(totient(210), 48);
        assert_eq!(totient(1), 1);
        assert_eq!(divisors_u64(28), vec![1, 2, 4, 7, 14, 28]);
    }
}
