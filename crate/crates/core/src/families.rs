//! Infinite families of practical numbers, each member shipped with a
//! certificate.
//!
//! * Quadratics `f(n) = n^2 + bn + c`: `f(n + f(n)) = f(n) (f(n) + 2n + b + 1)`
//!   and the second factor is at most `2 f(n)` once `n >= 2`, so one practical
//!   value seeds infinitely many.
//! * `m_k = 2^(35 * 3^k + 1) + 2`: with `x = 2^(3^k)`,
//!   `m_{k+1} / m_k = Phi_6(x) Phi_30(x) Phi_42(x) Phi_210(x)`, and both
//!   `Phi_6 Phi_30 Phi_42` and `Phi_210` respect the doubling bound.
//! * Pythagorean triples with gcd 4 or 6 built from `3^(3^k * 70) -+ 1`.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::Serialize;
use thiserror::Error;

use crate::certificate::{prime_power_chain, CertificateError, PracticalCertificate, VerifyMode};
use crate::cyclotomic::{divisors_u64, phi_at, ratio_factors, CyclotomicError, QuotientSign};
use crate::factorization::{FactorError, FactorOptions, Factorization};
use crate::practical::is_practical;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("seed {0} is below 2")]
    SeedTooSmall(BigUint),
    #[error("f({seed}) = {value} is not practical")]
    SeedNotPractical { seed: BigUint, value: BigUint },
    #[error("c must be at least 1")]
    InvalidConstant,
    #[error("gcd tag must be 4 or 6, got {0}")]
    InvalidGcdTag(u64),
    #[error("base case needs a complete factorization: {0}")]
    FactoringRequired(FactorError),
    #[error("base case {0} is not practical")]
    BaseNotPractical(BigUint),
    #[error("certificate for {what} failed: {source}")]
    Certificate {
        what: String,
        source: CertificateError,
    },
    #[error(transparent)]
    Cyclotomic(#[from] CyclotomicError),
    #[error("generation index {0} is too large")]
    IndexTooLarge(u32),
}

/// `f(n) = n^2 + bn + c`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuadraticFamily {
    #[serde(serialize_with = "crate::search::report::ser_decimal")]
    pub b: BigUint,
    #[serde(serialize_with = "crate::search::report::ser_decimal")]
    pub c: BigUint,
}

impl QuadraticFamily {
    pub fn new(b: impl Into<BigUint>, c: impl Into<BigUint>) -> Result<Self, FamilyError> {
        let c = c.into();
        if c < BigUint::one() {
            return Err(FamilyError::InvalidConstant);
        }
        Ok(QuadraticFamily { b: b.into(), c })
    }

    pub fn eval(&self, n: &BigUint) -> BigUint {
        n * n + &self.b * n + &self.c
    }
}

/// `(n + f(n), f(n) + 2n + b + 1)`, with the product identity and the
/// doubling bound re-checked on the actual numbers.
pub fn quadratic_step(
    fam: &QuadraticFamily,
    n: &BigUint,
) -> Result<(BigUint, BigUint), FamilyError> {
    if n < &BigUint::from(2u32) {
        return Err(FamilyError::SeedTooSmall(n.clone()));
    }
    let fn_ = fam.eval(n);
    let next = n + &fn_;
    let multiplier = &fn_ + (n << 1u32) + &fam.b + 1u32;
    assert_eq!(fam.eval(&next), &fn_ * &multiplier, "quadratic identity");
    assert!(multiplier <= (&fn_ << 1u32), "doubling bound");
    Ok((next, multiplier))
}

/// Infinite stream of `(n, certificate for f(n))`.
#[derive(Debug, Clone)]
pub struct QuadraticStream {
    family: QuadraticFamily,
    n: BigUint,
    certificate: PracticalCertificate,
    started: bool,
}

impl Iterator for QuadraticStream {
    type Item = (BigUint, PracticalCertificate);

    fn next(&mut self) -> Option<Self::Item> {
        if self.started {
            let (next, multiplier) =
                quadratic_step(&self.family, &self.n).expect("stream n stays >= 2");
            self.certificate = self
                .certificate
                .extend(multiplier)
                .expect("multiplier is positive");
            self.n = next;
        }
        self.started = true;
        Some((self.n.clone(), self.certificate.clone()))
    }
}

pub fn quadratic_family_stream(
    family: &QuadraticFamily,
    seed: &BigUint,
    opts: &FactorOptions,
) -> Result<QuadraticStream, FamilyError> {
    if seed < &BigUint::from(2u32) {
        return Err(FamilyError::SeedTooSmall(seed.clone()));
    }
    let value = family.eval(seed);
    let base = opts
        .factor(&value)
        .map_err(FamilyError::FactoringRequired)?;
    if !is_practical(&base).practical {
        return Err(FamilyError::SeedNotPractical {
            seed: seed.clone(),
            value,
        });
    }
    let certificate = PracticalCertificate::direct(base).expect("base checked above");
    Ok(QuadraticStream {
        family: family.clone(),
        n: seed.clone(),
        certificate,
        started: false,
    })
}

/// Exponent `35 * 3^k + 1` of `m_k = 2^(35 * 3^k + 1) + 2`.
pub fn power_two_exponent(k: u32) -> Result<u64, FamilyError> {
    3u64.checked_pow(k)
        .and_then(|t| t.checked_mul(35))
        .map(|e| e + 1)
        .filter(|&e| e < 1 << 32)
        .ok_or(FamilyError::IndexTooLarge(k))
}

pub fn power_two_value(k: u32) -> Result<BigUint, FamilyError> {
    Ok((BigUint::one() << power_two_exponent(k)?) + 2u32)
}

/// For even `k`, `m_k = q^4 + 2` with `q = 2^e`; returns `e`.
pub fn fourth_power_exponent(k: u32) -> Result<Option<u64>, FamilyError> {
    let e = power_two_exponent(k)?;
    Ok((e % 4 == 0).then_some(e / 4))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PowerTwoMember {
    pub k: u32,
    #[serde(serialize_with = "crate::search::report::ser_decimal")]
    pub value: BigUint,
    pub certificate: PracticalCertificate,
}

fn factor_product(
    values: impl IntoIterator<Item = BigUint>,
    opts: &FactorOptions,
) -> Result<Factorization, FamilyError> {
    values.into_iter().try_fold(Factorization::one(), |acc, v| {
        let f = opts.factor(&v).map_err(FamilyError::FactoringRequired)?;
        Ok(acc.merge(&f))
    })
}

/// Factorization of `2(x^n + 1)` built from the cyclotomic pieces of `x^n + 1`.
fn two_times_plus_one(x: u32, n: u64, opts: &FactorOptions) -> Result<Factorization, FamilyError> {
    let x = BigUint::from(x);
    let mut pieces = vec![BigUint::from(2u32)];
    for d in divisors_u64(2 * n) {
        if n % d != 0 {
            pieces.push(phi_at(d, &x)?);
        }
    }
    factor_product(pieces, opts)
}

fn checked_direct(f: Factorization) -> Result<PracticalCertificate, FamilyError> {
    if !is_practical(&f).practical {
        return Err(FamilyError::BaseNotPractical(f.value().clone()));
    }
    Ok(PracticalCertificate::direct(f).expect("practical base"))
}

fn verified(cert: PracticalCertificate, what: String) -> Result<PracticalCertificate, FamilyError> {
    cert.verify(VerifyMode::Weak)
        .map_err(|source| FamilyError::Certificate { what, source })?;
    Ok(cert)
}

/// `m_0, ..., m_k_max` with certificates: direct structure-theorem
/// factorizations for `k <= 2`, then chains extending the `k = 2` base.
pub fn power_two_members(
    k_max: u32,
    opts: &FactorOptions,
) -> Result<Vec<PowerTwoMember>, FamilyError> {
    power_two_exponent(k_max)?;
    let mut out: Vec<PowerTwoMember> = Vec::new();
    for k in 0..=k_max {
        let value = power_two_value(k)?;
        let certificate = if k <= 2 {
            let f = two_times_plus_one(2, 35 * 3u64.pow(k), opts)?;
            debug_assert_eq!(f.value(), &value);
            checked_direct(f)?
        } else {
            let prev = &out[k as usize - 1].certificate;
            let x = BigUint::one() << 3u64.pow(k - 1);
            let low = phi_at(6, &x)? * phi_at(30, &x)? * phi_at(42, &x)?;
            let high = phi_at(210, &x)?;
            let cert = prev
                .extend(low)
                .and_then(|c| c.extend(high))
                .expect("positive multipliers");
            verified(cert, format!("m_{k}"))?
        };
        assert_eq!(certificate.target(), &value);
        out.push(PowerTwoMember {
            k,
            value,
            certificate,
        });
    }
    Ok(out)
}

pub fn power_two_member(k: u32, opts: &FactorOptions) -> Result<PowerTwoMember, FamilyError> {
    Ok(power_two_members(k, opts)?
        .pop()
        .expect("k_max + 1 members"))
}

/// `(a, b, c)` with `a^2 + b^2 = c^2`, `gcd = d`, and a certificate per entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PythagoreanTriple {
    #[serde(serialize_with = "crate::search::report::ser_decimal")]
    pub a: BigUint,
    #[serde(serialize_with = "crate::search::report::ser_decimal")]
    pub b: BigUint,
    #[serde(serialize_with = "crate::search::report::ser_decimal")]
    pub c: BigUint,
    pub d: u64,
    pub k: u32,
    pub forms: [String; 3],
    pub certificates: [PracticalCertificate; 3],
}

fn three_pow(e: u64) -> BigUint {
    num_traits::pow(BigUint::from(3u32), e as usize)
}

/// Legs `s(Y - 1)`, `2s y`, `s(Y + 1)` where `s = d / 2`, `y = 3^(3^k * 35)` and
/// `Y = y^2`.
///
/// The `-1` leg grows by `(Y_j - y_j + 1)(Y_j + y_j + 1) = Y_j^2 + Y_j + 1` per
/// generation and the `+1` leg by `Phi_12 Phi_60 Phi_84 Phi_420` at `3^(3^j)`.
/// For `d = 4` the same chains run over the bases `2(3^70 -+ 1)`, so nothing
/// about those legs is assumed; every step is checked.
pub fn pythagorean_family(
    d: u64,
    k: u32,
    opts: &FactorOptions,
) -> Result<PythagoreanTriple, FamilyError> {
    let s: u32 = match d {
        4 => 2,
        6 => 3,
        other => return Err(FamilyError::InvalidGcdTag(other)),
    };
    if k > 12 {
        return Err(FamilyError::IndexTooLarge(k));
    }
    let half = 3u64.pow(k) * 35;
    let y = three_pow(half);
    let big_y = &y * &y;
    let a = (&big_y - 1u32) * s;
    let b = &y * (2 * s);
    let c = (&big_y + 1u32) * s;

    assert_eq!(&a * &a + &b * &b, &c * &c, "Pythagorean identity");
    assert_eq!(a.gcd(&b).gcd(&c), BigUint::from(d), "gcd tag");

    let three = BigUint::from(3u32);
    let minus_base = {
        let mut pieces = vec![BigUint::from(s)];
        pieces.extend(
            divisors_u64(70)
                .into_iter()
                .map(|i| phi_at(i, &three))
                .collect::<Result<Vec<_>, _>>()?,
        );
        factor_product(pieces, opts)?
    };
    let plus_base = {
        let mut pieces = vec![BigUint::from(s)];
        pieces.extend(
            divisors_u64(140)
                .into_iter()
                .filter(|i| 70 % i != 0)
                .map(|i| phi_at(i, &three))
                .collect::<Result<Vec<_>, _>>()?,
        );
        factor_product(pieces, opts)?
    };

    let mut minus = checked_direct(minus_base)?;
    let mut plus = checked_direct(plus_base)?;
    for j in 0..k {
        let yj = three_pow(3u64.pow(j) * 35);
        let big_yj = &yj * &yj;
        minus = minus
            .extend(&big_yj - &yj + 1u32)
            .and_then(|m| m.extend(&big_yj + &yj + 1u32))
            .expect("positive multipliers");
        let u = three_pow(3u64.pow(j));
        for factor in ratio_factors(&u, 210, 70, QuotientSign::Plus)? {
            plus = plus.extend(factor.value).expect("positive multiplier");
        }
    }
    assert_eq!(minus.target(), &a);
    assert_eq!(plus.target(), &c);

    let mid_base = crate::factorization::factor(&BigUint::from(2 * s), &[], opts.budget)
        .map_err(FamilyError::FactoringRequired)?;
    let mid_chain = prime_power_chain(&BigUint::from(2 * s), 3, half).expect("3 <= 2 * 4");
    let mid_target = mid_chain
        .iter()
        .fold(BigUint::from(2 * s), |acc, m| acc * m);
    assert_eq!(mid_target, b);
    let mid = PracticalCertificate::new(mid_base, mid_chain, mid_target).map_err(|source| {
        FamilyError::Certificate {
            what: "b".into(),
            source,
        }
    })?;

    let forms = [
        format!("{s}*(3^{}-1)", 2 * half),
        format!("{}*3^{half}", 2 * s),
        format!("{s}*(3^{}+1)", 2 * half),
    ];
    let certificates = [
        verified(minus, "a".into())?,
        verified(mid, "b".into())?,
        verified(plus, "c".into())?,
    ];
    Ok(PythagoreanTriple {
        a,
        b,
        c,
        d,
        k,
        forms,
        certificates,
    })
}

/// `(Phi_12(u) <= 2z, Phi_60(u) <= 2z Phi_12(u), ...)` for the `+1` leg of the
/// gcd-6 family at generation `k`, with `u = 3^(3^k)` and `z = 3(u^70 + 1)`.
pub fn plus_leg_chain_bounds(k: u32) -> Result<Vec<bool>, FamilyError> {
    let u = three_pow(3u64.pow(k));
    let mut acc = (num_traits::pow(u.clone(), 70) + 1u32) * 3u32;
    let mut out = Vec::new();
    for index in [12u64, 60, 84, 420] {
        let v = phi_at(index, &u)?;
        out.push(v <= (&acc << 1u32));
        acc *= v;
    }
    Ok(out)
}

/// Number of decimal digits, for reporting.
pub fn decimal_digits(n: &BigUint) -> usize {
    if let Some(small) = n.to_u64() {
        return small.to_string().len();
    }
    n.to_str_radix(10).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn step_examples() {
        let fam = QuadraticFamily::new(0u32, 2u32).unwrap();
        assert_eq!(quadratic_step(&fam, &n(2)).unwrap(), (n(8), n(11)));
        assert_eq!(fam.eval(&n(8)), n(66));

        let fam = QuadraticFamily::new(1u32, 2u32).unwrap();
        assert_eq!(fam.eval(&n(2)), n(8));
        assert_eq!(quadratic_step(&fam, &n(2)).unwrap(), (n(10), n(14)));
        assert_eq!(fam.eval(&n(10)), n(112));

        let fam = QuadraticFamily::new(0u32, 2u32).unwrap();
        assert_eq!(
            quadratic_step(&fam, &n(1)),
            Err(FamilyError::SeedTooSmall(n(1)))
        );
    }

    #[test]
    fn zero_constant_rejected() {
        assert_eq!(
            QuadraticFamily::new(3u32, 0u32),
            Err(FamilyError::InvalidConstant)
        );
    }

    #[test]
    fn stream_prefix() {
        let fam = QuadraticFamily::new(0u32, 2u32).unwrap();
        let items: Vec<_> = quadratic_family_stream(&fam, &n(2), &FactorOptions::default())
            .unwrap()
            .take(3)
            .collect();
        let ns: Vec<_> = items.iter().map(|(m, _)| m.clone()).collect();
        let targets: Vec<_> = items.iter().map(|(_, c)| c.target().clone()).collect();
        assert_eq!(ns, vec![n(2), n(8), n(74)]);
        assert_eq!(targets, vec![n(6), n(66), n(5478)]);
        for (_, cert) in &items {
            assert!(cert.is_valid(VerifyMode::Weak));
        }
    }

    #[test]
    fn stream_rejects_non_practical_seed() {
        let fam = QuadraticFamily::new(0u32, 2u32).unwrap();
        assert!(matches!(
            quadratic_family_stream(&fam, &n(3), &FactorOptions::default()),
            Err(FamilyError::SeedNotPractical { .. })
        ));
    }

    #[test]
    fn m0_is_direct() {
        let m = power_two_member(0, &FactorOptions::default()).unwrap();
        assert_eq!(m.value, (BigUint::one() << 36u32) + 2u32);
        assert!(m.certificate.chain().is_empty());
    }

    #[test]
    fn fourth_powers_on_even_k() {
        for k in 0..8 {
            let e = fourth_power_exponent(k).unwrap();
            assert_eq!(e.is_some(), k % 2 == 0, "k = {k}");
            if let Some(e) = e {
                let q = BigUint::one() << e;
                assert_eq!(num_traits::pow(q, 4) + 2u32, power_two_value(k).unwrap());
            }
        }
    }

    #[test]
    fn invalid_tag() {
        assert_eq!(
            pythagorean_family(5, 0, &FactorOptions::default()),
            Err(FamilyError::InvalidGcdTag(5))
        );
    }

    #[test]
    fn gcd6_k1_minus_leg() {
        let t = pythagorean_family(6, 1, &FactorOptions::default()).unwrap();
        let x0 = num_traits::pow(n(3), 71) - 3u32;
        let y = num_traits::pow(n(3), 35);
        let yy = &y * &y;
        assert_eq!(t.a, &x0 * (&yy - &y + 1u32) * (&yy + &y + 1u32));
        assert_eq!(t.certificates[0].chain().len(), 2);
    }

    #[test]
    fn plus_leg_bounds_small_k() {
        for k in 0..3 {
            assert!(plus_leg_chain_bounds(k).unwrap().iter().all(|&b| b));
        }
    }
}
