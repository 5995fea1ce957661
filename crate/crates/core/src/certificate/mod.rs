//! Multiplier-chain certificates.
//!
//! If `m` is practical then `m * n` is practical for every `1 <= n <= sigma(m) + 1`.
//! For practical `m > 1` we also have `sigma(m) >= 2m - 1`, so `n <= 2m` always
//! suffices. A certificate starts at a base whose factorization passes the
//! structure-theorem test and multiplies in a chain of factors, each bounded
//! by the running product; checking it needs only multiplications and
//! comparisons, never a factorization of the (possibly enormous) target.

mod format;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::factorization::{sigma, FactorError, FactorOptions, Factorization};
use crate::practical::is_practical;

pub use format::{CertificateFile, FormatError};

/// Which multiplier bound a chain step must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VerifyMode {
    /// `n <= 2 * acc`; comparisons only.
    #[default]
    Weak,
    /// `n <= sigma(acc) + 1`; factors every intermediate accumulator.
    Strong,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertificateError {
    #[error("base {0} is not practical")]
    BaseNotPractical(BigUint),
    #[error("multiplier {0} is zero")]
    ZeroMultiplier(usize),
    #[error("base times chain does not equal the target")]
    ChainProductMismatch,
    #[error("step {0}: multiplier exceeds twice the accumulator")]
    WeakBoundViolated(usize),
    #[error("step {0}: multiplier exceeds sigma(accumulator) + 1")]
    StrongBoundViolated(usize),
    #[error("step {step}: accumulator could not be factored ({source})")]
    FactoringRequired { step: usize, source: FactorError },
    #[error("step {0}: ascending chain violates the weak bound")]
    NotCertifiable(usize),
}

/// A practical base, a chain of multipliers and the number they certify.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PracticalCertificate {
    base: Factorization,
    chain: Vec<BigUint>,
    target: BigUint,
}

impl PracticalCertificate {
    /// Checks the structural invariants (practical base, nonzero multipliers)
    /// but not the chain bounds; use [`verify`](Self::verify) for that.
    pub fn new(
        base: Factorization,
        chain: Vec<BigUint>,
        target: BigUint,
    ) -> Result<Self, CertificateError> {
        if !is_practical(&base).practical {
            return Err(CertificateError::BaseNotPractical(base.value().clone()));
        }
        if let Some(i) = chain.iter().position(Zero::is_zero) {
            return Err(CertificateError::ZeroMultiplier(i));
        }
        Ok(PracticalCertificate {
            base,
            chain,
            target,
        })
    }

    /// A certificate with an empty chain.
    pub fn direct(base: Factorization) -> Result<Self, CertificateError> {
        let target = base.value().clone();
        Self::new(base, Vec::new(), target)
    }

    pub fn base(&self) -> &Factorization {
        &self.base
    }

    pub fn chain(&self) -> &[BigUint] {
        &self.chain
    }

    pub fn target(&self) -> &BigUint {
        &self.target
    }

    /// Appends a multiplier and moves the target along with it.
    pub fn extend(&self, multiplier: BigUint) -> Result<Self, CertificateError> {
        if multiplier.is_zero() {
            return Err(CertificateError::ZeroMultiplier(self.chain.len()));
        }
        let mut next = self.clone();
        next.target = &self.target * &multiplier;
        next.chain.push(multiplier);
        Ok(next)
    }

    pub fn verify(&self, mode: VerifyMode) -> Result<(), CertificateError> {
        self.verify_with(mode, &FactorOptions::default())
    }

    /// Walks the chain; `Ok` is a proof that the target is practical.
    pub fn verify_with(
        &self,
        mode: VerifyMode,
        opts: &FactorOptions,
    ) -> Result<(), CertificateError> {
        let mut acc = self.base.value().clone();
        for (step, n) in self.chain.iter().enumerate() {
            match mode {
                VerifyMode::Weak => {
                    if n > &(&acc << 1u32) {
                        return Err(CertificateError::WeakBoundViolated(step));
                    }
                }
                VerifyMode::Strong => {
                    let f = opts
                        .factor(&acc)
                        .map_err(|source| CertificateError::FactoringRequired { step, source })?;
                    if n > &(sigma(&f) + 1u32) {
                        return Err(CertificateError::StrongBoundViolated(step));
                    }
                }
            }
            acc *= n;
        }
        if acc != self.target {
            return Err(CertificateError::ChainProductMismatch);
        }
        Ok(())
    }

    pub fn is_valid(&self, mode: VerifyMode) -> bool {
        self.verify(mode).is_ok()
    }

    /// Canonical text form, decimals throughout.
    pub fn to_text(&self) -> String {
        CertificateFile {
            base: self.base.value().clone(),
            target: self.target.clone(),
            chain: self.chain.clone(),
        }
        .to_text()
    }
}

impl Serialize for PracticalCertificate {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("PracticalCertificate", 4)?;
        st.serialize_field("base", &self.base.value().to_string())?;
        st.serialize_field("base_factorization", &self.base.to_string())?;
        st.serialize_field(
            "chain",
            &self
                .chain
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>(),
        )?;
        st.serialize_field("target", &self.target.to_string())?;
        st.end()
    }
}

/// Sorts `multipliers` ascending and certifies `base * product` in weak mode.
///
/// Ascending order is optimal for the weak bound: if any ordering works, the
/// ascending one does, so a failure here is definitive for that bound.
pub fn certify_product(
    base: Factorization,
    multipliers: Vec<BigUint>,
) -> Result<PracticalCertificate, CertificateError> {
    let mut chain = multipliers;
    chain.sort();
    let target = chain.iter().fold(base.value().clone(), |acc, m| acc * m);
    let cert = PracticalCertificate::new(base, chain, target)?;
    match cert.verify(VerifyMode::Weak) {
        Ok(()) => Ok(cert),
        Err(CertificateError::WeakBoundViolated(step)) => {
            Err(CertificateError::NotCertifiable(step))
        }
        Err(other) => Err(other),
    }
}

/// Greedy chain multiplying `acc` by `prime^exponent`, each step taking the
/// largest power of `prime` within twice the running product. `None` when
/// `prime` itself already exceeds that bound.
pub fn prime_power_chain(acc: &BigUint, prime: u32, exponent: u64) -> Option<Vec<BigUint>> {
    let p = BigUint::from(prime);
    let mut acc = acc.clone();
    let mut left = exponent;
    let mut chain = Vec::new();
    while left > 0 {
        let bound = &acc << 1u32;
        let mut step = BigUint::one();
        let mut used = 0;
        while used < left && &step * &p <= bound {
            step *= &p;
            used += 1;
        }
        if used == 0 {
            return None;
        }
        acc *= &step;
        chain.push(step);
        left -= used;
    }
    Some(chain)
}
