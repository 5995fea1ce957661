//! Computation with practical numbers.
//!
//! A positive integer `m` is *practical* when every `n` in `1..=m` is a sum of
//! distinct divisors of `m`. This crate decides practicality exactly (from a
//! prime factorization, from the raw subset-sum definition, or in bulk with a
//! segmented sieve), certifies astronomically large practical numbers with
//! multiplier chains, evaluates cyclotomic polynomials at big integers, and
//! builds the known infinite families of practical numbers.
//!
//! The `practium` binary wires everything into scriptable runs; see [`cli`].

pub mod certificate;
pub mod cli;
pub mod cyclotomic;
pub mod expr;
pub mod factorization;
pub mod families;
pub mod practical;
pub mod search;

pub use num_bigint::BigUint;

/// Arbitrary-precision nonnegative integer.
pub type Natural = BigUint;

pub use certificate::{certify_product, PracticalCertificate, VerifyMode};
pub use cyclotomic::{cyclotomic_poly, ratio_factors, CyclotomicPoly, QuotientSign};
pub use factorization::{factor, is_prime, sigma, FactorOptions, Factorization, PrimePower};
pub use practical::{is_practical, is_practical_oracle, practical_sieve, PracticalVerdict};
