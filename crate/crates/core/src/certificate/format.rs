//! Certificate text format.
//!
//! ```text
//! base <decimal>
//! target <term>
//! mul <term>
//! mul <term>
//! ...
//! ```
//!
//! `term` is the product-of-powers grammar from [`crate::expr`]. Blank lines
//! and lines starting with `#` are ignored.

use num_bigint::BigUint;
use thiserror::Error;

use super::{CertificateError, PracticalCertificate};
use crate::expr::{parse_term, ExprError};
use crate::factorization::{FactorError, FactorOptions};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: expected `{expected} ...`")]
    Keyword { line: usize, expected: &'static str },
    #[error("line {line}: {source}")]
    Expr { line: usize, source: ExprError },
    #[error("line {line}: base must be a plain decimal")]
    BaseNotDecimal { line: usize },
    #[error("missing `{0}` line")]
    Missing(&'static str),
    #[error("factoring the base: {0}")]
    Factor(FactorError),
    #[error(transparent)]
    Certificate(CertificateError),
}

/// A certificate as written on disk; the base is not yet factored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateFile {
    pub base: BigUint,
    pub target: BigUint,
    pub chain: Vec<BigUint>,
}

impl CertificateFile {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (line, rest) = keyword(lines.next(), "base")?;
        let base = rest
            .parse::<BigUint>()
            .map_err(|_| FormatError::BaseNotDecimal { line })?;

        let (line, rest) = keyword(lines.next(), "target")?;
        let target = parse_term(rest).map_err(|source| FormatError::Expr { line, source })?;

        let mut chain = Vec::new();
        for entry in lines {
            let (line, rest) = keyword(Some(entry), "mul")?;
            chain.push(parse_term(rest).map_err(|source| FormatError::Expr { line, source })?);
        }
        Ok(CertificateFile {
            base,
            target,
            chain,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("base {}\ntarget {}\n", self.base, self.target);
        for m in &self.chain {
            out.push_str(&format!("mul {m}\n"));
        }
        out
    }

    /// Factor the base and build the certificate (bounds are not checked).
    pub fn into_certificate(
        self,
        opts: &FactorOptions,
    ) -> Result<PracticalCertificate, FormatError> {
        let base = opts.factor(&self.base).map_err(FormatError::Factor)?;
        PracticalCertificate::new(base, self.chain, self.target).map_err(FormatError::Certificate)
    }
}

fn keyword<'a>(
    entry: Option<(usize, &'a str)>,
    expected: &'static str,
) -> Result<(usize, &'a str), FormatError> {
    let (line, text) = entry.ok_or(FormatError::Missing(expected))?;
    match text.split_once(char::is_whitespace) {
        Some((kw, rest)) if kw == expected => Ok((line, rest.trim())),
        _ => Err(FormatError::Keyword { line, expected }),
    }
}
