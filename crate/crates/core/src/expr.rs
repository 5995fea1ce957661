//! Integer expressions for certificate files and command-line arguments.
//!
//! ```text
//! term := int | int '^' int | term '*' term
//! sum  := term (('+' | '-') term)*
//! ```
//!
//! Certificate files accept only `term`; the CLI accepts `sum`. Whitespace
//! between tokens is ignored.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed};
use thiserror::Error;

/// Refuse powers whose result would exceed this many bits.
pub const MAX_RESULT_BITS: u64 = 1 << 26;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExprError {
    #[error("unexpected {found:?} at offset {offset}")]
    Unexpected { found: String, offset: usize },
    #[error("empty expression")]
    Empty,
    #[error("power {0} is too large")]
    TooLarge(String),
    #[error("expression evaluates to a negative number")]
    Negative,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Int(BigUint),
    Caret,
    Star,
    Plus,
    Minus,
}

fn tokenize(src: &str) -> Result<Vec<(usize, Token)>, ExprError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' => i += 1,
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let v = src[start..i].parse().expect("digits");
                out.push((start, Token::Int(v)));
            }
            b'^' => {
                out.push((i, Token::Caret));
                i += 1;
            }
            b'*' => {
                out.push((i, Token::Star));
                i += 1;
            }
            b'+' => {
                out.push((i, Token::Plus));
                i += 1;
            }
            b'-' => {
                out.push((i, Token::Minus));
                i += 1;
            }
            _ => {
                let found = src[i..].chars().next().unwrap().to_string();
                return Err(ExprError::Unexpected { found, offset: i });
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn unexpected(&self) -> ExprError {
        match self.tokens.get(self.pos) {
            Some((offset, t)) => ExprError::Unexpected {
                found: format!("{t:?}"),
                offset: *offset,
            },
            None => ExprError::Unexpected {
                found: "end of input".into(),
                offset: self.end,
            },
        }
    }

    fn int(&mut self) -> Result<BigUint, ExprError> {
        match self.tokens.get(self.pos) {
            Some((_, Token::Int(v))) => {
                let v = v.clone();
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.unexpected()),
        }
    }

    fn factor(&mut self) -> Result<BigUint, ExprError> {
        let base = self.int()?;
        if self.peek() != Some(&Token::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let exp = self.int()?;
        power(base, &exp)
    }

    fn term(&mut self) -> Result<BigUint, ExprError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Token::Star) {
            self.pos += 1;
            acc *= self.factor()?;
        }
        Ok(acc)
    }

    fn sum(&mut self) -> Result<BigInt, ExprError> {
        let mut acc = BigInt::from(self.term()?);
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    acc += BigInt::from(self.term()?);
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    acc -= BigInt::from(self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn finish(&self) -> Result<(), ExprError> {
        if self.pos == self.tokens.len() {
            Ok(())
        } else {
            Err(self.unexpected())
        }
    }
}

fn power(base: BigUint, exp: &BigUint) -> Result<BigUint, ExprError> {
    let too_large = || ExprError::TooLarge(format!("{base}^{exp}"));
    if base <= BigUint::one() {
        return Ok(if exp == &BigUint::default() {
            BigUint::one()
        } else {
            base.clone()
        });
    }
    let e: u64 = exp.try_into().map_err(|_| too_large())?;
    if e.saturating_mul(base.bits() - 1) > MAX_RESULT_BITS {
        return Err(too_large());
    }
    Ok(num_traits::pow(base.clone(), e as usize))
}

fn parser(src: &str) -> Result<Parser, ExprError> {
    let tokens = tokenize(src)?;
    if tokens.is_empty() {
        return Err(ExprError::Empty);
    }
    Ok(Parser {
        tokens,
        pos: 0,
        end: src.len(),
    })
}

/// Parse a product of powers, e.g. `2*3^35`.
pub fn parse_term(src: &str) -> Result<BigUint, ExprError> {
    let mut p = parser(src)?;
    let v = p.term()?;
    p.finish()?;
    Ok(v)
}

/// Parse a sum or difference of terms, e.g. `3^71-3`.
pub fn parse_natural(src: &str) -> Result<BigUint, ExprError> {
    let mut p = parser(src)?;
    let v = p.sum()?;
    p.finish()?;
    if v.is_negative() {
        return Err(ExprError::Negative);
    }
    Ok(v.to_biguint().unwrap_or_default())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(s: &str) -> BigUint {
        s.parse().unwrap()
    }

    #[test]
    fn terms() {
        assert_eq!(parse_term("66").unwrap(), big("66"));
        assert_eq!(parse_term("2^10").unwrap(), big("1024"));
        assert_eq!(parse_term("4 * 3^2 * 5").unwrap(), big("180"));
    }

    #[test]
    fn term_grammar_has_no_sums() {
        assert!(matches!(
            parse_term("2^316 + 2"),
            Err(ExprError::Unexpected { offset: 6, .. })
        ));
    }

    #[test]
    fn sums() {
        assert_eq!(
            parse_natural("2^36+2").unwrap(),
            (BigUint::one() << 36u32) + 2u32
        );
        assert_eq!(
            parse_natural("3^71 - 3").unwrap(),
            num_traits::pow(BigUint::from(3u32), 71) - 3u32
        );
        assert_eq!(parse_natural("10 - 4 - 6").unwrap(), big("0"));
        assert_eq!(parse_natural("1").unwrap(), big("1"));
    }

    #[test]
    fn errors() {
        assert_eq!(parse_natural(""), Err(ExprError::Empty));
        assert_eq!(parse_natural("2-3"), Err(ExprError::Negative));
        assert!(matches!(
            parse_natural("2^"),
            Err(ExprError::Unexpected { .. })
        ));
        assert!(matches!(
            parse_natural("2^^3"),
            Err(ExprError::Unexpected { .. })
        ));
        assert!(matches!(
            parse_natural("x"),
            Err(ExprError::Unexpected { .. })
        ));
        assert!(matches!(
            parse_natural("2^3^4"),
            Err(ExprError::Unexpected { .. })
        ));
        assert!(matches!(
            parse_natural("2^99999999999"),
            Err(ExprError::TooLarge(_))
        ));
    }

    #[test]
    fn trivial_bases() {
        assert_eq!(parse_term("1^99999999999").unwrap(), big("1"));
        assert_eq!(parse_term("0^0").unwrap(), big("1"));
        assert_eq!(parse_term("0^5").unwrap(), big("0"));
    }
}
