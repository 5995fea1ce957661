//! Factor-hints files: one decimal integer per line, `#` starts a comment line.

use std::path::Path;

use num_bigint::BigUint;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HintsError {
    #[error("line {line}: not a decimal integer: {text:?}")]
    Parse { line: usize, text: String },
    #[error("reading hints file: {0}")]
    Io(#[from] std::io::Error),
}

pub fn parse_hints(text: &str) -> Result<Vec<BigUint>, HintsError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let value = line.parse::<BigUint>().map_err(|_| HintsError::Parse {
            line: i + 1,
            text: line.to_string(),
        })?;
        out.push(value);
    }
    Ok(out)
}

pub fn read_hints_file(path: impl AsRef<Path>) -> Result<Vec<BigUint>, HintsError> {
    parse_hints(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_and_blanks_skipped() {
        let hints = parse_hints("# factors\n\n 1765891 \n#x\n77158673929\n").unwrap();
        assert_eq!(
            hints,
            vec![BigUint::from(1765891u32), BigUint::from(77158673929u64)]
        );
    }

    #[test]
    fn bad_line_reported() {
        match parse_hints("12\n2^5\n") {
            Err(HintsError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }
}
