//! Small helpers shared by the line-oriented text formats.

use crate::{Error, Result};

pub(crate) fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Non-blank lines paired with their 1-based line numbers.
pub(crate) fn content_lines(input: &str) -> impl Iterator<Item = (usize, &str)> {
    input
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub(crate) fn parse_usize_fields(line_no: usize, line: &str, count: usize) -> Result<Vec<usize>> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != count {
        return Err(parse_err(
            line_no,
            format!("expected {count} integers, found {}", fields.len()),
        ));
    }
    fields
        .iter()
        .map(|f| {
            f.parse::<usize>()
                .map_err(|_| parse_err(line_no, format!("invalid integer {f:?}")))
        })
        .collect()
}

pub(crate) fn parse_bits(line_no: usize, line: &str, expected: usize) -> Result<Vec<bool>> {
    let bits: Vec<bool> = line
        .chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(parse_err(line_no, format!("invalid bit character {other:?}"))),
        })
        .collect::<Result<_>>()?;
    if bits.len() != expected {
        return Err(parse_err(
            line_no,
            format!("expected {expected} bits, found {}", bits.len()),
        ));
    }
    Ok(bits)
}
