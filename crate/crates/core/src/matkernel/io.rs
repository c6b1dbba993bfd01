//! Plain-text matrix format: first line `n`, then `n` rows of `n` whitespace-separated
//! entries written as `re`, `re+imi`, `re-imi` or `imi`.

use std::fmt::Write as _;

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));

    let (dim_line, first) = lines.next().ok_or(Error::Parse {
        line: 1,
        column: 1,
        message: "empty input; expected the dimension n".into(),
    })?;
    let n: usize = first.trim().parse().map_err(|_| Error::Parse {
        line: dim_line,
        column: first.len() - first.trim_start().len() + 1,
        message: format!("expected a positive integer dimension, found `{}`", first.trim()),
    })?;
    if n == 0 {
        return Err(Error::Parse {
            line: dim_line,
            column: 1,
            message: "dimension must be positive".into(),
        });
    }

    let mut entries = Vec::with_capacity(n * n);
    let mut last_line = dim_line;
    for row in 0..n {
        let (line_no, line) = lines.next().ok_or(Error::Parse {
            line: last_line + 1,
            column: 1,
            message: format!("expected {n} rows, found {row}"),
        })?;
        last_line = line_no;
        let mut count = 0;
        for (column, token) in tokens_with_columns(line) {
            if count == n {
                return Err(Error::Parse {
                    line: line_no,
                    column,
                    message: format!("row has more than {n} entries"),
                });
            }
            let z = parse_complex(token).ok_or_else(|| Error::Parse {
                line: line_no,
                column,
                message: format!("cannot parse complex entry `{token}`"),
            })?;
            entries.push(z);
            count += 1;
        }
        if count != n {
            return Err(Error::Parse {
                line: line_no,
                column: line.len() + 1,
                message: format!("row has {count} entries, expected {n}"),
            });
        }
    }
    if let Some((line_no, _)) = lines.next() {
        return Err(Error::Parse {
            line: line_no,
            column: 1,
            message: format!("unexpected content after {n} rows"),
        });
    }
    ComplexMatrix::from_row_major(n, entries)
}

fn tokens_with_columns(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out.into_iter()
}

/// Parses `re`, `im i`, `re+imi`, `re-imi`; exponents like `1e-3` are handled.
pub fn parse_complex(token: &str) -> Option<Complex64> {
    let t = token.trim();
    if t.is_empty() {
        return None;
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().ok().map(|re| Complex64::new(re, 0.0));
    };
    // split point: last sign that is not leading and not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().ok()?;
            let im = parse_imag(&body[k..])?;
            Some(Complex64::new(re, im))
        }
        None => parse_imag(body).map(|im| Complex64::new(0.0, im)),
    }
}

fn parse_imag(s: &str) -> Option<f64> {
    match s {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        _ => s.parse().ok(),
    }
}

/// 17 significant digits, round-trip exact for f64.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn format_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", format_real(z.re), sign, format_real(z.im.abs()))
}

pub fn write_matrix(m: &ComplexMatrix) -> String {
    let n = m.dim();
    let mut out = String::new();
    let _ = writeln!(out, "{n}");
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| format_complex(m[(i, j)])).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}
