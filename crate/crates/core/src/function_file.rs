//! Plain-text function files.
//!
//! ```text
//! # f(z) = z̄ z
//! q 2
//! 1 1 1 0
//! ```
//!
//! The first non-comment line is `q <int>`; each further line is one
//! monomial `k j re im` meaning `(re + i im) z̄^k z^j`. Lines starting with
//! `#` and blank lines are skipped. A repeated `(k, j)` is an error.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::polyfun::PolyFunction;
use crate::scalar::Scalar;

pub fn parse_function<T: Scalar>(text: &str) -> Result<PolyFunction<T>> {
    let mut q: Option<usize> = None;
    let mut entries: BTreeMap<(usize, usize), Complex<T>> = BTreeMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();

        let Some(q) = q else {
            if fields.len() != 2 || fields[0] != "q" {
                return Err(parse_err(line, "expected header `q <int>`"));
            }
            let value: usize = fields[1]
                .parse()
                .map_err(|_| parse_err(line, &format!("invalid q `{}`", fields[1])))?;
            if value == 0 {
                return Err(parse_err(line, "q must be at least 1"));
            }
            q = Some(value);
            continue;
        };

        if fields.len() != 4 {
            return Err(parse_err(
                line,
                &format!("expected `k j re im`, found {} fields", fields.len()),
            ));
        }
        let k: usize = parse_field(fields[0], "k", line)?;
        let j: usize = parse_field(fields[1], "j", line)?;
        let re: f64 = parse_field(fields[2], "re", line)?;
        let im: f64 = parse_field(fields[3], "im", line)?;
        if !re.is_finite() || !im.is_finite() {
            return Err(parse_err(line, "coefficient is not finite"));
        }
        if k >= q {
            return Err(parse_err(line, &format!("k = {k} must be below q = {q}")));
        }
        let coeff = Complex::new(
            T::from_f64(re).ok_or_else(|| parse_err(line, "re out of range"))?,
            T::from_f64(im).ok_or_else(|| parse_err(line, "im out of range"))?,
        );
        if entries.insert((k, j), coeff).is_some() {
            return Err(Error::DuplicateMonomial { line, k, j });
        }
    }

    let q = q.ok_or_else(|| parse_err(0, "missing header `q <int>`"))?;
    PolyFunction::from_monomials(entries, q)
}

/// Renders `f` in the function-file format; nonzero monomials only, with
/// 17 significant digits so `parse_function` restores it exactly.
pub fn write_function<T: Scalar>(f: &PolyFunction<T>) -> String {
    let mut out = format!("q {}\n", f.q());
    for (k, j, c) in f.monomials() {
        let _ = writeln!(out, "{k} {j} {:.16e} {:.16e}", c.re, c.im);
    }
    out
}

fn parse_field<V: std::str::FromStr>(s: &str, name: &str, line: usize) -> Result<V> {
    s.parse()
        .map_err(|_| parse_err(line, &format!("field {name} is not numeric: `{s}`")))
}

fn parse_err(line: usize, message: &str) -> Error {
    Error::Parse {
        line,
        message: message.to_string(),
    }
}
