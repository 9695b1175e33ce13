//! Text encodings shared by the CSV writers and the matrix/polynomial readers.
//!
//! Reals are written with 17 significant digits (`{:.16e}`), which is enough
//! for `f64` to survive a write/parse cycle bit-for-bit. Complex values are
//! written as `re+imi` (or `re-imi`).
//!
//! Accepted complex grammar on input:
//!
//! ```text
//! complex := real | real sign real "i"
//! sign    := "+" | "-"
//! real    := anything `f64::from_str` accepts
//! ```

use num_complex::Complex64;

/// Formats a real with 17 significant digits.
pub fn format_real(x: f64) -> String {
    format!("{:.16e}", x)
}

/// Formats a complex value as `re+imi`.
pub fn format_complex(z: Complex64) -> String {
    format!("{:.16e}{:+.16e}i", z.re, z.im)
}

/// Parses a value in the grammar documented at the module level.
pub fn parse_complex(token: &str) -> Option<Complex64> {
    let s = token.trim();
    if s.is_empty() {
        return None;
    }
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().ok().map(|re| Complex64::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&p| (bytes[p] == b'+' || bytes[p] == b'-') && !matches!(bytes[p - 1], b'e' | b'E'))?;
    let re = body[..split].parse::<f64>().ok()?;
    let im = body[split..].parse::<f64>().ok()?;
    Some(Complex64::new(re, im))
}

/// Parses a whitespace- or comma-separated list of complex values.
pub fn parse_complex_list(text: &str) -> Option<Vec<Complex64>> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(parse_complex)
        .collect()
}
