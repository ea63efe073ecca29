//! Complex literals of the form `a`, `a+bi`, `a-bi`, `bi`.

use std::fmt;

use hlzeta::Complex64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseComplexError(String);

impl fmt::Display for ParseComplexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid complex literal {:?}", self.0)
    }
}

impl std::error::Error for ParseComplexError {}

pub fn parse_complex(text: &str) -> Result<Complex64, ParseComplexError> {
    let err = || ParseComplexError(text.to_string());
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(err());
    }
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return s.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| err());
    };
    // the imaginary part starts at the last sign that is not an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (body[..i].parse::<f64>().map_err(|_| err())?, &body[i..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        digits => digits.parse::<f64>().map_err(|_| err())?,
    };
    Ok(Complex64::new(re, im))
}

/// Shortest round-trip rendering, readable by [`parse_complex`].
pub fn format_complex(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else if c.im < 0.0 {
        format!("{}-{}i", c.re, -c.im)
    } else {
        format!("{}+{}i", c.re, c.im)
    }
}
