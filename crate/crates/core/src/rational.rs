//! Exact rational arithmetic used throughout the model.
//!
//! Positions, speeds and times are arbitrary-precision rationals, always
//! kept in reduced form. No floating point enters the model anywhere;
//! floats appear only at the rendering boundary.

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

/// An arbitrary-precision rational, always reduced.
pub type Rational = BigRational;

/// Shorthand for an integer-valued rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `p/q`. Panics if `q == 0`.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalParseError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid integer `{0}`")]
    BadInteger(String),
    #[error("denominator must be a positive integer, got `{0}`")]
    BadDenominator(String),
}

/// Parses `[-]p` or `[-]p/q` with `q > 0`.
///
/// The sign may only precede the numerator; the result is reduced.
pub fn parse_rational(text: &str) -> Result<Rational, RationalParseError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(RationalParseError::Empty);
    }
    let (numer_text, denom_text) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let numer: BigInt = numer_text
        .parse()
        .map_err(|_| RationalParseError::BadInteger(numer_text.to_string()))?;
    let denom: BigInt = match denom_text {
        None => BigInt::from(1),
        Some(d) => {
            let q: BigInt = d
                .parse()
                .map_err(|_| RationalParseError::BadDenominator(d.to_string()))?;
            if q <= BigInt::from(0) || d.starts_with('+') {
                return Err(RationalParseError::BadDenominator(d.to_string()));
            }
            q
        }
    };
    Ok(Rational::new(numer, denom))
}

/// Formats a rational canonically: `p` when integral, `p/q` otherwise,
/// with the sign on the numerator and the fraction reduced.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
