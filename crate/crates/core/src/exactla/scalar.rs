use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator.
pub type Scalar = BigRational;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseScalarError {
    #[error("{0:?} is not a rational number")]
    Syntax(String),
    #[error("{0:?} has a zero denominator")]
    ZeroDenominator(String),
    #[error("{given:?} is not in canonical form (expected {canonical:?})")]
    NotCanonical { given: String, canonical: String },
}

/// Parses `"p"` or `"p/q"`. Only the canonical spelling is accepted: lowest
/// terms, positive denominator, no denominator of 1, no leading `+`.
pub fn parse_scalar(text: &str) -> Result<Scalar, ParseScalarError> {
    let syntax = || ParseScalarError::Syntax(text.to_owned());
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let parse_int = |s: &str| -> Result<BigInt, ParseScalarError> {
        let digits = s.strip_prefix('-').unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(syntax());
        }
        s.parse().map_err(|_| syntax())
    };
    let n = parse_int(num)?;
    let d = match den {
        Some(d) => parse_int(d)?,
        None => BigInt::from(1),
    };
    if d == BigInt::from(0) {
        return Err(ParseScalarError::ZeroDenominator(text.to_owned()));
    }
    let value = Scalar::new(n, d);
    let canonical = format_scalar(&value);
    if canonical != text {
        return Err(ParseScalarError::NotCanonical {
            given: text.to_owned(),
            canonical,
        });
    }
    Ok(value)
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_scalar(value: &Scalar) -> String {
    Canonical(value).to_string()
}

struct Canonical<'a>(&'a Scalar);

impl fmt::Display for Canonical<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}
