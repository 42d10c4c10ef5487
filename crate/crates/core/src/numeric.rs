//! Exact rational arithmetic helpers.
//!
//! Every quantity that feeds a comparison (measures, thresholds, sampling
//! probabilities) is an [`Rat`], a reduced fraction over `i128`. Logarithms
//! appear in the size and threshold formulas only as base-2 ceilings, which
//! are computed exactly by integer comparison; for power-of-two inputs (the
//! usual parameter grid) the ceiling equals the exact logarithm.

use alloc::string::{String, ToString};
use core::fmt;

use num_rational::Ratio;
use num_traits::{One, Signed};

/// Exact rational number used throughout the crate.
pub type Rat = Ratio<i128>;

/// Shorthand constructor; panics if `den == 0`.
pub fn rat(num: i128, den: i128) -> Rat {
    Ratio::new(num, den)
}

/// Errors from rational parsing and the log helpers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NumericError {
    /// Input string is not a fraction or plain decimal.
    Malformed(String),
    /// Denominator was zero.
    ZeroDenominator,
    /// Argument outside the domain of the operation.
    OutOfDomain(&'static str),
}

impl fmt::Display for NumericError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumericError::Malformed(s) => write!(f, "malformed rational literal {s:?}"),
            NumericError::ZeroDenominator => write!(f, "zero denominator"),
            NumericError::OutOfDomain(op) => write!(f, "argument out of domain for {op}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for NumericError {}

/// Smallest `k >= 0` with `2^k >= x`, for `x >= 1`.
///
/// This is the exact ceiling of `log2(x)` for rational `x`.
pub fn ceil_log2(x: &Rat) -> Result<u32, NumericError> {
    if *x < Rat::one() {
        return Err(NumericError::OutOfDomain("ceil_log2 (needs x >= 1)"));
    }
    let mut k = 0u32;
    let mut pow = Rat::one();
    let two = rat(2, 1);
    while pow < *x {
        pow *= &two;
        k += 1;
        if k > 300 {
            return Err(NumericError::OutOfDomain("ceil_log2 (argument too large)"));
        }
    }
    Ok(k)
}

/// Exact ceiling of a non-negative rational, as `i128`.
pub fn ceil_rat(x: &Rat) -> i128 {
    x.ceil().to_integer()
}

/// Exact floor of a rational, as `i128`.
pub fn floor_rat(x: &Rat) -> i128 {
    x.floor().to_integer()
}

/// Parses `"a/b"`, `"a"`, or a plain decimal such as `"0.125"` exactly.
pub fn parse_rational(text: &str) -> Result<Rat, NumericError> {
    let s = text.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: i128 = num
            .trim()
            .parse()
            .map_err(|_| NumericError::Malformed(s.to_string()))?;
        let d: i128 = den
            .trim()
            .parse()
            .map_err(|_| NumericError::Malformed(s.to_string()))?;
        if d == 0 {
            return Err(NumericError::ZeroDenominator);
        }
        return Ok(Ratio::new(n, d));
    }
    let (sign, rest) = match s.strip_prefix('-') {
        Some(r) => (-1i128, r),
        None => (1i128, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = match rest.split_once('.') {
        Some((i, f)) => (i, f),
        None => (rest, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(NumericError::Malformed(s.to_string()));
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
        || frac_part.len() > 27
    {
        return Err(NumericError::Malformed(s.to_string()));
    }
    let int_val: i128 = if int_part.is_empty() {
        0
    } else {
        int_part
            .parse()
            .map_err(|_| NumericError::Malformed(s.to_string()))?
    };
    let mut den: i128 = 1;
    let mut frac_val: i128 = 0;
    for c in frac_part.chars() {
        den *= 10;
        frac_val = frac_val * 10 + (c as i128 - '0' as i128);
    }
    Ok(Ratio::new(sign * (int_val * den + frac_val), den))
}

/// Renders a rational as `"num/den"` (or `"num"` when integral).
pub fn format_rational(x: &Rat) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        alloc::format!("{}/{}", x.numer(), x.denom())
    }
}

/// Serde helpers storing [`Rat`] fields as exact `"num/den"` strings.
pub mod rat_string {
    use super::{format_rational, parse_rational, Rat};
    use alloc::string::String;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    /// Serializes a rational as its exact string form.
    pub fn serialize<S: Serializer>(value: &Rat, ser: S) -> Result<S::Ok, S::Error> {
        format_rational(value).serialize(ser)
    }

    /// Parses a rational back from its string form.
    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(de)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter serializing vectors of rationals as exact strings.
pub mod rat_vec_string {
    use super::{format_rational, parse_rational, Rat};
    use alloc::string::String;
    use alloc::vec::Vec;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    /// Serializes each rational as its exact string form.
    pub fn serialize<S: Serializer>(values: &[Rat], ser: S) -> Result<S::Ok, S::Error> {
        values
            .iter()
            .map(format_rational)
            .collect::<Vec<_>>()
            .serialize(ser)
    }

    /// Parses rationals back from their string forms.
    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<Rat>, D::Error> {
        let strings = Vec::<String>::deserialize(de)?;
        strings
            .iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Checks that a rational is strictly between 0 and 1.
pub fn in_open_unit_interval(x: &Rat) -> bool {
    x.is_positive() && *x < Rat::one()
}

/// Returns `true` when `count >= bound` for an integer count and rational bound.
pub fn count_reaches(count: u64, bound: &Rat) -> bool {
    Rat::from_integer(count as i128) >= *bound
}

/// Median of a sorted slice of u64 values (lower median), `None` when empty.
pub fn median_u64(sorted: &[u64]) -> Option<u64> {
    if sorted.is_empty() {
        None
    } else {
        Some(sorted[(sorted.len() - 1) / 2])
    }
}

#[allow(unused_imports)]
use num_traits::ToPrimitive;
