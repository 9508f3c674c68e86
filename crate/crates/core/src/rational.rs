//! Exact rational arithmetic used for densities and search parameters.

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number. Densities have denominators bounded by the vertex
/// count and binary-search probes are dyadic, so 128-bit parts are ample.
pub type Rational = Ratio<i128>;

pub fn ratio(num: i128, den: i128) -> Rational {
    Rational::new(num, den)
}

pub fn int(value: i128) -> Rational {
    Rational::from_integer(value)
}

pub fn to_f64(value: &Rational) -> f64 {
    value.numer().to_f64().unwrap_or(f64::NAN) / value.denom().to_f64().unwrap_or(f64::NAN)
}

/// Renders with two decimals, the precision used in report tables.
pub fn fmt2(value: &Rational) -> String {
    format!("{:.2}", to_f64(value))
}

/// Parses a non-negative exact rational from `"3"`, `"0.69"`, `"3/4"` or
/// `"1e-3"`-style text.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Input(format!("cannot parse {text:?} as a non-negative rational"));
    if text.is_empty() || text.len() > 64 {
        return Err(bad());
    }
    if let Some((num, den)) = text.split_once('/') {
        let num: i128 = num.trim().parse().map_err(|_| bad())?;
        let den: i128 = den.trim().parse().map_err(|_| bad())?;
        if den <= 0 || num < 0 {
            return Err(bad());
        }
        return Ok(ratio(num, den));
    }
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = text[pos + 1..].parse().map_err(|_| bad())?;
            (&text[..pos], exp)
        }
        None => (text, 0),
    };
    let (whole, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.bytes().all(|b| b.is_ascii_digit()) || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let digits = digits.trim_start_matches('0');
    if digits.len() > 30 {
        return Err(bad());
    }
    let num: i128 = if digits.is_empty() { 0 } else { digits.parse().map_err(|_| bad())? };
    let scale = exponent - frac.len() as i32;
    if !(-30..=30).contains(&scale) {
        if num.is_zero() {
            return Ok(Rational::zero());
        }
        return Err(bad());
    }
    let pow = 10i128.pow(scale.unsigned_abs());
    if scale >= 0 {
        num.checked_mul(pow).map(int).ok_or_else(bad)
    } else {
        Ok(ratio(num, pow))
    }
}

/// Splits `value` into `(numerator, denominator)` with a positive denominator.
pub fn parts(value: &Rational) -> (i128, i128) {
    (*value.numer(), *value.denom())
}

/// A point of the grid `{p / grid}` strictly inside `(lo, hi)` next to the
/// midpoint. Falls back to the exact midpoint when the grid is too coarse.
pub fn snapped_midpoint(lo: &Rational, hi: &Rational, grid: i128) -> Rational {
    let mid = (lo + hi) / int(2);
    let scaled = (mid * int(grid)).floor();
    let candidate = scaled / int(grid);
    if &candidate > lo && &candidate < hi {
        return candidate;
    }
    let candidate = (scaled + int(1)) / int(grid);
    if &candidate > lo && &candidate < hi {
        return candidate;
    }
    mid
}
