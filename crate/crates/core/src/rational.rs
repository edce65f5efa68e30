//! Exact rational numbers and the number micro-grammar used by scenario files.
//!
//! Accepted forms: `[-]INT[/INT]`, a plain decimal such as `-0.49`, and
//! `[-]sqrt(INT)[/INT]`. Rational and decimal inputs are exact. Square roots
//! are replaced by a continued-fraction convergent whose error is below
//! `10^-digits`; the returned [`Approximation`] records that bound.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision exact fraction, always in lowest terms.
pub type Rational = BigRational;

/// Default number of decimal digits used when rationalizing square roots.
pub const DEFAULT_PRECISION_DIGITS: u32 = 30;

/// Note attached to a number that had to be approximated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Approximation {
    /// The text that was parsed.
    pub source: String,
    /// Strict upper bound on |approximation - true value|.
    pub error_bound: Rational,
}

impl std::fmt::Display for Approximation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} rationalized with error < {}",
            self.source,
            format_sci(&self.error_bound)
        )
    }
}

/// A parsed number together with an optional approximation note.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedNumber {
    pub value: Rational,
    pub approximation: Option<Approximation>,
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `10^-digits` as an exact rational.
pub fn tolerance(digits: u32) -> Rational {
    Rational::new(BigInt::one(), num_traits::pow(BigInt::from(10), digits as usize))
}

/// Parses the number grammar with the default square-root precision.
pub fn parse_number(text: &str) -> Result<ParsedNumber> {
    parse_number_with_precision(text, DEFAULT_PRECISION_DIGITS)
}

pub fn parse_number_with_precision(text: &str, digits: u32) -> Result<ParsedNumber> {
    let bad = |why: &str| Error::Parse(format!("malformed number {text:?}: {why}"));
    let trimmed = text.trim();
    // U+2212 is accepted as a minus sign.
    let (negative, body) = match trimmed.strip_prefix('-').or_else(|| trimmed.strip_prefix('\u{2212}')) {
        Some(rest) => (true, rest.trim_start()),
        None => (false, trimmed.strip_prefix('+').unwrap_or(trimmed)),
    };
    if body.is_empty() {
        return Err(bad("empty"));
    }

    let (value, approximation) = if let Some(rest) = body.strip_prefix("sqrt(") {
        let close = rest.find(')').ok_or_else(|| bad("missing ')'"))?;
        let radicand = parse_uint(&rest[..close]).ok_or_else(|| bad("bad radicand"))?;
        let tail = &rest[close + 1..];
        let divisor = if tail.is_empty() {
            BigInt::one()
        } else {
            let d = tail.strip_prefix('/').ok_or_else(|| bad("expected '/'"))?;
            parse_uint(d).ok_or_else(|| bad("bad divisor"))?
        };
        if divisor.is_zero() {
            return Err(bad("division by zero"));
        }
        let tol = tolerance(digits);
        let (root, exact) = sqrt_rational(&radicand, &(&tol * Rational::from_integer(divisor.clone())));
        let value = root / Rational::from_integer(divisor);
        let note = (!exact).then(|| Approximation {
            source: trimmed.to_string(),
            error_bound: tol,
        });
        (value, note)
    } else if let Some((n, d)) = body.split_once('/') {
        let n = parse_uint(n).ok_or_else(|| bad("bad numerator"))?;
        let d = parse_uint(d).ok_or_else(|| bad("bad denominator"))?;
        if d.is_zero() {
            return Err(bad("division by zero"));
        }
        (Rational::new(n, d), None)
    } else if let Some((whole, frac)) = body.split_once('.') {
        if frac.is_empty() && whole.is_empty() {
            return Err(bad("no digits"));
        }
        let whole = if whole.is_empty() {
            BigInt::zero()
        } else {
            parse_uint(whole).ok_or_else(|| bad("bad integer part"))?
        };
        let frac_val = if frac.is_empty() {
            BigInt::zero()
        } else {
            parse_uint(frac).ok_or_else(|| bad("bad fractional part"))?
        };
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        (Rational::new(whole * &scale + frac_val, scale), None)
    } else {
        let n = parse_uint(body).ok_or_else(|| bad("not a number"))?;
        (Rational::from_integer(n), None)
    };

    Ok(ParsedNumber {
        value: if negative { -value } else { value },
        approximation,
    })
}

fn parse_uint(s: &str) -> Option<BigInt> {
    let s = s.trim();
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Best rational approximation of `sqrt(k)` from its continued fraction,
/// stopping once the error is provably below `tol`. Returns `(value, exact)`.
pub fn sqrt_rational(k: &BigInt, tol: &Rational) -> (Rational, bool) {
    let a0 = k.sqrt();
    if &(&a0 * &a0) == k {
        return (Rational::from_integer(a0), true);
    }
    // Periodic expansion: m' = d*a - m, d' = (k - m'^2)/d, a' = (a0 + m')/d'.
    let (mut m, mut d, mut a) = (BigInt::zero(), BigInt::one(), a0.clone());
    let (mut h_prev, mut h) = (BigInt::one(), a0.clone());
    let (mut q_prev, mut q) = (BigInt::zero(), BigInt::one());
    loop {
        m = &d * &a - &m;
        d = (k - &m * &m) / &d;
        a = (&a0 + &m) / &d;
        let h_next = &a * &h + &h_prev;
        let q_next = &a * &q + &q_prev;
        // |sqrt(k) - h/q| < 1/(q * q_next)
        let bound = Rational::new(BigInt::one(), &q * &q_next);
        if &bound < tol {
            return (Rational::new(h, q), false);
        }
        h_prev = std::mem::replace(&mut h, h_next);
        q_prev = std::mem::replace(&mut q, q_next);
    }
}

/// `p/q` or `p` text, the canonical serialization used in every file format.
pub fn to_text(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back to scaled integer division for huge operands.
        let scale = BigInt::from(10).pow(40u32);
        let scaled = (r.numer() * &scale).div_floor(r.denom());
        scaled.to_f64().unwrap_or(f64::NAN) / 1e40
    })
}

/// Decimal rendering rounded to `digits` places after the point.
pub fn to_decimal(r: &Rational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = (r.abs() * Rational::from_integer(scale.clone())).round().to_integer();
    let negative = r.is_negative() && !scaled.is_zero();
    let (whole, frac) = scaled.div_rem(&scale);
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    out.push_str(&whole.to_string());
    if digits > 0 {
        out.push('.');
        out.push_str(&format!("{:0>width$}", frac.to_string(), width = digits));
    }
    out
}

/// Compact rendering of small positive bounds such as `1e-30`.
fn format_sci(r: &Rational) -> String {
    if r.numer().is_one() {
        let d = r.denom().to_string();
        if d.starts_with('1') && d[1..].bytes().all(|b| b == b'0') {
            return format!("1e-{}", d.len() - 1);
        }
    }
    to_text(r)
}

/// Least common multiple of denominators divided by gcd of numerators:
/// the positive factor that turns `values` into coprime integers.
pub fn integer_scale(values: &[Rational]) -> Rational {
    let mut lcm = BigInt::one();
    let mut gcd = BigInt::zero();
    for v in values.iter().filter(|v| !v.is_zero()) {
        lcm = lcm.lcm(v.denom());
    }
    for v in values.iter().filter(|v| !v.is_zero()) {
        let scaled = v.numer() * (&lcm / v.denom());
        gcd = gcd.gcd(&scaled);
    }
    if gcd.is_zero() {
        return Rational::one();
    }
    Rational::new(lcm, gcd.abs())
}
