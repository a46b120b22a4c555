//! Numeric backends for argument strengths.
//!
//! Everything in this crate is generic over [`Scalar`]. Two families ship:
//! IEEE floats (`f32`, `f64`) and exact big rationals ([`Rational`]). The
//! exact backend matters whenever a final strength lands exactly on a
//! threshold: `0.5 - 0.5 * 0.8` is `0.09999999999999998` in `f64` but
//! exactly `1/10` as a rational.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

/// Exact rational number in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub trait Scalar:
    Num + Signed + FromPrimitive + Clone + PartialOrd + Debug + Display + Send + Sync + 'static
{
    /// Parses a decimal literal (`0.56`, `1e-3`) or a fraction (`14/25`).
    ///
    /// Exact backends must not round.
    fn from_decimal_str(text: &str) -> Option<Self>;

    fn to_f64(&self) -> f64;

    /// Shortest decimal text that parses back to the same value, or `None`
    /// when the value has no finite decimal expansion.
    fn to_decimal_string(&self) -> Option<String>;

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }

    /// True for values in the closed unit interval. NaN is rejected.
    fn in_unit_interval(&self) -> bool {
        *self >= Self::zero() && *self <= Self::one()
    }
}

fn split_fraction(text: &str) -> Option<(&str, &str)> {
    let (num, den) = text.split_once('/')?;
    Some((num.trim(), den.trim()))
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn from_decimal_str(text: &str) -> Option<Self> {
                let text = text.trim();
                let value = match split_fraction(text) {
                    Some((num, den)) => num.parse::<$t>().ok()? / den.parse::<$t>().ok()?,
                    None => text.parse::<$t>().ok()?,
                };
                value.is_finite().then_some(value)
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn to_decimal_string(&self) -> Option<String> {
                self.is_finite().then(|| format!("{}", self))
            }
        }
    };
}

float_scalar!(f32);
float_scalar!(f64);

impl Scalar for Rational {
    fn from_decimal_str(text: &str) -> Option<Self> {
        let text = text.trim();
        if let Some((num, den)) = split_fraction(text) {
            let num: BigInt = num.parse().ok()?;
            let den: BigInt = den.parse().ok()?;
            if den.is_zero() {
                return None;
            }
            return Some(BigRational::new(num, den));
        }
        parse_exact_decimal(text)
    }

    fn to_f64(&self) -> f64 {
        if let Some(v) = ToPrimitive::to_f64(self) {
            return v;
        }
        // Huge numerators/denominators: scale both down to keep the quotient.
        let shift = self.denom().bits().max(self.numer().bits()).saturating_sub(1000);
        let num = self.numer() >> shift;
        let den = self.denom() >> shift;
        num.to_f64().unwrap_or(f64::NAN) / den.to_f64().unwrap_or(f64::NAN)
    }

    fn to_decimal_string(&self) -> Option<String> {
        let (twos, fives) = {
            let mut den = self.denom().clone();
            let two = BigInt::from(2);
            let five = BigInt::from(5);
            let (mut t, mut f) = (0u32, 0u32);
            while den.is_even() {
                den /= &two;
                t += 1;
            }
            while (&den % &five).is_zero() {
                den /= &five;
                f += 1;
            }
            if !den.is_one() {
                return None;
            }
            (t, f)
        };
        let digits = twos.max(fives);
        let scaled = (self * BigRational::from_integer(BigInt::from(10).pow(digits))).to_integer();
        let negative = scaled.is_negative();
        let mut body = scaled.abs().to_string();
        if digits > 0 {
            let digits = digits as usize;
            if body.len() <= digits {
                body = format!("{}{}", "0".repeat(digits + 1 - body.len()), body);
            }
            let point = body.len() - digits;
            body.insert(point, '.');
        }
        Some(if negative { format!("-{body}") } else { body })
    }
}

fn parse_exact_decimal(text: &str) -> Option<Rational> {
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(digits.parse::<BigInt>().ok()?);
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    if scale >= 0 {
        value *= BigRational::from_integer(ten.pow(scale as u32));
    } else {
        value /= BigRational::from_integer(ten.pow(scale.unsigned_abs()));
    }
    Some(if negative { -value } else { value })
}

/// Renders `value` with at most `digits` significant digits, no exponent and
/// no trailing zeros. Used for CSV and human-readable output.
pub fn format_significant(value: f64, digits: usize) -> String {
    if value == 0.0 || !value.is_finite() {
        return if value.is_finite() { "0".into() } else { value.to_string() };
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, value);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    let negative = mantissa.starts_with('-');
    let raw: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let mut out = if exp >= 0 {
        let int_len = exp as usize + 1;
        if raw.len() <= int_len {
            format!("{}{}", raw, "0".repeat(int_len - raw.len()))
        } else {
            format!("{}.{}", &raw[..int_len], &raw[int_len..])
        }
    } else {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), raw)
    };
    if out.contains('.') {
        out = out.trim_end_matches('0').trim_end_matches('.').to_string();
    }
    if negative {
        out.insert(0, '-');
    }
    out
}
