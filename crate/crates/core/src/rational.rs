//! Exact rational helpers on top of `num_rational::BigRational`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// `base^exp` for a non-negative integer exponent. `0^0 = 1`.
pub fn pow(base: &Rational, exp: u32) -> Rational {
    Rational::new_raw(base.numer().pow(exp), base.denom().pow(exp))
}

/// `base^exp` for a signed exponent; `base` must be non-zero when `exp < 0`.
pub fn powi(base: &Rational, exp: i64) -> Rational {
    let e = u32::try_from(exp.unsigned_abs()).expect("exponent out of range");
    let p = pow(base, e);
    if exp < 0 {
        p.recip()
    } else {
        p
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational {0:?}: expected `p/q` or an integer")]
pub struct ParseRationalError(pub String);

/// Parses `p/q`, `p`, or `-p/q`. The result is reduced.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(text.to_string());
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = den.parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

/// Always renders `p/q`, including `/1` for integers.
pub fn format_rational(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Wrapper that displays a rational in `p/q` form.
pub struct Frac<'a>(pub &'a Rational);

impl fmt::Display for Frac<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

/// A float with an explicit binary exponent: `mantissa * 2^exp2`.
///
/// Values far outside the `f64` range stay representable, and the relative
/// rounding error of the conversion from an exact rational is below `2^-52`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledFloat {
    pub mantissa: f64,
    pub exp2: i64,
}

impl ScaledFloat {
    pub const ZERO: ScaledFloat = ScaledFloat {
        mantissa: 0.0,
        exp2: 0,
    };

    /// Relative error bound of [`ScaledFloat::from_rational`].
    pub const REL_ERROR: f64 = f64::EPSILON;

    pub fn from_rational(value: &Rational) -> ScaledFloat {
        if value.is_zero() {
            return ScaledFloat::ZERO;
        }
        let negative = value.is_negative();
        let numer = value.numer().abs();
        let denom = value.denom().clone();
        // Scale so that the integer quotient carries 64..=65 significant bits.
        let shift = numer.bits() as i64 - denom.bits() as i64 - 64;
        let quotient = if shift >= 0 {
            numer.div_floor(&(denom << shift as usize))
        } else {
            (numer << (-shift) as usize).div_floor(&denom)
        };
        let q = quotient.to_f64().expect("quotient fits in f64");
        let mut out = ScaledFloat {
            mantissa: if negative { -q } else { q },
            exp2: shift,
        };
        out.normalize();
        out
    }

    fn normalize(&mut self) {
        if self.mantissa == 0.0 {
            self.exp2 = 0;
            return;
        }
        let e = self.mantissa.abs().log2().floor() as i64 + 1;
        self.mantissa /= 2f64.powi(e as i32);
        self.exp2 += e;
        // log2 rounding can leave the mantissa just outside [0.5, 1)
        while self.mantissa.abs() >= 1.0 {
            self.mantissa /= 2.0;
            self.exp2 += 1;
        }
        while self.mantissa.abs() < 0.5 {
            self.mantissa *= 2.0;
            self.exp2 -= 1;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == 0.0
    }

    /// Native value; overflows to ±inf or underflows to 0 outside the f64 range.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let e = self.exp2.clamp(-2000, 2000) as i32;
        // split the exponent so intermediate powers do not overflow early
        let half = e / 2;
        self.mantissa * 2f64.powi(half) * 2f64.powi(e - half)
    }

    /// Natural log of the absolute value.
    pub fn ln_abs(&self) -> f64 {
        self.mantissa.abs().ln() + self.exp2 as f64 * std::f64::consts::LN_2
    }

    pub fn signum(&self) -> f64 {
        self.mantissa.signum()
    }
}
