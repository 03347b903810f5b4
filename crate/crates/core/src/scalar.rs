//! Scalar abstraction shared by the exact (rational) and floating paths.
//!
//! Every linear-algebra routine in this crate is written once against
//! [`Scalar`]. The exact implementation answers zero tests exactly; the
//! floating implementations compare against a caller-supplied tolerance.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

/// Outcome of deciding whether a quantity vanishes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroTest {
    Zero,
    NonZero,
    /// Too close to the tolerance band to call either way.
    Ambiguous,
}

/// Width of the ambiguity band above the tolerance, as a multiple of it.
pub const AMBIGUITY_FACTOR: f64 = 1.0e3;

pub trait Scalar:
    Clone + Debug + Display + PartialEq + PartialOrd + Signed + Send + Sync + 'static
{
    /// True when arithmetic is exact and zero tests ignore the tolerance.
    const EXACT: bool;

    fn from_rational(r: &BigRational) -> Self;

    /// Converts a float. Exact scalars take the exact binary value.
    fn from_f64(x: f64) -> Option<Self>;

    fn to_f64(&self) -> f64;

    /// Decides `|self| == 0` relative to `scale` (ignored in exact mode).
    fn zero_test(&self, scale: f64, tol: f64) -> ZeroTest;

    fn from_i64(x: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(x)))
    }

    fn is_negligible(&self, scale: f64, tol: f64) -> bool {
        self.zero_test(scale, tol) == ZeroTest::Zero
    }
}

/// `(a, b, c)` style rendering used in diagnostics.
pub fn format_point<S: Scalar>(v: &[S]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn zero_test(&self, _scale: f64, _tol: f64) -> ZeroTest {
        if self.is_zero() {
            ZeroTest::Zero
        } else {
            ZeroTest::NonZero
        }
    }
}

macro_rules! impl_float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn from_rational(r: &BigRational) -> Self {
                ToPrimitive::to_f64(r).unwrap_or(f64::NAN) as $t
            }

            fn from_f64(x: f64) -> Option<Self> {
                <$t as FromPrimitive>::from_f64(x)
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn zero_test(&self, scale: f64, tol: f64) -> ZeroTest {
                let band = tol * scale.max(1.0);
                let a = (*self as f64).abs();
                if a <= band {
                    ZeroTest::Zero
                } else if a <= band * AMBIGUITY_FACTOR {
                    ZeroTest::Ambiguous
                } else {
                    ZeroTest::NonZero
                }
            }
        }
    };
}

impl_float_scalar!(f32);
impl_float_scalar!(f64);

/// `p/q` as a big rational.
pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_int(p: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(p))
}

/// Formats a rational as `p` or `p/q`.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(BigRational::new(p, q))
            }
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// Nearest rational with the given denominator.
pub fn rationalize(x: f64, denom: i64) -> BigRational {
    let n = (x * denom as f64).round() as i64;
    ratio(n, denom)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_round_trip() {
        for s in ["0", "-3", "7/4", "-2/6"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
        }
        assert_eq!(format_rational(&parse_rational("-2/6").unwrap()), "-1/3");
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("x").is_none());
    }

    #[test]
    fn float_zero_bands() {
        assert_eq!(1e-12f64.zero_test(1.0, 1e-9), ZeroTest::Zero);
        assert_eq!(1e-7f64.zero_test(1.0, 1e-9), ZeroTest::Ambiguous);
        assert_eq!(0.5f64.zero_test(1.0, 1e-9), ZeroTest::NonZero);
        assert_eq!(
            ratio(1, 1_000_000_000_000).zero_test(1.0, 1.0),
            ZeroTest::NonZero
        );
    }
}
