//! Angles on the circle: exact fractions of a full turn, exact rational
//! points on the unit circle, or floating radians.

use std::f64::consts::TAU;

use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};

use crate::scalar::{rat_int, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub enum Angle {
    /// Fraction of a full turn in `[0, 1)`.
    Turns(Ratio<i64>),
    /// Rational point `(cos, sin)` on the unit circle that is not a quarter turn.
    Unit { cos: BigRational, sin: BigRational },
    /// Radians in `[0, 2π)`.
    Radians(f64),
}

fn quarter_unit(q: i64) -> (BigRational, BigRational) {
    match q.rem_euclid(4) {
        0 => (rat_int(1), rat_int(0)),
        1 => (rat_int(0), rat_int(1)),
        2 => (rat_int(-1), rat_int(0)),
        _ => (rat_int(0), rat_int(-1)),
    }
}

fn mul_unit(
    a: &(BigRational, BigRational),
    b: &(BigRational, BigRational),
) -> (BigRational, BigRational) {
    (&a.0 * &b.0 - &a.1 * &b.1, &a.0 * &b.1 + &a.1 * &b.0)
}

impl Angle {
    pub fn zero() -> Self {
        Angle::Turns(Ratio::zero())
    }

    /// `p/q` of a full turn, i.e. `2πp/q` radians.
    pub fn turns(p: i64, q: i64) -> Self {
        let r = Ratio::new(p, q);
        let f = r - Ratio::from_integer(r.floor().to_integer());
        Angle::Turns(f)
    }

    pub fn radians(x: f64) -> Self {
        Angle::Radians(x.rem_euclid(TAU))
    }

    /// Rational point on the unit circle. Returns `None` off the circle.
    pub fn unit(cos: BigRational, sin: BigRational) -> Option<Self> {
        if &cos * &cos + &sin * &sin != BigRational::one() {
            return None;
        }
        for q in 0..4 {
            if quarter_unit(q) == (cos.clone(), sin.clone()) {
                return Some(Angle::turns(q, 4));
            }
        }
        Some(Angle::Unit { cos, sin })
    }

    /// Exact rational rotation `((1−t²)/(1+t²), 2t/(1+t²))`.
    pub fn pythagorean(t: &BigRational) -> Self {
        let d = BigRational::one() + t * t;
        let cos = (BigRational::one() - t * t) / &d;
        let sin = (t * rat_int(2)) / d;
        Angle::unit(cos, sin).expect("pythagorean point lies on the circle")
    }

    fn quarter(&self) -> Option<i64> {
        match self {
            Angle::Turns(r) if (r * Ratio::from_integer(4)).is_integer() => {
                Some((r * Ratio::from_integer(4)).to_integer())
            }
            _ => None,
        }
    }

    fn exact_unit(&self) -> Option<(BigRational, BigRational)> {
        match self {
            Angle::Unit { cos, sin } => Some((cos.clone(), sin.clone())),
            _ => self.quarter().map(quarter_unit),
        }
    }

    pub fn to_radians(&self) -> f64 {
        match self {
            Angle::Turns(r) => r.to_f64().unwrap_or(0.0) * TAU,
            Angle::Unit { cos, sin } => ToPrimitive::to_f64(sin)
                .unwrap_or(0.0)
                .atan2(ToPrimitive::to_f64(cos).unwrap_or(1.0))
                .rem_euclid(TAU),
            Angle::Radians(x) => *x,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Angle::Turns(r) => r.is_zero(),
            Angle::Unit { .. } => false,
            Angle::Radians(x) => *x == 0.0,
        }
    }

    pub fn add(&self, other: &Angle) -> Angle {
        match (self, other) {
            (Angle::Turns(a), Angle::Turns(b)) => {
                let s = a + b;
                Angle::turns(*s.numer(), *s.denom())
            }
            _ => match (self.exact_unit(), other.exact_unit()) {
                (Some(a), Some(b)) => {
                    let (c, s) = mul_unit(&a, &b);
                    Angle::unit(c, s).expect("product of unit points is a unit point")
                }
                _ => Angle::radians(self.to_radians() + other.to_radians()),
            },
        }
    }

    pub fn neg(&self) -> Angle {
        match self {
            Angle::Turns(r) => Angle::turns(-*r.numer(), *r.denom()),
            Angle::Unit { cos, sin } => Angle::Unit {
                cos: cos.clone(),
                sin: -sin.clone(),
            },
            Angle::Radians(x) => Angle::radians(-x),
        }
    }

    /// `w·θ` for an integer weight.
    pub fn times(&self, w: i64) -> Angle {
        match self {
            Angle::Turns(r) => {
                let s = r * Ratio::from_integer(w);
                Angle::turns(*s.numer(), *s.denom())
            }
            Angle::Radians(x) => Angle::radians(x * w as f64),
            Angle::Unit { .. } => {
                let base = if w < 0 { self.neg() } else { self.clone() };
                (0..w.abs()).fold(Angle::zero(), |acc, _| acc.add(&base))
            }
        }
    }

    /// `(cos θ, sin θ)` in the requested scalar. Exact scalars only accept
    /// quarter turns and rational unit points.
    pub fn cos_sin<S: Scalar>(&self) -> Option<(S, S)> {
        if let Some((c, s)) = self.exact_unit() {
            return Some((S::from_rational(&c), S::from_rational(&s)));
        }
        if S::EXACT {
            return None;
        }
        let x = self.to_radians();
        Some((S::from_f64(x.cos())?, S::from_f64(x.sin())?))
    }

    /// Exact fraction of a turn, when stored that way.
    pub fn turns_value(&self) -> Option<Ratio<i64>> {
        match self {
            Angle::Turns(r) => Some(*r),
            _ => None,
        }
    }
}

impl std::fmt::Display for Angle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Angle::Turns(r) => write!(f, "{}/{} turn", r.numer(), r.denom()),
            Angle::Unit { cos, sin } => write!(f, "unit({cos}, {sin})"),
            Angle::Radians(x) => write!(f, "{x} rad"),
        }
    }
}
