//! Exact rational edge weights.
//!
//! Every cost in the toolkit is a `Weight`: an arbitrary-precision rational
//! kept in reduced form. There is no floating point anywhere in the cut
//! pipeline; equality and comparison are exact.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::error::GraphError;

/// An exact rational number. Reduced form and positive denominator are
/// maintained by the underlying `BigRational`.
///
/// Edge weights must be nonnegative (enforced at graph construction);
/// derived quantities such as balances may be negative.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight(BigRational);

impl Weight {
    pub fn zero() -> Self {
        Weight(BigRational::zero())
    }

    pub fn one() -> Self {
        Weight(BigRational::one())
    }

    pub fn from_integer(n: i64) -> Self {
        Weight(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Weight(BigRational::from_integer(n))
    }

    /// Build `numerator / denominator`. The denominator must be nonzero;
    /// sign is normalized so the stored denominator is positive.
    pub fn new(numerator: BigInt, denominator: BigInt) -> Result<Self, GraphError> {
        if denominator.is_zero() {
            return Err(GraphError::ZeroDenominator);
        }
        Ok(Weight(BigRational::new(numerator, denominator)))
    }

    pub fn ratio(numerator: i64, denominator: i64) -> Self {
        Weight(BigRational::new(BigInt::from(numerator), BigInt::from(denominator)))
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    /// `self - other`, floored at zero. Used for residual capacities.
    pub fn saturating_sub(&self, other: &Self) -> Self {
        if self <= other {
            Weight::zero()
        } else {
            Weight(&self.0 - &other.0)
        }
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for Weight {
    fn from(r: BigRational) -> Self {
        Weight(r)
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, rhs: Weight) -> Weight {
        Weight(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a Weight> for Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        Weight(self.0 + &rhs.0)
    }
}

impl AddAssign<&Weight> for Weight {
    fn add_assign(&mut self, rhs: &Weight) {
        self.0 += &rhs.0;
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(self, rhs: Weight) -> Weight {
        Weight(self.0 - rhs.0)
    }
}

impl<'a> Sub<&'a Weight> for Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        Weight(self.0 - &rhs.0)
    }
}

impl SubAssign<&Weight> for Weight {
    fn sub_assign(&mut self, rhs: &Weight) {
        self.0 -= &rhs.0;
    }
}

impl Mul for Weight {
    type Output = Weight;
    fn mul(self, rhs: Weight) -> Weight {
        Weight(self.0 * rhs.0)
    }
}

impl<'a> Mul<&'a Weight> for Weight {
    type Output = Weight;
    fn mul(self, rhs: &Weight) -> Weight {
        Weight(self.0 * &rhs.0)
    }
}

impl Neg for Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(-self.0)
    }
}

/// Serialized form is always `numerator/denominator`, e.g. `7/4` or `3/1`.
impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for Weight {
    type Err = GraphError;

    /// Parse `p/q`. A bare integer without an explicit denominator is
    /// rejected so that serialized weights are unambiguous.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (num, den) = s.split_once('/').ok_or_else(|| GraphError::MalformedWeight {
            text: s.to_string(),
            reason: "missing '/' (weights are written as numerator/denominator)".into(),
        })?;
        let parse = |part: &str| {
            part.parse::<BigInt>().map_err(|_| GraphError::MalformedWeight {
                text: s.to_string(),
                reason: format!("'{part}' is not an integer"),
            })
        };
        let numerator = parse(num)?;
        let denominator = parse(den)?;
        if denominator <= BigInt::zero() {
            return Err(GraphError::MalformedWeight {
                text: s.to_string(),
                reason: "denominator must be positive".into(),
            });
        }
        Weight::new(numerator, denominator)
    }
}
