//! Exact nonnegative rationals for delays and clock values.

use alloc::string::{String, ToString};
use core::cmp::Ordering;
use core::fmt;
use core::ops::Add;
use core::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::ParseError;

/// A nonnegative rational number, always stored in lowest terms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(Ratio<BigUint>);

impl Rational {
    pub fn zero() -> Self {
        Rational(Ratio::zero())
    }

    pub fn from_integer(n: u64) -> Self {
        Rational(Ratio::from_integer(BigUint::from(n)))
    }

    /// `numerator / denominator`; panics on a zero denominator.
    pub fn new(numerator: u64, denominator: u64) -> Self {
        assert!(denominator != 0, "zero denominator");
        Rational(Ratio::new(BigUint::from(numerator), BigUint::from(denominator)))
    }

    pub fn from_big(numerator: BigUint, denominator: BigUint) -> Option<Self> {
        if denominator.is_zero() {
            None
        } else {
            Some(Rational(Ratio::new(numerator, denominator)))
        }
    }

    /// `n / 2`.
    pub fn halves(n: u64) -> Self {
        Rational::new(n, 2)
    }

    pub fn numerator(&self) -> &BigUint {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigUint {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// Integer part.
    pub fn floor(&self) -> BigUint {
        self.0.numer() / self.0.denom()
    }

    /// Integer part if it fits in `u64`.
    pub fn floor_u64(&self) -> Option<u64> {
        self.floor().to_u64()
    }

    /// Fractional part, in `[0, 1)`.
    pub fn fract(&self) -> Rational {
        let (_, rem) = self.0.numer().div_rem(self.0.denom());
        Rational(Ratio::new(rem, self.0.denom().clone()))
    }

    /// `self - other`, or `None` when the result would be negative.
    pub fn checked_sub(&self, other: &Rational) -> Option<Rational> {
        if self < other {
            None
        } else {
            Some(Rational(&self.0 - &other.0))
        }
    }

    pub fn mul_int(&self, n: u64) -> Rational {
        Rational(&self.0 * Ratio::from_integer(BigUint::from(n)))
    }

    pub fn div_int(&self, n: u64) -> Rational {
        assert!(n != 0, "division by zero");
        Rational(&self.0 / Ratio::from_integer(BigUint::from(n)))
    }

    /// The number of halves if the value is half-integral.
    pub fn as_halves(&self) -> Option<u64> {
        let twice = self.mul_int(2);
        if twice.is_integer() {
            twice.floor_u64()
        } else {
            None
        }
    }

    /// Same integer part and same zero-ness of the fractional part.
    pub fn same_class(&self, other: &Rational) -> bool {
        self.floor() == other.floor() && self.is_integer() == other.is_integer()
    }

    /// Exact decimal expansion when the denominator only has factors 2 and 5.
    pub fn to_decimal(&self) -> Option<String> {
        let mut den = self.denominator().clone();
        let two = BigUint::from(2u32);
        let five = BigUint::from(5u32);
        let mut digits = 0usize;
        let mut scale = BigUint::one();
        while !den.is_one() {
            if (&den % &two).is_zero() {
                den /= &two;
            } else if (&den % &five).is_zero() {
                den /= &five;
            } else {
                return None;
            }
            digits += 1;
            scale *= BigUint::from(10u32);
        }
        let int = self.floor();
        if digits == 0 {
            return Some(int.to_string());
        }
        let frac = self.fract();
        let scaled = frac.numerator() * (&scale / frac.denominator());
        let mut frac_digits = scaled.to_string();
        while frac_digits.len() < digits {
            frac_digits.insert(0, '0');
        }
        let trimmed = frac_digits.trim_end_matches('0');
        Some(alloc::format!("{int}.{trimmed}"))
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        Rational(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn add(self, rhs: &'a Rational) -> Rational {
        Rational(&self.0 + &rhs.0)
    }
}

impl From<u64> for Rational {
    fn from(n: u64) -> Self {
        Rational::from_integer(n)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ParseError;

    /// Accepts `n`, `p/q` and finite decimals such as `1.9` (parsed exactly).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || ParseError::Rational(s.to_string());
        let digits = |t: &str| -> Result<BigUint, ParseError> {
            if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            BigUint::from_str(t).map_err(|_| bad())
        };
        if let Some((num, den)) = s.split_once('/') {
            let den = digits(den)?;
            return Rational::from_big(digits(num)?, den).ok_or_else(bad);
        }
        if let Some((int, frac)) = s.split_once('.') {
            let int = if int.is_empty() { BigUint::zero() } else { digits(int)? };
            let frac_val = digits(frac)?;
            let scale = num_traits::pow(BigUint::from(10u32), frac.len());
            let num = int * &scale + frac_val;
            return Rational::from_big(num, scale).ok_or_else(bad);
        }
        Ok(Rational(Ratio::from_integer(digits(s)?)))
    }
}

impl PartialOrd<u64> for Rational {
    fn partial_cmp(&self, other: &u64) -> Option<Ordering> {
        Some(self.cmp(&Rational::from_integer(*other)))
    }
}

impl PartialEq<u64> for Rational {
    fn eq(&self, other: &u64) -> bool {
        *self == Rational::from_integer(*other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!("19/10".parse::<Rational>().unwrap(), Rational::new(19, 10));
        assert_eq!("1.9".parse::<Rational>().unwrap(), Rational::new(19, 10));
        assert_eq!("0.50".parse::<Rational>().unwrap(), Rational::new(1, 2));
        assert_eq!("3".parse::<Rational>().unwrap(), Rational::from_integer(3));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("-1".parse::<Rational>().is_err());
        assert!("abc".parse::<Rational>().is_err());
    }

    #[test]
    fn floor_and_fract() {
        let v = Rational::new(27, 10);
        assert_eq!(v.floor_u64(), Some(2));
        assert_eq!(v.fract(), Rational::new(7, 10));
        assert!(!v.is_integer());
        assert_eq!(Rational::new(3, 2).as_halves(), Some(3));
        assert_eq!(Rational::new(1, 3).as_halves(), None);
    }

    #[test]
    fn checked_sub_refuses_negatives() {
        let a = Rational::new(1, 2);
        let b = Rational::new(3, 4);
        assert_eq!(b.checked_sub(&a), Some(Rational::new(1, 4)));
        assert_eq!(a.checked_sub(&b), None);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(Rational::new(19, 10).to_decimal().as_deref(), Some("1.9"));
        assert_eq!(Rational::new(1, 4).to_decimal().as_deref(), Some("0.25"));
        assert_eq!(Rational::from_integer(2).to_decimal().as_deref(), Some("2"));
        assert_eq!(Rational::new(1, 3).to_decimal(), None);
    }
}
