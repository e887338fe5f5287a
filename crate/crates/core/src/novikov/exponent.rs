use std::fmt;
use std::ops::{Add, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Energy exponent of `T`: an exact nonnegative rational.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Exponent(Ratio<i64>);

impl Exponent {
    pub const ZERO: Exponent = Exponent(Ratio::new_raw(0, 1));

    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Parse("zero denominator in exponent".into()));
        }
        Self::from_ratio(Ratio::new(num, den))
    }

    pub fn from_ratio(r: Ratio<i64>) -> Result<Self> {
        if r.is_negative() {
            return Err(Error::Invariant(format!("negative exponent {r}")));
        }
        Ok(Exponent(r))
    }

    pub fn int(n: u32) -> Self {
        Exponent(Ratio::from_integer(n as i64))
    }

    pub fn ratio(&self) -> Ratio<i64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn checked_sub(&self, other: &Exponent) -> Option<Exponent> {
        let d = self.0 - other.0;
        (!d.is_negative()).then_some(Exponent(d))
    }

    /// Smallest `n` with `n * self >= bound`; `None` for a zero step.
    pub fn steps_to(&self, bound: &Exponent) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let q = (bound.0 / self.0).ceil();
        Some(*q.numer() as u64)
    }

    /// Form used after `T^`: `1`, `{1/2}`.
    pub fn t_power(&self) -> String {
        if self.0.is_integer() {
            self.0.numer().to_string()
        } else {
            format!("{{{}}}", self.0)
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let s = s.strip_prefix('{').and_then(|t| t.strip_suffix('}')).unwrap_or(s);
        let bad = || Error::Parse(format!("bad exponent `{s}`"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n: i64 = n.trim().parse().map_err(|_| bad())?;
                let d: i64 = d.trim().parse().map_err(|_| bad())?;
                Exponent::new(n, d).map_err(|_| bad())
            }
            None => {
                let n: i64 = s.parse().map_err(|_| bad())?;
                Exponent::new(n, 1).map_err(|_| bad())
            }
        }
    }
}

impl Add for Exponent {
    type Output = Exponent;
    fn add(self, rhs: Exponent) -> Exponent {
        Exponent(self.0 + rhs.0)
    }
}

impl Sub for Exponent {
    type Output = Exponent;
    /// Panics below zero; use [`Exponent::checked_sub`] when unsure.
    fn sub(self, rhs: Exponent) -> Exponent {
        self.checked_sub(&rhs).expect("exponent underflow")
    }
}

impl std::iter::Sum for Exponent {
    fn sum<I: Iterator<Item = Exponent>>(iter: I) -> Exponent {
        iter.fold(Exponent::ZERO, |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let e: Exponent = "2/4".parse().unwrap();
        assert_eq!(e.to_string(), "1/2");
        assert_eq!(e.t_power(), "{1/2}");
        assert_eq!(Exponent::int(3).t_power(), "3");
        assert_eq!("{1/3}".parse::<Exponent>().unwrap(), Exponent::new(1, 3).unwrap());
        assert!("-1".parse::<Exponent>().is_err());
        assert!("1/0".parse::<Exponent>().is_err());
    }

    #[test]
    fn steps() {
        let h = Exponent::new(1, 2).unwrap();
        assert_eq!(h.steps_to(&Exponent::int(3)), Some(6));
        assert_eq!(Exponent::new(2, 3).unwrap().steps_to(&Exponent::int(1)), Some(2));
        assert_eq!(Exponent::ZERO.steps_to(&Exponent::int(1)), None);
    }
}
