//! Exact rational time values.

use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// Parses `p/q`, an integer, or a finite decimal such as `2.5` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::input(format!("not a rational number: `{text}`"));
    if let Some((num, den)) = s.split_once('/') {
        let n: i64 = num.trim().parse().map_err(|_| bad())?;
        let d: i64 = den.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) || frac.len() > 12 {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let w: i64 = if whole.is_empty() || whole == "-" {
            0
        } else {
            whole.parse().map_err(|_| bad())?
        };
        let den = 10i64.pow(frac.len() as u32);
        let f: i64 = frac.parse().map_err(|_| bad())?;
        let magnitude = Rational::new(w.abs() * den + f, den);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    s.parse::<i64>().map(int).map_err(|_| bad())
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn check_non_negative(r: &Rational) -> Result<()> {
    if r.is_negative() {
        Err(Error::input(format!(
            "negative time value {}",
            format_rational(r)
        )))
    } else {
        Ok(())
    }
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub mod serde_rational {
    use super::{format_rational, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Int(i64),
        }
        match Raw::deserialize(d)? {
            Raw::Text(t) => parse_rational(&t).map_err(serde::de::Error::custom),
            Raw::Int(i) => Ok(Rational::from_integer(i)),
        }
    }
}

/// A convex set of non-negative rationals with optional upper bound.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    pub lower: Rational,
    pub lower_open: bool,
    pub upper: Option<Rational>,
    pub upper_open: bool,
}

impl Interval {
    /// `[0, inf)`
    pub fn unbounded() -> Interval {
        Interval::at_least(zero())
    }

    pub fn at_least(c: Rational) -> Interval {
        Interval {
            lower: c,
            lower_open: false,
            upper: None,
            upper_open: true,
        }
    }

    pub fn greater_than(c: Rational) -> Interval {
        Interval {
            lower_open: true,
            ..Interval::at_least(c)
        }
    }

    pub fn at_most(c: Rational) -> Interval {
        Interval::closed(zero(), c)
    }

    pub fn less_than(c: Rational) -> Interval {
        Interval {
            upper_open: true,
            ..Interval::closed(zero(), c)
        }
    }

    pub fn exactly(c: Rational) -> Interval {
        Interval::closed(c, c)
    }

    pub fn closed(lower: Rational, upper: Rational) -> Interval {
        Interval {
            lower,
            lower_open: false,
            upper: Some(upper),
            upper_open: false,
        }
    }

    pub fn new(
        lower: Rational,
        lower_open: bool,
        upper: Option<Rational>,
        upper_open: bool,
    ) -> Result<Interval> {
        check_non_negative(&lower)?;
        if let Some(u) = upper {
            if u < lower {
                return Err(Error::input("interval upper bound below lower bound"));
            }
        }
        Ok(Interval {
            lower,
            lower_open,
            upper,
            upper_open: upper.is_none() || upper_open,
        })
    }

    pub fn contains(&self, t: &Rational) -> bool {
        let above = if self.lower_open {
            *t > self.lower
        } else {
            *t >= self.lower
        };
        let below = match &self.upper {
            None => true,
            Some(u) if self.upper_open => t < u,
            Some(u) => t <= u,
        };
        above && below
    }

    pub fn is_empty(&self) -> bool {
        match &self.upper {
            None => false,
            Some(u) => {
                *u < self.lower || (*u == self.lower && (self.lower_open || self.upper_open))
            }
        }
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        let (lower, lower_open) = match self.lower.cmp(&other.lower) {
            std::cmp::Ordering::Greater => (self.lower, self.lower_open),
            std::cmp::Ordering::Less => (other.lower, other.lower_open),
            std::cmp::Ordering::Equal => (self.lower, self.lower_open || other.lower_open),
        };
        let (upper, upper_open) = match (&self.upper, &other.upper) {
            (None, None) => (None, true),
            (Some(u), None) => (Some(*u), self.upper_open),
            (None, Some(u)) => (Some(*u), other.upper_open),
            (Some(a), Some(b)) => match a.cmp(b) {
                std::cmp::Ordering::Less => (Some(*a), self.upper_open),
                std::cmp::Ordering::Greater => (Some(*b), other.upper_open),
                std::cmp::Ordering::Equal => (Some(*a), self.upper_open || other.upper_open),
            },
        };
        Interval {
            lower,
            lower_open,
            upper,
            upper_open,
        }
    }

    /// Some member of a nonempty interval.
    pub fn witness(&self) -> Option<Rational> {
        if self.is_empty() {
            return None;
        }
        Some(match &self.upper {
            None if self.lower_open => self.lower + int(1),
            None => self.lower,
            Some(u) if *u == self.lower => self.lower,
            Some(u) => {
                if !self.lower_open {
                    self.lower
                } else {
                    (self.lower + u) / int(2)
                }
            }
        })
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        self.is_empty() || self.intersect(other) == *self
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let open = if self.lower_open { "(" } else { "[" };
        match &self.upper {
            None => write!(f, "{open}{},inf)", format_rational(&self.lower)),
            Some(u) => write!(
                f,
                "{open}{},{}{}",
                format_rational(&self.lower),
                format_rational(u),
                if self.upper_open { ")" } else { "]" }
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_notations() {
        assert_eq!(parse_rational("5").unwrap(), int(5));
        assert_eq!(parse_rational("3/2").unwrap(), Rational::new(3, 2));
        assert_eq!(parse_rational("2.5").unwrap(), Rational::new(5, 2));
        assert_eq!(parse_rational("0.125").unwrap(), Rational::new(1, 8));
        assert!(parse_rational("1e3").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn formats_integers_plainly() {
        assert_eq!(format_rational(&int(10)), "10");
        assert_eq!(format_rational(&Rational::new(6, 4)), "3/2");
    }

    #[test]
    fn interval_membership_and_intersection() {
        let a = Interval::new(int(1), true, Some(int(3)), false).unwrap();
        assert!(!a.contains(&int(1)));
        assert!(a.contains(&int(3)));
        let b = Interval::less_than(int(2));
        let c = a.intersect(&b);
        assert_eq!(c.to_string(), "(1,2)");
        assert_eq!(c.witness(), Some(Rational::new(3, 2)));
        assert!(Interval::exactly(int(2)).intersect(&b).is_empty());
        assert!(Interval::at_most(int(1)).is_subset_of(&Interval::unbounded()));
    }
}
