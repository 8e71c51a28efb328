use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::time::{format_rational, parse_rational, Interval, Rational};

pub type Valuation = BTreeMap<String, Rational>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rel {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl Rel {
    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Rel::Lt => lhs < rhs,
            Rel::Le => lhs <= rhs,
            Rel::Eq => lhs == rhs,
            Rel::Ge => lhs >= rhs,
            Rel::Gt => lhs > rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Eq => "==",
            Rel::Ge => ">=",
            Rel::Gt => ">",
        }
    }

    pub fn interval(self, c: Rational) -> Interval {
        match self {
            Rel::Lt => Interval::less_than(c),
            Rel::Le => Interval::at_most(c),
            Rel::Eq => Interval::exactly(c),
            Rel::Ge => Interval::at_least(c),
            Rel::Gt => Interval::greater_than(c),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Comparison {
    pub clock: String,
    pub rel: Rel,
    pub constant: Rational,
}

/// Conjunction of clock comparisons; empty means `true`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Guard {
    pub comparisons: Vec<Comparison>,
}

impl Guard {
    pub fn top() -> Guard {
        Guard::default()
    }

    pub fn is_true(&self) -> bool {
        self.comparisons.is_empty()
    }

    pub fn cmp(clock: &str, rel: Rel, constant: Rational) -> Guard {
        Guard {
            comparisons: vec![Comparison {
                clock: clock.to_string(),
                rel,
                constant,
            }],
        }
    }

    pub fn and(&self, other: &Guard) -> Guard {
        let mut comparisons = self.comparisons.clone();
        for c in &other.comparisons {
            if !comparisons.contains(c) {
                comparisons.push(c.clone());
            }
        }
        Guard { comparisons }
    }

    pub fn clocks(&self) -> BTreeSet<String> {
        self.comparisons.iter().map(|c| c.clock.clone()).collect()
    }

    /// Missing clocks read as zero.
    pub fn satisfied(&self, v: &Valuation) -> bool {
        self.comparisons.iter().all(|c| {
            let x = v.get(&c.clock).copied().unwrap_or_default();
            c.rel.holds(&x, &c.constant)
        })
    }

    /// The set of values each mentioned clock may take.
    pub fn intervals(&self) -> BTreeMap<String, Interval> {
        let mut out: BTreeMap<String, Interval> = BTreeMap::new();
        for c in &self.comparisons {
            let i = c.rel.interval(c.constant);
            out.entry(c.clock.clone())
                .and_modify(|prev| *prev = prev.intersect(&i))
                .or_insert(i);
        }
        out
    }

    /// A valuation satisfying the guard, if any.
    pub fn witness(&self) -> Option<Valuation> {
        self.intervals()
            .into_iter()
            .map(|(clock, i)| i.witness().map(|w| (clock, w)))
            .collect()
    }

    pub fn parse(text: &str) -> Result<Guard> {
        let t = text.trim();
        if t.is_empty() || t == "true" {
            return Ok(Guard::top());
        }
        let mut comparisons = Vec::new();
        for part in t.split("&&").flat_map(|p| p.split('&')) {
            let part = part.trim();
            let bad = || Error::input(format!("malformed clock comparison `{part}`"));
            if part == "true" {
                continue;
            }
            let ops = [
                ("<=", Rel::Le),
                (">=", Rel::Ge),
                ("==", Rel::Eq),
                ("<", Rel::Lt),
                (">", Rel::Gt),
                ("=", Rel::Eq),
            ];
            let (pos, op, rel) = ops
                .iter()
                .filter_map(|(op, rel)| part.find(op).map(|p| (p, *op, *rel)))
                .min_by_key(|(p, op, _)| (*p, std::cmp::Reverse(op.len())))
                .ok_or_else(bad)?;
            let clock = part[..pos].trim();
            let constant = parse_rational(&part[pos + op.len()..])?;
            if clock.is_empty() || !clock.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(bad());
            }
            if constant < Rational::default() {
                return Err(Error::input(format!("negative clock constant in `{part}`")));
            }
            comparisons.push(Comparison {
                clock: clock.to_string(),
                rel,
                constant,
            });
        }
        Ok(Guard { comparisons })
    }
}

impl fmt::Display for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comparisons.is_empty() {
            return f.write_str("true");
        }
        for (i, c) in self.comparisons.iter().enumerate() {
            if i > 0 {
                f.write_str(" && ")?;
            }
            write!(
                f,
                "{} {} {}",
                c.clock,
                c.rel.symbol(),
                format_rational(&c.constant)
            )?;
        }
        Ok(())
    }
}

impl TryFrom<String> for Guard {
    type Error = Error;
    fn try_from(s: String) -> Result<Guard> {
        Guard::parse(&s)
    }
}

impl From<Guard> for String {
    fn from(g: Guard) -> String {
        g.to_string()
    }
}

/// Fixed clock resources: constants must be `alpha/m` with `alpha <= K`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Granularity {
    pub clocks: Vec<String>,
    pub m: u32,
    pub k: u32,
}

impl Granularity {
    pub fn new(clocks: impl IntoIterator<Item = String>, m: u32, k: u32) -> Result<Granularity> {
        if m == 0 {
            return Err(Error::Granularity("m must be at least 1".into()));
        }
        let set: BTreeSet<String> = clocks.into_iter().collect();
        Ok(Granularity {
            clocks: set.into_iter().collect(),
            m,
            k,
        })
    }

    pub fn with_clocks(&self, clocks: impl IntoIterator<Item = String>) -> Granularity {
        let set: BTreeSet<String> = clocks.into_iter().collect();
        Granularity {
            clocks: set.into_iter().collect(),
            m: self.m,
            k: self.k,
        }
    }

    pub fn is_granular(&self, c: &Rational) -> bool {
        let scaled = *c * Rational::from_integer(self.m as i64);
        scaled.is_integer() && scaled.to_integer() >= 0 && scaled.to_integer() <= self.k as i64
    }

    /// The numerator `alpha` of a granular constant.
    pub fn scaled(&self, c: &Rational) -> i64 {
        (*c * Rational::from_integer(self.m as i64)).to_integer()
    }

    pub fn check_guard(&self, g: &Guard) -> Result<()> {
        for c in &g.comparisons {
            if !self.is_granular(&c.constant) {
                return Err(Error::Granularity(format!(
                    "constant {} in `{g}` is not a multiple of 1/{} bounded by {}/{}",
                    format_rational(&c.constant),
                    self.m,
                    self.k,
                    self.m
                )));
            }
        }
        Ok(())
    }

    pub fn check_interval(&self, i: &Interval) -> Result<()> {
        let ok = self.is_granular(&i.lower) && i.upper.as_ref().is_none_or(|u| self.is_granular(u));
        if ok {
            Ok(())
        } else {
            Err(Error::Granularity(format!(
                "interval {i} is not granular for m={}, K={}",
                self.m, self.k
            )))
        }
    }

    pub fn index(&self, clock: &str) -> Option<usize> {
        self.clocks.iter().position(|c| c == clock)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::time::int;

    #[test]
    fn parse_and_print() {
        let g = Guard::parse("t_p == 5 && x<3/2").unwrap();
        assert_eq!(g.to_string(), "t_p == 5 && x < 3/2");
        assert_eq!(Guard::parse(&g.to_string()).unwrap(), g);
        assert!(Guard::parse("true").unwrap().is_true());
        assert!(Guard::parse("x ! 3").is_err());
    }

    #[test]
    fn witness_of_overlap() {
        let g = Guard::parse("x < 2 && x > 1").unwrap();
        assert_eq!(g.witness().unwrap()["x"], Rational::new(3, 2));
        assert!(Guard::parse("x < 1 && x > 1").unwrap().witness().is_none());
    }

    #[test]
    fn granularity_check() {
        let mu = Granularity::new(["t".to_string()], 2, 4).unwrap();
        assert!(mu.is_granular(&Rational::new(3, 2)));
        assert!(!mu.is_granular(&Rational::new(1, 3)));
        assert!(!mu.is_granular(&int(3)));
    }
}
