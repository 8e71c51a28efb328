use std::collections::BTreeMap;

use super::guard::{Comparison, Granularity, Guard, Rel, Valuation};
use crate::time::{int, Rational};

/// Integer part of a clock scaled by `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClockInt {
    Exact(u32),
    /// Strictly above `K/m`.
    Above,
    /// The clock is not in use.
    Absent,
}

/// Region over the clocks of a granularity, indexed by clock position.
///
/// `groups[0]` holds the clocks with zero fractional part; the following
/// groups hold clocks with positive fractional part in increasing order.
/// Only clocks with an `Exact` integer part appear in groups.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Region {
    pub ints: Vec<ClockInt>,
    pub groups: Vec<Vec<usize>>,
}

impl Region {
    /// Every clock at zero.
    pub fn zero(n: usize) -> Region {
        Region {
            ints: vec![ClockInt::Exact(0); n],
            groups: vec![(0..n).collect()],
        }
    }

    pub fn of(v: &Valuation, mu: &Granularity) -> Region {
        let m = int(mu.m as i64);
        let mut ints = Vec::new();
        let mut fracs: BTreeMap<Rational, Vec<usize>> = BTreeMap::new();
        for (i, c) in mu.clocks.iter().enumerate() {
            let Some(x) = v.get(c) else {
                ints.push(ClockInt::Absent);
                continue;
            };
            let scaled = *x * m;
            if scaled > int(mu.k as i64) {
                ints.push(ClockInt::Above);
                continue;
            }
            let whole = scaled.floor();
            ints.push(ClockInt::Exact(whole.to_integer() as u32));
            fracs.entry(scaled - whole).or_default().push(i);
        }
        let mut groups = vec![fracs.remove(&Rational::default()).unwrap_or_default()];
        groups.extend(fracs.into_values());
        Region { ints, groups }
    }

    fn frac_position(&self, clock: usize) -> Option<usize> {
        self.groups.iter().position(|g| g.contains(&clock))
    }

    /// The immediate time successor, or `None` once every clock is above `K` or absent.
    pub fn elapse(&self, k: u32) -> Option<Region> {
        let mut next = self.clone();
        if !self.groups[0].is_empty() {
            let mut moving = Vec::new();
            for &c in &self.groups[0] {
                match self.ints[c] {
                    ClockInt::Exact(n) if n >= k => next.ints[c] = ClockInt::Above,
                    _ => moving.push(c),
                }
            }
            next.groups[0].clear();
            if !moving.is_empty() {
                next.groups.insert(1, moving);
            }
            return Some(next);
        }
        if self.groups.len() > 1 {
            let last = next.groups.pop().expect("positive group");
            for &c in &last {
                if let ClockInt::Exact(n) = next.ints[c] {
                    next.ints[c] = ClockInt::Exact(n + 1);
                }
            }
            next.groups[0] = last;
            return Some(next);
        }
        None
    }

    /// The region itself followed by its strictly ordered time successors.
    pub fn successors(&self, k: u32) -> Vec<Region> {
        let mut out = vec![self.clone()];
        while let Some(r) = out.last().expect("nonempty").elapse(k) {
            out.push(r);
        }
        out
    }

    pub fn reset(&mut self, clock: usize) {
        if let Some(p) = self.frac_position(clock) {
            self.groups[p].retain(|c| *c != clock);
            if p > 0 && self.groups[p].is_empty() {
                self.groups.remove(p);
            }
        }
        self.ints[clock] = ClockInt::Exact(0);
        self.groups[0].push(clock);
        self.groups[0].sort_unstable();
    }

    pub fn deactivate(&mut self, clock: usize) {
        if let Some(p) = self.frac_position(clock) {
            self.groups[p].retain(|c| *c != clock);
            if p > 0 && self.groups[p].is_empty() {
                self.groups.remove(p);
            }
        }
        self.ints[clock] = ClockInt::Absent;
    }

    pub fn is_active(&self, clock: usize) -> bool {
        self.ints[clock] != ClockInt::Absent
    }

    fn frac_zero(&self, clock: usize) -> bool {
        self.groups[0].contains(&clock)
    }

    fn compare(&self, clock: usize, rel: Rel, alpha: i64) -> bool {
        match self.ints[clock] {
            ClockInt::Absent => false,
            ClockInt::Above => matches!(rel, Rel::Gt | Rel::Ge),
            ClockInt::Exact(n) => {
                let n = n as i64;
                if self.frac_zero(clock) {
                    rel.holds(&int(n), &int(alpha))
                } else {
                    match rel {
                        Rel::Lt | Rel::Le => n < alpha,
                        Rel::Eq => false,
                        Rel::Gt | Rel::Ge => n >= alpha,
                    }
                }
            }
        }
    }

    /// Whether every valuation of the region satisfies a granular guard.
    /// Comparisons on clocks outside the granularity are false.
    pub fn satisfies(&self, g: &Guard, mu: &Granularity) -> bool {
        g.comparisons.iter().all(|c| match mu.index(&c.clock) {
            Some(i) => self.compare(i, c.rel, mu.scaled(&c.constant)),
            None => false,
        })
    }

    /// Comparison describing the region's projection on one clock.
    pub fn clock_box(&self, clock: usize, mu: &Granularity) -> Vec<Comparison> {
        let name = mu.clocks[clock].clone();
        let m = mu.m as i64;
        let c = |rel, n: i64| Comparison {
            clock: name.clone(),
            rel,
            constant: Rational::new(n, m),
        };
        match self.ints[clock] {
            ClockInt::Absent => Vec::new(),
            ClockInt::Above => vec![c(Rel::Gt, mu.k as i64)],
            ClockInt::Exact(n) if self.frac_zero(clock) => vec![c(Rel::Eq, n as i64)],
            ClockInt::Exact(n) => vec![c(Rel::Gt, n as i64), c(Rel::Lt, n as i64 + 1)],
        }
    }

    /// A valuation inside the region; fractional groups are spread evenly.
    pub fn representative(&self, mu: &Granularity) -> Valuation {
        let m = int(mu.m as i64);
        let denom = self.groups.len() as i64;
        let mut v = Valuation::new();
        for (i, c) in mu.clocks.iter().enumerate() {
            let scaled = match self.ints[i] {
                ClockInt::Absent => continue,
                ClockInt::Above => int(mu.k as i64 + 1),
                ClockInt::Exact(n) => {
                    let p = self.frac_position(i).unwrap_or(0) as i64;
                    int(n as i64) + Rational::new(p, denom)
                }
            };
            v.insert(c.clone(), scaled / m);
        }
        v
    }
}
