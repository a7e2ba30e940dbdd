//! Eventually periodic defining sequences of solenoids and the
//! Bing–McCord homeomorphism criterion.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{offset_of, ParseError};

/// A sequence given by a finite prefix followed by a cycle repeated forever.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EventuallyPeriodic<T> {
    prefix: Vec<T>,
    cycle: Vec<T>,
}

impl<T: Clone> EventuallyPeriodic<T> {
    /// Panics when `cycle` is empty.
    pub fn new(prefix: Vec<T>, cycle: Vec<T>) -> Self {
        assert!(!cycle.is_empty(), "the repeating part of a sequence must be nonempty");
        EventuallyPeriodic { prefix, cycle }
    }

    pub fn constant(value: T) -> Self {
        Self::new(Vec::new(), vec![value])
    }

    pub fn prefix(&self) -> &[T] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[T] {
        &self.cycle
    }

    /// Term `i`, counting from 0.
    pub fn get(&self, i: usize) -> &T {
        if i < self.prefix.len() {
            &self.prefix[i]
        } else {
            &self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// The first `n` terms.
    pub fn take(&self, n: usize) -> Vec<T> {
        (0..n).map(|i| self.get(i).clone()).collect()
    }

    pub fn map<U: Clone>(&self, mut f: impl FnMut(&T) -> U) -> EventuallyPeriodic<U> {
        EventuallyPeriodic::new(self.prefix.iter().map(&mut f).collect(), self.cycle.iter().map(&mut f).collect())
    }

    /// Pairs two sequences termwise, choosing a common prefix length and period.
    pub fn zip<U: Clone>(&self, other: &EventuallyPeriodic<U>) -> EventuallyPeriodic<(T, U)> {
        let start = self.prefix.len().max(other.prefix.len());
        let period = num_integer::lcm(self.cycle.len(), other.cycle.len());
        let term = |i: usize| (self.get(i).clone(), other.get(i).clone());
        EventuallyPeriodic::new((0..start).map(term).collect(), (start..start + period).map(term).collect())
    }
}

impl<T: fmt::Display> fmt::Display for EventuallyPeriodic<T> {
    /// `p1,p2,... | c1,c2,...`; an empty prefix prints as `| c1,...`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[T]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        if self.prefix.is_empty() {
            write!(f, "| {}", join(&self.cycle))
        } else {
            write!(f, "{} | {}", join(&self.prefix), join(&self.cycle))
        }
    }
}

impl<T: FromStr + Clone> FromStr for EventuallyPeriodic<T> {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        let (prefix, cycle) =
            s.split_once('|').ok_or_else(|| ParseError::new(1, s.trim(), "expected `prefix | cycle`"))?;
        let parse_list = |part: &str| -> Result<Vec<T>, ParseError> {
            if part.trim().is_empty() {
                return Ok(Vec::new());
            }
            part.split(',')
                .map(|item| {
                    let tok = item.trim();
                    let col = offset_of(s, item) + item.len() - item.trim_start().len() + 1;
                    tok.parse().map_err(|_| ParseError::new(col, tok, "expected a sequence entry"))
                })
                .collect()
        };
        let prefix = parse_list(prefix)?;
        let cycle = parse_list(cycle)?;
        if cycle.is_empty() {
            return Err(ParseError::new(s.len(), s.trim(), "the repeating part is empty"));
        }
        Ok(EventuallyPeriodic::new(prefix, cycle))
    }
}

/// Defining sequence `{nᵢ}` of a solenoid; entries are positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DefiningSequence(EventuallyPeriodic<u64>);

impl DefiningSequence {
    /// Panics on a zero entry or an empty cycle.
    pub fn new(prefix: Vec<u64>, cycle: Vec<u64>) -> Self {
        assert!(prefix.iter().chain(&cycle).all(|&n| n >= 1), "sequence entries must be positive");
        DefiningSequence(EventuallyPeriodic::new(prefix, cycle))
    }

    pub fn periodic(cycle: Vec<u64>) -> Self {
        Self::new(Vec::new(), cycle)
    }

    pub fn dyadic() -> Self {
        Self::periodic(vec![2])
    }

    pub fn circle() -> Self {
        Self::periodic(vec![1])
    }

    pub fn terms(&self) -> &EventuallyPeriodic<u64> {
        &self.0
    }

    pub fn prefix(&self) -> &[u64] {
        self.0.prefix()
    }

    pub fn cycle(&self) -> &[u64] {
        self.0.cycle()
    }

    /// Term `nᵢ` for the 1-based level `i`.
    pub fn level(&self, i: usize) -> u64 {
        *self.0.get(i - 1)
    }

    /// True when the tail is identically 1, so the inverse limit is a circle.
    pub fn is_circle(&self) -> bool {
        self.cycle().iter().all(|&n| n == 1)
    }

    /// Expands entries into ascending prime factors and drops 1-entries. An
    /// all-ones tail collapses to the canonical circle, discarding the prefix
    /// (which cannot change a circle).
    pub fn normalize(&self) -> Self {
        if self.is_circle() {
            return Self::circle();
        }
        let expand = |v: &[u64]| v.iter().flat_map(|&n| prime_factors(n)).collect::<Vec<_>>();
        Self::new(expand(self.prefix()), expand(self.cycle()))
    }

    pub fn is_normalized(&self) -> bool {
        *self == self.normalize()
    }

    /// Total multiplicity of every prime across the whole sequence.
    pub fn multiplicities(&self) -> PrimeMultiplicity {
        let infinite: BTreeSet<u64> = self.cycle().iter().flat_map(|&n| prime_factors(n)).collect();
        let mut counts: BTreeMap<u64, Count> = infinite.iter().map(|&p| (p, Count::Infinite)).collect();
        for p in self.prefix().iter().flat_map(|&n| prime_factors(n)) {
            if !infinite.contains(&p) {
                *counts.entry(p).or_insert(Count::Finite(0)) += Count::Finite(1);
            }
        }
        PrimeMultiplicity(counts)
    }

    /// Bing–McCord: the solenoids agree iff the primes occurring infinitely
    /// often coincide. Finite counts can always be equalized by dropping
    /// finitely many terms.
    pub fn homeomorphic(&self, other: &Self) -> bool {
        self.multiplicities().infinite_primes() == other.multiplicities().infinite_primes()
    }
}

impl fmt::Display for DefiningSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for DefiningSequence {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        let seq: EventuallyPeriodic<u64> = s.parse()?;
        if seq.prefix().iter().chain(seq.cycle()).any(|&n| n == 0) {
            return Err(ParseError::new(1, s.trim(), "sequence entries must be positive"));
        }
        Ok(DefiningSequence(seq))
    }
}

/// A natural number or ∞.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Count {
    Finite(u64),
    Infinite,
}

impl Count {
    pub fn is_infinite(self) -> bool {
        self == Count::Infinite
    }
}

impl std::ops::Add for Count {
    type Output = Count;

    fn add(self, rhs: Count) -> Count {
        match (self, rhs) {
            (Count::Finite(a), Count::Finite(b)) => Count::Finite(a + b),
            _ => Count::Infinite,
        }
    }
}

impl std::ops::AddAssign for Count {
    fn add_assign(&mut self, rhs: Count) {
        *self = *self + rhs;
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Count::Finite(n) => write!(f, "{n}"),
            Count::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Count {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "inf" => Ok(Count::Infinite),
            _ => s.parse().map(Count::Finite).map_err(|_| format!("`{s}` is neither a count nor `inf`")),
        }
    }
}

/// Prime → total multiplicity (≥ 1 or ∞); absent primes have multiplicity 0.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PrimeMultiplicity(BTreeMap<u64, Count>);

impl PrimeMultiplicity {
    pub fn get(&self, p: u64) -> Count {
        self.0.get(&p).copied().unwrap_or(Count::Finite(0))
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, Count)> + '_ {
        self.0.iter().map(|(&p, &c)| (p, c))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn infinite_primes(&self) -> BTreeSet<u64> {
        self.iter().filter(|(_, c)| c.is_infinite()).map(|(p, _)| p).collect()
    }
}

/// Prime factors of `n` with multiplicity, ascending; empty for 1.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        while n.is_multiple_of(p) {
            out.push(p);
            n /= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}
