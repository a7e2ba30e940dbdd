//! Subgroups of ℚ containing 1, described by per-prime height caps.
//!
//! `Q({k_p})` is the set of rationals whose lowest-terms denominator has
//! `p`-adic valuation below `k_p` for every prime `p`. A missing prime has
//! `k_p = 1`, so it may not occur in denominators at all.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{offset_of, ParseError};
use crate::sequence::{prime_factors, Count, DefiningSequence};

/// Elements of the limit groups are ordinary rationals in lowest terms.
pub type LimitRational = BigRational;

/// Prime → height cap `k ≥ 2` or ∞. Finite support by construction.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct HeightDescriptor(BTreeMap<u64, Count>);

impl HeightDescriptor {
    /// Entries with `k = 1` are dropped; `k = 0` and non-primes are rejected.
    pub fn new(entries: impl IntoIterator<Item = (u64, Count)>) -> Result<Self, String> {
        let mut map = BTreeMap::new();
        for (p, k) in entries {
            if prime_factors(p) != [p] {
                return Err(format!("{p} is not a prime"));
            }
            match k {
                Count::Finite(0) => return Err(format!("height of {p} must be at least 1")),
                Count::Finite(1) => {
                    map.remove(&p);
                }
                k => {
                    map.insert(p, k);
                }
            }
        }
        Ok(HeightDescriptor(map))
    }

    /// Height cap at `p` (1 when absent).
    pub fn get(&self, p: u64) -> Count {
        self.0.get(&p).copied().unwrap_or(Count::Finite(1))
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, Count)> + '_ {
        self.0.iter().map(|(&p, &k)| (p, k))
    }

    pub fn is_trivial(&self) -> bool {
        self.0.is_empty()
    }

    pub fn infinite_primes(&self) -> BTreeSet<u64> {
        self.iter().filter(|(_, k)| k.is_infinite()).map(|(p, _)| p).collect()
    }

    /// Caps are one more than the total prime multiplicities of the sequence.
    pub fn from_sequence(s: &DefiningSequence) -> Self {
        HeightDescriptor(s.multiplicities().iter().map(|(p, m)| (p, m + Count::Finite(1))).collect())
    }

    /// Membership of a rational in `Q({k_p})`.
    pub fn contains(&self, r: &LimitRational) -> bool {
        let mut den = r.denom().clone();
        for (p, k) in self.iter() {
            let p = BigInt::from(p);
            let mut e = 0u64;
            while den.is_multiple_of(&p) {
                den /= &p;
                e += 1;
            }
            if let Count::Finite(k) = k {
                if e >= k {
                    return false;
                }
            }
        }
        den.is_one()
    }

    /// Isomorphism of the subgroups: the ∞-sets agree. Finite discrepancies
    /// are absorbed by multiplying by a suitable integer.
    pub fn isomorphic(&self, other: &Self) -> bool {
        self.infinite_primes() == other.infinite_primes()
    }

    /// A defining sequence whose limit group is this subgroup, following the
    /// staircase construction: the j-th prime divides `n_i` exactly when
    /// `j ≤ i < j + k_j − 1`. The result is eventually constant; 1-entries
    /// are dropped from the prefix.
    pub fn to_sequence(&self) -> DefiningSequence {
        let Some(max_p) = self.0.keys().next_back().copied() else {
            return DefiningSequence::circle();
        };
        let primes = primes_up_to(max_p);
        let index = |p: u64| primes.binary_search(&p).expect("support is prime") + 1;
        // every finite window has closed and every infinite one has opened by level `settled`
        let settled = self
            .iter()
            .map(|(p, k)| match k {
                Count::Finite(k) => index(p) + k as usize - 1,
                Count::Infinite => index(p),
            })
            .max()
            .unwrap_or(1);
        let term = |i: usize| -> u64 {
            self.iter()
                .filter(|&(p, k)| {
                    let j = index(p);
                    j <= i
                        && match k {
                            Count::Finite(k) => i - j < k as usize - 1,
                            Count::Infinite => true,
                        }
                })
                .map(|(p, _)| p)
                .product()
        };
        let prefix: Vec<u64> = (1..settled).map(term).filter(|&n| n != 1).collect();
        DefiningSequence::new(prefix, vec![term(settled)])
    }
}

/// Does the denominator of `r` divide some partial product `n_1 ⋯ n_i`?
///
/// Works directly on the sequence: divides out common factors term by term
/// and stops once a whole period makes no progress.
pub fn limit_member(s: &DefiningSequence, r: &LimitRational) -> bool {
    let mut den = r.denom().clone();
    let strip = |den: &mut BigInt, n: u64| {
        let g = den.gcd(&BigInt::from(n));
        *den /= g;
    };
    for &n in s.prefix() {
        if den.is_one() {
            return true;
        }
        strip(&mut den, n);
    }
    loop {
        if den.is_one() {
            return true;
        }
        let before = den.clone();
        for &n in s.cycle() {
            strip(&mut den, n);
        }
        if den == before {
            return false;
        }
    }
}

/// `n_1 ⋯ n_{k−1}`, the multiplier carrying the limit group of `s` onto
/// that of `s` with its first `k − 1` terms removed.
pub fn shift_multiplier(s: &DefiningSequence, k: usize) -> LimitRational {
    assert!(k >= 1, "levels start at 1");
    let product: BigInt = (1..k).map(|i| BigInt::from(s.level(i))).product();
    BigRational::from_integer(product)
}

fn primes_up_to(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if sieve[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
    }
    out
}

impl fmt::Display for HeightDescriptor {
    /// Comma-separated `p:k` pairs, `inf` for ∞; the trivial descriptor is empty.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|(p, k)| format!("{p}:{k}")).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for HeightDescriptor {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        if s.trim().is_empty() {
            return Ok(HeightDescriptor::default());
        }
        let mut entries = Vec::new();
        for item in s.split(',') {
            let tok = item.trim();
            let col = offset_of(s, item) + item.len() - item.trim_start().len() + 1;
            let err = |m: String| ParseError::new(col, tok, m);
            let (p, k) = tok.split_once(':').ok_or_else(|| err("expected `p:k`".into()))?;
            let p: u64 = p.trim().parse().map_err(|_| err(format!("`{p}` is not a prime")))?;
            let k: Count = k.trim().parse().map_err(err)?;
            HeightDescriptor::new([(p, k)]).map_err(err)?;
            entries.push((p, k));
        }
        HeightDescriptor::new(entries).map_err(|m| ParseError::new(1, s.trim(), m))
    }
}

/// Parses `p/q` or an integer `p`; the result is reduced to lowest terms.
pub fn parse_rational(s: &str) -> Result<LimitRational, ParseError> {
    let t = s.trim();
    let bad = || ParseError::new(1, t, "expected a rational `p/q`");
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(ParseError::new(1, t, "zero denominator"));
    }
    Ok(BigRational::new(num, den))
}

pub fn format_rational(r: &LimitRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
