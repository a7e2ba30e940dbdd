//! Finite permutations on `{1, …, m}`.
//!
//! Composition is left to right: `p.compose(&q)` first applies `p`, then `q`,
//! which matches the path order used when evaluating words.

use std::fmt;

use crate::error::{tokens, Error, ParseError, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    // 0-based images
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation { images: (0..degree as u32).collect() }
    }

    /// Builds a permutation from 1-based images: entry `j - 1` is the image of `j`.
    pub fn from_images(images: &[u32]) -> Result<Self, String> {
        let m = images.len();
        let mut seen = vec![false; m];
        for &j in images {
            if j == 0 || j as usize > m || std::mem::replace(&mut seen[j as usize - 1], true) {
                return Err(format!("{images:?} is not a permutation of 1..={m}"));
            }
        }
        Ok(Permutation { images: images.iter().map(|j| j - 1).collect() })
    }

    /// Builds a permutation of the given degree from disjoint 1-based cycles.
    pub fn from_cycles(degree: usize, cycles: &[&[u32]]) -> Result<Self, String> {
        let mut images: Vec<u32> = (1..=degree as u32).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (i, &a) in cycle.iter().enumerate() {
                if a == 0 || a as usize > degree {
                    return Err(format!("point {a} is outside 1..={degree}"));
                }
                if std::mem::replace(&mut touched[a as usize - 1], true) {
                    return Err(format!("point {a} appears twice"));
                }
                images[a as usize - 1] = cycle[(i + 1) % cycle.len()];
            }
        }
        Permutation::from_images(&images)
    }

    /// The transposition of the 1-based points `i` and `j`.
    pub fn transposition(degree: usize, i: u32, j: u32) -> Self {
        let mut p = Self::identity(degree);
        p.images.swap(i as usize - 1, j as usize - 1);
        p
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// 1-based image of the 1-based point `j`.
    pub fn image(&self, j: u32) -> u32 {
        self.images[j as usize - 1] + 1
    }

    /// 1-based image array.
    pub fn images(&self) -> Vec<u32> {
        self.images.iter().map(|j| j + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    /// `self` then `other`: the result sends `j` to `other(self(j))`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(self.then_unchecked(other))
    }

    pub(crate) fn then_unchecked(&self, other: &Self) -> Self {
        Permutation { images: self.images.iter().map(|&j| other.images[j as usize]).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Self::identity(self.degree());
        let mut sq = base;
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                out = out.then_unchecked(&sq);
            }
            sq = sq.then_unchecked(&sq);
            k >>= 1;
        }
        out
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self.then_unchecked(other) == other.then_unchecked(self)
    }

    /// All cycles, fixed points included, each starting at its least point,
    /// ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                cycle.push(j as u32 + 1);
                j = self.images[j] as usize;
            }
            out.push(cycle);
        }
        out
    }

    /// Parses cycle notation such as `(1 2 3)(4 5)` or `id`.
    pub fn parse_cycles(degree: usize, s: &str) -> Result<Self, ParseError> {
        let s = s.trim();
        if s == "id" {
            return Ok(Self::identity(degree));
        }
        let mut cycles: Vec<Vec<u32>> = Vec::new();
        let mut rest = s;
        let mut offset = 0;
        while !rest.is_empty() {
            let lead = rest.len() - rest.trim_start().len();
            offset += lead;
            rest = rest.trim_start();
            if rest.is_empty() {
                break;
            }
            if !rest.starts_with('(') {
                return Err(ParseError::new(offset + 1, rest, "expected `(` or `id`"));
            }
            let close = rest.find(')').ok_or_else(|| ParseError::new(offset + 1, rest, "unclosed cycle"))?;
            let body = &rest[1..close];
            let mut cycle = Vec::new();
            for (col, tok) in tokens(body) {
                let a: u32 =
                    tok.parse().map_err(|_| ParseError::new(offset + 1 + col, tok, "cycle entry is not a point"))?;
                cycle.push(a);
            }
            cycles.push(cycle);
            offset += close + 1;
            rest = &rest[close + 1..];
        }
        let refs: Vec<&[u32]> = cycles.iter().map(Vec::as_slice).collect();
        Self::from_cycles(degree, &refs).map_err(|m| ParseError::new(1, s, m))
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation without fixed points; `id` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return f.write_str("id");
        }
        for c in cycles {
            let body: Vec<String> = c.iter().map(u32::to_string).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

/// All permutations of the given degree in lexicographic order of their
/// image arrays.
pub fn all_permutations(degree: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut current: Vec<u32> = (0..degree as u32).collect();
    loop {
        out.push(Permutation { images: current.clone() });
        // next lexicographic permutation
        let Some(i) = (1..current.len()).rev().find(|&i| current[i - 1] < current[i]) else {
            return out;
        };
        let j = (i..current.len()).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
    }
}
