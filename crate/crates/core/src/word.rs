//! Words in free groups.
//!
//! A [`FreeWord`] is always freely reduced: every constructor and operation
//! cancels adjacent inverse letters, so two words are equal as values exactly
//! when they are equal as elements of the free group. Letters are stored as
//! syllables `(symbol, exponent)` so that large powers stay compact.
//!
//! Text syntax: whitespace-separated tokens `sym` or `sym^<int>`, with `1`
//! denoting the empty word.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{tokens, Error, ParseError, Result};

/// Anything that can serve as a free-group generator in a [`FreeWord`].
pub trait Letter: Clone + Ord + fmt::Debug + fmt::Display {
    /// Parses a single letter token (without exponent).
    fn parse_letter(token: &str) -> std::result::Result<Self, String>;
}

/// Generators of the presentations: torus longitudes `t<i>`, strand meridians
/// `x<i>.<k>`, the renamed dyadic generators `s<i>` / `z<i>`, and free-form
/// names for hand-written presentations.
///
/// The derived order is (namespace, level, strand), with namespaces ordered
/// as the variants are declared.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    /// Longitude of the torus at a level (level ≥ 0).
    T(u32),
    /// Meridian of strand `strand` at `level` (both ≥ 1).
    X {
        level: u32,
        strand: u32,
    },
    /// Longitude in the dyadic form.
    S(u32),
    /// Meridian in the dyadic form.
    Z(u32),
    Named(String),
}

impl Symbol {
    pub fn t(level: u32) -> Self {
        Symbol::T(level)
    }

    pub fn x(level: u32, strand: u32) -> Self {
        assert!(level >= 1 && strand >= 1, "x{level}.{strand} is not a valid meridian");
        Symbol::X { level, strand }
    }

    pub fn named(name: &str) -> Self {
        Symbol::Named(name.to_string())
    }

    /// The level the symbol belongs to, if it is level-indexed.
    pub fn level(&self) -> Option<u32> {
        match *self {
            Symbol::T(i) | Symbol::S(i) | Symbol::Z(i) => Some(i),
            Symbol::X { level, .. } => Some(level),
            Symbol::Named(_) => None,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::T(i) => write!(f, "t{i}"),
            Symbol::X { level, strand } => write!(f, "x{level}.{strand}"),
            Symbol::S(i) => write!(f, "s{i}"),
            Symbol::Z(i) => write!(f, "z{i}"),
            Symbol::Named(name) => f.write_str(name),
        }
    }
}

fn parse_index(s: &str) -> Option<u32> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

impl Letter for Symbol {
    fn parse_letter(token: &str) -> std::result::Result<Self, String> {
        let mut chars = token.chars();
        let head = chars.next().ok_or_else(|| "empty symbol".to_string())?;
        let rest = chars.as_str();
        let indexed = rest.starts_with(|c: char| c.is_ascii_digit());
        match head {
            't' | 's' | 'z' if indexed => {
                let i = parse_index(rest).ok_or_else(|| format!("malformed level index in `{token}`"))?;
                Ok(match head {
                    't' => Symbol::T(i),
                    's' => Symbol::S(i),
                    _ => Symbol::Z(i),
                })
            }
            'x' if indexed => {
                let (level, strand) = rest
                    .split_once('.')
                    .and_then(|(a, b)| Some((parse_index(a)?, parse_index(b)?)))
                    .ok_or_else(|| format!("expected x<level>.<strand>, got `{token}`"))?;
                if level == 0 || strand == 0 {
                    return Err(format!("meridian indices start at 1 in `{token}`"));
                }
                Ok(Symbol::X { level, strand })
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                if rest.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                    Ok(Symbol::Named(token.to_string()))
                } else {
                    Err(format!("invalid generator name `{token}`"))
                }
            }
            _ => Err(format!("invalid generator name `{token}`")),
        }
    }
}

impl FromStr for Symbol {
    type Err = ParseError;

    fn from_str(s: &str) -> std::result::Result<Self, ParseError> {
        Symbol::parse_letter(s.trim()).map_err(|m| ParseError::new(1, s.trim(), m))
    }
}

/// A freely reduced word over the letters `S`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FreeWord<S = Symbol> {
    syllables: Vec<(S, i64)>,
}

impl<S> Default for FreeWord<S> {
    fn default() -> Self {
        FreeWord { syllables: Vec::new() }
    }
}

impl<S: Letter> FreeWord<S> {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn letter(s: S) -> Self {
        Self::power(s, 1)
    }

    pub fn power(s: S, exponent: i64) -> Self {
        let mut w = Self::identity();
        w.push(s, exponent);
        w
    }

    /// Builds the reduced word of a sequence of signed letters or syllables.
    pub fn from_letters<I: IntoIterator<Item = (S, i64)>>(letters: I) -> Self {
        let mut w = Self::identity();
        for (s, e) in letters {
            w.push(s, e);
        }
        w
    }

    fn push(&mut self, s: S, e: i64) {
        if e == 0 {
            return;
        }
        if let Some(last) = self.syllables.last_mut() {
            if last.0 == s {
                last.1 += e;
                if last.1 == 0 {
                    self.syllables.pop();
                }
                return;
            }
        }
        self.syllables.push((s, e));
    }

    pub fn syllables(&self) -> &[(S, i64)] {
        &self.syllables
    }

    /// Expands the syllables into unit letters `(symbol, ±1)`.
    pub fn letters(&self) -> impl Iterator<Item = (&S, i64)> + '_ {
        self.syllables.iter().flat_map(|(s, e)| std::iter::repeat_n((s, e.signum()), e.unsigned_abs() as usize))
    }

    /// Letter length.
    pub fn len(&self) -> usize {
        self.syllables.iter().map(|(_, e)| e.unsigned_abs() as usize).sum()
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_identity()
    }

    pub fn inverse(&self) -> Self {
        FreeWord { syllables: self.syllables.iter().rev().map(|(s, e)| (s.clone(), -e)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut w = self.clone();
        w.append(other);
        w
    }

    fn append(&mut self, other: &Self) {
        for (s, e) in &other.syllables {
            self.push(s.clone(), *e);
        }
    }

    /// Appends `other^n`.
    fn append_pow(&mut self, other: &Self, n: i64) {
        if let [(s, e)] = other.syllables.as_slice() {
            self.push(s.clone(), e * n);
            return;
        }
        let base = if n < 0 { other.inverse() } else { other.clone() };
        for _ in 0..n.unsigned_abs() {
            self.append(&base);
        }
    }

    pub fn pow(&self, n: i64) -> Self {
        let mut w = Self::identity();
        w.append_pow(self, n);
        w
    }

    /// `a⁻¹ b⁻¹ a b`.
    pub fn commutator(a: &Self, b: &Self) -> Self {
        a.inverse().mul(&b.inverse()).mul(a).mul(b)
    }

    /// Applies the homomorphism sending each letter to its image.
    pub fn substitute<T: Letter>(&self, images: &BTreeMap<S, FreeWord<T>>) -> Result<FreeWord<T>> {
        let mut out = FreeWord::identity();
        for (s, e) in &self.syllables {
            let image = images.get(s).ok_or_else(|| Error::MissingImage(s.to_string()))?;
            out.append_pow(image, *e);
        }
        Ok(out)
    }

    /// Like [`FreeWord::substitute`], but letters without an image are kept.
    pub fn substitute_partial(&self, images: &BTreeMap<S, FreeWord<S>>) -> Self {
        let mut out = Self::identity();
        for (s, e) in &self.syllables {
            match images.get(s) {
                Some(image) => out.append_pow(image, *e),
                None => out.push(s.clone(), *e),
            }
        }
        out
    }

    pub fn map_symbols<T: Letter>(&self, mut f: impl FnMut(&S) -> T) -> FreeWord<T> {
        FreeWord::from_letters(self.syllables.iter().map(|(s, e)| (f(s), *e)))
    }

    pub fn exponent_sum(&self, s: &S) -> i64 {
        self.syllables.iter().filter(|(t, _)| t == s).map(|(_, e)| e).sum()
    }

    pub fn total_exponent(&self) -> i64 {
        self.syllables.iter().map(|(_, e)| e).sum()
    }

    /// Number of letters equal to `s` or its inverse.
    pub fn occurrences(&self, s: &S) -> usize {
        self.syllables.iter().filter(|(t, _)| t == s).map(|(_, e)| e.unsigned_abs() as usize).sum()
    }

    pub fn contains(&self, s: &S) -> bool {
        self.syllables.iter().any(|(t, _)| t == s)
    }

    pub fn symbols(&self) -> BTreeSet<S> {
        self.syllables.iter().map(|(s, _)| s.clone()).collect()
    }

    /// Cyclic reduction: conjugates away matching first/last letters.
    pub fn cyclically_reduced(&self) -> Self {
        let mut syl = self.syllables.clone();
        while syl.len() >= 2 && syl[0].0 == syl[syl.len() - 1].0 {
            let (_, e) = syl.pop().unwrap();
            syl[0].1 += e;
            if syl[0].1 == 0 {
                syl.remove(0);
            }
        }
        FreeWord { syllables: syl }
    }

    /// Rotation of a cyclically reduced word starting at syllable `i`.
    pub(crate) fn rotated(&self, i: usize) -> Self {
        let mut syl = self.syllables[i..].to_vec();
        syl.extend_from_slice(&self.syllables[..i]);
        FreeWord { syllables: syl }
    }

    /// Canonical representative of the cyclic word up to inversion: the least
    /// syllable rotation of the word or its inverse.
    pub fn cyclic_key(&self) -> Self {
        let w = self.cyclically_reduced();
        let inv = w.inverse();
        (0..w.syllables.len().max(1))
            .flat_map(|i| if w.is_identity() { vec![w.clone()] } else { vec![w.rotated(i), inv.rotated(i)] })
            .min()
            .unwrap_or_default()
    }
}

impl<S: Letter> fmt::Display for FreeWord<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return f.write_str("1");
        }
        for (i, (s, e)) in self.syllables.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if *e == 1 {
                write!(f, "{s}")?;
            } else {
                write!(f, "{s}^{e}")?;
            }
        }
        Ok(())
    }
}

impl<S: Letter> FromStr for FreeWord<S> {
    type Err = ParseError;

    fn from_str(s: &str) -> std::result::Result<Self, ParseError> {
        let mut w = FreeWord::identity();
        for (col, tok) in tokens(s) {
            if tok == "1" {
                continue;
            }
            let (name, exp) = match tok.split_once('^') {
                Some((name, exp)) => {
                    let exp: i64 = exp.parse().map_err(|_| ParseError::new(col, tok, "exponent is not an integer"))?;
                    (name, exp)
                }
                None => (tok, 1),
            };
            let letter = S::parse_letter(name).map_err(|m| ParseError::new(col, tok, m))?;
            w.push(letter, exp);
        }
        Ok(w)
    }
}

impl<S: Letter> std::ops::Mul for &FreeWord<S> {
    type Output = FreeWord<S>;

    fn mul(self, rhs: Self) -> FreeWord<S> {
        FreeWord::mul(self, rhs)
    }
}
