//! Braid words and the Artin action on the free group of strand meridians.
//!
//! Chirality convention: the positive generator σᵢ acts by
//! `xᵢ ↦ xᵢ xᵢ₊₁ xᵢ⁻¹, xᵢ₊₁ ↦ xᵢ` and the letters of a braid act left to
//! right. With this choice `σ₁σ₂…σₙ₋₁` sends `xₖ ↦ xₖ₋₁` for `k > 1`. The
//! drawing conventions behind the dyadic examples are not pinned down, and
//! under this action they correspond to the negative-sign braids, which is
//! what the built-in schemes use.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{tokens, Error, ParseError, Result};
use crate::perm::Permutation;
use crate::word::{FreeWord, Letter};

/// A strand meridian `x<k>` of a single braid piece.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Strand(pub u32);

impl fmt::Display for Strand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

impl Letter for Strand {
    fn parse_letter(token: &str) -> std::result::Result<Self, String> {
        token
            .strip_prefix('x')
            .and_then(|k| k.parse::<u32>().ok())
            .filter(|&k| k >= 1)
            .map(Strand)
            .ok_or_else(|| format!("expected a strand letter x<k>, got `{token}`"))
    }
}

/// A word in the braid generators on `strands` strands. Letter `g` stands
/// for σ_{|g|} with the sign of `g`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self> {
        if strands == 0 {
            return Err(Error::StrandOutOfRange { strand: 0, strands });
        }
        for &g in &letters {
            let i = g.unsigned_abs() as usize;
            if g == 0 || i >= strands {
                return Err(Error::StrandOutOfRange { strand: i, strands });
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    /// `σ₁σ₂…σₙ₋₁`, whose closure is the unknot.
    pub fn unknot(n: usize) -> Self {
        Self::new(n, (1..n as i32).collect()).expect("n >= 1")
    }

    /// `(σ₁…σₙ₋₁)ⁿ`.
    pub fn full_twist(n: usize) -> Self {
        let one = Self::unknot(n);
        Self::new(n, one.letters.repeat(n)).expect("n >= 1")
    }

    /// Flips the sign of every letter.
    pub fn mirror(&self) -> Self {
        BraidWord { strands: self.strands, letters: self.letters.iter().map(|g| -g).collect() }
    }

    /// The group inverse: reversed and mirrored.
    pub fn inverse(&self) -> Self {
        BraidWord { strands: self.strands, letters: self.letters.iter().rev().map(|g| -g).collect() }
    }

    pub fn concat(&self, other: &Self) -> Result<Self> {
        if self.strands != other.strands {
            return Err(Error::StrandOutOfRange { strand: other.strands, strands: self.strands });
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(BraidWord { strands: self.strands, letters })
    }

    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|g| g.signum() as i64).sum()
    }

    /// The strand permutation; σᵢ contributes the transposition (i i+1).
    pub fn permutation(&self) -> Permutation {
        self.letters.iter().fold(Permutation::identity(self.strands), |p, &g| {
            let i = g.unsigned_abs();
            p.then_unchecked(&Permutation::transposition(self.strands, i, i + 1))
        })
    }

    /// Number of components of the closed braid.
    pub fn closure_components(&self) -> usize {
        self.permutation().cycles().len()
    }

    /// Image of `x_k` under the Artin action of the braid.
    pub fn artin_image(&self, k: usize) -> Result<FreeWord<Strand>> {
        if k == 0 || k > self.strands {
            return Err(Error::StrandOutOfRange { strand: k, strands: self.strands });
        }
        let mut w = FreeWord::letter(Strand(k as u32));
        for &g in &self.letters {
            w = w.substitute_partial(&generator_action(g));
        }
        Ok(w)
    }

    /// Images of every strand meridian, `x_1` first.
    pub fn artin_images(&self) -> Vec<FreeWord<Strand>> {
        (1..=self.strands).map(|k| self.artin_image(k).expect("in range")).collect()
    }
}

fn generator_action(g: i32) -> BTreeMap<Strand, FreeWord<Strand>> {
    let i = g.unsigned_abs();
    let (a, b) = (Strand(i), Strand(i + 1));
    let xa = FreeWord::letter(a);
    let xb = FreeWord::letter(b);
    let mut m = BTreeMap::new();
    if g > 0 {
        m.insert(a, xa.mul(&xb).mul(&xa.inverse()));
        m.insert(b, xa);
    } else {
        m.insert(a, xb.clone());
        m.insert(b, xb.inverse().mul(&xa).mul(&xb));
    }
    m
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}:", self.strands)?;
        for g in &self.letters {
            write!(f, " {g}")?;
        }
        Ok(())
    }
}

impl FromStr for BraidWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (head, body) = s.split_once(':').ok_or_else(|| ParseError::new(1, s.trim(), "expected `n=<strands>:`"))?;
        let n_text = head.trim();
        let strands: usize = n_text
            .strip_prefix("n=")
            .and_then(|n| n.trim().parse().ok())
            .filter(|&n| n >= 1)
            .ok_or_else(|| ParseError::new(s.find(n_text).unwrap_or(0) + 1, n_text, "expected `n=<strands>`"))?;
        let base = head.chars().count() + 1;
        let mut letters = Vec::new();
        for (col, tok) in tokens(body) {
            let g: i32 =
                tok.parse().ok().filter(|&g: &i32| g != 0 && (g.unsigned_abs() as usize) < strands).ok_or_else(
                    || ParseError::new(base + col, tok, format!("expected a nonzero generator index below {strands}")),
                )?;
            letters.push(g);
        }
        BraidWord::new(strands, letters)
    }
}

/// One row of the reference table of hyperbolic braids in a solid torus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReferenceBraid {
    pub strands: usize,
    pub variant: usize,
    pub letters: &'static [i32],
    /// Recorded hyperbolic volume, kept verbatim; never recomputed.
    pub volume: &'static str,
}

impl ReferenceBraid {
    pub fn braid(&self) -> BraidWord {
        BraidWord::new(self.strands, self.letters.to_vec()).expect("table rows are valid")
    }
}

pub const REFERENCE_BRAIDS: [ReferenceBraid; 7] = [
    ReferenceBraid { strands: 3, variant: 1, letters: &[-1, 2], volume: "4.05" },
    ReferenceBraid { strands: 3, variant: 2, letters: &[-1, -1, -1, 2], volume: "5.97" },
    ReferenceBraid { strands: 4, variant: 1, letters: &[-1, 2, 3], volume: "4.85" },
    ReferenceBraid { strands: 4, variant: 2, letters: &[-1, 2, -3], volume: "7.51" },
    ReferenceBraid { strands: 5, variant: 1, letters: &[-1, 2, 3, 4], volume: "5.08" },
    ReferenceBraid { strands: 5, variant: 2, letters: &[-1, -2, 3, 4], volume: "5.90" },
    ReferenceBraid { strands: 5, variant: 3, letters: &[-1, 2, -3, 4], volume: "11.2" },
];

/// Looks up a reference braid by strand count and 1-based variant.
pub fn reference_braid(n: usize, variant: usize) -> Result<(BraidWord, &'static str)> {
    REFERENCE_BRAIDS
        .iter()
        .find(|r| r.strands == n && r.variant == variant)
        .map(|r| (r.braid(), r.volume))
        .ok_or(Error::UnknownRow { n, variant })
}
