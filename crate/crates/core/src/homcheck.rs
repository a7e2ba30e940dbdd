//! Homomorphisms from presented groups to symmetric groups.
//!
//! Assignment text format:
//!
//! ```text
//! deg=3
//! x1.1 -> (1 2)
//! x1.2 -> (2 3)
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{offset_of, tokens, Error, ParseError, Result};
use crate::perm::{all_permutations, Permutation};
use crate::presentation::GroupPresentation;
use crate::word::{FreeWord, Symbol};

/// Images of generators in the symmetric group of a fixed degree.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct HomAssignment {
    degree: usize,
    images: BTreeMap<Symbol, Permutation>,
}

impl HomAssignment {
    pub fn new(degree: usize, images: BTreeMap<Symbol, Permutation>) -> Result<Self> {
        if let Some(p) = images.values().find(|p| p.degree() != degree) {
            return Err(Error::DegreeMismatch(degree, p.degree()));
        }
        Ok(HomAssignment { degree, images })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn images(&self) -> &BTreeMap<Symbol, Permutation> {
        &self.images
    }

    pub fn image(&self, g: &Symbol) -> Option<&Permutation> {
        self.images.get(g)
    }

    /// Image of a word, letters applied left to right.
    pub fn evaluate(&self, w: &FreeWord) -> Result<Permutation> {
        let mut acc = Permutation::identity(self.degree);
        for (s, e) in w.syllables() {
            let p = self.images.get(s).ok_or_else(|| Error::MissingImage(s.to_string()))?;
            acc = acc.then_unchecked(&p.pow(*e));
        }
        Ok(acc)
    }

    /// The assignment `g ↦ evaluate(words[g])`, e.g. to carry a hom of a
    /// reduced presentation back to the original generators.
    pub fn pull_back(&self, words: &BTreeMap<Symbol, FreeWord>) -> Result<Self> {
        let images = words.iter().map(|(g, w)| Ok((g.clone(), self.evaluate(w)?))).collect::<Result<_>>()?;
        Ok(HomAssignment { degree: self.degree, images })
    }

    /// Whether two of the images fail to commute.
    pub fn is_non_abelian(&self) -> bool {
        let ps: Vec<&Permutation> = self.images.values().collect();
        ps.iter().enumerate().any(|(i, p)| ps[i + 1..].iter().any(|q| !p.commutes_with(q)))
    }
}

impl fmt::Display for HomAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "deg={}", self.degree)?;
        for (g, p) in &self.images {
            writeln!(f, "{g} -> {p}")?;
        }
        Ok(())
    }
}

impl FromStr for HomAssignment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut degree = None;
        let mut images = BTreeMap::new();
        for (idx, raw) in s.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("");
            let Some((col, first)) = tokens(line).next() else { continue };
            let at = |e: ParseError, offset: usize| Error::from(e.relocated(line_no, offset));
            if let Some(d) = first.strip_prefix("deg=") {
                if degree.is_some() {
                    return Err(at(ParseError::new(col, first, "duplicate degree header"), 0));
                }
                degree =
                    Some(d.parse::<usize>().map_err(|_| at(ParseError::new(col, first, "degree is not a number"), 0))?);
                continue;
            }
            let Some(m) = degree else {
                return Err(at(ParseError::new(col, first, "expected `deg=<m>` first"), 0));
            };
            let Some((lhs, rhs)) = line.split_once("->") else {
                return Err(at(ParseError::new(col, first, "expected `<generator> -> <cycles>`"), 0));
            };
            let g = lhs.parse::<Symbol>().map_err(|e| at(e, col - 1))?;
            let p = Permutation::parse_cycles(m, rhs).map_err(|e| {
                let lead = rhs.len() - rhs.trim_start().len();
                at(e, offset_of(raw, rhs) + lead)
            })?;
            if images.insert(g, p).is_some() {
                return Err(at(ParseError::new(col, lhs.trim(), "generator assigned twice"), 0));
            }
        }
        let degree = degree.ok_or_else(|| ParseError::new(1, "", "missing `deg=<m>` header"))?;
        HomAssignment::new(degree, images)
    }
}

/// Whether every relator of `p` maps to the identity.
pub fn verify_hom(p: &GroupPresentation, a: &HomAssignment) -> Result<bool> {
    if let Some(g) = p.generators().iter().find(|g| a.image(g).is_none()) {
        return Err(Error::MissingImage(g.to_string()));
    }
    for r in p.relators() {
        if !a.evaluate(r)?.is_identity() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Assignment for the dyadic form of the trefoil scheme truncated at `L`,
/// in degree `L + 2`: `z_i ↦ (i, i+1, i+2)` for `1 ≤ i ≤ L`, the outermost
/// meridian `z_0 ↦ (1 3 2)`, and every `s_i ↦ id`.
pub fn alternating_witness(levels: usize) -> HomAssignment {
    assert!(levels >= 1, "the witness needs at least one level");
    let degree = levels + 2;
    let mut images = BTreeMap::new();
    for i in 0..levels as u32 {
        images.insert(Symbol::S(i), Permutation::identity(degree));
    }
    images.insert(Symbol::Z(0), Permutation::from_cycles(degree, &[&[1, 3, 2]]).expect("valid cycle"));
    for i in 1..=levels as u32 {
        images.insert(Symbol::Z(i), Permutation::from_cycles(degree, &[&[i, i + 1, i + 2]]).expect("valid cycle"));
    }
    HomAssignment { degree, images }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    /// Homomorphisms with non-Abelian image, in lexicographic order of the
    /// image tuple.
    pub homs: Vec<HomAssignment>,
    /// Set when the node budget ran out before the search was exhaustive.
    pub budget_exhausted: bool,
    pub nodes: u64,
}

/// Exhaustive backtracking over generator images in degree `m`, checking each
/// relator as soon as its last generator is assigned.
pub fn search_homs(p: &GroupPresentation, m: usize, budget: u64) -> SearchResult {
    let gens = p.generators();
    let index: BTreeMap<&Symbol, usize> = gens.iter().enumerate().map(|(i, g)| (g, i)).collect();
    // relators grouped by the position of their last generator
    let mut checks: Vec<Vec<&FreeWord>> = vec![Vec::new(); gens.len()];
    for r in p.relators() {
        if let Some(last) = r.symbols().iter().map(|s| index[s]).max() {
            checks[last].push(r);
        }
    }
    let mut search = Search {
        gens,
        checks,
        perms: all_permutations(m),
        degree: m,
        current: BTreeMap::new(),
        homs: Vec::new(),
        nodes: 0,
        budget,
        exhausted: false,
    };
    search.extend(0);
    SearchResult { homs: search.homs, budget_exhausted: search.exhausted, nodes: search.nodes }
}

struct Search<'a> {
    gens: &'a [Symbol],
    checks: Vec<Vec<&'a FreeWord>>,
    perms: Vec<Permutation>,
    degree: usize,
    current: BTreeMap<Symbol, Permutation>,
    homs: Vec<HomAssignment>,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

impl Search<'_> {
    fn extend(&mut self, depth: usize) {
        if depth == self.gens.len() {
            let a = HomAssignment { degree: self.degree, images: self.current.clone() };
            if a.is_non_abelian() {
                self.homs.push(a);
            }
            return;
        }
        let g = &self.gens[depth];
        for pi in 0..self.perms.len() {
            if self.nodes >= self.budget {
                self.exhausted = true;
                return;
            }
            self.nodes += 1;
            self.current.insert(g.clone(), self.perms[pi].clone());
            let a = HomAssignment { degree: self.degree, images: std::mem::take(&mut self.current) };
            let ok = self.checks[depth].iter().all(|r| a.evaluate(r).is_ok_and(|p| p.is_identity()));
            self.current = a.images;
            if ok {
                self.extend(depth + 1);
                if self.exhausted {
                    return;
                }
            }
        }
        self.current.remove(g);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::EmbeddingScheme;
    use crate::presentation::{dyadic_form, tietze_reduce, tietze_reduce_traced, truncate};
    use crate::sequence::DefiningSequence;

    fn perm(m: usize, s: &str) -> Permutation {
        Permutation::parse_cycles(m, s).unwrap()
    }

    fn assignment(m: usize, pairs: &[(&str, &str)]) -> HomAssignment {
        let images = pairs.iter().map(|(g, p)| (g.parse().unwrap(), perm(m, p))).collect();
        HomAssignment::new(m, images).unwrap()
    }

    #[test]
    fn identity_assignment_always_verifies() {
        let p = truncate(&EmbeddingScheme::trefoil(), 2).unwrap();
        let images = p.generators().iter().map(|g| (g.clone(), Permutation::identity(4))).collect();
        assert!(verify_hom(&p, &HomAssignment::new(4, images).unwrap()).unwrap());
    }

    #[test]
    fn consecutive_three_cycles() {
        let p: GroupPresentation = "gens: a b\nrel: b a^-2 b a\n".parse().unwrap();
        // b = a⁻¹ b⁻¹ a²
        let a = assignment(4, &[("a", "(1 2 3)"), ("b", "(2 3 4)")]);
        assert!(verify_hom(&p, &a).unwrap());
        let w: FreeWord = "a^-1 b^-1 a^2".parse().unwrap();
        let img = a.evaluate(&w).unwrap();
        assert_eq!((img.image(1), img.image(2), img.image(3), img.image(4)), (1, 3, 4, 2));
    }

    #[test]
    fn trefoil_onto_s3() {
        let p = tietze_reduce(&truncate(&EmbeddingScheme::trefoil(), 1).unwrap());
        let a = assignment(3, &[("x1.1", "(1 2)"), ("x1.2", "(2 3)")]);
        assert!(verify_hom(&p, &a).unwrap());
        let found = search_homs(&p, 3, 1_000_000);
        assert!(!found.budget_exhausted);
        assert!(found.homs.contains(&a));
        assert!(found.homs.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn missing_image() {
        let p: GroupPresentation = "gens: a b\nrel: a b\n".parse().unwrap();
        let a = assignment(3, &[("a", "(1 2)")]);
        assert_eq!(verify_hom(&p, &a), Err(Error::MissingImage("b".into())));
    }

    #[test]
    fn witness_verifies() {
        let e = EmbeddingScheme::trefoil();
        for l in 1..=20 {
            let a = alternating_witness(l);
            assert_eq!(a.degree(), l + 2);
            assert!(verify_hom(&dyadic_form(&e, l).unwrap(), &a).unwrap(), "L={l}");
            assert_eq!(a.is_non_abelian(), l >= 2);
        }
        let a = alternating_witness(1);
        assert_eq!(a.image(&Symbol::Z(1)).unwrap().to_string(), "(1 2 3)");
        assert!(a.image(&Symbol::S(0)).unwrap().is_identity());
    }

    #[test]
    fn witness_fails_on_unknotted_scheme() {
        let e = EmbeddingScheme::unknotted(&DefiningSequence::dyadic());
        assert!(!verify_hom(&dyadic_form(&e, 2).unwrap(), &alternating_witness(2)).unwrap());
    }

    #[test]
    fn transport_through_reduction() {
        for e in [EmbeddingScheme::trefoil(), EmbeddingScheme::unknotted(&DefiningSequence::dyadic())] {
            for l in 1..=4 {
                let p = dyadic_form(&e, l).unwrap();
                let red = tietze_reduce_traced(&p);
                for a in search_homs(&red.presentation, 3, 1_000_000).homs {
                    assert!(verify_hom(&red.presentation, &a).unwrap());
                    let back = a.pull_back(&red.expansion()).unwrap();
                    assert!(verify_hom(&p, &back).unwrap());
                }
            }
        }
        // and the witness pushes forward to the reduced group
        let p = dyadic_form(&EmbeddingScheme::trefoil(), 3).unwrap();
        let red = tietze_reduce_traced(&p);
        let w = alternating_witness(3);
        let restricted: BTreeMap<Symbol, FreeWord> =
            red.presentation.generators().iter().map(|g| (g.clone(), FreeWord::letter(g.clone()))).collect();
        assert!(verify_hom(&red.presentation, &w.pull_back(&restricted).unwrap()).unwrap());
        assert_eq!(w.pull_back(&red.expansion()).unwrap(), w);
    }

    #[test]
    fn abelian_groups_have_no_witness() {
        let p: GroupPresentation = "gens: a b\nrel: a^-1 b^-1 a b\n".parse().unwrap();
        let r = search_homs(&p, 3, 1_000_000);
        assert!(r.homs.is_empty() && !r.budget_exhausted);
        let e = EmbeddingScheme::unknotted(&DefiningSequence::dyadic());
        for l in 1..=4 {
            let p = tietze_reduce(&truncate(&e, l).unwrap());
            for m in [3, 4] {
                let r = search_homs(&p, m, 1_000_000);
                assert!(r.homs.is_empty() && !r.budget_exhausted);
            }
        }
    }

    #[test]
    fn budget_is_reported() {
        let p: GroupPresentation = "gens: a b c\n".parse().unwrap();
        let r = search_homs(&p, 4, 100);
        assert!(r.budget_exhausted);
        assert_eq!(r.nodes, 100);
    }

    #[test]
    fn text_round_trip() {
        let a = alternating_witness(4);
        assert_eq!(a.to_string().parse::<HomAssignment>().unwrap(), a);
        assert!(a.to_string().starts_with("deg=6\n"));
        let err = "deg=3\na -> (1 4)\n".parse::<HomAssignment>().unwrap_err();
        assert!(matches!(err, Error::Parse(ParseError { line: 2, .. })), "{err:?}");
        let err = "deg=3\na -> (1 x)\n".parse::<HomAssignment>().unwrap_err();
        assert!(matches!(err, Error::Parse(ParseError { line: 2, column: 9, .. })), "{err:?}");
        assert!("a -> id\n".parse::<HomAssignment>().is_err());
        assert!("deg=3\na -> id\na -> id\n".parse::<HomAssignment>().is_err());
    }
}
