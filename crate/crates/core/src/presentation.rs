//! Finite presentations of complements of truncated embeddings.
//!
//! Text format:
//!
//! ```text
//! gens: t0 x1.1 x1.2
//! rel: t0
//! rel: t0^-1 x1.1 t0 x1.2^-1
//! meridian: x1.1
//! longitude: t0^2 x1.1 x1.2 x1.1^-2
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::braid::{BraidWord, Strand};
use crate::embedding::EmbeddingScheme;
use crate::error::{offset_of, tokens, Error, ParseError, Result};
use crate::smith::diagonalize;
use crate::word::{FreeWord, Symbol};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Peripheral {
    pub meridian: FreeWord,
    pub longitude: FreeWord,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    generators: Vec<Symbol>,
    relators: Vec<FreeWord>,
    peripheral: Option<Peripheral>,
}

impl GroupPresentation {
    /// Relators are cyclically reduced on the way in.
    pub fn new(generators: Vec<Symbol>, relators: Vec<FreeWord>, peripheral: Option<Peripheral>) -> Result<Self> {
        let known: BTreeSet<&Symbol> = generators.iter().collect();
        let words = relators.iter().chain(peripheral.iter().flat_map(|p| [&p.meridian, &p.longitude]));
        for w in words {
            if let Some(s) = w.symbols().into_iter().find(|s| !known.contains(s)) {
                return Err(Error::UnknownGenerator(s.to_string()));
            }
        }
        let relators = relators.iter().map(FreeWord::cyclically_reduced).collect();
        Ok(GroupPresentation { generators, relators, peripheral })
    }

    pub fn generators(&self) -> &[Symbol] {
        &self.generators
    }

    pub fn relators(&self) -> &[FreeWord] {
        &self.relators
    }

    pub fn peripheral(&self) -> Option<&Peripheral> {
        self.peripheral.as_ref()
    }

    /// The same presentation with extra relators appended.
    pub fn with_relators(&self, extra: impl IntoIterator<Item = FreeWord>) -> Result<Self> {
        let mut relators = self.relators.clone();
        relators.extend(extra);
        GroupPresentation::new(self.generators.clone(), relators, self.peripheral.clone())
    }
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gens:")?;
        for g in &self.generators {
            write!(f, " {g}")?;
        }
        writeln!(f)?;
        for r in &self.relators {
            writeln!(f, "rel: {r}")?;
        }
        if let Some(p) = &self.peripheral {
            writeln!(f, "meridian: {}", p.meridian)?;
            writeln!(f, "longitude: {}", p.longitude)?;
        }
        Ok(())
    }
}

impl FromStr for GroupPresentation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut generators = None;
        let mut relators = Vec::new();
        let (mut meridian, mut longitude) = (None, None);
        for (idx, raw) in s.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            let Some((key, rest)) = line.split_once(':') else {
                let (col, tok) = tokens(line).next().unwrap_or((1, ""));
                return Err(ParseError::new(col, tok, "expected `<key>: …`").relocated(line_no, 0).into());
            };
            let offset = offset_of(raw, rest);
            let word = || rest.parse::<FreeWord>().map_err(|e| Error::from(e.relocated(line_no, offset)));
            match key.trim() {
                "gens" => {
                    let mut gens = Vec::new();
                    for (col, tok) in tokens(rest) {
                        let g = tok.parse::<Symbol>().map_err(|e| e.relocated(line_no, offset + col - 1))?;
                        if gens.contains(&g) {
                            return Err(ParseError::new(col, tok, "duplicate generator")
                                .relocated(line_no, offset)
                                .into());
                        }
                        gens.push(g);
                    }
                    generators = Some(gens);
                }
                "rel" => relators.push(word()?),
                "meridian" => meridian = Some(word()?),
                "longitude" => longitude = Some(word()?),
                other => {
                    let col = offset_of(raw, key.trim_start()) + 1;
                    return Err(ParseError::new(col, other, "unknown key").relocated(line_no, 0).into());
                }
            }
        }
        let generators = generators.ok_or_else(|| ParseError::new(1, "", "missing `gens:` line"))?;
        let peripheral = match (meridian, longitude) {
            (Some(meridian), Some(longitude)) => Some(Peripheral { meridian, longitude }),
            (None, None) => None,
            _ => return Err(ParseError::new(1, "", "meridian and longitude must be given together").into()),
        };
        GroupPresentation::new(generators, relators, peripheral)
    }
}

/// The relator `lhs · rhs⁻¹` of the equation `lhs = rhs`.
fn equation(lhs: &FreeWord, rhs: &FreeWord) -> FreeWord {
    lhs.mul(&rhs.inverse())
}

fn at_level(w: &FreeWord<Strand>, level: u32) -> FreeWord {
    w.map_symbols(|&Strand(k)| Symbol::x(level, k))
}

/// Relators `t⁻¹ x_{level.k} t = w_k` for the braid of one level, conjugated
/// by `t` (the longitude of the enclosing torus).
fn conjugation_relators(b: &BraidWord, level: u32, t: &FreeWord) -> Vec<FreeWord> {
    b.artin_images()
        .iter()
        .enumerate()
        .map(|(k, w)| {
            let x = FreeWord::letter(Symbol::x(level, k as u32 + 1));
            equation(&t.inverse().mul(&x).mul(t), &at_level(w, level))
        })
        .collect()
}

/// The complement of a closed braid in a solid torus.
pub fn piece_presentation(b: &BraidWord) -> GroupPresentation {
    let t = FreeWord::letter(Symbol::t(0));
    let mut generators = vec![Symbol::t(0)];
    generators.extend((1..=b.strands() as u32).map(|k| Symbol::x(1, k)));
    let peripheral = Peripheral { meridian: FreeWord::letter(Symbol::x(1, 1)), longitude: t.clone() };
    GroupPresentation::new(generators, conjugation_relators(b, 1, &t), Some(peripheral))
        .expect("generators cover the relators")
}

/// Longitude of level `i` in terms of `t_{i−1}` and the level-`i` meridians.
fn level_longitude(e: &EmbeddingScheme, i: usize) -> Result<FreeWord> {
    let spec = e.level(i);
    let t = FreeWord::letter(Symbol::t(i as u32 - 1));
    Ok(t.pow(e.sequence.level(i) as i64).mul(&spec.framing_at(i as u32)?))
}

/// The presentation of the complement of the `L`-th torus.
pub fn truncate(e: &EmbeddingScheme, levels: usize) -> Result<GroupPresentation> {
    if levels == 0 {
        return Err(Error::LevelUnavailable(0));
    }
    let mut generators: Vec<Symbol> = (0..levels as u32).map(Symbol::t).collect();
    for i in 1..=levels {
        generators.extend((1..=e.level(i).strands() as u32).map(|k| Symbol::x(i as u32, k)));
    }
    let mut relators = vec![FreeWord::letter(Symbol::t(0))];
    for i in 1..=levels {
        let t = FreeWord::letter(Symbol::t(i as u32 - 1));
        relators.extend(conjugation_relators(&e.level(i).braid, i as u32, &t));
    }
    for i in 1..levels {
        let t = FreeWord::letter(Symbol::t(i as u32));
        relators.push(equation(&t, &level_longitude(e, i)?));
        let next = i as u32 + 1;
        let product = FreeWord::from_letters((1..=e.level(i + 1).strands() as u32).map(|k| (Symbol::x(next, k), 1)));
        relators.push(equation(&FreeWord::letter(Symbol::x(i as u32, 1)), &product));
    }
    let peripheral =
        Peripheral { meridian: FreeWord::letter(Symbol::x(levels as u32, 1)), longitude: level_longitude(e, levels)? };
    GroupPresentation::new(generators, relators, Some(peripheral))
}

/// The renaming used by [`dyadic_form`]: `t_i ↦ s_i`, `x_{i.1} ↦ z_i`,
/// `x_{i.2} ↦ z_i⁻¹ z_{i−1}`, where `z_0` is the meridian of the outermost
/// torus.
pub fn dyadic_substitution(levels: usize) -> BTreeMap<Symbol, FreeWord> {
    let z = |i: u32| FreeWord::letter(Symbol::Z(i));
    let mut m = BTreeMap::new();
    for i in 0..levels as u32 {
        m.insert(Symbol::t(i), FreeWord::letter(Symbol::S(i)));
    }
    for i in 1..=levels as u32 {
        m.insert(Symbol::x(i, 1), z(i));
        m.insert(Symbol::x(i, 2), z(i).inverse().mul(&z(i - 1)));
    }
    m
}

/// Presentation of the `L`-th truncation of a scheme with 2 strands at every
/// level, on generators `s_0…s_{L−1}, z_0…z_L` with three relators per level:
/// `[s_i, z_i]`, the conjugation relator of `z_{i+1}`, and the framing relator
/// for `s_{i+1}`; then `s_0`.
pub fn dyadic_form(e: &EmbeddingScheme, levels: usize) -> Result<GroupPresentation> {
    if levels == 0 {
        return Err(Error::LevelUnavailable(0));
    }
    for i in 1..=levels {
        let strands = e.level(i).strands();
        if strands != 2 {
            return Err(Error::NotDyadicShape { level: i, strands });
        }
    }
    let sub = dyadic_substitution(levels);
    let rename = |w: &FreeWord| w.substitute(&sub).expect("substitution covers the truncation");
    let mut relators = Vec::new();
    for i in 0..levels {
        let s = FreeWord::letter(Symbol::S(i as u32));
        let z = FreeWord::letter(Symbol::Z(i as u32));
        relators.push(FreeWord::commutator(&s, &z));
        let t = FreeWord::letter(Symbol::t(i as u32));
        let first = &conjugation_relators(&e.level(i + 1).braid, i as u32 + 1, &t)[0];
        relators.push(rename(first));
        if i + 1 < levels {
            let next = FreeWord::letter(Symbol::t(i as u32 + 1));
            relators.push(rename(&equation(&next, &level_longitude(e, i + 1)?)));
        }
    }
    relators.push(FreeWord::letter(Symbol::S(0)));
    let mut generators: Vec<Symbol> = (0..levels as u32).map(Symbol::S).collect();
    generators.extend((0..=levels as u32).map(Symbol::Z));
    let peripheral = Peripheral {
        meridian: FreeWord::letter(Symbol::Z(levels as u32)),
        longitude: rename(&level_longitude(e, levels)?),
    };
    GroupPresentation::new(generators, relators, Some(peripheral))
}

/// Outcome of [`tietze_reduce_traced`]: the reduced presentation and the
/// eliminated generators, each expressed in the surviving ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub presentation: GroupPresentation,
    pub eliminated: Vec<(Symbol, FreeWord)>,
}

impl Reduction {
    /// Every original generator as a word in the surviving generators.
    pub fn expansion(&self) -> BTreeMap<Symbol, FreeWord> {
        let mut m: BTreeMap<Symbol, FreeWord> =
            self.presentation.generators.iter().map(|g| (g.clone(), FreeWord::letter(g.clone()))).collect();
        m.extend(self.eliminated.iter().cloned());
        m
    }
}

/// Cyclically reduces, drops trivial relators and removes duplicates up to
/// rotation and inversion, keeping the first occurrence.
fn normalize_relators(rels: Vec<FreeWord>) -> Vec<FreeWord> {
    let rels: Vec<FreeWord> = rels.into_iter().map(|r| r.cyclically_reduced()).filter(|r| !r.is_identity()).collect();
    // cyclic keys are quadratic in the length, so only compute them for
    // relators that share the cheap invariant
    let cheap = |r: &FreeWord| (r.syllables().len(), r.syllables().iter().map(|(_, e)| e.unsigned_abs()).sum::<u64>());
    let mut counts = BTreeMap::new();
    for r in &rels {
        *counts.entry(cheap(r)).or_insert(0usize) += 1;
    }
    let mut seen = BTreeSet::new();
    rels.into_iter().filter(|r| counts[&cheap(r)] == 1 || seen.insert(r.cyclic_key())).collect()
}

/// Solves the relator `r`, in which `g` occurs exactly once, for `g`.
fn solve_for(r: &FreeWord, g: &Symbol) -> FreeWord {
    let j = r.syllables().iter().position(|(s, _)| s == g).expect("g occurs in r");
    let rotated = r.rotated(j);
    let e = rotated.syllables()[0].1;
    // g^e · rest = 1
    let rest = FreeWord::from_letters(rotated.syllables()[1..].iter().cloned());
    if e == 1 {
        rest.inverse()
    } else {
        rest
    }
}

/// Levels outermost first; within a level the meridians go before the
/// longitude, so that each longitude is rewritten only after its level has
/// collapsed.
fn elimination_rank(g: &Symbol) -> (u32, u8, &Symbol) {
    match *g {
        Symbol::X { level, .. } | Symbol::Z(level) => (level, 0, g),
        Symbol::T(level) | Symbol::S(level) => (level, 1, g),
        Symbol::Named(_) => (u32::MAX, 0, g),
    }
}

/// Eliminates generators that some relator defines, lowest level first,
/// until none is left.
pub fn tietze_reduce(p: &GroupPresentation) -> GroupPresentation {
    tietze_reduce_traced(p).presentation
}

pub fn tietze_reduce_traced(p: &GroupPresentation) -> Reduction {
    let mut gens = p.generators.clone();
    let mut rels = p.relators.clone();
    let mut peripheral = p.peripheral.clone();
    let mut eliminated: Vec<(Symbol, FreeWord)> = Vec::new();
    loop {
        rels = normalize_relators(rels);
        let mut order: Vec<&Symbol> = gens.iter().collect();
        order.sort_by_key(|g| elimination_rank(g));
        let choice = order.into_iter().find_map(|g| {
            rels.iter()
                .enumerate()
                .filter(|(_, r)| r.occurrences(g) == 1)
                .min_by_key(|(i, r)| (r.len(), *i))
                .map(|(i, _)| (g.clone(), i))
        });
        let Some((g, idx)) = choice else { break };
        let r = rels.remove(idx);
        let value = solve_for(&r, &g);
        let sub = BTreeMap::from([(g.clone(), value.clone())]);
        for w in rels.iter_mut() {
            *w = w.substitute_partial(&sub);
        }
        for (_, w) in eliminated.iter_mut() {
            *w = w.substitute_partial(&sub);
        }
        if let Some(per) = peripheral.as_mut() {
            per.meridian = per.meridian.substitute_partial(&sub);
            per.longitude = per.longitude.substitute_partial(&sub);
        }
        gens.retain(|h| h != &g);
        eliminated.push((g, value));
    }
    let presentation =
        GroupPresentation::new(gens, rels, peripheral).expect("eliminated generators are substituted away");
    Reduction { presentation, eliminated }
}

/// Isomorphism type of a finitely generated Abelian group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianInvariants {
    pub rank: usize,
    /// Invariant factors ≥ 2, each dividing the next.
    pub torsion: Vec<BigInt>,
}

impl AbelianInvariants {
    pub fn is_infinite_cyclic(&self) -> bool {
        self.rank == 1 && self.torsion.is_empty()
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rank: {}\ntorsion:", self.rank)?;
        for d in &self.torsion {
            write!(f, " {d}")?;
        }
        Ok(())
    }
}

/// Abelianization with the image of each generator. A class lists one
/// coordinate per torsion factor (reduced modulo it) followed by the free
/// coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Abelianization {
    pub invariants: AbelianInvariants,
    pub classes: BTreeMap<Symbol, Vec<BigInt>>,
}

pub fn abelianize(p: &GroupPresentation) -> Abelianization {
    let n = p.generators.len();
    let matrix: Vec<Vec<BigInt>> =
        p.relators.iter().map(|r| p.generators.iter().map(|g| BigInt::from(r.exponent_sum(g))).collect()).collect();
    let form = diagonalize(&matrix, n);
    let nonzero: Vec<&BigInt> = form.diagonal.iter().filter(|d| !d.is_zero()).collect();
    let rank = n - nonzero.len();
    let torsion: Vec<BigInt> = nonzero.iter().filter(|d| !d.is_one()).map(|&d| d.clone()).collect();
    let classes = p
        .generators
        .iter()
        .enumerate()
        .map(|(j, g)| {
            let row = &form.column_transform[j];
            let mut class = Vec::new();
            for (k, d) in nonzero.iter().enumerate() {
                if !d.is_one() {
                    class.push(row[k].mod_floor(d));
                }
            }
            class.extend(row[nonzero.len()..].iter().cloned());
            (g.clone(), class)
        })
        .collect();
    Abelianization { invariants: AbelianInvariants { rank, torsion }, classes }
}

/// The factor `c` with `[x_{L−1.1}] = c · [x_{L.1}]` in the first homology of
/// the `L`-th truncation.
pub fn h1_scaling(e: &EmbeddingScheme, levels: usize) -> Result<BigInt> {
    if levels < 2 {
        return Err(Error::LevelUnavailable(levels));
    }
    let ab = abelianize(&truncate(e, levels)?);
    if !ab.invariants.is_infinite_cyclic() {
        return Err(Error::NonCyclicHomology(ab.invariants.to_string().replace('\n', ", ")));
    }
    let class = |s: Symbol| ab.classes[&s][0].clone();
    let inner = class(Symbol::x(levels as u32, 1));
    let outer = class(Symbol::x(levels as u32 - 1, 1));
    if inner.is_zero() || !outer.is_multiple_of(&inner) {
        return Err(Error::NonCyclicHomology(format!("class of x{}.1 is not a multiple of x{levels}.1", levels - 1)));
    }
    Ok(outer / inner)
}
