//! Embedding schemes: one closed braid and one framing word per level, with
//! the outermost torus standardly embedded.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::braid::{reference_braid, BraidWord};
use crate::error::{offset_of, Error, ParseError, Result};
use crate::sequence::{DefiningSequence, EventuallyPeriodic};
use crate::word::{FreeWord, Letter, Symbol};

/// Letter of a framing word: `X0` is the product of all strand meridians,
/// `Xk` the meridian of strand `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FramingLetter(pub u32);

impl fmt::Display for FramingLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X{}", self.0)
    }
}

impl Letter for FramingLetter {
    fn parse_letter(token: &str) -> std::result::Result<Self, String> {
        token
            .strip_prefix('X')
            .filter(|k| !k.is_empty() && k.bytes().all(|b| b.is_ascii_digit()))
            .and_then(|k| k.parse().ok())
            .map(FramingLetter)
            .ok_or_else(|| format!("expected a framing letter X<k>, got `{token}`"))
    }
}

pub type FramingWord = FreeWord<FramingLetter>;

/// `X0^a X1^b`.
fn x0_x1(a: i64, b: i64) -> FramingWord {
    FreeWord::from_letters([(FramingLetter(0), a), (FramingLetter(1), b)])
}

/// One level of an embedding: the braid of `T_i` inside `T_{i−1}` and the
/// word relating their longitudes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LevelSpec {
    pub braid: BraidWord,
    pub framing: FramingWord,
}

impl LevelSpec {
    pub fn new(braid: BraidWord, framing: FramingWord) -> Self {
        LevelSpec { braid, framing }
    }

    pub fn strands(&self) -> usize {
        self.braid.strands()
    }

    /// Exponent sum of the framing word once `X0` is expanded.
    pub fn framing_exponent(&self) -> i64 {
        let n = self.strands() as i64;
        self.framing.syllables().iter().map(|&(FramingLetter(k), e)| if k == 0 { n * e } else { e }).sum()
    }

    /// The framing word over the meridians `x<level>.k`.
    pub fn framing_at(&self, level: u32) -> Result<FreeWord> {
        let n = self.strands() as u32;
        let mut images = BTreeMap::new();
        for letter in self.framing.symbols() {
            let image = match letter.0 {
                0 => FreeWord::from_letters((1..=n).map(|k| (Symbol::x(level, k), 1))),
                k if k <= n => FreeWord::letter(Symbol::x(level, k)),
                k => return Err(Error::FramingOutOfRange { level: level as usize, letter: k, strands: n as usize }),
            };
            images.insert(letter, image);
        }
        self.framing.substitute(&images)
    }
}

/// Nested closed braids realizing a solenoid with the given defining sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingScheme {
    pub sequence: DefiningSequence,
    pub levels: EventuallyPeriodic<LevelSpec>,
}

impl EmbeddingScheme {
    pub fn new(sequence: DefiningSequence, levels: EventuallyPeriodic<LevelSpec>) -> Self {
        EmbeddingScheme { sequence, levels }
    }

    /// Braid and framing of the 1-based level `i`.
    pub fn level(&self, i: usize) -> &LevelSpec {
        assert!(i >= 1, "levels start at 1");
        self.levels.get(i - 1)
    }

    /// Levels covering one full period of both the sequence and the level list.
    fn aligned(&self) -> EventuallyPeriodic<(u64, LevelSpec)> {
        self.sequence.terms().zip(&self.levels)
    }

    /// At each level the unknot braid with inverted crossings and framing
    /// `X0 X1^{−n}`, which keeps every torus unknotted.
    pub fn unknotted(s: &DefiningSequence) -> Self {
        let levels = s.terms().map(|&n| {
            let n_i = n as usize;
            LevelSpec::new(BraidWord::unknot(n_i).mirror(), x0_x1(1, -(n as i64)))
        });
        EmbeddingScheme::new(s.clone(), levels)
    }

    /// The dyadic solenoid with a trefoil at every level: braid σ₁⁻³,
    /// framing `X0³ X1⁻⁶`.
    pub fn trefoil() -> Self {
        let level = LevelSpec::new(BraidWord::new(2, vec![-1, -1, -1]).expect("valid"), x0_x1(3, -6));
        EmbeddingScheme::new(DefiningSequence::dyadic(), EventuallyPeriodic::constant(level))
    }

    /// Hyperbolic pieces from the reference table: level `i` uses variant 1
    /// or 2 for `n_i` strands according to the `i`-th choice bit. Framings are
    /// `X0 X1^{−n}`, making the longitude null-homologous.
    pub fn geometry(s: &DefiningSequence, choices: &EventuallyPeriodic<bool>) -> Result<Self> {
        let zipped = s.terms().zip(choices);
        let build = |offset: usize, items: &[(u64, bool)]| -> Result<Vec<LevelSpec>> {
            items
                .iter()
                .enumerate()
                .map(|(j, &(n, bit))| {
                    let (braid, _) = reference_braid(n as usize, 1 + bit as usize)
                        .map_err(|_| Error::UnsupportedStrandCount { level: offset + j + 1, strands: n as usize })?;
                    Ok(LevelSpec::new(braid, x0_x1(1, -(n as i64))))
                })
                .collect()
        };
        let prefix = build(0, zipped.prefix())?;
        let cycle = build(zipped.prefix().len(), zipped.cycle())?;
        Ok(EmbeddingScheme::new(s.clone(), EventuallyPeriodic::new(prefix, cycle)))
    }
}

/// Multiplies consecutive terms until each product is at least 3, dropping
/// 1-entries on the way; the homeomorphism class is unchanged. The circle is
/// returned as is.
pub fn merge_to_avoid_2(s: &DefiningSequence) -> DefiningSequence {
    if s.is_circle() {
        return DefiningSequence::circle();
    }
    let mut emitted = Vec::new();
    let mut acc = 1u64;
    let feed = |acc: &mut u64, n: u64, out: &mut Vec<u64>| {
        *acc *= n;
        if *acc >= 3 {
            out.push(*acc);
            *acc = 1;
        }
    };
    for &n in s.prefix() {
        feed(&mut acc, n, &mut emitted);
    }
    // the pending product at the start of each pass is 1 or 2, so some pass
    // state repeats within three passes
    let mut seen: Vec<(u64, usize)> = Vec::new();
    loop {
        if let Some(&(_, start)) = seen.iter().find(|(a, _)| *a == acc) {
            let cycle = emitted.split_off(start);
            return DefiningSequence::new(emitted, cycle);
        }
        seen.push((acc, emitted.len()));
        for &n in s.cycle() {
            feed(&mut acc, n, &mut emitted);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub level: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{tag}: level {}: {}", self.level, self.message)
    }
}

/// Checks every level over one full period. Non-transitive closures, strand
/// mismatches and out-of-range framing letters are errors; a framing with
/// nonzero exponent sum is only a warning.
pub fn validate_scheme(e: &EmbeddingScheme) -> Vec<Diagnostic> {
    let aligned = e.aligned();
    let mut out = Vec::new();
    let mut push = |severity, level, message: String| out.push(Diagnostic { severity, level, message });
    let levels = aligned.prefix().iter().chain(aligned.cycle());
    for (i, (n, spec)) in levels.enumerate() {
        let level = i + 1;
        if spec.strands() as u64 != *n {
            push(Severity::Error, level, format!("braid has {} strands but the sequence term is {n}", spec.strands()));
        }
        let components = spec.braid.closure_components();
        if components != 1 {
            push(Severity::Error, level, format!("closure has {components} components"));
        }
        if let Err(err) = spec.framing_at(level as u32) {
            push(Severity::Error, level, err.to_string());
        } else if spec.framing_exponent() != 0 {
            push(Severity::Warning, level, format!("framing total exponent {} != 0", spec.framing_exponent()));
        }
    }
    out
}

impl fmt::Display for EmbeddingScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "sequence: {}", self.sequence)?;
        let line = |f: &mut fmt::Formatter<'_>, i: usize, spec: &LevelSpec| {
            writeln!(f, "level {i}: braid {} ; framing {}", spec.braid, spec.framing)
        };
        for (i, spec) in self.levels.prefix().iter().enumerate() {
            line(f, i + 1, spec)?;
        }
        writeln!(f, "repeat:")?;
        let start = self.levels.prefix().len();
        for (i, spec) in self.levels.cycle().iter().enumerate() {
            line(f, start + i + 1, spec)?;
        }
        Ok(())
    }
}

fn parse_level_line(line: &str, lineno: usize, expected: usize) -> Result<LevelSpec> {
    let err = |col: usize, tok: &str, msg: String| Error::Parse(ParseError::new(col, tok, msg).relocated(lineno, 0));
    let (head, body) = line.split_once(':').ok_or_else(|| err(1, line.trim(), "expected `level <i>:`".into()))?;
    let index: usize = head
        .trim()
        .strip_prefix("level")
        .and_then(|i| i.trim().parse().ok())
        .ok_or_else(|| err(1, head.trim(), "expected `level <i>`".into()))?;
    if index != expected {
        return Err(err(1, head.trim(), format!("expected level {expected}")));
    }
    let (braid_part, framing_part) = body
        .split_once(';')
        .ok_or_else(|| err(head.len() + 2, body.trim(), "expected `braid … ; framing …`".into()))?;
    let braid_text = braid_part.trim();
    let braid_text = braid_text
        .strip_prefix("braid")
        .ok_or_else(|| err(offset_of(line, braid_part) + 1, braid_text, "expected `braid`".into()))?;
    let braid: BraidWord = braid_text.parse().map_err(|e| match e {
        Error::Parse(p) => Error::Parse(p.relocated(lineno, offset_of(line, braid_text))),
        other => other,
    })?;
    let framing_text = framing_part.trim();
    let framing_text = framing_text
        .strip_prefix("framing")
        .ok_or_else(|| err(offset_of(line, framing_part) + 1, framing_text, "expected `framing`".into()))?;
    let framing: FramingWord = framing_text
        .parse()
        .map_err(|p: ParseError| Error::Parse(p.relocated(lineno, offset_of(line, framing_text))))?;
    Ok(LevelSpec::new(braid, framing))
}

impl FromStr for EmbeddingScheme {
    type Err = Error;

    /// Reads the format produced by `Display`; blank lines and `#` comments
    /// are skipped.
    fn from_str(s: &str) -> Result<Self> {
        let mut sequence = None;
        let mut prefix = Vec::new();
        let mut cycle = Vec::new();
        let mut repeating = false;
        let mut last_line = 0;
        for (i, raw) in s.lines().enumerate() {
            let lineno = i + 1;
            last_line = lineno;
            let line = raw.trim_end();
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let err = |tok: &str, msg: &str| Error::Parse(ParseError::new(1, tok, msg).relocated(lineno, 0));
            match sequence {
                None => {
                    let text = line
                        .trim()
                        .strip_prefix("sequence:")
                        .ok_or_else(|| err(line.trim(), "expected `sequence: <prefix> | <cycle>`"))?;
                    let seq: DefiningSequence =
                        text.parse().map_err(|p: ParseError| p.relocated(lineno, offset_of(line, text)))?;
                    sequence = Some(seq);
                }
                Some(_) if line.trim() == "repeat:" => {
                    if repeating {
                        return Err(err("repeat:", "`repeat:` appears twice"));
                    }
                    repeating = true;
                }
                Some(_) => {
                    let expected = prefix.len() + cycle.len() + 1;
                    let spec = parse_level_line(line, lineno, expected)?;
                    if repeating {
                        cycle.push(spec);
                    } else {
                        prefix.push(spec);
                    }
                }
            }
        }
        let eof = |msg: &str| Error::Parse(ParseError::new(1, "", msg).relocated(last_line.max(1), 0));
        let sequence = sequence.ok_or_else(|| eof("missing `sequence:` header"))?;
        if cycle.is_empty() {
            return Err(eof("no repeating levels after `repeat:`"));
        }
        Ok(EmbeddingScheme::new(sequence, EventuallyPeriodic::new(prefix, cycle)))
    }
}
