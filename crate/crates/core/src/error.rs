use std::fmt;

/// Errors raised by the library operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("no image given for generator {0}")]
    MissingImage(String),
    #[error("permutation degrees differ ({0} vs {1})")]
    DegreeMismatch(usize, usize),
    #[error("strand {strand} out of range for a braid on {strands} strands")]
    StrandOutOfRange { strand: usize, strands: usize },
    #[error("no reference braid for n={n}, variant {variant}")]
    UnknownRow { n: usize, variant: usize },
    #[error("level {level} has {strands} strands, which has no reference braid")]
    UnsupportedStrandCount { level: usize, strands: usize },
    #[error("level {0} is not available")]
    LevelUnavailable(usize),
    #[error("level {level} has {strands} strands; the dyadic form needs 2 at every level")]
    NotDyadicShape { level: usize, strands: usize },
    #[error("framing letter X{letter} out of range at level {level} ({strands} strands)")]
    FramingOutOfRange { level: usize, letter: u32, strands: usize },
    #[error("first homology is not infinite cyclic ({0})")]
    NonCyclicHomology(String),
    #[error("relator or peripheral word uses {0}, which is not a generator")]
    UnknownGenerator(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A syntax error in one of the text formats, with a 1-based location.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub token: String,
    pub message: String,
}

impl ParseError {
    pub fn new(column: usize, token: impl Into<String>, message: impl Into<String>) -> Self {
        ParseError { line: 1, column, token: token.into(), message: message.into() }
    }

    /// Relocates an error produced on a substring: `line` is the absolute line
    /// and `offset` the number of characters preceding the substring.
    pub fn relocated(mut self, line: usize, offset: usize) -> Self {
        self.line = line;
        self.column += offset;
        self
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {} (at `{}`)", self.line, self.column, self.message, self.token)
    }
}

impl std::error::Error for ParseError {}

/// Splits `s` on whitespace, yielding each token with its 1-based column.
pub(crate) fn tokens(s: &str) -> impl Iterator<Item = (usize, &str)> {
    s.split_whitespace().map(move |tok| {
        let byte = tok.as_ptr() as usize - s.as_ptr() as usize;
        (s[..byte].chars().count() + 1, tok)
    })
}

/// Number of characters before `sub` inside `s`; `sub` must be a subslice of `s`.
pub(crate) fn offset_of(s: &str, sub: &str) -> usize {
    let byte = sub.as_ptr() as usize - s.as_ptr() as usize;
    s[..byte].chars().count()
}
