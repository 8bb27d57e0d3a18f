use thiserror::Error;

/// Structural violations of the profile data model.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProfileError {
    #[error("a profile needs at least one candidate")]
    NoCandidates,
    #[error("duplicate candidate name `{0}`")]
    DuplicateName(String),
    #[error("invalid candidate name `{0}` (names must be nonempty and contain no whitespace, `>`, `~`, `,` or `:`)")]
    InvalidName(String),
    #[error("candidate id {0} is out of range")]
    UnknownCandidate(usize),
    #[error("candidate id {0} is ranked more than once")]
    RepeatedCandidate(usize),
    #[error("candidate id {0} is not ranked")]
    MissingCandidate(usize),
    #[error("empty indifference tier")]
    EmptyTier,
    #[error("vote multiplicity must be at least 1")]
    ZeroMultiplicity,
    #[error("axis is not a permutation of the {0} candidates")]
    NotAPermutation(usize),
}

/// What went wrong on a particular input line.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("expected `candidates: name,name,...` header")]
    MissingHeader,
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("duplicate candidate name `{0}`")]
    DuplicateName(String),
    #[error("invalid candidate name `{0}`")]
    InvalidName(String),
    #[error("unknown candidate `{0}`")]
    UnknownCandidate(String),
    #[error("candidate `{0}` is repeated in the vote")]
    RepeatedCandidate(String),
    #[error("candidate `{0}` is missing from the vote")]
    MissingCandidate(String),
    #[error("vote multiplicity must be at least 1")]
    ZeroMultiplicity,
    #[error("incomplete vote (candidate `{0}` not ranked); pass --complete-missing-last to rank missing candidates last")]
    IncompleteVote(String),
    #[error("malformed braces: {0}")]
    MalformedBraces(String),
}

/// A parse failure, tagged with the 1-based line it occurred on.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub(crate) fn new(line: usize, kind: ParseErrorKind) -> Self {
        ParseError { line, kind }
    }
}
