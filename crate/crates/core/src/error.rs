use alloc::string::String;
use thiserror::Error;

/// A fatal problem in CoNLL-U input, tagged with its 1-based line number.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub fn new(line: usize, kind: ParseErrorKind) -> Self {
        ParseError { line, kind }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("expected 10 tab-separated columns, found {0}")]
    ColumnCount(usize),
    #[error("invalid token identifier `{0}`")]
    InvalidId(String),
    #[error("token identifier {found} out of order (expected {expected})")]
    NonMonotonicId { found: String, expected: String },
    #[error("head {head} of token {token} does not exist in the sentence")]
    HeadOutOfRange { token: String, head: String },
    #[error("invalid head `{0}`")]
    InvalidHead(String),
    #[error("comment line inside a sentence")]
    CommentInsideSentence,
    #[error("sentence has no words")]
    EmptySentence,
    #[error("duplicate document id `{0}`")]
    DuplicateDocId(String),
    #[error("malformed Entity annotation `{0}`")]
    MalformedEntity(String),
    #[error("mention of entity `{entity}` opened in sentence `{sentence}` is never closed")]
    UnclosedMention { entity: String, sentence: String },
    #[error("mention of entity `{entity}` closed in sentence `{sentence}` without being opened")]
    CloseWithoutOpen { entity: String, sentence: String },
    #[error("discontinuous mention of entity `{entity}` in sentence `{sentence}` has inconsistent parts")]
    BadDiscontinuousPart { entity: String, sentence: String },
}

/// A non-fatal observation made while parsing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Warning {
    DuplicateSentId {
        line: usize,
        doc_id: String,
        sent_id: String,
    },
}

impl core::fmt::Display for Warning {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Warning::DuplicateSentId {
                line,
                doc_id,
                sent_id,
            } => write!(
                f,
                "line {line}: duplicate sent_id `{sent_id}` in document `{doc_id}`"
            ),
        }
    }
}
