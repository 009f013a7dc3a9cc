//! Document model, statistics, and coreference scorers for treebanks in the
//! CorefUD flavour of CoNLL-U.
//!
//! The crate is `no_std` and needs only `alloc`. Everything that touches the
//! filesystem, the command line, or a serialization backend lives in the
//! `corefud` companion crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod assignment;
pub mod conllu;
pub mod entity;
pub mod error;
pub mod error_analysis;
pub mod features;
pub mod head;
pub mod metrics;
pub mod model;
pub mod rational;
pub mod taxonomy;

pub use conllu::{parse_conllu, parse_conllu_with_warnings, serialize};
pub use error::{ParseError, ParseErrorKind, Warning};
pub use head::{mention_head, HeadRule};
pub use model::{
    Corpus, Document, Entity, Features, Mention, Misc, MultiwordToken, Sentence, Token, TokenId,
    TokenRef,
};
pub use rational::Ratio;
pub use taxonomy::{classify_mention_type, ud_category, MentionType, UdCategory};
