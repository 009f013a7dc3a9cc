//! Mention types and the grouping of UD relations into twelve categories.

use core::fmt;

use serde::Serialize;

use crate::model::Token;

/// Type of a mention, decided by its head word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum MentionType {
    NominalNoun,
    ProperNoun,
    OvertPronoun,
    ZeroPronoun,
    Other,
}

impl MentionType {
    pub const ALL: [MentionType; 5] = [
        MentionType::NominalNoun,
        MentionType::ProperNoun,
        MentionType::OvertPronoun,
        MentionType::ZeroPronoun,
        MentionType::Other,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MentionType::NominalNoun => "nominal_noun",
            MentionType::ProperNoun => "proper_noun",
            MentionType::OvertPronoun => "overt_pronoun",
            MentionType::ZeroPronoun => "zero_pronoun",
            MentionType::Other => "other",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        MentionType::ALL.into_iter().find(|t| t.name() == name)
    }

    pub fn is_nominal_or_proper(self) -> bool {
        matches!(self, MentionType::NominalNoun | MentionType::ProperNoun)
    }
}

impl fmt::Display for MentionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Empty nodes are zero pronouns whatever their UPOS; otherwise the head's
/// UPOS decides.
pub fn classify_mention_type(head: &Token) -> MentionType {
    if head.is_empty() {
        return MentionType::ZeroPronoun;
    }
    match head.upos.as_str() {
        "NOUN" => MentionType::NominalNoun,
        "PROPN" => MentionType::ProperNoun,
        "PRON" => MentionType::OvertPronoun,
        _ => MentionType::Other,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum UdCategory {
    S,
    O,
    D,
    N,
    C,
    M,
    F,
    R,
    W,
    L,
    P,
    T,
}

impl UdCategory {
    pub const ALL: [UdCategory; 12] = [
        UdCategory::S,
        UdCategory::O,
        UdCategory::D,
        UdCategory::N,
        UdCategory::C,
        UdCategory::M,
        UdCategory::F,
        UdCategory::R,
        UdCategory::W,
        UdCategory::L,
        UdCategory::P,
        UdCategory::T,
    ];

    pub fn letter(self) -> char {
        match self {
            UdCategory::S => 'S',
            UdCategory::O => 'O',
            UdCategory::D => 'D',
            UdCategory::N => 'N',
            UdCategory::C => 'C',
            UdCategory::M => 'M',
            UdCategory::F => 'F',
            UdCategory::R => 'R',
            UdCategory::W => 'W',
            UdCategory::L => 'L',
            UdCategory::P => 'P',
            UdCategory::T => 'T',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        UdCategory::ALL.into_iter().find(|u| u.letter() == c)
    }

    pub fn display_name(self) -> &'static str {
        match self {
            UdCategory::S => "core arguments_subject",
            UdCategory::O => "core arguments_object",
            UdCategory::D => "non-core dependents_nominals",
            UdCategory::N => "nominal dependents_nominals",
            UdCategory::C => "clauses",
            UdCategory::M => "modifier words",
            UdCategory::F => "function words",
            UdCategory::R => "coordination",
            UdCategory::W => "MWE",
            UdCategory::L => "loose",
            UdCategory::P => "special",
            UdCategory::T => "other",
        }
    }
}

impl fmt::Display for UdCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// The 37 universal base relations and their categories.
pub const RELATION_TABLE: [(&str, UdCategory); 37] = [
    ("nsubj", UdCategory::S),
    ("obj", UdCategory::O),
    ("iobj", UdCategory::O),
    ("obl", UdCategory::D),
    ("vocative", UdCategory::D),
    ("expl", UdCategory::D),
    ("dislocated", UdCategory::D),
    ("nmod", UdCategory::N),
    ("appos", UdCategory::N),
    ("nummod", UdCategory::N),
    ("csubj", UdCategory::C),
    ("ccomp", UdCategory::C),
    ("xcomp", UdCategory::C),
    ("advcl", UdCategory::C),
    ("acl", UdCategory::C),
    ("advmod", UdCategory::M),
    ("discourse", UdCategory::M),
    ("amod", UdCategory::M),
    ("aux", UdCategory::F),
    ("cop", UdCategory::F),
    ("mark", UdCategory::F),
    ("det", UdCategory::F),
    ("clf", UdCategory::F),
    ("case", UdCategory::F),
    ("conj", UdCategory::R),
    ("cc", UdCategory::R),
    ("fixed", UdCategory::W),
    ("flat", UdCategory::W),
    ("compound", UdCategory::W),
    ("list", UdCategory::L),
    ("parataxis", UdCategory::L),
    ("orphan", UdCategory::P),
    ("goeswith", UdCategory::P),
    ("reparandum", UdCategory::P),
    ("punct", UdCategory::T),
    ("root", UdCategory::T),
    ("dep", UdCategory::T),
];

/// `nsubj:pass` -> `nsubj`.
pub fn base_relation(deprel: &str) -> &str {
    deprel.split(':').next().unwrap_or(deprel)
}

/// Category of a known base relation, `None` for anything else.
pub fn lookup_category(deprel: &str) -> Option<UdCategory> {
    let base = base_relation(deprel);
    RELATION_TABLE
        .iter()
        .find(|(rel, _)| *rel == base)
        .map(|(_, c)| *c)
}

/// Category of a relation; unknown labels fall into [`UdCategory::T`].
/// Use [`lookup_category`] to detect the fallback.
pub fn ud_category(deprel: &str) -> UdCategory {
    lookup_category(deprel).unwrap_or(UdCategory::T)
}
