//! Typed document model for CorefUD treebanks.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

/// Word identifier within a sentence: `7` for a surface word, `7.1` for an
/// empty node anchored after word 7.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TokenId {
    pub major: u32,
    pub minor: u32,
}

impl TokenId {
    pub const ROOT: TokenId = TokenId { major: 0, minor: 0 };

    pub fn surface(major: u32) -> Self {
        TokenId { major, minor: 0 }
    }

    pub fn empty(major: u32, minor: u32) -> Self {
        TokenId { major, minor }
    }

    pub fn is_empty_node(self) -> bool {
        self.minor != 0
    }
}

impl fmt::Display for TokenId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.minor == 0 {
            write!(f, "{}", self.major)
        } else {
            write!(f, "{}.{}", self.major, self.minor)
        }
    }
}

impl FromStr for TokenId {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        fn num(s: &str) -> Result<u32, ()> {
            if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
                return Err(());
            }
            s.parse().map_err(|_| ())
        }
        match s.split_once('.') {
            None => Ok(TokenId::surface(num(s)?)),
            Some((major, minor)) => {
                let minor = num(minor)?;
                if minor == 0 {
                    return Err(());
                }
                Ok(TokenId::empty(num(major)?, minor))
            }
        }
    }
}

/// Position of a word in a document: sentence index, then index into that
/// sentence's word list. The derived order is document order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TokenRef {
    pub sentence: usize,
    pub token: usize,
}

impl TokenRef {
    pub fn new(sentence: usize, token: usize) -> Self {
        TokenRef { sentence, token }
    }
}

/// The FEATS column, kept verbatim.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Features(String);

impl Features {
    pub fn new(raw: impl Into<String>) -> Self {
        Features(raw.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        let raw = if self.0 == "_" { "" } else { self.0.as_str() };
        raw.split('|')
            .filter(|kv| !kv.is_empty())
            .map(|kv| kv.split_once('=').unwrap_or((kv, "")))
    }

    /// Value of a feature, e.g. `get("Number") == Some("Sing")`.
    pub fn get(&self, name: &str) -> Option<&str> {
        self.iter().find(|(k, _)| *k == name).map(|(_, v)| v)
    }
}

/// The MISC column, kept verbatim. Only `Entity` is interpreted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Misc(String);

impl Misc {
    pub fn new(raw: impl Into<String>) -> Self {
        Misc(raw.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Attributes in their original order. Items without `=` yield an empty value.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        let raw = if self.0 == "_" { "" } else { self.0.as_str() };
        raw.split('|')
            .filter(|kv| !kv.is_empty())
            .map(|kv| kv.split_once('=').unwrap_or((kv, "")))
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.iter().find(|(k, _)| *k == name).map(|(_, v)| v)
    }
}

/// One syntactic word or empty node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub id: TokenId,
    pub form: String,
    pub lemma: String,
    pub upos: String,
    pub xpos: String,
    pub feats: Features,
    /// Basic head; `None` when the column is `_` (typical for empty nodes).
    pub head: Option<u32>,
    pub deprel: String,
    pub deps: String,
    pub misc: Misc,
}

impl Token {
    pub fn is_empty(&self) -> bool {
        self.id.is_empty_node()
    }

    /// Relation label used by analyses. Empty nodes usually carry their
    /// relation only in DEPS, so the first enhanced relation is used there.
    pub fn relation(&self) -> Option<&str> {
        if !self.deprel.is_empty() && self.deprel != "_" {
            return Some(&self.deprel);
        }
        self.first_enhanced().map(|(_, rel)| rel)
    }

    /// Syntactic parent: the basic head, or the first enhanced head.
    pub fn parent(&self) -> Option<TokenId> {
        match self.head {
            Some(h) => Some(TokenId::surface(h)),
            None => self.first_enhanced().and_then(|(h, _)| h.parse().ok()),
        }
    }

    fn first_enhanced(&self) -> Option<(&str, &str)> {
        if self.deps.is_empty() || self.deps == "_" {
            return None;
        }
        self.deps.split('|').next().and_then(|d| d.split_once(':'))
    }
}

/// A multiword-token range line (`3-4 del _ _ ...`), stored verbatim.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiwordToken {
    pub first: u32,
    pub last: u32,
    /// Index into `Sentence::tokens` of the word the line precedes.
    pub before: usize,
    pub line: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sentence {
    /// Comment lines without the leading `#`.
    pub comments: Vec<String>,
    /// Surface words in order, empty nodes interleaved after their anchor.
    pub tokens: Vec<Token>,
    pub multiword: Vec<MultiwordToken>,
}

impl Sentence {
    fn comment_value(&self, key: &str) -> Option<&str> {
        self.comments.iter().find_map(|c| {
            let (k, v) = c.split_once('=')?;
            (k.trim() == key).then(|| v.trim())
        })
    }

    pub fn sent_id(&self) -> Option<&str> {
        self.comment_value("sent_id")
    }

    pub fn text(&self) -> Option<&str> {
        self.comment_value("text")
    }

    pub fn newdoc_id(&self) -> Option<&str> {
        self.comments.iter().find_map(|c| {
            let rest = c.trim_start().strip_prefix("newdoc")?;
            if rest.trim().is_empty() {
                return Some("");
            }
            let (k, v) = rest.split_once('=')?;
            (k.trim() == "id").then(|| v.trim())
        })
    }

    pub fn surface_tokens(&self) -> impl Iterator<Item = &Token> {
        self.tokens.iter().filter(|t| !t.is_empty())
    }

    pub fn surface_len(&self) -> usize {
        self.surface_tokens().count()
    }

    pub fn position_of(&self, id: TokenId) -> Option<usize> {
        self.tokens.binary_search_by(|t| t.id.cmp(&id)).ok()
    }
}

/// A coreference mention. Discontinuous mentions have a gapped `span`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mention {
    pub entity_id: String,
    /// Words of the mention in document order.
    pub span: Vec<TokenRef>,
    /// Number of discontinuous parts merged into this mention (1 if contiguous).
    pub parts: u32,
    pub head: TokenRef,
    /// 1-based head position declared in the annotation, if any.
    pub declared_head: Option<usize>,
    /// Remaining bracket attributes as `(name, value)` pairs.
    pub attributes: Vec<(String, String)>,
}

impl Mention {
    pub fn start(&self) -> TokenRef {
        self.span[0]
    }

    pub fn end(&self) -> TokenRef {
        self.span[self.span.len() - 1]
    }

    pub fn len(&self) -> usize {
        self.span.len()
    }

    pub fn is_empty(&self) -> bool {
        self.span.is_empty()
    }

    pub fn contains(&self, pos: TokenRef) -> bool {
        self.span.binary_search(&pos).is_ok()
    }

    /// True when the head is the last word, i.e. all modifiers precede it.
    pub fn is_pre_modified(&self) -> bool {
        self.span.len() > 1 && self.head == self.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entity {
    pub entity_id: String,
    /// Ordered by span start, shorter first on ties.
    pub mentions: Vec<Mention>,
}

impl Entity {
    pub fn is_singleton(&self) -> bool {
        self.mentions.len() == 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub doc_id: String,
    pub sentences: Vec<Sentence>,
    pub entities: Vec<Entity>,
    pub genre: Option<String>,
    pub language: String,
    pub dataset: String,
}

impl Document {
    pub fn token(&self, pos: TokenRef) -> &Token {
        &self.sentences[pos.sentence].tokens[pos.token]
    }

    pub fn head_token(&self, mention: &Mention) -> &Token {
        self.token(mention.head)
    }

    pub fn mentions(&self) -> impl Iterator<Item = &Mention> {
        self.entities.iter().flat_map(|e| e.mentions.iter())
    }

    pub fn mention_count(&self) -> usize {
        self.entities.iter().map(|e| e.mentions.len()).sum()
    }

    pub fn surface_token_count(&self) -> usize {
        self.sentences.iter().map(Sentence::surface_len).sum()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Corpus {
    pub documents: Vec<Document>,
    pub dataset: String,
    pub language: String,
}

impl Corpus {
    pub fn new(dataset: impl Into<String>, language: impl Into<String>) -> Self {
        Corpus {
            documents: Vec::new(),
            dataset: dataset.into(),
            language: language.into(),
        }
    }

    pub fn sentence_count(&self) -> usize {
        self.documents.iter().map(|d| d.sentences.len()).sum()
    }

    pub fn surface_token_count(&self) -> usize {
        self.documents.iter().map(Document::surface_token_count).sum()
    }

    pub fn entity_count(&self) -> usize {
        self.documents.iter().map(|d| d.entities.len()).sum()
    }

    pub fn mention_count(&self) -> usize {
        self.documents.iter().map(Document::mention_count).sum()
    }

    /// Iterator over `(document, entity, mention)` triples in corpus order.
    pub fn mentions(&self) -> impl Iterator<Item = (&Document, &Entity, &Mention)> {
        self.documents.iter().flat_map(|d| {
            d.entities
                .iter()
                .flat_map(move |e| e.mentions.iter().map(move |m| (d, e, m)))
        })
    }
}
