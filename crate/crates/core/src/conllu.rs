//! Reading and writing CoNLL-U text.
//!
//! Lines are stored verbatim wherever the model does not interpret them, so
//! a file in canonical form (LF line endings, no trailing whitespace, one
//! blank line after every sentence) serializes back to identical bytes.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use crate::entity::{decode_entities, EntityAttributeNames};
use crate::error::{ParseError, ParseErrorKind, Warning};
use crate::head::{resolve_heads, HeadRule};
use crate::model::{
    Corpus, Document, Features, Misc, MultiwordToken, Sentence, Token, TokenId,
};

/// Parse a CoNLL-U stream into a corpus, resolving entities and heads.
pub fn parse_conllu(input: &str, dataset: &str, language: &str) -> Result<Corpus, ParseError> {
    parse_conllu_with_warnings(input, dataset, language).map(|(corpus, _)| corpus)
}

/// Like [`parse_conllu`] but also returns non-fatal warnings.
pub fn parse_conllu_with_warnings(
    input: &str,
    dataset: &str,
    language: &str,
) -> Result<(Corpus, Vec<Warning>), ParseError> {
    let mut reader = SentenceReader::new(input);
    let mut corpus = Corpus::new(dataset, language);
    let mut warnings = Vec::new();
    let mut attribute_names = EntityAttributeNames::default();

    let mut pending: Option<PendingDocument> = None;
    let mut doc_ids = BTreeSet::new();

    while let Some(raw) = reader.next_sentence()? {
        if let Some(names) = raw
            .sentence
            .comments
            .iter()
            .find_map(|c| EntityAttributeNames::from_comment(c))
        {
            attribute_names = names;
        }

        let starts_doc = raw.sentence.newdoc_id().is_some() || pending.is_none();
        if starts_doc {
            if let Some(doc) = pending.take() {
                corpus.documents.push(doc.finish(&attribute_names)?);
            }
            let id = match raw.sentence.newdoc_id() {
                Some(id) if !id.is_empty() => id.to_owned(),
                _ => format!("doc{}", corpus.documents.len() + 1),
            };
            if !doc_ids.insert(id.clone()) {
                return Err(ParseError::new(
                    raw.first_line,
                    ParseErrorKind::DuplicateDocId(id),
                ));
            }
            pending = Some(PendingDocument {
                document: Document {
                    doc_id: id,
                    sentences: Vec::new(),
                    entities: Vec::new(),
                    genre: None,
                    language: language.to_owned(),
                    dataset: dataset.to_owned(),
                },
                token_lines: Vec::new(),
                sent_ids: BTreeSet::new(),
            });
        }

        let doc = pending.as_mut().expect("document started above");
        if let Some(sent_id) = raw.sentence.sent_id() {
            if !doc.sent_ids.insert(sent_id.to_owned()) {
                warnings.push(Warning::DuplicateSentId {
                    line: raw.first_line,
                    doc_id: doc.document.doc_id.clone(),
                    sent_id: sent_id.to_owned(),
                });
            }
        }
        doc.document.sentences.push(raw.sentence);
        doc.token_lines.push(raw.token_lines);
    }

    if let Some(doc) = pending.take() {
        corpus.documents.push(doc.finish(&attribute_names)?);
    }
    Ok((corpus, warnings))
}

struct PendingDocument {
    document: Document,
    token_lines: Vec<Vec<usize>>,
    sent_ids: BTreeSet<String>,
}

impl PendingDocument {
    fn finish(mut self, names: &EntityAttributeNames) -> Result<Document, ParseError> {
        self.document.entities = decode_entities(&self.document, &self.token_lines, names)?;
        resolve_heads(&mut self.document, HeadRule::default());
        Ok(self.document)
    }
}

struct RawSentence {
    sentence: Sentence,
    first_line: usize,
    token_lines: Vec<usize>,
}

struct SentenceReader<'a> {
    lines: core::iter::Enumerate<core::str::Split<'a, char>>,
}

impl<'a> SentenceReader<'a> {
    fn new(input: &'a str) -> Self {
        SentenceReader {
            lines: input.split('\n').enumerate(),
        }
    }

    fn next_sentence(&mut self) -> Result<Option<RawSentence>, ParseError> {
        let mut builder: Option<SentenceBuilder> = None;

        for (idx, line) in self.lines.by_ref() {
            let lineno = idx + 1;
            let line = line.trim_end();

            if line.is_empty() {
                match builder.take() {
                    None => continue,
                    Some(b) => return b.finish(lineno).map(Some),
                }
            }

            let b = builder.get_or_insert_with(|| SentenceBuilder::new(lineno));
            if let Some(comment) = line.strip_prefix('#') {
                if !b.tokens.is_empty() || !b.multiword.is_empty() {
                    return Err(ParseError::new(
                        lineno,
                        ParseErrorKind::CommentInsideSentence,
                    ));
                }
                b.comments.push(comment.to_owned());
            } else {
                b.push_line(line, lineno)?;
            }
        }

        match builder {
            None => Ok(None),
            Some(b) => {
                let last = b.last_line;
                b.finish(last).map(Some)
            }
        }
    }
}

struct SentenceBuilder {
    first_line: usize,
    last_line: usize,
    comments: Vec<String>,
    tokens: Vec<Token>,
    token_lines: Vec<usize>,
    multiword: Vec<MultiwordToken>,
    last_surface: u32,
    last_minor: u32,
    multiword_end: u32,
}

impl SentenceBuilder {
    fn new(first_line: usize) -> Self {
        SentenceBuilder {
            first_line,
            last_line: first_line,
            comments: Vec::new(),
            tokens: Vec::new(),
            token_lines: Vec::new(),
            multiword: Vec::new(),
            last_surface: 0,
            last_minor: 0,
            multiword_end: 0,
        }
    }

    fn push_line(&mut self, line: &str, lineno: usize) -> Result<(), ParseError> {
        self.last_line = lineno;
        let err = |kind| ParseError::new(lineno, kind);
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(err(ParseErrorKind::ColumnCount(cols.len())));
        }

        if let Some((first, last)) = cols[0].split_once('-') {
            let parse = |s: &str| -> Result<u32, ParseError> {
                match s.parse::<TokenId>() {
                    Ok(id) if !id.is_empty_node() => Ok(id.major),
                    _ => Err(err(ParseErrorKind::InvalidId(cols[0].to_owned()))),
                }
            };
            let (first, last) = (parse(first)?, parse(last)?);
            if last < first {
                return Err(err(ParseErrorKind::InvalidId(cols[0].to_owned())));
            }
            if first != self.last_surface + 1 || self.multiword_end >= first {
                return Err(err(ParseErrorKind::NonMonotonicId {
                    found: cols[0].to_owned(),
                    expected: format!("{}-...", self.last_surface + 1),
                }));
            }
            self.multiword_end = last;
            self.multiword.push(MultiwordToken {
                first,
                last,
                before: self.tokens.len(),
                line: line.to_owned(),
            });
            return Ok(());
        }

        let id: TokenId = cols[0]
            .parse()
            .map_err(|_| err(ParseErrorKind::InvalidId(cols[0].to_owned())))?;
        let expected = if id.is_empty_node() {
            TokenId::empty(self.last_surface, self.last_minor + 1)
        } else {
            TokenId::surface(self.last_surface + 1)
        };
        if id != expected {
            return Err(err(ParseErrorKind::NonMonotonicId {
                found: id.to_string(),
                expected: expected.to_string(),
            }));
        }
        if id.is_empty_node() {
            self.last_minor = id.minor;
        } else {
            self.last_surface = id.major;
            self.last_minor = 0;
        }

        let head = match cols[6] {
            "_" => None,
            h => Some(
                h.parse::<u32>()
                    .map_err(|_| err(ParseErrorKind::InvalidHead(h.to_owned())))?,
            ),
        };

        self.tokens.push(Token {
            id,
            form: cols[1].to_owned(),
            lemma: cols[2].to_owned(),
            upos: cols[3].to_owned(),
            xpos: cols[4].to_owned(),
            feats: Features::new(cols[5]),
            head,
            deprel: cols[7].to_owned(),
            deps: cols[8].to_owned(),
            misc: Misc::new(cols[9]),
        });
        self.token_lines.push(lineno);
        Ok(())
    }

    fn finish(self, lineno: usize) -> Result<RawSentence, ParseError> {
        if self.tokens.is_empty() {
            return Err(ParseError::new(lineno, ParseErrorKind::EmptySentence));
        }
        let n = self.last_surface;
        if self.multiword_end > n {
            return Err(ParseError::new(
                lineno,
                ParseErrorKind::NonMonotonicId {
                    found: format!("{}", self.multiword_end),
                    expected: format!("at most {n}"),
                },
            ));
        }
        for (token, &line) in self.tokens.iter().zip(&self.token_lines) {
            if let Some(h) = token.head {
                if h > n {
                    return Err(ParseError::new(
                        line,
                        ParseErrorKind::HeadOutOfRange {
                            token: token.id.to_string(),
                            head: h.to_string(),
                        },
                    ));
                }
            }
        }
        Ok(RawSentence {
            sentence: Sentence {
                comments: self.comments,
                tokens: self.tokens,
                multiword: self.multiword,
            },
            first_line: self.first_line,
            token_lines: self.token_lines,
        })
    }
}

/// Write a corpus back to CoNLL-U text.
pub fn serialize(corpus: &Corpus) -> String {
    let mut out = String::new();
    for doc in &corpus.documents {
        for sentence in &doc.sentences {
            write_sentence(&mut out, sentence);
        }
    }
    out
}

pub fn write_sentence(out: &mut String, sentence: &Sentence) {
    for c in &sentence.comments {
        out.push('#');
        out.push_str(c);
        out.push('\n');
    }
    let mut mwt = sentence.multiword.iter().peekable();
    for (i, t) in sentence.tokens.iter().enumerate() {
        while let Some(m) = mwt.next_if(|m| m.before == i) {
            out.push_str(&m.line);
            out.push('\n');
        }
        let _ = write!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t",
            t.id,
            t.form,
            t.lemma,
            t.upos,
            t.xpos,
            t.feats.as_str()
        );
        match t.head {
            Some(h) => {
                let _ = write!(out, "{h}");
            }
            None => out.push('_'),
        }
        let _ = writeln!(out, "\t{}\t{}\t{}", t.deprel, t.deps, t.misc.as_str());
    }
    out.push('\n');
}
