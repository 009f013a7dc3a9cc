//! Decoding of the bracketed `Entity` MISC attribute.
//!
//! `(e1` opens a mention of entity `e1`, `e1)` closes it and `(e1)` is a
//! one-word mention. Opening brackets may carry further `-`-separated
//! attributes named by the `global.Entity` comment. Discontinuous mentions
//! are written part by part as `(e1[1/2]` ... `e1[1/2])` and merged here.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{ParseError, ParseErrorKind};
use crate::model::{Document, Entity, Mention, TokenRef};

/// Attribute names declared by `# global.Entity = eid-etype-head-other`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntityAttributeNames(Vec<String>);

impl Default for EntityAttributeNames {
    fn default() -> Self {
        EntityAttributeNames(
            ["eid", "etype", "head", "other"]
                .iter()
                .map(|s| (*s).to_owned())
                .collect(),
        )
    }
}

impl EntityAttributeNames {
    pub fn from_comment(comment: &str) -> Option<Self> {
        let (key, value) = comment.split_once('=')?;
        if key.trim() != "global.Entity" {
            return None;
        }
        Some(EntityAttributeNames(
            value.trim().split('-').map(|s| s.to_owned()).collect(),
        ))
    }

    fn name(&self, i: usize) -> String {
        self.0
            .get(i)
            .cloned()
            .unwrap_or_else(|| alloc::format!("attr{i}"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Part {
    index: u32,
    total: u32,
}

#[derive(Debug, PartialEq, Eq)]
enum Bracket<'a> {
    Open {
        eid: &'a str,
        part: Option<Part>,
        attrs: Vec<&'a str>,
        close: bool,
    },
    Close {
        eid: &'a str,
        part: Option<Part>,
    },
}

fn split_part(id: &str) -> Option<(&str, Option<Part>)> {
    match id.split_once('[') {
        None => Some((id, None)),
        Some((eid, rest)) => {
            let (i, n) = rest.strip_suffix(']').unwrap_or(rest).split_once('/')?;
            let part = Part {
                index: i.parse().ok()?,
                total: n.parse().ok()?,
            };
            if eid.is_empty() || part.index == 0 || part.index > part.total {
                return None;
            }
            Some((eid, Some(part)))
        }
    }
}

fn tokenize(value: &str) -> Option<Vec<Bracket<'_>>> {
    let mut out = Vec::new();
    let mut rest = value;
    while !rest.is_empty() {
        if let Some(after) = rest.strip_prefix('(') {
            let end = after.find(['(', ')']).unwrap_or(after.len());
            let content = &after[..end];
            let close = after[end..].starts_with(')');
            rest = if close { &after[end + 1..] } else { &after[end..] };
            let mut fields = content.split('-');
            let (eid, part) = split_part(fields.next()?)?;
            if eid.is_empty() {
                return None;
            }
            out.push(Bracket::Open {
                eid,
                part,
                attrs: fields.collect(),
                close,
            });
        } else {
            let end = rest.find(')')?;
            let (eid, part) = split_part(&rest[..end])?;
            if eid.is_empty() || eid.contains('(') {
                return None;
            }
            out.push(Bracket::Close { eid, part });
            rest = &rest[end + 1..];
        }
    }
    Some(out)
}

struct OpenMention {
    start: TokenRef,
    part: Option<Part>,
    attrs: Vec<String>,
    line: usize,
}

struct PendingParts {
    words: Vec<TokenRef>,
    next: u32,
    total: u32,
    attrs: Vec<String>,
    line: usize,
}

struct RawMention {
    entity_id: String,
    span: Vec<TokenRef>,
    parts: u32,
    attrs: Vec<String>,
}

/// Decode all mentions of a document and group them into entities.
///
/// `token_lines[s][t]` is the input line of word `t` of sentence `s`, used in
/// error messages.
pub fn decode_entities(
    doc: &Document,
    token_lines: &[Vec<usize>],
    names: &EntityAttributeNames,
) -> Result<Vec<Entity>, ParseError> {
    let mut open: BTreeMap<String, Vec<OpenMention>> = BTreeMap::new();
    let mut pending: BTreeMap<String, Vec<PendingParts>> = BTreeMap::new();
    let mut raw: Vec<RawMention> = Vec::new();

    let sent_label = |s: usize| -> String {
        doc.sentences[s]
            .sent_id()
            .map(|s| s.to_owned())
            .unwrap_or_else(|| alloc::format!("#{}", s + 1))
    };

    for (s, sentence) in doc.sentences.iter().enumerate() {
        for (t, token) in sentence.tokens.iter().enumerate() {
            let Some(value) = token.misc.get("Entity") else {
                continue;
            };
            let line = token_lines
                .get(s)
                .and_then(|l| l.get(t))
                .copied()
                .unwrap_or(0);
            let pos = TokenRef::new(s, t);
            let brackets = tokenize(value).ok_or_else(|| {
                ParseError::new(line, ParseErrorKind::MalformedEntity(value.to_owned()))
            })?;

            for bracket in brackets {
                let (eid, part, attrs, start) = match bracket {
                    Bracket::Open {
                        eid,
                        part,
                        attrs,
                        close,
                    } => {
                        let attrs: Vec<String> = attrs.into_iter().map(|a| a.to_owned()).collect();
                        if !close {
                            open.entry(eid.to_owned()).or_default().push(OpenMention {
                                start: pos,
                                part,
                                attrs,
                                line,
                            });
                            continue;
                        }
                        (eid, part, attrs, pos)
                    }
                    Bracket::Close { eid, part } => {
                        let stack = open.get_mut(eid);
                        let idx = stack
                            .as_ref()
                            .and_then(|st| st.iter().rposition(|m| m.part == part));
                        let Some(idx) = idx else {
                            return Err(ParseError::new(
                                line,
                                ParseErrorKind::CloseWithoutOpen {
                                    entity: eid.to_owned(),
                                    sentence: sent_label(s),
                                },
                            ));
                        };
                        let m = stack.expect("checked above").remove(idx);
                        (eid, part, m.attrs, m.start)
                    }
                };

                let words = words_between(doc, start, pos);
                match part {
                    None => raw.push(RawMention {
                        entity_id: eid.to_owned(),
                        span: words,
                        parts: 1,
                        attrs,
                    }),
                    Some(p) => {
                        let bad = || {
                            ParseError::new(
                                line,
                                ParseErrorKind::BadDiscontinuousPart {
                                    entity: eid.to_owned(),
                                    sentence: sent_label(s),
                                },
                            )
                        };
                        let list = pending.entry(eid.to_owned()).or_default();
                        if p.index == 1 {
                            list.push(PendingParts {
                                words,
                                next: 2,
                                total: p.total,
                                attrs,
                                line,
                            });
                        } else {
                            let slot = list
                                .iter()
                                .rposition(|q| q.next == p.index && q.total == p.total)
                                .ok_or_else(bad)?;
                            let q = &mut list[slot];
                            q.words.extend(words);
                            q.next += 1;
                            if q.attrs.is_empty() {
                                q.attrs = attrs;
                            }
                        }
                        if let Some(done) = list.iter().position(|q| q.next > q.total) {
                            let q = list.remove(done);
                            let mut span = q.words;
                            span.sort();
                            span.dedup();
                            raw.push(RawMention {
                                entity_id: eid.to_owned(),
                                span,
                                parts: q.total,
                                attrs: q.attrs,
                            });
                        }
                    }
                }
            }
        }
    }

    if let Some((eid, m)) = open
        .iter()
        .flat_map(|(eid, st)| st.iter().map(move |m| (eid, m)))
        .min_by_key(|(_, m)| m.start)
    {
        return Err(ParseError::new(
            m.line,
            ParseErrorKind::UnclosedMention {
                entity: eid.clone(),
                sentence: sent_label(m.start.sentence),
            },
        ));
    }
    if let Some((eid, q)) = pending
        .iter()
        .flat_map(|(eid, l)| l.iter().map(move |q| (eid, q)))
        .next()
    {
        return Err(ParseError::new(
            q.line,
            ParseErrorKind::BadDiscontinuousPart {
                entity: eid.clone(),
                sentence: sent_label(q.words[0].sentence),
            },
        ));
    }

    Ok(group(raw, names))
}

fn words_between(doc: &Document, start: TokenRef, end: TokenRef) -> Vec<TokenRef> {
    if start == end {
        return vec![start];
    }
    let mut out = Vec::new();
    for s in start.sentence..=end.sentence {
        let n = doc.sentences[s].tokens.len();
        let from = if s == start.sentence { start.token } else { 0 };
        let to = if s == end.sentence { end.token + 1 } else { n };
        out.extend((from..to).map(|t| TokenRef::new(s, t)));
    }
    out
}

fn group(raw: Vec<RawMention>, names: &EntityAttributeNames) -> Vec<Entity> {
    let head_slot = names.0.iter().position(|n| n == "head");
    let mut by_id: BTreeMap<String, Vec<Mention>> = BTreeMap::new();
    for m in raw {
        // attrs[i] corresponds to names[i + 1]; names[0] is the eid itself.
        let declared_head = head_slot
            .filter(|&h| h > 0)
            .and_then(|h| m.attrs.get(h - 1))
            .and_then(|v| v.parse::<usize>().ok());
        let attributes = m
            .attrs
            .iter()
            .enumerate()
            .map(|(i, v)| (names.name(i + 1), v.clone()))
            .collect();
        let head = m.span[0];
        by_id.entry(m.entity_id.clone()).or_default().push(Mention {
            entity_id: m.entity_id,
            span: m.span,
            parts: m.parts,
            head,
            declared_head,
            attributes,
        });
    }
    let mut entities: Vec<Entity> = by_id
        .into_iter()
        .map(|(entity_id, mut mentions)| {
            mentions.sort_by_key(|m| (m.start(), m.end()));
            Entity {
                entity_id,
                mentions,
            }
        })
        .collect();
    entities.sort_by(|a, b| {
        (a.mentions[0].start(), a.mentions[0].end(), &a.entity_id).cmp(&(
            b.mentions[0].start(),
            b.mentions[0].end(),
            &b.entity_id,
        ))
    });
    entities
}
