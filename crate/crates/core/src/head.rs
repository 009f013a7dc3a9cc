//! Mention head selection.

use crate::model::{Document, Mention, Sentence, TokenId, TokenRef};

/// How mention heads are chosen.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum HeadRule {
    /// Use the head position declared in the Entity annotation when present
    /// and in range, otherwise fall back to [`HeadRule::Syntactic`].
    #[default]
    Declared,
    /// Always use [`mention_head`].
    Syntactic,
}

/// The span word whose syntactic parent lies outside the span. Among several
/// such words the shallowest in the tree wins, then the leftmost. Degenerate
/// spans with no such word fall back to their first word.
pub fn mention_head(mention: &Mention, document: &Document) -> TokenRef {
    let mut best: Option<(usize, TokenRef)> = None;
    for &pos in &mention.span {
        let sentence = &document.sentences[pos.sentence];
        let parent = sentence.tokens[pos.token].parent();
        let outside = match parent {
            None => true,
            Some(p) if p == TokenId::ROOT => true,
            Some(p) => match sentence.position_of(p) {
                Some(t) => !mention.contains(TokenRef::new(pos.sentence, t)),
                None => true,
            },
        };
        if !outside {
            continue;
        }
        let depth = depth(sentence, pos.token);
        if best.is_none_or(|(d, _)| depth < d) {
            best = Some((depth, pos));
        }
    }
    best.map(|(_, p)| p).unwrap_or(mention.span[0])
}

/// Head under the given rule.
pub fn resolve_head(mention: &Mention, document: &Document, rule: HeadRule) -> TokenRef {
    if rule == HeadRule::Declared {
        if let Some(i) = mention.declared_head {
            if (1..=mention.span.len()).contains(&i) {
                return mention.span[i - 1];
            }
        }
    }
    mention_head(mention, document)
}

/// Recompute `Mention::head` for every mention of the document.
pub fn resolve_heads(document: &mut Document, rule: HeadRule) {
    let mut heads = alloc::vec::Vec::new();
    for m in document.mentions() {
        heads.push(resolve_head(m, document, rule));
    }
    let mut heads = heads.into_iter();
    for e in &mut document.entities {
        for m in &mut e.mentions {
            m.head = heads.next().expect("one head per mention");
        }
    }
}

/// Number of arcs from the word to the root; `usize::MAX` on a cycle or a
/// dangling parent.
fn depth(sentence: &Sentence, token: usize) -> usize {
    let mut current = token;
    for steps in 0..=sentence.tokens.len() {
        match sentence.tokens[current].parent() {
            None => return usize::MAX,
            Some(p) if p == TokenId::ROOT => return steps,
            Some(p) => match sentence.position_of(p) {
                Some(next) => current = next,
                None => return usize::MAX,
            },
        }
    }
    usize::MAX
}
