//! Diagnosis of gold entities that a system leaves completely unresolved.
//!
//! The breakdown narrows step by step: unresolved entities (A), the
//! two-mention ones among them (B), their undetected mentions (C), and the
//! length, pre-modification and mean length of those (D, E, F). Two-mention
//! entities whose mentions were both detected are profiled separately as
//! missing links.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::Serialize;

use crate::analysis::MentionLocator;
use crate::metrics::{align_mentions, Alignment, MatchMode, MetricsError};
use crate::model::{Document, Entity, Mention};
use crate::rational::Ratio;
use crate::taxonomy::{classify_mention_type, ud_category, MentionType, UdCategory};

/// When a gold entity counts as unresolved.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnresolvedDefinition {
    /// No system cluster holds two or more of its mentions.
    #[default]
    NoLinkRecovered,
    /// None of its mentions was detected at all.
    NoMentionDetected,
}

/// Sentence-distance buckets 0, 1, 2 and 3+.
pub const DISTANCE_BUCKETS: [&str; 4] = ["0", "1", "2", "3+"];

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ErrorCounts {
    /// Non-singleton gold entities.
    pub gold_entities: u64,
    pub unresolved: u64,
    pub two_mention: u64,
    /// Mentions of the two-mention unresolved entities.
    pub two_mention_mentions: u64,
    pub undetected: u64,
    /// Undetected mentions with at most two words.
    pub undetected_short: u64,
    pub undetected_pre_modified: u64,
    pub undetected_words: u64,
    pub undetected_types: BTreeMap<MentionType, u64>,
    /// Two-mention unresolved entities with both mentions detected.
    pub both_detected: u64,
    pub distance: [u64; 4],
    /// Keyed by (first, second) mention type; serialized as a list of entries.
    #[serde(serialize_with = "pairs_as_entries")]
    pub type_pairs: BTreeMap<(MentionType, MentionType), u64>,
    /// Keyed by the second mention's type (nominal noun or overt pronoun):
    /// category of the first mention's head.
    pub antecedent_categories: BTreeMap<MentionType, BTreeMap<UdCategory, u64>>,
}

fn pairs_as_entries<S: serde::Serializer>(
    map: &BTreeMap<(MentionType, MentionType), u64>,
    s: S,
) -> Result<S::Ok, S::Error> {
    s.collect_seq(map.iter().map(|(&(first, second), &count)| PairEntry { first, second, count }))
}

#[derive(Serialize)]
struct PairEntry {
    first: MentionType,
    second: MentionType,
    count: u64,
}

impl ErrorCounts {
    pub fn merge(&mut self, o: &ErrorCounts) {
        self.gold_entities += o.gold_entities;
        self.unresolved += o.unresolved;
        self.two_mention += o.two_mention;
        self.two_mention_mentions += o.two_mention_mentions;
        self.undetected += o.undetected;
        self.undetected_short += o.undetected_short;
        self.undetected_pre_modified += o.undetected_pre_modified;
        self.undetected_words += o.undetected_words;
        for (k, v) in &o.undetected_types {
            *self.undetected_types.entry(*k).or_default() += v;
        }
        self.both_detected += o.both_detected;
        for (a, b) in self.distance.iter_mut().zip(o.distance) {
            *a += b;
        }
        for (k, v) in &o.type_pairs {
            *self.type_pairs.entry(*k).or_default() += v;
        }
        for (k, inner) in &o.antecedent_categories {
            let slot = self.antecedent_categories.entry(*k).or_default();
            for (c, v) in inner {
                *slot.entry(*c).or_default() += v;
            }
        }
    }

    pub fn report(&self, dataset: &str) -> ErrorReport {
        ErrorReport {
            dataset: dataset.into(),
            unresolved: Ratio::new(self.unresolved, self.gold_entities),
            two_mention: Ratio::new(self.two_mention, self.unresolved),
            undetected: Ratio::new(self.undetected, self.two_mention_mentions),
            short: Ratio::new(self.undetected_short, self.undetected),
            pre_modified: Ratio::new(self.undetected_pre_modified, self.undetected),
            average_length: Ratio::new(self.undetected_words, self.undetected),
        }
    }

    /// Share of each type among undetected mentions.
    pub fn undetected_type_distribution(&self) -> Vec<(MentionType, Ratio)> {
        MentionType::ALL
            .iter()
            .map(|t| {
                let n = self.undetected_types.get(t).copied().unwrap_or(0);
                (*t, Ratio::new(n, self.undetected))
            })
            .collect()
    }

    pub fn distance_distribution(&self) -> Vec<(&'static str, Ratio)> {
        DISTANCE_BUCKETS
            .iter()
            .zip(self.distance)
            .map(|(b, n)| (*b, Ratio::new(n, self.both_detected)))
            .collect()
    }
}

/// Columns A to F as exact ratios.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ErrorReport {
    pub dataset: String,
    /// A: unresolved share of non-singleton gold entities.
    pub unresolved: Ratio,
    /// B: two-mention share of unresolved entities.
    pub two_mention: Ratio,
    /// C: undetected share of the mentions of B's entities.
    pub undetected: Ratio,
    /// D: share of C's mentions with at most two words.
    pub short: Ratio,
    /// E: share of C's mentions that are pre-modified.
    pub pre_modified: Ratio,
    /// F: mean word length of C's mentions.
    pub average_length: Ratio,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MentionDiagnosis {
    pub sentence: usize,
    pub span: String,
    pub mention_type: MentionType,
    pub words: usize,
    pub detected: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnresolvedEntity {
    pub doc_id: String,
    pub entity_id: String,
    pub mentions: Vec<MentionDiagnosis>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DocumentErrors {
    pub counts: ErrorCounts,
    pub unresolved: Vec<UnresolvedEntity>,
}

fn is_unresolved(e: usize, entity: &Entity, alignment: &Alignment, def: UnresolvedDefinition) -> bool {
    let matched = (0..entity.mentions.len()).filter_map(|i| alignment.gold_to_pred.get(&(e, i)));
    match def {
        UnresolvedDefinition::NoMentionDetected => matched.count() == 0,
        UnresolvedDefinition::NoLinkRecovered => {
            let mut per_cluster: BTreeMap<usize, u32> = BTreeMap::new();
            for &(pred_entity, _) in matched {
                *per_cluster.entry(pred_entity).or_default() += 1;
            }
            per_cluster.values().all(|&n| n < 2)
        }
    }
}

/// Indices of the non-singleton gold entities left unresolved.
pub fn unresolved_indices(gold: &Document, alignment: &Alignment, def: UnresolvedDefinition) -> Vec<usize> {
    gold.entities
        .iter()
        .enumerate()
        .filter(|(_, e)| !e.is_singleton())
        .filter(|(i, e)| is_unresolved(*i, e, alignment, def))
        .map(|(i, _)| i)
        .collect()
}

pub fn unresolved_entities<'a>(
    gold: &'a Document,
    pred: &Document,
    mode: MatchMode,
    def: UnresolvedDefinition,
) -> Result<Vec<&'a Entity>, MetricsError> {
    let alignment = align_mentions(gold, pred, mode)?;
    Ok(unresolved_indices(gold, &alignment, def)
        .into_iter()
        .map(|i| &gold.entities[i])
        .collect())
}

fn mention_type(doc: &Document, m: &Mention) -> MentionType {
    classify_mention_type(doc.head_token(m))
}

/// Full breakdown for one gold/system document pair.
pub fn analyze_document(
    gold: &Document,
    pred: &Document,
    mode: MatchMode,
    def: UnresolvedDefinition,
) -> Result<DocumentErrors, MetricsError> {
    let alignment = align_mentions(gold, pred, mode)?;
    Ok(analyze_aligned(gold, &alignment, def))
}

pub fn analyze_aligned(gold: &Document, alignment: &Alignment, def: UnresolvedDefinition) -> DocumentErrors {
    let mut out = DocumentErrors::default();
    let c = &mut out.counts;
    c.gold_entities = gold.entities.iter().filter(|e| !e.is_singleton()).count() as u64;

    for e in unresolved_indices(gold, alignment, def) {
        let entity = &gold.entities[e];
        c.unresolved += 1;
        let detected: Vec<bool> = (0..entity.mentions.len())
            .map(|i| alignment.is_detected((e, i)))
            .collect();

        out.unresolved.push(UnresolvedEntity {
            doc_id: gold.doc_id.clone(),
            entity_id: entity.entity_id.clone(),
            mentions: entity
                .mentions
                .iter()
                .zip(&detected)
                .map(|(m, &d)| {
                    let loc = MentionLocator::of(gold, m);
                    MentionDiagnosis {
                        sentence: loc.sentence,
                        span: loc.span,
                        mention_type: mention_type(gold, m),
                        words: m.len(),
                        detected: d,
                    }
                })
                .collect(),
        });

        if entity.mentions.len() != 2 {
            continue;
        }
        c.two_mention += 1;
        c.two_mention_mentions += 2;
        for (m, _) in entity.mentions.iter().zip(&detected).filter(|(_, d)| !**d) {
            c.undetected += 1;
            c.undetected_words += m.len() as u64;
            if m.len() <= 2 {
                c.undetected_short += 1;
            }
            if m.is_pre_modified() {
                c.undetected_pre_modified += 1;
            }
            *c.undetected_types.entry(mention_type(gold, m)).or_default() += 1;
        }

        if detected.iter().all(|d| *d) {
            let (first, second) = (&entity.mentions[0], &entity.mentions[1]);
            c.both_detected += 1;
            let distance = second.start().sentence - first.start().sentence;
            c.distance[distance.min(3)] += 1;
            let (t1, t2) = (mention_type(gold, first), mention_type(gold, second));
            *c.type_pairs.entry((t1, t2)).or_default() += 1;
            if matches!(t2, MentionType::NominalNoun | MentionType::OvertPronoun) {
                let cat = ud_category(gold.head_token(first).relation().unwrap_or(""));
                *c.antecedent_categories
                    .entry(t2)
                    .or_default()
                    .entry(cat)
                    .or_default() += 1;
            }
        }
    }
    out
}
