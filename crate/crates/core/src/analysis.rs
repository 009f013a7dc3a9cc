//! Corpus-level linguistic statistics over gold annotations.
//!
//! Every statistic is an exact count ratio so that per-document results can
//! be pooled in any order. Rendering to percentages happens at the edges.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::Serialize;
use thiserror::Error;

use crate::model::{Corpus, Document, Entity, Mention};
use crate::rational::Ratio;
use crate::taxonomy::{classify_mention_type, ud_category, MentionType, UdCategory};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RowKind {
    /// Rendered as a percentage of the denominator.
    Percent,
    /// Rendered as a plain quotient, e.g. mentions per entity.
    Mean,
    /// A bare count; the denominator is 1.
    Count,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportRow {
    pub key: String,
    pub value: Ratio,
    pub kind: RowKind,
}

/// Named statistics for one dataset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DatasetReport {
    pub dataset: String,
    pub rows: Vec<ReportRow>,
}

impl DatasetReport {
    fn new(corpus: &Corpus) -> Self {
        Self::named(corpus.dataset.clone())
    }

    pub fn named(dataset: impl Into<String>) -> Self {
        DatasetReport {
            dataset: dataset.into(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, key: &str, value: Ratio, kind: RowKind) {
        self.rows.push(ReportRow {
            key: key.to_owned(),
            value,
            kind,
        });
    }

    pub fn get(&self, key: &str) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.key == key)
    }

    pub fn value(&self, key: &str) -> Option<Ratio> {
        self.get(key).map(|r| r.value)
    }
}

fn mention_type(doc: &Document, m: &Mention) -> MentionType {
    classify_mention_type(doc.head_token(m))
}

fn head_category(doc: &Document, m: &Mention) -> UdCategory {
    ud_category(doc.head_token(m).relation().unwrap_or(""))
}

/// Share of multi-word mentions whose head is their last word, plus the
/// same count over all mentions.
pub fn head_position_stats(corpus: &Corpus) -> DatasetReport {
    let (mut pre, mut multi, mut all) = (0u64, 0u64, 0u64);
    for (_, _, m) in corpus.mentions() {
        all += 1;
        if m.len() > 1 {
            multi += 1;
            if m.is_pre_modified() {
                pre += 1;
            }
        }
    }
    let mut r = DatasetReport::new(corpus);
    r.push("pre_modified", Ratio::new(pre, multi), RowKind::Percent);
    r.push(
        "pre_modified_all_mentions",
        Ratio::new(pre, all),
        RowKind::Percent,
    );
    r
}

pub fn mention_type_counts(corpus: &Corpus) -> BTreeMap<MentionType, u64> {
    let mut counts: BTreeMap<MentionType, u64> = MentionType::ALL.iter().map(|t| (*t, 0)).collect();
    for (d, _, m) in corpus.mentions() {
        *counts.entry(mention_type(d, m)).or_default() += 1;
    }
    counts
}

/// Share of each mention type over all gold mentions.
pub fn mention_type_distribution(corpus: &Corpus) -> DatasetReport {
    let counts = mention_type_counts(corpus);
    let total: u64 = counts.values().sum();
    let mut r = DatasetReport::new(corpus);
    for (t, n) in counts {
        r.push(t.name(), Ratio::new(n, total), RowKind::Percent);
    }
    r
}

/// Categories of the closest antecedents of anaphors of type `kind`, most
/// frequent first; ties by category letter.
pub fn anaphor_antecedent_ranking(corpus: &Corpus, kind: MentionType) -> Vec<(UdCategory, u64)> {
    let mut counts: BTreeMap<UdCategory, u64> = BTreeMap::new();
    for doc in &corpus.documents {
        for e in &doc.entities {
            for pair in e.mentions.windows(2) {
                let (antecedent, anaphor) = (&pair[0], &pair[1]);
                if mention_type(doc, anaphor) == kind {
                    *counts.entry(head_category(doc, antecedent)).or_default() += 1;
                }
            }
        }
    }
    let mut ranking: Vec<(UdCategory, u64)> = counts.into_iter().collect();
    ranking.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.letter().cmp(&b.0.letter())));
    ranking
}

/// Over non-singleton entities: how often the first mention is (one of)
/// the longest, and how often it is a nominal or proper noun.
pub fn first_mention_stats(corpus: &Corpus) -> DatasetReport {
    let (mut entities, mut longest, mut nominal) = (0u64, 0u64, 0u64);
    for doc in &corpus.documents {
        for e in doc.entities.iter().filter(|e| !e.is_singleton()) {
            entities += 1;
            let first = &e.mentions[0];
            if e.mentions[1..].iter().all(|m| first.len() >= m.len()) {
                longest += 1;
            }
            if mention_type(doc, first).is_nominal_or_proper() {
                nominal += 1;
            }
        }
    }
    let mut r = DatasetReport::new(corpus);
    r.push("first_is_longest", Ratio::new(longest, entities), RowKind::Percent);
    r.push(
        "first_is_nominal_or_proper",
        Ratio::new(nominal, entities),
        RowKind::Percent,
    );
    r
}

pub fn entity_size_stats(corpus: &Corpus) -> DatasetReport {
    let (mut ents, mut ments, mut big_ents, mut big_ments) = (0u64, 0u64, 0u64, 0u64);
    for doc in &corpus.documents {
        for e in &doc.entities {
            ents += 1;
            ments += e.mentions.len() as u64;
            if !e.is_singleton() {
                big_ents += 1;
                big_ments += e.mentions.len() as u64;
            }
        }
    }
    let mut r = DatasetReport::new(corpus);
    r.push("mentions_per_entity", Ratio::new(ments, ents), RowKind::Mean);
    r.push(
        "mentions_per_entity_excluding_singletons",
        Ratio::new(big_ments, big_ents),
        RowKind::Mean,
    );
    r
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PronounKind {
    Overt,
    Zero,
}

impl PronounKind {
    fn mention_type(self) -> MentionType {
        match self {
            PronounKind::Overt => MentionType::OvertPronoun,
            PronounKind::Zero => MentionType::ZeroPronoun,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CompetingStats {
    /// All mentions of the requested pronoun kind.
    pub pronouns: u64,
    /// Pronouns meeting the examination conditions.
    pub valid: u64,
    /// Sum of competitor counts over valid pronouns.
    pub competitors: u64,
}

impl CompetingStats {
    pub fn valid_fraction(&self) -> Ratio {
        Ratio::new(self.valid, self.pronouns)
    }

    pub fn mean_competitors(&self) -> Ratio {
        Ratio::new(self.competitors, self.valid)
    }
}

fn agreement<'a>(doc: &'a Document, m: &Mention) -> Option<(&'a str, &'a str)> {
    let feats = &doc.head_token(m).feats;
    Some((feats.get("Gender")?, feats.get("Number")?))
}

/// Competing antecedents of pronominal anaphors.
///
/// A pronoun is examined when it has Gender and Number and its closest
/// antecedent is in the same or the previous sentence. Its competitors are
/// earlier mentions of other entities in that window whose heads agree in
/// Gender and Number.
pub fn competing_antecedents(corpus: &Corpus, kind: PronounKind) -> CompetingStats {
    let target = kind.mention_type();
    let mut stats = CompetingStats::default();
    for doc in &corpus.documents {
        for (ei, e) in doc.entities.iter().enumerate() {
            for (mi, anaphor) in e.mentions.iter().enumerate() {
                if mention_type(doc, anaphor) != target {
                    continue;
                }
                stats.pronouns += 1;
                let Some(features) = agreement(doc, anaphor) else {
                    continue;
                };
                if mi == 0 {
                    continue;
                }
                let sentence = anaphor.head.sentence;
                let antecedent = &e.mentions[mi - 1];
                if antecedent.head.sentence + 1 < sentence || antecedent.head.sentence > sentence {
                    continue;
                }
                stats.valid += 1;
                let competitors = doc
                    .entities
                    .iter()
                    .enumerate()
                    .filter(|(other, _)| *other != ei)
                    .flat_map(|(_, o)| o.mentions.iter())
                    .filter(|c| {
                        c.head.sentence + 1 >= sentence
                            && c.head.sentence <= sentence
                            && c.start() < anaphor.start()
                            && agreement(doc, c) == Some(features)
                    })
                    .count();
                stats.competitors += competitors as u64;
            }
        }
    }
    stats
}

/// How a genre label is read from a document id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenreRule {
    pub separator: char,
    pub field: usize,
}

impl Default for GenreRule {
    /// Second `_`-separated field, as in `GUM_vlog_example`.
    fn default() -> Self {
        GenreRule {
            separator: '_',
            field: 1,
        }
    }
}

impl GenreRule {
    pub fn extract<'a>(&self, doc_id: &'a str) -> Option<&'a str> {
        doc_id
            .split(self.separator)
            .nth(self.field)
            .filter(|g| !g.is_empty())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenreRate {
    pub genre: String,
    pub pronouns: u64,
    pub tokens: u64,
}

impl GenreRate {
    /// Personal pronouns per 8000 surface words.
    pub fn rate(&self) -> Ratio {
        Ratio::new(self.pronouns * 8000, self.tokens)
    }
}

pub fn is_personal_pronoun(t: &crate::model::Token) -> bool {
    !t.is_empty() && t.upos == "PRON" && t.feats.get("PronType") == Some("Prs")
}

/// Personal pronoun frequency per genre, genres in alphabetical order.
/// Documents without an extractable genre are grouped under `unknown`.
pub fn genre_pronoun_frequency(corpus: &Corpus, rule: &GenreRule) -> Vec<GenreRate> {
    let mut by_genre: BTreeMap<String, (u64, u64)> = BTreeMap::new();
    for doc in &corpus.documents {
        let genre = doc
            .genre
            .as_deref()
            .or_else(|| rule.extract(&doc.doc_id))
            .unwrap_or("unknown");
        let slot = by_genre.entry(genre.to_owned()).or_default();
        for s in &doc.sentences {
            for t in s.surface_tokens() {
                slot.1 += 1;
                if is_personal_pronoun(t) {
                    slot.0 += 1;
                }
            }
        }
    }
    by_genre
        .into_iter()
        .map(|(genre, (pronouns, tokens))| GenreRate {
            genre,
            pronouns,
            tokens,
        })
        .collect()
}

/// Document, sentence, token, entity and mention counts.
pub fn corpus_statistics(corpus: &Corpus) -> DatasetReport {
    let docs = corpus.documents.len() as u64;
    let sents = corpus.sentence_count() as u64;
    let tokens = corpus.surface_token_count() as u64;
    let ents = corpus.entity_count() as u64;
    let ments = corpus.mention_count() as u64;
    let mut r = DatasetReport::new(corpus);
    r.push("docs", Ratio::new(docs, 1), RowKind::Count);
    r.push("sents_per_doc", Ratio::new(sents, docs), RowKind::Mean);
    r.push("tokens_per_sent", Ratio::new(tokens, sents), RowKind::Mean);
    r.push("entities", Ratio::new(ents, 1), RowKind::Count);
    r.push("mentions", Ratio::new(ments, 1), RowKind::Count);
    r.push("mentions_per_entity", Ratio::new(ments, ents), RowKind::Mean);
    r
}

/// Identifies a mention in an external vectors file: document, 0-based
/// sentence index within the document, and the word ids of the span, runs of
/// adjacent words comma-joined and gaps marked by `+` (e.g. `3,4+7`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MentionLocator {
    pub doc_id: String,
    pub sentence: usize,
    pub span: String,
}

impl MentionLocator {
    pub fn of(doc: &Document, m: &Mention) -> Self {
        let mut span = String::new();
        let mut prev: Option<crate::model::TokenRef> = None;
        for &p in &m.span {
            if let Some(q) = prev {
                let adjacent = q.sentence == p.sentence && q.token + 1 == p.token;
                span.push(if adjacent { ',' } else { '+' });
            }
            span.push_str(&doc.token(p).id.to_string());
            prev = Some(p);
        }
        MentionLocator {
            doc_id: doc.doc_id.clone(),
            sentence: m.start().sentence,
            span,
        }
    }
}

impl core::fmt::Display for MentionLocator {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}\t{}\t{}", self.doc_id, self.sentence, self.span)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum VectorError {
    #[error("line {line}: expected doc_id, sentence, span and at least one value")]
    TooFewColumns { line: usize },
    #[error("line {line}: invalid sentence index `{value}`")]
    BadSentence { line: usize, value: String },
    #[error("line {line}: `{value}` is not a finite number")]
    BadValue { line: usize, value: String },
    #[error("line {line}: vector has dimension {found}, expected {expected}")]
    Dimension {
        line: usize,
        found: usize,
        expected: usize,
    },
    #[error("line {line}: duplicate vector for {key}")]
    Duplicate { line: usize, key: String },
    #[error("missing vectors for {} mention(s): {}", .0.len(), .0.join("; "))]
    Missing(Vec<String>),
}

/// Mention embeddings of a uniform dimension.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MentionVectors {
    dimension: Option<usize>,
    vectors: BTreeMap<MentionLocator, Vec<f64>>,
}

impl MentionVectors {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dimension(&self) -> Option<usize> {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn get(&self, key: &MentionLocator) -> Option<&[f64]> {
        self.vectors.get(key).map(Vec::as_slice)
    }

    /// Add a vector; `line` is only used in error messages.
    pub fn insert(&mut self, key: MentionLocator, vector: Vec<f64>, line: usize) -> Result<(), VectorError> {
        if let Some(v) = vector.iter().find(|v| !v.is_finite()) {
            return Err(VectorError::BadValue {
                line,
                value: format!("{v}"),
            });
        }
        match self.dimension {
            Some(d) if d != vector.len() => {
                return Err(VectorError::Dimension {
                    line,
                    found: vector.len(),
                    expected: d,
                })
            }
            _ => self.dimension = Some(vector.len()),
        }
        if self.vectors.contains_key(&key) {
            return Err(VectorError::Duplicate {
                line,
                key: key.to_string(),
            });
        }
        self.vectors.insert(key, vector);
        Ok(())
    }

    /// Parse the tab-separated vectors format; `#` lines and blank lines are skipped.
    pub fn parse_tsv(input: &str) -> Result<Self, VectorError> {
        let mut out = MentionVectors::new();
        for (i, line) in input.lines().enumerate() {
            let line_no = i + 1;
            let line = line.trim_end();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() < 4 {
                return Err(VectorError::TooFewColumns { line: line_no });
            }
            let sentence = cols[1].parse().map_err(|_| VectorError::BadSentence {
                line: line_no,
                value: cols[1].to_owned(),
            })?;
            let values = cols[3..]
                .iter()
                .map(|v| {
                    v.parse::<f64>()
                        .ok()
                        .filter(|x| x.is_finite())
                        .ok_or_else(|| VectorError::BadValue {
                            line: line_no,
                            value: (*v).to_owned(),
                        })
                })
                .collect::<Result<Vec<f64>, _>>()?;
            let key = MentionLocator {
                doc_id: cols[0].to_owned(),
                sentence,
                span: cols[2].to_owned(),
            };
            out.insert(key, values, line_no)?;
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct DistanceStats {
    pub pairs: u64,
    pub mean: f64,
    pub variance: f64,
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    libm::sqrt(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum())
}

/// Mean and population variance of Euclidean distances over all unordered
/// mention pairs within each non-singleton entity.
pub fn semantic_distance(corpus: &Corpus, vectors: &MentionVectors) -> Result<DistanceStats, VectorError> {
    let mut missing = Vec::new();
    let mut distances = Vec::new();
    for doc in &corpus.documents {
        for e in doc.entities.iter().filter(|e| !e.is_singleton()) {
            let vs: Vec<Option<&[f64]>> = e
                .mentions
                .iter()
                .map(|m| {
                    let key = MentionLocator::of(doc, m);
                    let v = vectors.get(&key);
                    if v.is_none() {
                        missing.push(key.to_string());
                    }
                    v
                })
                .collect();
            for i in 0..vs.len() {
                for j in i + 1..vs.len() {
                    if let (Some(a), Some(b)) = (vs[i], vs[j]) {
                        distances.push(euclidean(a, b));
                    }
                }
            }
        }
    }
    if !missing.is_empty() {
        return Err(VectorError::Missing(missing));
    }
    let n = distances.len();
    if n == 0 {
        return Ok(DistanceStats::default());
    }
    let mean = distances.iter().sum::<f64>() / n as f64;
    let variance = distances.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / n as f64;
    Ok(DistanceStats {
        pairs: n as u64,
        mean,
        variance,
    })
}

/// Entities whose first mention has the given type.
pub fn entities_starting_with(corpus: &Corpus, kind: MentionType) -> u64 {
    corpus
        .documents
        .iter()
        .flat_map(|d| d.entities.iter().map(move |e: &Entity| (d, e)))
        .filter(|(d, e)| mention_type(d, &e.mentions[0]) == kind)
        .count() as u64
}
