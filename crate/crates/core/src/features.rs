//! Span and document features for downstream coreference models.
//!
//! Heads are syntactic heads. A neural model would pick the word with the
//! highest attention weight instead; that is not available here, so the
//! substitution is recorded in [`EXPORT_HEADER`].

use alloc::borrow::ToOwned;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::head::mention_head;
use crate::model::{Corpus, Document, Mention, TokenRef};
use crate::taxonomy::{base_relation, classify_mention_type, ud_category, MentionType, UdCategory};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum WidthBucket {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "3")]
    Three,
    #[serde(rename = "4")]
    Four,
    #[serde(rename = "5-7")]
    FiveToSeven,
    #[serde(rename = "8-15")]
    EightToFifteen,
    #[serde(rename = "16-31")]
    SixteenToThirtyOne,
    #[serde(rename = "32+")]
    ThirtyTwoPlus,
}

impl WidthBucket {
    pub fn of(width: usize) -> Self {
        match width {
            0 | 1 => WidthBucket::One,
            2 => WidthBucket::Two,
            3 => WidthBucket::Three,
            4 => WidthBucket::Four,
            5..=7 => WidthBucket::FiveToSeven,
            8..=15 => WidthBucket::EightToFifteen,
            16..=31 => WidthBucket::SixteenToThirtyOne,
            _ => WidthBucket::ThirtyTwoPlus,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            WidthBucket::One => "1",
            WidthBucket::Two => "2",
            WidthBucket::Three => "3",
            WidthBucket::Four => "4",
            WidthBucket::FiveToSeven => "5-7",
            WidthBucket::EightToFifteen => "8-15",
            WidthBucket::SixteenToThirtyOne => "16-31",
            WidthBucket::ThirtyTwoPlus => "32+",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum WordOrder {
    #[serde(rename = "SOV")]
    Sov,
    #[serde(rename = "SVO")]
    Svo,
    #[serde(rename = "VSO")]
    Vso,
    #[serde(rename = "VOS")]
    Vos,
    #[serde(rename = "OVS")]
    Ovs,
    #[serde(rename = "OSV")]
    Osv,
    NoDominant,
}

impl WordOrder {
    pub fn label(self) -> &'static str {
        match self {
            WordOrder::Sov => "SOV",
            WordOrder::Svo => "SVO",
            WordOrder::Vso => "VSO",
            WordOrder::Vos => "VOS",
            WordOrder::Ovs => "OVS",
            WordOrder::Osv => "OSV",
            WordOrder::NoDominant => "NoDominant",
        }
    }
}

impl FromStr for WordOrder {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Ok(match s {
            "SOV" => WordOrder::Sov,
            "SVO" => WordOrder::Svo,
            "VSO" => WordOrder::Vso,
            "VOS" => WordOrder::Vos,
            "OVS" => WordOrder::Ovs,
            "OSV" => WordOrder::Osv,
            "NoDominant" | "ND" | "No dominant order" => WordOrder::NoDominant,
            _ => return Err(()),
        })
    }
}

impl fmt::Display for WordOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum FeatureError {
    #[error("word-order table line {line}: expected `language<TAB>order`")]
    MalformedRow { line: usize },
    #[error("word-order table line {line}: unknown word order `{value}`")]
    UnknownOrder { line: usize, value: String },
    #[error("word-order table line {line}: duplicate language `{language}`")]
    DuplicateLanguage { line: usize, language: String },
    #[error("no word order configured for language `{0}`")]
    MissingLanguage(String),
}

/// Dominant word order per language code.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WordOrderTable(BTreeMap<String, WordOrder>);

impl WordOrderTable {
    /// Two tab-separated columns; `#` comments and blank lines are ignored.
    pub fn parse_tsv(input: &str) -> Result<Self, FeatureError> {
        let mut table = BTreeMap::new();
        for (i, line) in input.lines().enumerate() {
            let line_no = i + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split('\t').map(str::trim);
            let (Some(lang), Some(order), None) = (cols.next(), cols.next(), cols.next()) else {
                return Err(FeatureError::MalformedRow { line: line_no });
            };
            if lang.is_empty() {
                return Err(FeatureError::MalformedRow { line: line_no });
            }
            let order = order.parse().map_err(|_| FeatureError::UnknownOrder {
                line: line_no,
                value: order.to_owned(),
            })?;
            if table.insert(lang.to_owned(), order).is_some() {
                return Err(FeatureError::DuplicateLanguage {
                    line: line_no,
                    language: lang.to_owned(),
                });
            }
        }
        Ok(WordOrderTable(table))
    }

    pub fn get(&self, language: &str) -> Option<WordOrder> {
        self.0.get(language).copied()
    }

    pub fn insert(&mut self, language: impl Into<String>, order: WordOrder) {
        self.0.insert(language.into(), order);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpanFeatures {
    pub width_bucket: WidthBucket,
    pub head_upos: String,
    pub head_deprel: String,
    pub mention_type: MentionType,
    pub ud_category: UdCategory,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DocFeatures {
    pub language: String,
    pub word_order: WordOrder,
}

fn features_for(doc: &Document, span_len: usize, head: TokenRef) -> SpanFeatures {
    let token = doc.token(head);
    let relation = token.relation().unwrap_or("_");
    SpanFeatures {
        width_bucket: WidthBucket::of(span_len),
        head_upos: token.upos.clone(),
        head_deprel: base_relation(relation).to_owned(),
        mention_type: classify_mention_type(token),
        ud_category: ud_category(relation),
    }
}

pub fn extract_span_features(mention: &Mention, document: &Document) -> SpanFeatures {
    features_for(document, mention.len(), mention.head)
}

pub fn extract_doc_features(document: &Document, table: &WordOrderTable) -> Result<DocFeatures, FeatureError> {
    let word_order = table
        .get(&document.language)
        .ok_or_else(|| FeatureError::MissingLanguage(document.language.clone()))?;
    Ok(DocFeatures {
        language: document.language.clone(),
        word_order,
    })
}

/// Which spans to export.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportTarget {
    /// Every gold mention.
    Gold,
    /// Every contiguous run of surface words up to the given width.
    AllSpans { max_width: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FeatureRecord {
    pub doc_id: String,
    pub sentence: usize,
    /// Word ids, runs comma-joined and gaps marked by `+`.
    pub span: String,
    #[serde(flatten)]
    pub span_features: SpanFeatures,
    #[serde(flatten)]
    pub doc_features: DocFeatures,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entity_id: Option<String>,
}

/// Every categorical value used, per field.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vocabulary(BTreeMap<&'static str, BTreeSet<String>>);

impl Vocabulary {
    fn add(&mut self, r: &FeatureRecord) {
        let mut put = |field: &'static str, v: &str| {
            self.0.entry(field).or_default().insert(v.to_owned());
        };
        put("width_bucket", r.span_features.width_bucket.label());
        put("head_upos", &r.span_features.head_upos);
        put("head_deprel", &r.span_features.head_deprel);
        put("mention_type", r.span_features.mention_type.name());
        put("ud_category", &r.span_features.ud_category.to_string());
        put("language", &r.doc_features.language);
        put("word_order", r.doc_features.word_order.label());
    }

    pub fn merge(&mut self, other: &Vocabulary) {
        for (field, values) in &other.0 {
            self.0.entry(field).or_default().extend(values.iter().cloned());
        }
    }

    pub fn contains(&self, field: &str, value: &str) -> bool {
        self.0.get(field).is_some_and(|s| s.contains(value))
    }

    /// `(field, value, index)` triples; indices count from 0 within a field.
    pub fn entries(&self) -> impl Iterator<Item = (&str, &str, usize)> {
        self.0.iter().flat_map(|(f, vals)| {
            vals.iter()
                .enumerate()
                .map(move |(i, v)| (*f, v.as_str(), i))
        })
    }
}

/// Header lines written ahead of exported records.
pub const EXPORT_HEADER: &[(&str, &str)] = &[
    ("format", "corefud-span-features"),
    ("version", "1"),
    (
        "head",
        "syntactic head (word whose parent lies outside the span) used in place of the attention-selected head",
    ),
];

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FeatureExport {
    pub records: Vec<FeatureRecord>,
    pub vocabulary: Vocabulary,
}

fn locate(doc: &Document, span: &[TokenRef]) -> String {
    let mut out = String::new();
    for (i, p) in span.iter().enumerate() {
        if i > 0 {
            let q = span[i - 1];
            let adjacent = q.sentence == p.sentence && q.token + 1 == p.token;
            out.push(if adjacent { ',' } else { '+' });
        }
        out.push_str(&doc.token(*p).id.to_string());
    }
    out
}

/// Build records in document order: gold mentions by entity then mention
/// order, candidate spans by sentence, start word, then width.
pub fn export_features(
    corpus: &Corpus,
    table: &WordOrderTable,
    target: ExportTarget,
) -> Result<FeatureExport, FeatureError> {
    let mut out = FeatureExport::default();
    for doc in &corpus.documents {
        let doc_features = extract_doc_features(doc, table)?;
        match target {
            ExportTarget::Gold => {
                let mut mentions: Vec<&Mention> = doc.mentions().collect();
                mentions.sort_by_key(|m| (m.start(), m.end()));
                for m in mentions {
                    out.records.push(FeatureRecord {
                        doc_id: doc.doc_id.clone(),
                        sentence: m.start().sentence,
                        span: locate(doc, &m.span),
                        span_features: extract_span_features(m, doc),
                        doc_features: doc_features.clone(),
                        entity_id: Some(m.entity_id.clone()),
                    });
                }
            }
            ExportTarget::AllSpans { max_width } => {
                for (s, sentence) in doc.sentences.iter().enumerate() {
                    let words: Vec<TokenRef> = sentence
                        .tokens
                        .iter()
                        .enumerate()
                        .filter(|(_, t)| !t.is_empty())
                        .map(|(t, _)| TokenRef::new(s, t))
                        .collect();
                    for start in 0..words.len() {
                        for width in 1..=max_width.min(words.len() - start) {
                            let span = words[start..start + width].to_vec();
                            let probe = Mention {
                                entity_id: String::new(),
                                head: span[0],
                                span,
                                parts: 1,
                                declared_head: None,
                                attributes: Vec::new(),
                            };
                            let head = mention_head(&probe, doc);
                            out.records.push(FeatureRecord {
                                doc_id: doc.doc_id.clone(),
                                sentence: s,
                                span: locate(doc, &probe.span),
                                span_features: features_for(doc, width, head),
                                doc_features: doc_features.clone(),
                                entity_id: None,
                            });
                        }
                    }
                }
            }
        }
    }
    for r in &out.records {
        out.vocabulary.add(r);
    }
    Ok(out)
}

/// Closed-form number of contiguous spans of width 1..=k in n words.
pub fn all_spans_count(n: usize, k: usize) -> usize {
    (1..=k.min(n)).map(|w| n - w + 1).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse_conllu;
    use alloc::format;

    fn table() -> WordOrderTable {
        WordOrderTable::parse_tsv("# lang\torder\nen\tSVO\nhu\tNoDominant\n").unwrap()
    }

    #[test]
    fn width_buckets() {
        let got: Vec<&str> = [1, 2, 3, 4, 5, 7, 8, 15, 16, 31, 32, 100]
            .iter()
            .map(|w| WidthBucket::of(*w).label())
            .collect();
        assert_eq!(
            got,
            ["1", "2", "3", "4", "5-7", "5-7", "8-15", "8-15", "16-31", "16-31", "32+", "32+"]
        );
    }

    #[test]
    fn word_order_table() {
        let t = table();
        assert_eq!(t.get("en"), Some(WordOrder::Svo));
        assert_eq!(t.get("xx"), None);
        assert_eq!(
            WordOrderTable::parse_tsv("en\tSVO\nen\tSOV\n"),
            Err(FeatureError::DuplicateLanguage {
                line: 2,
                language: "en".into()
            })
        );
        assert!(matches!(
            WordOrderTable::parse_tsv("en\tXYZ\n"),
            Err(FeatureError::UnknownOrder { .. })
        ));
        assert!(matches!(
            WordOrderTable::parse_tsv("en\n"),
            Err(FeatureError::MalformedRow { line: 1 })
        ));
    }

    #[test]
    fn pronoun_subject_features() {
        let input = "1\tshe\tshe\tPRON\t_\t_\t2\tnsubj\t_\tEntity=(e1)\n2\tran\trun\tVERB\t_\t_\t0\troot\t_\t_\n\n";
        let c = parse_conllu(input, "x", "en").unwrap();
        let d = &c.documents[0];
        let f = extract_span_features(&d.entities[0].mentions[0], d);
        assert_eq!(
            f,
            SpanFeatures {
                width_bucket: WidthBucket::One,
                head_upos: "PRON".into(),
                head_deprel: "nsubj".into(),
                mention_type: MentionType::OvertPronoun,
                ud_category: UdCategory::S,
            }
        );
        assert_eq!(extract_doc_features(d, &table()).unwrap().word_order, WordOrder::Svo);
        let missing = extract_doc_features(d, &WordOrderTable::default());
        assert_eq!(missing, Err(FeatureError::MissingLanguage("en".into())));
    }

    #[test]
    fn six_word_nmod_mention() {
        // "house of the very old man from town": mention = words 3..8 headed by "man".
        let rows = [
            ("house", "NOUN", 0, "root", "_"),
            ("of", "ADP", 6, "case", "_"),
            ("the", "DET", 6, "det", "Entity=(e1"),
            ("very", "ADV", 5, "advmod", "_"),
            ("old", "ADJ", 6, "amod", "_"),
            ("man", "NOUN", 1, "nmod", "_"),
            ("from", "ADP", 8, "case", "_"),
            ("town", "NOUN", 6, "nmod", "Entity=e1)"),
        ];
        let mut input = String::new();
        for (i, (f, u, h, r, m)) in rows.iter().enumerate() {
            input += &format!("{}\t{f}\t{f}\t{u}\t_\t_\t{h}\t{r}\t_\t{m}\n", i + 1);
        }
        input += "\n";
        let c = parse_conllu(&input, "x", "en").unwrap();
        let d = &c.documents[0];
        let f = extract_span_features(&d.entities[0].mentions[0], d);
        assert_eq!(f.width_bucket, WidthBucket::FiveToSeven);
        assert_eq!(
            (f.head_upos.as_str(), f.head_deprel.as_str(), f.mention_type, f.ud_category),
            ("NOUN", "nmod", MentionType::NominalNoun, UdCategory::N)
        );
    }

    #[test]
    fn zero_pronoun_features() {
        let input = "1\tllegó\tllegar\tVERB\t_\t_\t0\troot\t_\t_\n\
1.1\t_\t_\tPRON\t_\t_\t_\t_\t1:nsubj\tEntity=(e1)\n\n";
        let c = parse_conllu(input, "x", "es").unwrap();
        let d = &c.documents[0];
        let f = extract_span_features(&d.entities[0].mentions[0], d);
        assert_eq!(f.width_bucket, WidthBucket::One);
        assert_eq!(f.head_upos, "PRON");
        assert_eq!(f.head_deprel, "nsubj");
        assert_eq!(f.mention_type, MentionType::ZeroPronoun);
        assert_eq!(f.ud_category, UdCategory::S);
    }

    #[test]
    fn all_spans_on_four_words() {
        let input = "1\ta\ta\tX\t_\t_\t0\troot\t_\tEntity=(e1)\n2\tb\tb\tX\t_\t_\t1\tdep\t_\tEntity=(e1)\n\
3\tc\tc\tX\t_\t_\t1\tdep\t_\t_\n4\td\td\tX\t_\t_\t1\tdep\t_\t_\n\n";
        let mut c = parse_conllu(input, "x", "en").unwrap();
        c.documents[0].language = "en".into();
        let all = export_features(&c, &table(), ExportTarget::AllSpans { max_width: 3 }).unwrap();
        assert_eq!(all.records.len(), 9);
        assert_eq!(all_spans_count(4, 3), 9);
        assert!(all.records.iter().all(|r| r.entity_id.is_none()));
        let gold = export_features(&c, &table(), ExportTarget::Gold).unwrap();
        assert_eq!(gold.records.len(), 2);
        assert!(gold.vocabulary.contains("word_order", "SVO"));
        assert!(gold.vocabulary.contains("head_deprel", "root"));
        assert!(!gold.vocabulary.contains("head_deprel", "nsubj"));
    }
}
