//! Coreference evaluation: mention alignment, MUC, B³, CEAFe and the CoNLL
//! average.
//!
//! Scores are accumulated as numerator/denominator pairs so that documents
//! of a dataset can be pooled before the final ratios are taken.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::ops::{Add, AddAssign};

use serde::Serialize;
use thiserror::Error;

use crate::assignment::max_weight_assignment;
use crate::model::{Document, Mention, TokenId};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchMode {
    #[default]
    Exact,
    Head,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SingletonPolicy {
    Include,
    #[default]
    Exclude,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("cluster {0} is empty")]
    EmptyCluster(usize),
    #[error("mention appears in more than one cluster")]
    OverlappingClusters,
    #[error("document ids differ: gold `{gold}`, predicted `{pred}`")]
    DocIdMismatch { gold: String, pred: String },
    #[error("document `{doc}`: gold has {gold} sentences, predicted has {pred}")]
    SentenceCount { doc: String, gold: usize, pred: usize },
    #[error("document `{doc}`, sentence {sentence}: gold has {gold} words, predicted has {pred}")]
    SentenceLength {
        doc: String,
        sentence: usize,
        gold: usize,
        pred: usize,
    },
    #[error("nothing to average")]
    EmptyAverage,
}

/// Disjoint, non-empty clusters of mention keys.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterSet<K> {
    clusters: Vec<Vec<K>>,
}

impl<K: Ord + Clone> ClusterSet<K> {
    pub fn new(clusters: Vec<Vec<K>>, policy: SingletonPolicy) -> Result<Self, MetricsError> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(clusters.len());
        for (i, mut c) in clusters.into_iter().enumerate() {
            if c.is_empty() {
                return Err(MetricsError::EmptyCluster(i));
            }
            c.sort();
            let before = c.len();
            c.dedup();
            if c.len() != before || c.iter().any(|k| !seen.insert(k.clone())) {
                return Err(MetricsError::OverlappingClusters);
            }
            if policy == SingletonPolicy::Exclude && c.len() == 1 {
                continue;
            }
            out.push(c);
        }
        Ok(ClusterSet { clusters: out })
    }

    pub fn clusters(&self) -> &[Vec<K>] {
        &self.clusters
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn mention_count(&self) -> usize {
        self.clusters.iter().map(Vec::len).sum()
    }

    fn index(&self) -> BTreeMap<&K, usize> {
        self.clusters
            .iter()
            .enumerate()
            .flat_map(|(i, c)| c.iter().map(move |k| (k, i)))
            .collect()
    }
}

/// Precision, recall and F1.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl Prf {
    pub fn new(precision: f64, recall: f64) -> Self {
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        Prf {
            precision,
            recall,
            f1,
        }
    }
}

/// Pooled numerators and denominators of one metric.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct MetricCounts {
    pub precision_num: f64,
    pub precision_den: f64,
    pub recall_num: f64,
    pub recall_den: f64,
}

impl MetricCounts {
    pub fn prf(&self) -> Prf {
        let ratio = |n: f64, d: f64| if d > 0.0 { n / d } else { 0.0 };
        Prf::new(
            ratio(self.precision_num, self.precision_den),
            ratio(self.recall_num, self.recall_den),
        )
    }
}

impl Add for MetricCounts {
    type Output = MetricCounts;

    fn add(self, o: MetricCounts) -> MetricCounts {
        MetricCounts {
            precision_num: self.precision_num + o.precision_num,
            precision_den: self.precision_den + o.precision_den,
            recall_num: self.recall_num + o.recall_num,
            recall_den: self.recall_den + o.recall_den,
        }
    }
}

impl AddAssign for MetricCounts {
    fn add_assign(&mut self, o: MetricCounts) {
        *self = *self + o;
    }
}

fn muc_side<K: Ord + Clone>(key: &ClusterSet<K>, response: &ClusterSet<K>) -> (f64, f64) {
    let index = response.index();
    let mut num = 0usize;
    let mut den = 0usize;
    for c in key.clusters() {
        let mut parts = BTreeSet::new();
        let mut unmatched = 0usize;
        for k in c {
            match index.get(k) {
                Some(&r) => {
                    parts.insert(r);
                }
                None => unmatched += 1,
            }
        }
        let partitions = parts.len() + unmatched;
        num += c.len() - partitions;
        den += c.len() - 1;
    }
    (num as f64, den as f64)
}

/// Link-based MUC counts.
pub fn muc_counts<K: Ord + Clone>(gold: &ClusterSet<K>, pred: &ClusterSet<K>) -> MetricCounts {
    let (recall_num, recall_den) = muc_side(gold, pred);
    let (precision_num, precision_den) = muc_side(pred, gold);
    MetricCounts {
        precision_num,
        precision_den,
        recall_num,
        recall_den,
    }
}

pub fn muc<K: Ord + Clone>(gold: &ClusterSet<K>, pred: &ClusterSet<K>) -> Prf {
    muc_counts(gold, pred).prf()
}

/// Sizes of all non-empty gold/pred cluster intersections.
fn overlaps<K: Ord + Clone>(gold: &ClusterSet<K>, pred: &ClusterSet<K>) -> BTreeMap<(usize, usize), usize> {
    let index = pred.index();
    let mut out = BTreeMap::new();
    for (g, c) in gold.clusters().iter().enumerate() {
        for k in c {
            if let Some(&p) = index.get(k) {
                *out.entry((g, p)).or_insert(0) += 1;
            }
        }
    }
    out
}

/// Mention-based B³ counts.
pub fn b_cubed_counts<K: Ord + Clone>(gold: &ClusterSet<K>, pred: &ClusterSet<K>) -> MetricCounts {
    let mut recall_num = 0.0;
    let mut precision_num = 0.0;
    for ((g, p), n) in overlaps(gold, pred) {
        let n2 = (n * n) as f64;
        recall_num += n2 / gold.clusters()[g].len() as f64;
        precision_num += n2 / pred.clusters()[p].len() as f64;
    }
    MetricCounts {
        precision_num,
        precision_den: pred.mention_count() as f64,
        recall_num,
        recall_den: gold.mention_count() as f64,
    }
}

pub fn b_cubed<K: Ord + Clone>(gold: &ClusterSet<K>, pred: &ClusterSet<K>) -> Prf {
    b_cubed_counts(gold, pred).prf()
}

/// Entity similarity used by CEAFe.
pub fn phi4(overlap: usize, gold_len: usize, pred_len: usize) -> f64 {
    2.0 * overlap as f64 / (gold_len + pred_len) as f64
}

/// Entity-based CEAFe counts with an optimal cluster alignment.
pub fn ceafe_counts<K: Ord + Clone>(gold: &ClusterSet<K>, pred: &ClusterSet<K>) -> MetricCounts {
    let mut weights = alloc::vec![alloc::vec![0.0; pred.len()]; gold.len()];
    for ((g, p), n) in overlaps(gold, pred) {
        weights[g][p] = phi4(n, gold.clusters()[g].len(), pred.clusters()[p].len());
    }
    let (total, _) = max_weight_assignment(&weights);
    MetricCounts {
        precision_num: total,
        precision_den: pred.len() as f64,
        recall_num: total,
        recall_den: gold.len() as f64,
    }
}

pub fn ceafe<K: Ord + Clone>(gold: &ClusterSet<K>, pred: &ClusterSet<K>) -> Prf {
    ceafe_counts(gold, pred).prf()
}

/// Pooled counts of all three metrics.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct ScoreCounts {
    pub muc: MetricCounts,
    pub b_cubed: MetricCounts,
    pub ceafe: MetricCounts,
}

impl ScoreCounts {
    pub fn compute<K: Ord + Clone>(gold: &ClusterSet<K>, pred: &ClusterSet<K>) -> Self {
        ScoreCounts {
            muc: muc_counts(gold, pred),
            b_cubed: b_cubed_counts(gold, pred),
            ceafe: ceafe_counts(gold, pred),
        }
    }

    pub fn report(&self, mode: MatchMode, singletons: SingletonPolicy) -> ScoreReport {
        ScoreReport::new(self.muc.prf(), self.b_cubed.prf(), self.ceafe.prf(), mode, singletons)
    }
}

impl AddAssign for ScoreCounts {
    fn add_assign(&mut self, o: ScoreCounts) {
        self.muc += o.muc;
        self.b_cubed += o.b_cubed;
        self.ceafe += o.ceafe;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScoreReport {
    pub muc: Prf,
    pub b_cubed: Prf,
    pub ceafe: Prf,
    pub conll_f1: f64,
    pub mode: MatchMode,
    pub singletons: SingletonPolicy,
}

impl ScoreReport {
    pub fn new(muc: Prf, b_cubed: Prf, ceafe: Prf, mode: MatchMode, singletons: SingletonPolicy) -> Self {
        let mut r = ScoreReport {
            muc,
            b_cubed,
            ceafe,
            conll_f1: 0.0,
            mode,
            singletons,
        };
        r.conll_f1 = conll_f1(&r);
        r
    }
}

/// Mean of the MUC, B³ and CEAFe F1 scores.
pub fn conll_f1(report: &ScoreReport) -> f64 {
    (report.muc.f1 + report.b_cubed.f1 + report.ceafe.f1) / 3.0
}

/// Unweighted mean over datasets.
pub fn macro_average(values: &[f64]) -> Result<f64, MetricsError> {
    if values.is_empty() {
        return Err(MetricsError::EmptyAverage);
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

/// Index of a mention inside a document: `(entity, mention)`.
pub type MentionIndex = (usize, usize);

/// Position of a word that is stable across gold and system files.
pub type WordPos = (usize, TokenId);

fn span_key(doc: &Document, m: &Mention) -> Vec<WordPos> {
    m.span
        .iter()
        .map(|p| (p.sentence, doc.token(*p).id))
        .collect()
}

/// Result of aligning system mentions to gold mentions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Alignment {
    pub pred_to_gold: BTreeMap<MentionIndex, MentionIndex>,
    pub gold_to_pred: BTreeMap<MentionIndex, MentionIndex>,
}

impl Alignment {
    pub fn is_detected(&self, gold: MentionIndex) -> bool {
        self.gold_to_pred.contains_key(&gold)
    }
}

fn check_segmentation(gold: &Document, pred: &Document) -> Result<(), MetricsError> {
    if gold.doc_id != pred.doc_id {
        return Err(MetricsError::DocIdMismatch {
            gold: gold.doc_id.clone(),
            pred: pred.doc_id.clone(),
        });
    }
    if gold.sentences.len() != pred.sentences.len() {
        return Err(MetricsError::SentenceCount {
            doc: gold.doc_id.clone(),
            gold: gold.sentences.len(),
            pred: pred.sentences.len(),
        });
    }
    for (i, (g, p)) in gold.sentences.iter().zip(&pred.sentences).enumerate() {
        if g.surface_len() != p.surface_len() {
            return Err(MetricsError::SentenceLength {
                doc: gold.doc_id.clone(),
                sentence: i,
                gold: g.surface_len(),
                pred: p.surface_len(),
            });
        }
    }
    Ok(())
}

/// Map system mentions onto gold mentions.
///
/// `Exact` requires identical word sets. `Head` accepts a system span that
/// contains the gold head and lies within the gold span. Each gold mention is
/// matched at most once; system mentions are visited shortest first and take
/// the shortest still-free gold candidate.
pub fn align_mentions(gold: &Document, pred: &Document, mode: MatchMode) -> Result<Alignment, MetricsError> {
    check_segmentation(gold, pred)?;

    struct Item {
        index: MentionIndex,
        span: Vec<WordPos>,
        head: WordPos,
    }
    let collect = |doc: &Document| -> Vec<Item> {
        let mut items: Vec<Item> = doc
            .entities
            .iter()
            .enumerate()
            .flat_map(|(e, ent)| {
                ent.mentions.iter().enumerate().map(move |(i, m)| Item {
                    index: (e, i),
                    span: span_key(doc, m),
                    head: (m.head.sentence, doc.token(m.head).id),
                })
            })
            .collect();
        items.sort_by(|a, b| (a.span.len(), &a.span, a.index).cmp(&(b.span.len(), &b.span, b.index)));
        items
    };
    let gold_items = collect(gold);
    let pred_items = collect(pred);

    let mut out = Alignment::default();
    match mode {
        MatchMode::Exact => {
            let mut by_span: BTreeMap<&[WordPos], Vec<MentionIndex>> = BTreeMap::new();
            for g in &gold_items {
                by_span.entry(&g.span).or_default().push(g.index);
            }
            for p in &pred_items {
                if let Some(free) = by_span.get_mut(p.span.as_slice()) {
                    if !free.is_empty() {
                        let g = free.remove(0);
                        out.pred_to_gold.insert(p.index, g);
                        out.gold_to_pred.insert(g, p.index);
                    }
                }
            }
        }
        MatchMode::Head => {
            for p in &pred_items {
                let candidate = gold_items.iter().find(|g| {
                    !out.gold_to_pred.contains_key(&g.index)
                        && p.span.binary_search(&g.head).is_ok()
                        && p.span.iter().all(|w| g.span.binary_search(w).is_ok())
                });
                if let Some(g) = candidate {
                    out.pred_to_gold.insert(p.index, g.index);
                    out.gold_to_pred.insert(g.index, p.index);
                }
            }
        }
    }
    Ok(out)
}

/// Key of a mention after alignment: gold mentions keep their own identity,
/// matched system mentions take their gold partner's, the rest get fresh keys.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AlignedKey {
    Gold(MentionIndex),
    Unmatched(MentionIndex),
}

/// Gold and system cluster sets of one document over a shared key space.
pub fn aligned_clusters(
    gold: &Document,
    pred: &Document,
    alignment: &Alignment,
    policy: SingletonPolicy,
) -> Result<(ClusterSet<AlignedKey>, ClusterSet<AlignedKey>), MetricsError> {
    let gold_clusters = gold
        .entities
        .iter()
        .enumerate()
        .map(|(e, ent)| (0..ent.mentions.len()).map(|i| AlignedKey::Gold((e, i))).collect())
        .collect();
    let pred_clusters = pred
        .entities
        .iter()
        .enumerate()
        .map(|(e, ent)| {
            (0..ent.mentions.len())
                .map(|i| match alignment.pred_to_gold.get(&(e, i)) {
                    Some(&g) => AlignedKey::Gold(g),
                    None => AlignedKey::Unmatched((e, i)),
                })
                .collect()
        })
        .collect();
    Ok((
        ClusterSet::new(gold_clusters, policy)?,
        ClusterSet::new(pred_clusters, policy)?,
    ))
}

/// Align and score one document pair.
pub fn score_document(
    gold: &Document,
    pred: &Document,
    mode: MatchMode,
    policy: SingletonPolicy,
) -> Result<ScoreCounts, MetricsError> {
    let alignment = align_mentions(gold, pred, mode)?;
    let (g, p) = aligned_clusters(gold, pred, &alignment, policy)?;
    Ok(ScoreCounts::compute(&g, &p))
}
