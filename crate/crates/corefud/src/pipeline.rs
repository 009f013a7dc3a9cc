//! Report pipelines shared by the command line and the tests.

use std::collections::BTreeMap;

use corefud_core::analysis::{
    anaphor_antecedent_ranking, competing_antecedents, corpus_statistics, entity_size_stats,
    first_mention_stats, genre_pronoun_frequency, head_position_stats, mention_type_distribution,
    semantic_distance, DatasetReport, GenreRule, MentionVectors, PronounKind, RowKind, VectorError,
};
use corefud_core::error_analysis::{analyze_document, ErrorCounts, UnresolvedDefinition, UnresolvedEntity};
use corefud_core::features::{export_features, ExportTarget, FeatureError, FeatureExport, WordOrderTable};
use corefud_core::metrics::{macro_average, score_document, MatchMode, MetricsError, ScoreCounts, ScoreReport, SingletonPolicy};
use corefud_core::taxonomy::{RELATION_TABLE, UdCategory};
use corefud_core::{Corpus, Document, MentionType, Ratio};
use rayon::prelude::*;
use thiserror::Error;

use crate::load::Dataset;
use crate::render::{report_table, Cell, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
pub enum Stat {
    Corpus,
    HeadPosition,
    MentionTypes,
    Ranking,
    FirstMention,
    EntitySize,
    Competing,
    Genre,
    SemanticDistance,
}

impl Stat {
    pub const DEFAULT: [Stat; 8] = [
        Stat::Corpus,
        Stat::HeadPosition,
        Stat::MentionTypes,
        Stat::Ranking,
        Stat::FirstMention,
        Stat::EntitySize,
        Stat::Competing,
        Stat::Genre,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stat::Corpus => "corpus",
            Stat::HeadPosition => "head-position",
            Stat::MentionTypes => "mention-types",
            Stat::Ranking => "ranking",
            Stat::FirstMention => "first-mention",
            Stat::EntitySize => "entity-size",
            Stat::Competing => "competing",
            Stat::Genre => "genre",
            Stat::SemanticDistance => "semantic-distance",
        }
    }
}

/// Anaphor/antecedent ranking for every mention type, rows in rank order.
/// Each share is over all anaphors of that type.
pub fn ranking_report(corpus: &Corpus) -> DatasetReport {
    let mut r = DatasetReport::named(corpus.dataset.clone());
    for t in MentionType::ALL {
        let ranking = anaphor_antecedent_ranking(corpus, t);
        let total: u64 = ranking.iter().map(|(_, n)| n).sum();
        for (cat, n) in ranking {
            r.push(&format!("{}:{}", t.name(), cat.letter()), Ratio::new(n, total), RowKind::Percent);
        }
    }
    r
}

pub fn competing_report(corpus: &Corpus) -> DatasetReport {
    let mut r = DatasetReport::named(corpus.dataset.clone());
    for (kind, name) in [(PronounKind::Overt, "overt"), (PronounKind::Zero, "zero")] {
        let s = competing_antecedents(corpus, kind);
        r.push(&format!("{name}:valid_fraction"), s.valid_fraction(), RowKind::Percent);
        r.push(&format!("{name}:mean_competitors"), s.mean_competitors(), RowKind::Mean);
    }
    r
}

/// Personal pronouns per 8000 words, one row per genre.
pub fn genre_report(corpus: &Corpus, rule: &GenreRule) -> DatasetReport {
    let mut r = DatasetReport::named(corpus.dataset.clone());
    for g in genre_pronoun_frequency(corpus, rule) {
        r.push(&g.genre, g.rate(), RowKind::Mean);
    }
    r
}

#[derive(Clone, Debug, Default)]
pub struct AnalyzeOptions {
    pub genre_rule: GenreRule,
    pub vectors: Option<MentionVectors>,
}

pub fn dataset_report(stat: Stat, corpus: &Corpus, opts: &AnalyzeOptions) -> Result<DatasetReport, VectorError> {
    Ok(match stat {
        Stat::Corpus => corpus_statistics(corpus),
        Stat::HeadPosition => head_position_stats(corpus),
        Stat::MentionTypes => mention_type_distribution(corpus),
        Stat::Ranking => ranking_report(corpus),
        Stat::FirstMention => first_mention_stats(corpus),
        Stat::EntitySize => entity_size_stats(corpus),
        Stat::Competing => competing_report(corpus),
        Stat::Genre => genre_report(corpus, &opts.genre_rule),
        // Real-valued distances are rendered by `analyze`; only the pair count fits here.
        Stat::SemanticDistance => {
            let d = semantic_distance(corpus, opts.vectors.as_ref().unwrap_or(&MentionVectors::new()))?;
            let mut r = DatasetReport::named(corpus.dataset.clone());
            r.push("pairs", Ratio::new(d.pairs, 1), RowKind::Count);
            r
        }
    })
}

/// Long-format table for one statistic over all datasets.
pub fn analyze(stat: Stat, datasets: &[Dataset], opts: &AnalyzeOptions) -> Result<Table, VectorError> {
    if stat == Stat::SemanticDistance {
        return distance_table(datasets, opts.vectors.as_ref().unwrap_or(&MentionVectors::new()));
    }
    let reports = datasets
        .par_iter()
        .map(|d| dataset_report(stat, &d.corpus, opts))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(report_table(&reports))
}

fn distance_table(datasets: &[Dataset], vectors: &MentionVectors) -> Result<Table, VectorError> {
    let mut t = Table::new(crate::render::REPORT_COLUMNS);
    for d in datasets {
        let s = semantic_distance(&d.corpus, vectors)?;
        let name = Cell::text(d.name());
        let defined = s.pairs > 0;
        let num = |v: f64| if defined { Cell::Num(v, 6) } else { Cell::Missing };
        t.push(vec![name.clone(), Cell::text("pairs"), Cell::Int(s.pairs), Cell::Missing, Cell::Missing]);
        t.push(vec![name.clone(), Cell::text("mean"), num(s.mean), Cell::Missing, Cell::Missing]);
        t.push(vec![name, Cell::text("variance"), num(s.variance), Cell::Missing, Cell::Missing]);
    }
    Ok(t)
}

/// Wide corpus statistics, one row per dataset.
pub fn stats_table(datasets: &[Dataset]) -> Table {
    let keys = ["docs", "sents_per_doc", "tokens_per_sent", "entities", "mentions", "mentions_per_entity"];
    let mut t = Table::new(std::iter::once("dataset").chain(keys));
    let reports: Vec<DatasetReport> = datasets.par_iter().map(|d| corpus_statistics(&d.corpus)).collect();
    for r in &reports {
        let mut row = vec![Cell::text(&r.dataset)];
        for k in keys {
            let cell = r
                .get(k)
                .map_or(Cell::Missing, |row| crate::render::row_cell(row.value, row.kind));
            row.push(cell);
        }
        t.push(row);
    }
    t
}

/// Long-format rows for plotting: statistic, dataset, series, value.
pub fn figure_data(tables: &[(Stat, Table)]) -> Table {
    let mut out = Table::new(["stat", "dataset", "series", "value"]);
    for (stat, t) in tables {
        for row in &t.rows {
            if let [dataset, key, value, ..] = row.as_slice() {
                out.push(vec![Cell::text(stat.name()), dataset.clone(), key.clone(), value.clone()]);
            }
        }
    }
    out
}

pub fn taxonomy_table() -> Table {
    let mut t = Table::new(["relation", "category", "name"]);
    for cat in UdCategory::ALL {
        for (rel, c) in RELATION_TABLE.iter().filter(|(_, c)| *c == cat) {
            t.push(vec![
                Cell::text(*rel),
                Cell::text(c.letter().to_string()),
                Cell::text(c.display_name()),
            ]);
        }
    }
    t
}

#[derive(Debug, Error)]
pub enum PairError {
    #[error("system output has no dataset `{0}`")]
    MissingDataset(String),
    #[error("{file}: document `{doc_id}` is missing from the system output")]
    MissingDocument { file: String, doc_id: String },
    #[error("{file}: document `{doc_id}`: {source}")]
    Metrics {
        file: String,
        doc_id: String,
        #[source]
        source: MetricsError,
    },
    #[error(transparent)]
    Average(MetricsError),
}

/// Gold documents with their system counterparts, matched by doc id.
pub fn pair_documents<'a>(
    gold: &'a Dataset,
    pred: &'a Dataset,
) -> Result<Vec<(&'a Document, &'a Document)>, PairError> {
    let by_id: BTreeMap<&str, &Document> = pred
        .corpus
        .documents
        .iter()
        .map(|d| (d.doc_id.as_str(), d))
        .collect();
    gold.corpus
        .documents
        .iter()
        .map(|g| {
            by_id
                .get(g.doc_id.as_str())
                .map(|p| (g, *p))
                .ok_or_else(|| PairError::MissingDocument {
                    file: pred.describe(),
                    doc_id: g.doc_id.clone(),
                })
        })
        .collect()
}

/// Gold and system datasets matched by name, in gold order.
pub fn pair_datasets<'a>(gold: &'a [Dataset], pred: &'a [Dataset]) -> Result<Vec<(&'a Dataset, &'a Dataset)>, PairError> {
    gold.iter()
        .map(|g| {
            pred.iter()
                .find(|p| p.name() == g.name())
                .map(|p| (g, p))
                .ok_or_else(|| PairError::MissingDataset(g.name().to_owned()))
        })
        .collect()
}

pub fn score_dataset(
    gold: &Dataset,
    pred: &Dataset,
    mode: MatchMode,
    policy: SingletonPolicy,
) -> Result<ScoreReport, PairError> {
    let pairs = pair_documents(gold, pred)?;
    let counts = pairs
        .par_iter()
        .map(|(g, p)| {
            score_document(g, p, mode, policy).map_err(|source| PairError::Metrics {
                file: pred.describe(),
                doc_id: g.doc_id.clone(),
                source,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let total = counts.into_iter().fold(ScoreCounts::default(), |mut a, b| {
        a += b;
        a
    });
    Ok(total.report(mode, policy))
}

pub const SCORE_COLUMNS: [&str; 11] = [
    "dataset", "muc_p", "muc_r", "muc_f1", "bcub_p", "bcub_r", "bcub_f1", "ceafe_p", "ceafe_r", "ceafe_f1",
    "conll_f1",
];

/// One row per dataset plus a `macro` row averaging CoNLL F1.
pub fn score_table(reports: &[(String, ScoreReport)]) -> Result<Table, PairError> {
    let mut t = Table::new(SCORE_COLUMNS);
    for (name, r) in reports {
        let mut row = vec![Cell::text(name)];
        for prf in [r.muc, r.b_cubed, r.ceafe] {
            row.extend([Cell::score(prf.precision), Cell::score(prf.recall), Cell::score(prf.f1)]);
        }
        row.push(Cell::score(r.conll_f1));
        t.push(row);
    }
    let f1s: Vec<f64> = reports.iter().map(|(_, r)| r.conll_f1).collect();
    let avg = macro_average(&f1s).map_err(PairError::Average)?;
    let mut row = vec![Cell::text("macro")];
    row.extend(std::iter::repeat_n(Cell::Missing, 9));
    row.push(Cell::score(avg));
    t.push(row);
    Ok(t)
}

#[derive(Clone, Debug, Default)]
pub struct DatasetErrors {
    pub counts: ErrorCounts,
    pub unresolved: Vec<UnresolvedEntity>,
}

pub fn errors_dataset(
    gold: &Dataset,
    pred: &Dataset,
    mode: MatchMode,
    def: UnresolvedDefinition,
) -> Result<DatasetErrors, PairError> {
    let pairs = pair_documents(gold, pred)?;
    let per_doc = pairs
        .par_iter()
        .map(|(g, p)| {
            analyze_document(g, p, mode, def).map_err(|source| PairError::Metrics {
                file: pred.describe(),
                doc_id: g.doc_id.clone(),
                source,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = DatasetErrors::default();
    for d in per_doc {
        out.counts.merge(&d.counts);
        out.unresolved.extend(d.unresolved);
    }
    Ok(out)
}

pub const ERROR_COLUMNS: [&str; 7] = ["dataset", "A", "B", "C", "D", "E", "F"];

pub fn error_table(results: &[(String, DatasetErrors)]) -> Table {
    let mut t = Table::new(ERROR_COLUMNS);
    for (name, e) in results {
        let r = e.counts.report(name);
        t.push(vec![
            Cell::text(name),
            Cell::percent(r.unresolved),
            Cell::percent(r.two_mention),
            Cell::percent(r.undetected),
            Cell::percent(r.short),
            Cell::percent(r.pre_modified),
            Cell::mean(r.average_length),
        ]);
    }
    t
}

/// Pooled breakdown behind the error tree: types of undetected mentions,
/// sentence distances, mention-type pairs and antecedent categories.
pub fn error_breakdown(results: &[(String, DatasetErrors)]) -> Table {
    let mut t = Table::new(crate::render::REPORT_COLUMNS);
    let mut push = |name: &str, key: String, r: Ratio| {
        t.push(vec![
            Cell::text(name),
            Cell::text(key),
            Cell::percent(r),
            Cell::Int(r.numerator),
            Cell::Int(r.denominator),
        ]);
    };
    for (name, e) in results {
        let c = &e.counts;
        for (ty, r) in c.undetected_type_distribution() {
            push(name, format!("undetected_type:{}", ty.name()), r);
        }
        push(name, "both_detected".into(), Ratio::new(c.both_detected, c.two_mention));
        for (b, r) in c.distance_distribution() {
            push(name, format!("distance:{b}"), r);
        }
        for ((a, b), n) in &c.type_pairs {
            push(name, format!("type_pair:{}>{}", a.name(), b.name()), Ratio::new(*n, c.both_detected));
        }
        for (ty, cats) in &c.antecedent_categories {
            let total: u64 = cats.values().sum();
            for (cat, n) in cats {
                push(name, format!("antecedent:{}:{}", ty.name(), cat.letter()), Ratio::new(*n, total));
            }
        }
    }
    t
}

/// Feature export for every dataset, concatenated in dataset order.
pub fn export_all(
    datasets: &[Dataset],
    table: &WordOrderTable,
    target: ExportTarget,
) -> Result<Vec<FeatureExport>, FeatureError> {
    datasets
        .par_iter()
        .map(|d| export_features(&d.corpus, table, target))
        .collect()
}
