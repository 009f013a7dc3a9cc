//! Fixed-precision TSV and JSON rendering.
//!
//! Percentages and means carry two decimals, scores six. Undefined values
//! print as `n/a` in TSV and `null` in JSON.

use corefud_core::analysis::{DatasetReport, RowKind};
use corefud_core::Ratio;
use serde_json::{Map, Value};

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Text(String),
    Int(u64),
    /// A value rendered with the given number of decimals.
    Num(f64, usize),
    Missing,
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    pub fn percent(r: Ratio) -> Self {
        r.percent().map_or(Cell::Missing, |v| Cell::Num(v, 2))
    }

    pub fn mean(r: Ratio) -> Self {
        r.value().map_or(Cell::Missing, |v| Cell::Num(v, 2))
    }

    pub fn score(v: f64) -> Self {
        Cell::Num(v, 6)
    }

    pub fn tsv(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(n) => n.to_string(),
            Cell::Num(v, d) => format!("{v:.d$}"),
            Cell::Missing => "n/a".into(),
        }
    }

    pub fn json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Int(n) => Value::from(*n),
            // Round through the TSV text so both formats agree digit for digit.
            Cell::Num(..) => self.tsv().parse::<f64>().map_or(Value::Null, Value::from),
            Cell::Missing => Value::Null,
        }
    }
}

/// A rectangular report whose first column is usually the dataset.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_tsv(&self) -> String {
        let mut out = self.columns.join("\t");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::tsv).collect();
            out.push_str(&cells.join("\t"));
            out.push('\n');
        }
        out
    }

    pub fn to_json_value(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .cloned()
                    .zip(row.iter().map(Cell::json))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        Value::Array(rows)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json_value()).expect("in-memory JSON");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Tsv => self.to_tsv(),
            Format::Json => self.to_json(),
        }
    }

    /// Distinct values of the first column in order of appearance.
    pub fn first_column_values(&self) -> Vec<String> {
        let mut seen = Vec::new();
        for row in &self.rows {
            if let Some(Cell::Text(s)) = row.first() {
                if !seen.contains(s) {
                    seen.push(s.clone());
                }
            }
        }
        seen
    }

    /// Rows whose first column equals `value`.
    pub fn select(&self, value: &str) -> Table {
        Table {
            columns: self.columns.clone(),
            rows: self
                .rows
                .iter()
                .filter(|r| matches!(r.first(), Some(Cell::Text(s)) if s == value))
                .cloned()
                .collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Tsv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Tsv => "tsv",
            Format::Json => "json",
        }
    }
}

pub const REPORT_COLUMNS: [&str; 5] = ["dataset", "key", "value", "numerator", "denominator"];

pub fn row_cell(value: Ratio, kind: RowKind) -> Cell {
    match kind {
        RowKind::Percent => Cell::percent(value),
        RowKind::Mean => Cell::mean(value),
        RowKind::Count => Cell::Int(value.numerator),
    }
}

/// Long format: one line per dataset and statistic.
pub fn report_table<'a>(reports: impl IntoIterator<Item = &'a DatasetReport>) -> Table {
    let mut t = Table::new(REPORT_COLUMNS);
    for r in reports {
        for row in &r.rows {
            t.push(vec![
                Cell::text(&r.dataset),
                Cell::text(&row.key),
                row_cell(row.value, row.kind),
                Cell::Int(row.value.numerator),
                Cell::Int(row.value.denominator),
            ]);
        }
    }
    t
}
