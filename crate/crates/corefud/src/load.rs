//! Finding and parsing CorefUD files on disk.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use corefud_core::head::resolve_heads;
use corefud_core::{parse_conllu_with_warnings, Corpus, HeadRule, ParseError, Warning};
use rayon::prelude::*;
use thiserror::Error;
use walkdir::WalkDir;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{}:{}: {}", path.display(), source.line, source.kind)]
    Parse {
        path: PathBuf,
        #[source]
        source: ParseError,
    },
    #[error("{}: no .conllu files found", .0.display())]
    NoInput(PathBuf),
}

/// Dataset, language and split read from a release file name such as
/// `ca_ancora-corefud-train.conllu`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FileLabel {
    pub dataset: String,
    pub language: String,
    pub split: Option<String>,
}

impl FileLabel {
    pub fn from_path(path: &Path) -> Self {
        let stem = path
            .file_name()
            .and_then(|n| n.to_str())
            .map(|n| n.strip_suffix(".conllu").unwrap_or(n))
            .unwrap_or_default();
        let (dataset, split) = match stem.split_once("-corefud") {
            Some((d, rest)) => {
                let split = rest.trim_start_matches('-');
                (d, (!split.is_empty()).then(|| split.to_owned()))
            }
            None => (stem, None),
        };
        let language = dataset.split(['_', '-']).next().unwrap_or(dataset);
        FileLabel {
            dataset: dataset.to_owned(),
            language: if language.is_empty() { "und".into() } else { language.to_owned() },
            split,
        }
    }
}

/// A parsed file.
#[derive(Debug)]
pub struct LoadedFile {
    pub path: PathBuf,
    pub label: FileLabel,
    pub corpus: Corpus,
    pub warnings: Vec<Warning>,
}

/// All files of one dataset, documents concatenated in file order.
#[derive(Debug)]
pub struct Dataset {
    pub files: Vec<PathBuf>,
    pub corpus: Corpus,
}

impl Dataset {
    pub fn name(&self) -> &str {
        &self.corpus.dataset
    }

    /// Comma-joined file list for error messages.
    pub fn describe(&self) -> String {
        self.files
            .iter()
            .map(|p| p.display().to_string())
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// Options shared by every loader entry point.
#[derive(Clone, Debug, Default)]
pub struct LoadOptions {
    /// Keep only files of this split (`train`, `dev`, `test`).
    pub split: Option<String>,
    pub head_rule: HeadRule,
    pub dataset: Option<String>,
    pub language: Option<String>,
}

/// `.conllu` files under `root` (or `root` itself), sorted by path.
pub fn discover(root: &Path) -> Result<Vec<PathBuf>, LoadError> {
    if root.is_file() {
        return Ok(vec![root.to_path_buf()]);
    }
    let mut files = Vec::new();
    for entry in WalkDir::new(root).follow_links(true) {
        let entry = entry.map_err(|e| LoadError::Io {
            path: e.path().unwrap_or(root).to_path_buf(),
            source: e.into_io_error().unwrap_or_else(|| io::Error::other("filesystem loop")),
        })?;
        if entry.file_type().is_file() && entry.path().extension().is_some_and(|x| x == "conllu") {
            files.push(entry.into_path());
        }
    }
    files.sort();
    if files.is_empty() {
        return Err(LoadError::NoInput(root.to_path_buf()));
    }
    Ok(files)
}

pub fn load_file(path: &Path, opts: &LoadOptions) -> Result<LoadedFile, LoadError> {
    let mut label = FileLabel::from_path(path);
    if let Some(d) = &opts.dataset {
        label.dataset = d.clone();
    }
    if let Some(l) = &opts.language {
        label.language = l.clone();
    }
    let text = fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let (mut corpus, warnings) =
        parse_conllu_with_warnings(&text, &label.dataset, &label.language).map_err(|source| {
            LoadError::Parse {
                path: path.to_path_buf(),
                source,
            }
        })?;
    if opts.head_rule != HeadRule::default() {
        for doc in &mut corpus.documents {
            resolve_heads(doc, opts.head_rule);
        }
    }
    for w in &warnings {
        log::warn!("{}: {w}", path.display());
    }
    Ok(LoadedFile {
        path: path.to_path_buf(),
        label,
        corpus,
        warnings,
    })
}

/// Parse every file under `root` in parallel and group them by dataset,
/// datasets sorted by name.
pub fn load_datasets(root: &Path, opts: &LoadOptions) -> Result<Vec<Dataset>, LoadError> {
    let files: Vec<PathBuf> = discover(root)?
        .into_iter()
        .filter(|p| match &opts.split {
            Some(s) => FileLabel::from_path(p).split.as_deref() == Some(s.as_str()),
            None => true,
        })
        .collect();
    if files.is_empty() {
        return Err(LoadError::NoInput(root.to_path_buf()));
    }
    let loaded = files
        .par_iter()
        .map(|p| load_file(p, opts))
        .collect::<Result<Vec<_>, _>>()?;

    let mut by_name: BTreeMap<String, Dataset> = BTreeMap::new();
    for f in loaded {
        let slot = by_name.entry(f.label.dataset.clone()).or_insert_with(|| Dataset {
            files: Vec::new(),
            corpus: Corpus::new(f.label.dataset.clone(), f.label.language.clone()),
        });
        slot.files.push(f.path);
        slot.corpus.documents.extend(f.corpus.documents);
    }
    Ok(by_name.into_values().collect())
}
