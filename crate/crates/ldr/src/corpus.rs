//! Corpus ingestion, tokenization, vocabulary construction and corpus statistics.
//!
//! Two on-disk layouts are supported:
//!
//! * `hispablogs`: `<root>/{train,test}/<class>/<doc>.txt`, one document per file;
//! * `dslcc`: a UTF-8 text file with one `sentence<TAB>label` record per line,
//!   or a directory holding `train.txt` and (optionally) `test.txt` in that format.
//!
//! Class order is fixed at ingestion (lexicographic) and every downstream
//! vector indexes classes by that order.

use std::collections::HashMap;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};

/// Tokenizer knobs that the experiments record alongside their results.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenizerConfig {
    /// Keep digit runs as token characters (useful for news headers).
    /// Off by default: tokens are maximal runs of alphabetic characters.
    #[serde(default)]
    pub keep_digits: bool,
    /// Fold diacritics after lowercasing (`extravié` becomes `extravie`).
    #[serde(default)]
    pub strip_accents: bool,
}

/// Lowercased tokens split on non-letter boundaries. Letters are Unicode
/// alphabetic characters, so accented vowels and `ñ` stay inside tokens.
/// With `keep_digits` set, digits also count as token characters.
pub fn tokenize(text: &str, config: &TokenizerConfig) -> Vec<String> {
    let is_token_char = |c: char| c.is_alphabetic() || (config.keep_digits && c.is_numeric());
    let mut tokens = Vec::new();
    let mut current = String::new();
    for c in text.chars() {
        if is_token_char(c) {
            for lc in c.to_lowercase() {
                current.push(lc);
            }
        } else if !current.is_empty() {
            tokens.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    if config.strip_accents {
        for token in &mut tokens {
            *token = token.nfd().filter(|c| !is_combining_mark(*c)).collect();
        }
    }
    tokens
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Test,
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Split::Train => write!(f, "train"),
            Split::Test => write!(f, "test"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layout {
    Hispablogs,
    Dslcc,
}

impl std::str::FromStr for Layout {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hispablogs" => Ok(Layout::Hispablogs),
            "dslcc" => Ok(Layout::Dslcc),
            other => Err(Error::InvalidParam(format!(
                "unknown layout `{other}`, expected `hispablogs` or `dslcc`"
            ))),
        }
    }
}

/// A single labelled (or, for ad-hoc prediction input, unlabelled) document.
#[derive(Debug, Clone)]
pub struct Document {
    /// File path or `file:line` provenance.
    pub id: String,
    /// Class name; absent only for prediction input.
    pub label: Option<String>,
    pub split: Split,
    /// Normalized token sequence.
    pub tokens: Vec<String>,
    /// Token count before any vocabulary matching.
    pub raw_length: usize,
    /// Source text as read; character n-grams are computed from this.
    pub text: String,
}

impl Document {
    pub fn new(id: impl Into<String>, label: Option<&str>, split: Split, text: &str, config: &TokenizerConfig) -> Self {
        let tokens = tokenize(text, config);
        let raw_length = tokens.len();
        Document {
            id: id.into(),
            label: label.map(str::to_owned),
            split,
            tokens,
            raw_length,
            text: text.to_owned(),
        }
    }

    /// Build a document straight from tokens (no tokenizer involved).
    pub fn from_tokens(id: impl Into<String>, label: Option<&str>, split: Split, tokens: Vec<String>) -> Self {
        let text = tokens.join(" ");
        let raw_length = tokens.len();
        Document {
            id: id.into(),
            label: label.map(str::to_owned),
            split,
            tokens,
            raw_length,
            text,
        }
    }
}

/// A loaded corpus: fixed class order plus train/test documents.
#[derive(Debug, Clone)]
pub struct Corpus {
    /// Class names, sorted lexicographically at ingestion.
    pub classes: Vec<String>,
    pub documents: Vec<Document>,
    pub layout: Layout,
}

impl Corpus {
    /// Assemble a corpus from pre-built documents, enforcing the ingestion
    /// invariants (labels drawn from `classes`, non-empty training documents,
    /// no id shared across splits).
    pub fn from_documents(classes: Vec<String>, documents: Vec<Document>, layout: Layout) -> Result<Corpus> {
        let mut classes = classes;
        classes.sort();
        classes.dedup();
        let mut train_ids = std::collections::HashSet::new();
        let mut test_ids = std::collections::HashSet::new();
        for doc in &documents {
            if let Some(label) = &doc.label {
                if !classes.contains(label) {
                    return Err(Error::InvalidParam(format!(
                        "document `{}` has label `{label}` outside the class list",
                        doc.id
                    )));
                }
            }
            match doc.split {
                Split::Train => {
                    if doc.tokens.is_empty() {
                        return Err(Error::InvalidParam(format!(
                            "training document `{}` has no tokens",
                            doc.id
                        )));
                    }
                    train_ids.insert(doc.id.clone());
                }
                Split::Test => {
                    test_ids.insert(doc.id.clone());
                }
            }
        }
        if let Some(shared) = train_ids.intersection(&test_ids).next() {
            return Err(Error::InvalidParam(format!(
                "document id `{shared}` appears in both train and test splits"
            )));
        }
        Ok(Corpus { classes, documents, layout })
    }

    /// Like [`Corpus::from_documents`], with the class list derived from the
    /// labels present.
    pub fn from_labelled(documents: Vec<Document>, layout: Layout) -> Result<Corpus> {
        let classes: Vec<String> = documents.iter().filter_map(|d| d.label.clone()).collect();
        Corpus::from_documents(classes, documents, layout)
    }

    pub fn class_index(&self, name: &str) -> Option<usize> {
        self.classes.iter().position(|c| c == name)
    }

    pub fn train_docs(&self) -> impl Iterator<Item = &Document> {
        self.documents.iter().filter(|d| d.split == Split::Train)
    }

    pub fn test_docs(&self) -> impl Iterator<Item = &Document> {
        self.documents.iter().filter(|d| d.split == Split::Test)
    }
}

/// Load a corpus from disk. Classes are discovered from directory names
/// (hispablogs) or the label column (dslcc) and sorted lexicographically.
///
/// Training documents that tokenize to nothing are rejected at ingestion
/// (dropped); test documents are always kept.
pub fn load_corpus(root: &Path, layout: Layout, config: &TokenizerConfig) -> Result<Corpus> {
    if !root.exists() {
        return Err(Error::MissingRoot(root.to_path_buf()));
    }
    match layout {
        Layout::Hispablogs => load_hispablogs(root, config),
        Layout::Dslcc => load_dslcc(root, config),
    }
}

fn read_utf8(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    String::from_utf8(bytes).map_err(|_| Error::InvalidUtf8(path.to_path_buf()))
}

fn load_hispablogs(root: &Path, config: &TokenizerConfig) -> Result<Corpus> {
    let train_dir = root.join("train");
    if !train_dir.is_dir() {
        return Err(Error::MissingRoot(train_dir));
    }

    // Classes are the union of class directories across both splits.
    let mut classes = Vec::new();
    for split in ["train", "test"] {
        let dir = root.join(split);
        if !dir.is_dir() {
            continue; // test split is optional
        }
        for entry in list_dir(&dir)? {
            if entry.is_dir() {
                let name = file_name_string(&entry);
                if !classes.contains(&name) {
                    classes.push(name);
                }
            }
        }
    }
    classes.sort();
    if classes.is_empty() {
        return Err(Error::EmptyClass(train_dir.display().to_string()));
    }

    // Gather (path, id, label, split) first so reads can run in parallel.
    let mut pending: Vec<(PathBuf, String, String, Split)> = Vec::new();
    for (split_name, split) in [("train", Split::Train), ("test", Split::Test)] {
        let split_dir = root.join(split_name);
        if !split_dir.is_dir() {
            continue;
        }
        for class in &classes {
            let class_dir = split_dir.join(class);
            if !class_dir.is_dir() {
                continue;
            }
            let mut files: Vec<PathBuf> = list_dir(&class_dir)?
                .into_iter()
                .filter(|p| p.is_file() && !file_name_string(p).starts_with('.'))
                .collect();
            files.sort();
            if files.is_empty() {
                return Err(Error::EmptyClass(class.clone()));
            }
            for path in files {
                let id = format!("{split_name}/{class}/{}", file_name_string(&path));
                pending.push((path, id, class.clone(), split));
            }
        }
    }

    let docs: Vec<Result<Option<Document>>> = pending
        .par_iter()
        .map(|(path, id, class, split)| {
            let text = read_utf8(path)?;
            let doc = Document::new(id.clone(), Some(class), *split, &text, config);
            if *split == Split::Train && doc.tokens.is_empty() {
                return Ok(None); // empty training documents are rejected
            }
            Ok(Some(doc))
        })
        .collect();

    let mut documents = Vec::with_capacity(docs.len());
    for doc in docs {
        if let Some(doc) = doc? {
            documents.push(doc);
        }
    }
    Corpus::from_documents(classes, documents, Layout::Hispablogs)
}

fn load_dslcc(root: &Path, config: &TokenizerConfig) -> Result<Corpus> {
    let mut sources: Vec<(PathBuf, Split)> = Vec::new();
    if root.is_file() {
        sources.push((root.to_path_buf(), Split::Train));
    } else {
        let train = root.join("train.txt");
        if !train.is_file() {
            return Err(Error::MissingRoot(train));
        }
        sources.push((train, Split::Train));
        let test = root.join("test.txt");
        if test.is_file() {
            sources.push((test, Split::Test));
        }
    }

    let mut documents = Vec::new();
    let mut classes = Vec::new();
    for (path, split) in &sources {
        let text = read_utf8(path)?;
        let file_tag = file_name_string(path);
        for (lineno, line) in text.lines().enumerate() {
            let line = line.strip_suffix('\r').unwrap_or(line);
            let (sentence, label) = line.rsplit_once('\t').ok_or(Error::MalformedRecord {
                path: path.clone(),
                line: lineno + 1,
            })?;
            let label = label.trim();
            if label.is_empty() {
                return Err(Error::MalformedRecord {
                    path: path.clone(),
                    line: lineno + 1,
                });
            }
            if !classes.iter().any(|c: &String| c == label) {
                classes.push(label.to_owned());
            }
            let id = format!("{file_tag}:{}", lineno + 1);
            let doc = Document::new(id, Some(label), *split, sentence, config);
            if *split == Split::Train && doc.tokens.is_empty() {
                continue;
            }
            documents.push(doc);
        }
    }
    classes.sort();
    Corpus::from_documents(classes, documents, Layout::Dslcc)
}

fn list_dir(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = std::fs::read_dir(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut paths = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|source| Error::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        paths.push(entry.path());
    }
    paths.sort();
    Ok(paths)
}

fn file_name_string(path: &Path) -> String {
    path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default()
}

/// Training-split vocabulary with frequency-threshold pruning: terms whose
/// corpus frequency is equal or lower than the threshold are removed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Vocabulary {
    /// Retained terms, unique and lexicographically ordered.
    pub terms: Vec<String>,
    /// Per-term count of training documents containing the term.
    pub doc_frequency: Vec<u32>,
    /// Per-term total occurrence count in the training split.
    pub corpus_frequency: Vec<u64>,
    pub min_freq_threshold: u64,
    #[serde(skip)]
    index: HashMap<String, u32>,
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_index(&self, term: &str) -> Option<usize> {
        self.index.get(term).map(|&i| i as usize)
    }

    pub(crate) fn rebuild_index(&mut self) {
        self.index = self
            .terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i as u32))
            .collect();
    }
}

/// Build the vocabulary over the training split only, removing terms with
/// corpus frequency equal or lower than `n`. `n = 0` retains everything.
pub fn build_vocabulary(corpus: &Corpus, n: u64) -> Vocabulary {
    let mut counts: HashMap<&str, (u64, u32)> = HashMap::new();
    let mut per_doc: HashMap<&str, u64> = HashMap::new();
    for doc in corpus.train_docs() {
        per_doc.clear();
        for token in &doc.tokens {
            *per_doc.entry(token.as_str()).or_insert(0) += 1;
        }
        for (term, count) in per_doc.drain() {
            let entry = counts.entry(term).or_insert((0, 0));
            entry.0 += count;
            entry.1 += 1;
        }
    }
    let mut terms: Vec<&str> = counts
        .iter()
        .filter(|(_, (cf, _))| *cf > n)
        .map(|(t, _)| *t)
        .collect();
    terms.sort_unstable();
    let doc_frequency = terms.iter().map(|t| counts[t].1).collect();
    let corpus_frequency = terms.iter().map(|t| counts[t].0).collect();
    let mut vocab = Vocabulary {
        terms: terms.into_iter().map(str::to_owned).collect(),
        doc_frequency,
        corpus_frequency,
        min_freq_threshold: n,
        index: HashMap::new(),
    };
    vocab.rebuild_index();
    vocab
}

/// One row of corpus statistics: document counts, word counts and
/// words-per-document mean / population standard deviation.
#[derive(Debug, Clone, PartialEq)]
pub struct StatsRow {
    pub class: String,
    pub split: Split,
    pub docs: usize,
    pub words: u64,
    pub words_per_doc_mean: f64,
    pub words_per_doc_std: f64,
}

#[derive(Debug, Clone)]
pub struct CorpusStats {
    pub rows: Vec<StatsRow>,
}

impl CorpusStats {
    pub fn row(&self, class: &str, split: Split) -> Option<&StatsRow> {
        self.rows.iter().find(|r| r.class == class && r.split == split)
    }

    pub fn to_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "class,split,docs,words,words_per_doc_mean,words_per_doc_std")?;
        for row in &self.rows {
            writeln!(
                w,
                "{},{},{},{},{:.6},{:.6}",
                crate::report::csv_field(&row.class),
                row.split,
                row.docs,
                row.words,
                row.words_per_doc_mean,
                row.words_per_doc_std
            )?;
        }
        Ok(())
    }
}

fn stats_row(class: &str, split: Split, lengths: &[u64]) -> StatsRow {
    let docs = lengths.len();
    let words: u64 = lengths.iter().sum();
    let (mean, std) = if docs == 0 {
        (0.0, 0.0)
    } else {
        let mean = words as f64 / docs as f64;
        let var = lengths
            .iter()
            .map(|&l| {
                let d = l as f64 - mean;
                d * d
            })
            .sum::<f64>()
            / docs as f64;
        (mean, var.sqrt())
    };
    StatsRow {
        class: class.to_owned(),
        split,
        docs,
        words,
        words_per_doc_mean: mean,
        words_per_doc_std: std,
    }
}

/// Per-class and total word-count statistics, per split. The `TOTAL` rows
/// pool all documents of the split.
pub fn corpus_stats(corpus: &Corpus) -> CorpusStats {
    let mut rows = Vec::new();
    for split in [Split::Train, Split::Test] {
        for class in &corpus.classes {
            let lengths: Vec<u64> = corpus
                .documents
                .iter()
                .filter(|d| d.split == split && d.label.as_deref() == Some(class))
                .map(|d| d.raw_length as u64)
                .collect();
            rows.push(stats_row(class, split, &lengths));
        }
    }
    for split in [Split::Train, Split::Test] {
        let lengths: Vec<u64> = corpus
            .documents
            .iter()
            .filter(|d| d.split == split)
            .map(|d| d.raw_length as u64)
            .collect();
        rows.push(stats_row("TOTAL", split, &lengths));
    }
    CorpusStats { rows }
}
