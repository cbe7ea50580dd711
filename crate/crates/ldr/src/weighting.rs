//! The tf-idf document-term matrix and the class-dependent term weights
//! derived from it.
//!
//! Term weights are the heart of the representation: `W(t, c)` is the share
//! of term `t`'s total tf-idf mass contributed by training documents of
//! class `c`, so each term's weights form a distribution over classes.

use std::collections::HashMap;
use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Vocabulary};
use crate::error::{Error, Result};
use crate::report::sig12;

/// Sparse tf-idf matrix over the training split. Rows follow corpus order,
/// columns follow vocabulary order; only nonzero weights are stored.
#[derive(Debug, Clone)]
pub struct TfIdfMatrix {
    pub classes: Vec<String>,
    pub terms: Vec<String>,
    /// Per-row `(term index, weight)` pairs, sorted by term index.
    pub rows: Vec<Vec<(u32, f64)>>,
    /// Class index of each row's document.
    pub row_labels: Vec<u32>,
}

impl TfIdfMatrix {
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    /// Dense weight lookup, mostly for tests and small matrices.
    pub fn weight(&self, row: usize, term: usize) -> f64 {
        self.rows[row]
            .iter()
            .find(|(t, _)| *t as usize == term)
            .map(|(_, w)| *w)
            .unwrap_or(0.0)
    }
}

/// Build the tf-idf matrix: `w = tf * ln(N / df)` with raw term counts and
/// document frequencies taken from the vocabulary. Terms present in every
/// training document get weight zero everywhere.
///
/// The vocabulary must describe this corpus's training split; a document
/// frequency mismatch is reported as an error.
pub fn tfidf_matrix(corpus: &Corpus, vocab: &Vocabulary) -> Result<TfIdfMatrix> {
    let n_train = corpus.train_docs().count();
    if n_train == 0 {
        return Err(Error::EmptyTraining);
    }
    let n = n_train as f64;
    let idf: Vec<f64> = vocab
        .doc_frequency
        .iter()
        .map(|&df| {
            if df == 0 {
                0.0
            } else {
                (n / df as f64).ln()
            }
        })
        .collect();

    let mut rows = Vec::with_capacity(n_train);
    let mut row_labels = Vec::with_capacity(n_train);
    let mut df_check = vec![0u32; vocab.len()];
    let mut counts: HashMap<u32, u64> = HashMap::new();
    for doc in corpus.train_docs() {
        let label = doc.label.as_deref().ok_or_else(|| {
            Error::InvalidParam(format!("training document `{}` has no label", doc.id))
        })?;
        let class = corpus
            .class_index(label)
            .ok_or_else(|| Error::InvalidParam(format!("label `{label}` not in class list")))?;
        counts.clear();
        for token in &doc.tokens {
            if let Some(term) = vocab.term_index(token) {
                *counts.entry(term as u32).or_insert(0) += 1;
            }
        }
        let mut row: Vec<(u32, f64)> = Vec::with_capacity(counts.len());
        for (&term, &tf) in counts.iter() {
            df_check[term as usize] += 1;
            let w = tf as f64 * idf[term as usize];
            if w != 0.0 {
                row.push((term, w));
            }
        }
        row.sort_unstable_by_key(|(t, _)| *t);
        rows.push(row);
        row_labels.push(class as u32);
    }

    for (term, (&seen, &recorded)) in df_check.iter().zip(&vocab.doc_frequency).enumerate() {
        if seen != recorded {
            return Err(Error::VocabularyMismatch(format!(
                "term `{}` has document frequency {seen} in this corpus but {recorded} in the vocabulary",
                vocab.terms[term]
            )));
        }
    }

    Ok(TfIdfMatrix {
        classes: corpus.classes.clone(),
        terms: vocab.terms.clone(),
        rows,
        row_labels,
    })
}

/// Per-term, per-class weights `W(t, c)`, row-stochastic over classes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassTermWeights {
    pub classes: Vec<String>,
    pub terms: Vec<String>,
    /// Term-major storage: `weights[t * |C| .. (t + 1) * |C|]`.
    weights: Vec<f64>,
    #[serde(skip)]
    index: HashMap<String, u32>,
}

impl ClassTermWeights {
    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    /// Weights of term `t` over all classes, in class order.
    pub fn weights_for(&self, term: &str) -> Option<&[f64]> {
        self.index.get(term).map(|&t| self.row(t as usize))
    }

    pub fn term_index(&self, term: &str) -> Option<usize> {
        self.index.get(term).map(|&t| t as usize)
    }

    pub fn row(&self, term: usize) -> &[f64] {
        let c = self.n_classes();
        &self.weights[term * c..(term + 1) * c]
    }

    /// Build a table from raw parts; `weights` is term-major, length
    /// `terms.len() * classes.len()`.
    pub fn from_parts(classes: Vec<String>, terms: Vec<String>, weights: Vec<f64>) -> Self {
        assert_eq!(weights.len(), terms.len() * classes.len(), "weights length mismatch");
        let mut betas = ClassTermWeights {
            classes,
            terms,
            weights,
            index: HashMap::new(),
        };
        betas.rebuild_index();
        betas
    }

    pub(crate) fn rebuild_index(&mut self) {
        self.index = self
            .terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i as u32))
            .collect();
    }

    /// Line-oriented export: `#ldr-beta v1` header, class-order line, then
    /// one `term<TAB>w...` row per term with 12 significant digits.
    pub fn write_to<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "#ldr-beta v1")?;
        writeln!(w, "{}", self.classes.join("\t"))?;
        let c = self.n_classes();
        for (i, term) in self.terms.iter().enumerate() {
            write!(w, "{term}")?;
            for k in 0..c {
                write!(w, "\t{}", sig12(self.weights[i * c + k]))?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        self.write_to(std::io::BufWriter::new(file))
            .map_err(|source| Error::Io {
                path: path.to_path_buf(),
                source,
            })
    }

    pub fn read_from<R: BufRead>(r: R, path: &Path) -> Result<Self> {
        let parse_err = |line: usize, detail: &str| Error::FormatParse {
            path: path.to_path_buf(),
            line,
            detail: detail.to_owned(),
        };
        let mut lines = r.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| parse_err(1, "empty file"))?;
        let header = header.map_err(|e| parse_err(1, &e.to_string()))?;
        if header != "#ldr-beta v1" {
            return Err(Error::FormatVersion {
                found: header,
                expected: "#ldr-beta v1".to_owned(),
            });
        }
        let (_, class_line) = lines
            .next()
            .ok_or_else(|| parse_err(2, "missing class-order line"))?;
        let class_line = class_line.map_err(|e| parse_err(2, &e.to_string()))?;
        let classes: Vec<String> = class_line.split('\t').map(str::to_owned).collect();
        if classes.is_empty() || classes.iter().any(|c| c.is_empty()) {
            return Err(parse_err(2, "empty class name in class-order line"));
        }
        let c = classes.len();
        let mut terms = Vec::new();
        let mut weights = Vec::new();
        for (idx, line) in lines {
            let lineno = idx + 1;
            let line = line.map_err(|e| parse_err(lineno, &e.to_string()))?;
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split('\t');
            let term = fields.next().unwrap();
            terms.push(term.to_owned());
            let mut count = 0;
            for field in fields {
                let w: f64 = field
                    .parse()
                    .map_err(|_| parse_err(lineno, &format!("bad weight `{field}`")))?;
                weights.push(w);
                count += 1;
            }
            if count != c {
                return Err(parse_err(
                    lineno,
                    &format!("expected {c} weights, found {count}"),
                ));
            }
        }
        Ok(ClassTermWeights::from_parts(classes, terms, weights))
    }

    pub fn read_file(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::read_from(std::io::BufReader::new(file), path)
    }
}

/// Derive the class-dependent term weights from the tf-idf matrix: each
/// `W(t, c)` is class `c`'s share of term `t`'s total tf-idf mass. Terms with
/// zero total mass fall back to the uniform `1/|C|` so rows stay stochastic.
pub fn class_term_weights(matrix: &TfIdfMatrix) -> Result<ClassTermWeights> {
    let c = matrix.classes.len();
    let t = matrix.terms.len();
    for (k, class) in matrix.classes.iter().enumerate() {
        if !matrix.row_labels.iter().any(|&l| l as usize == k) {
            return Err(Error::ClassWithoutTraining(class.clone()));
        }
    }
    let mut mass = vec![0.0f64; t * c];
    for (row, &label) in matrix.rows.iter().zip(&matrix.row_labels) {
        for &(term, w) in row {
            mass[term as usize * c + label as usize] += w;
        }
    }
    let mut weights = vec![0.0f64; t * c];
    for term in 0..t {
        let block = &mass[term * c..(term + 1) * c];
        let total: f64 = block.iter().sum();
        let out = &mut weights[term * c..(term + 1) * c];
        if total > 0.0 {
            for (o, &m) in out.iter_mut().zip(block) {
                *o = m / total;
            }
        } else {
            let uniform = 1.0 / c as f64;
            out.fill(uniform);
        }
    }
    Ok(ClassTermWeights::from_parts(
        matrix.classes.clone(),
        matrix.terms.clone(),
        weights,
    ))
}
