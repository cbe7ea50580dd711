//! The low dimensionality document representation: six statistics of the
//! class-dependent term weights per class, `6 * |C|` features in total.
//!
//! Statistics are token-level: every occurrence of a vocabulary term
//! contributes its weight once, so `prob = avg * prop` holds by construction
//! and repeated discriminative words count with their multiplicity.

use std::collections::HashMap;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::Document;
use crate::error::{Error, Result};
use crate::report::{csv_field, sig12};
use crate::weighting::ClassTermWeights;

/// The six per-class statistics, in block order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureKind {
    Avg,
    Std,
    Min,
    Max,
    Prob,
    Prop,
}

impl FeatureKind {
    pub const ALL: [FeatureKind; 6] = [
        FeatureKind::Avg,
        FeatureKind::Std,
        FeatureKind::Min,
        FeatureKind::Max,
        FeatureKind::Prob,
        FeatureKind::Prop,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FeatureKind::Avg => "avg",
            FeatureKind::Std => "std",
            FeatureKind::Min => "min",
            FeatureKind::Max => "max",
            FeatureKind::Prob => "prob",
            FeatureKind::Prop => "prop",
        }
    }
}

impl std::str::FromStr for FeatureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FeatureKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidParam(format!("unknown feature kind `{s}`")))
    }
}

/// One per-class block of the vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureBlock {
    pub avg: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
    pub prob: f64,
    pub prop: f64,
}

/// A document's representation: one `FeatureBlock` per class, flattened in
/// class order as `(avg, std, min, max, prob, prop)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LdrVector {
    values: Vec<f64>,
    n_classes: usize,
}

impl LdrVector {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn block(&self, class: usize) -> FeatureBlock {
        let b = &self.values[class * 6..(class + 1) * 6];
        FeatureBlock {
            avg: b[0],
            std: b[1],
            min: b[2],
            max: b[3],
            prob: b[4],
            prop: b[5],
        }
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// Map a token sequence to its feature vector using the class-dependent
/// weights. Documents without any vocabulary token get the all-zero vector.
pub fn extract_ldr(tokens: &[String], beta: &ClassTermWeights) -> LdrVector {
    let c = beta.n_classes();
    // Matched vocabulary terms in first-occurrence order, with counts.
    // Aggregating counts keeps the statistics stable under token duplication.
    let mut seen: HashMap<&str, usize> = HashMap::new();
    let mut matched: Vec<(usize, f64)> = Vec::new(); // (beta term index, count)
    for token in tokens {
        if let Some(term) = beta.term_index(token) {
            match seen.entry(token.as_str()) {
                std::collections::hash_map::Entry::Occupied(slot) => {
                    matched[*slot.get()].1 += 1.0;
                }
                std::collections::hash_map::Entry::Vacant(slot) => {
                    slot.insert(matched.len());
                    matched.push((term, 1.0));
                }
            }
        }
    }
    let m: f64 = matched.iter().map(|(_, count)| count).sum();
    let l = tokens.len() as f64;
    let mut values = vec![0.0f64; 6 * c];
    if m == 0.0 {
        return LdrVector { values, n_classes: c };
    }
    let prop = m / l;
    for class in 0..c {
        let mut sum = 0.0f64;
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for &(term, count) in &matched {
            let w = beta.row(term)[class];
            sum += count * w;
            if w < min {
                min = w;
            }
            if w > max {
                max = w;
            }
        }
        // the true mean lies in [min, max]; clamp away summation rounding
        let avg = (sum / m).clamp(min, max);
        let mut var = 0.0f64;
        for &(term, count) in &matched {
            let d = beta.row(term)[class] - avg;
            var += count * d * d;
        }
        let std = (var / m).sqrt();
        let block = &mut values[class * 6..(class + 1) * 6];
        block[0] = avg;
        block[1] = std;
        block[2] = min;
        block[3] = max;
        block[4] = sum / l;
        block[5] = prop;
    }
    LdrVector { values, n_classes: c }
}

/// A labelled table of feature rows, the common currency between the
/// representations, the classifier and the evaluation harness.
#[derive(Debug, Clone)]
pub struct FeatureTable {
    pub feature_names: Vec<String>,
    pub doc_ids: Vec<String>,
    pub labels: Vec<Option<String>>,
    pub rows: Vec<Vec<f64>>,
}

impl FeatureTable {
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    /// Gold labels for supervised steps; errors on the first unlabelled row.
    pub fn labels_required(&self) -> Result<Vec<String>> {
        self.labels
            .iter()
            .zip(&self.doc_ids)
            .map(|(label, id)| {
                label
                    .clone()
                    .ok_or_else(|| Error::InvalidParam(format!("document `{id}` has no label")))
            })
            .collect()
    }

    /// Keep only the named columns, in the given order.
    pub fn select_columns(&self, columns: &[usize]) -> FeatureTable {
        FeatureTable {
            feature_names: columns.iter().map(|&i| self.feature_names[i].clone()).collect(),
            doc_ids: self.doc_ids.clone(),
            labels: self.labels.clone(),
            rows: self
                .rows
                .iter()
                .map(|row| columns.iter().map(|&i| row[i]).collect())
                .collect(),
        }
    }

    pub fn to_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        write!(w, "doc_id,label")?;
        for name in &self.feature_names {
            write!(w, ",{}", csv_field(name))?;
        }
        writeln!(w)?;
        for ((id, label), row) in self.doc_ids.iter().zip(&self.labels).zip(&self.rows) {
            write!(w, "{},{}", csv_field(id), csv_field(label.as_deref().unwrap_or("")))?;
            for v in row {
                write!(w, ",{}", sig12(*v))?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

/// Feature names for a full vector: `<class>_avg`, `<class>_std`, ... in
/// class-major order.
pub fn ldr_feature_names(classes: &[String]) -> Vec<String> {
    let mut names = Vec::with_capacity(classes.len() * 6);
    for class in classes {
        for kind in FeatureKind::ALL {
            names.push(format!("{class}_{}", kind.name()));
        }
    }
    names
}

/// Row-per-document batch extraction; row order matches input order.
pub fn extract_ldr_batch(docs: &[&Document], beta: &ClassTermWeights) -> FeatureTable {
    let rows: Vec<Vec<f64>> = docs
        .par_iter()
        .map(|doc| extract_ldr(&doc.tokens, beta).into_values())
        .collect();
    FeatureTable {
        feature_names: ldr_feature_names(&beta.classes),
        doc_ids: docs.iter().map(|d| d.id.clone()).collect(),
        labels: docs.iter().map(|d| d.label.clone()).collect(),
        rows,
    }
}

/// Restrict a full table to the requested statistic kinds, keeping the
/// class-major order. Only meaningful for tables produced by
/// [`extract_ldr_batch`].
pub fn restrict_ldr_kinds(table: &FeatureTable, kinds: &[FeatureKind]) -> Result<FeatureTable> {
    if kinds.is_empty() {
        return Err(Error::InvalidParam("empty feature-kind subset".to_owned()));
    }
    let keep: Vec<usize> = table
        .feature_names
        .iter()
        .enumerate()
        .filter(|(_, name)| {
            kinds
                .iter()
                .any(|k| name.rsplit_once('_').map(|(_, suffix)| suffix) == Some(k.name()))
        })
        .map(|(i, _)| i)
        .collect();
    if keep.is_empty() {
        return Err(Error::InvalidParam(
            "no matching feature columns; not a full feature table?".to_owned(),
        ));
    }
    Ok(table.select_columns(&keep))
}
