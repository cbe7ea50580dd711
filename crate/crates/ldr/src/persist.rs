//! Model persistence: a versioned JSON bundle holding the linear model
//! together with everything needed to reproduce its feature space (the
//! class-dependent term weights or the fitted n-gram model, plus the
//! tokenizer settings).

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::baselines::{ngram_features_batch, NgramModel};
use crate::classifier::LinearModel;
use crate::corpus::{Document, TokenizerConfig};
use crate::error::{Error, Result};
use crate::features::{extract_ldr_batch, FeatureTable};
use crate::weighting::ClassTermWeights;

pub const MODEL_FORMAT: &str = "ldr-model/1";

/// How to turn documents into feature rows for a persisted model.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RepresentationSpec {
    Ldr {
        min_freq: u64,
        tokenizer: TokenizerConfig,
        beta: ClassTermWeights,
    },
    Ngram {
        tokenizer: TokenizerConfig,
        model: NgramModel,
    },
}

impl RepresentationSpec {
    pub fn id(&self) -> String {
        match self {
            RepresentationSpec::Ldr { .. } => "ldr".to_owned(),
            RepresentationSpec::Ngram { model, .. } => {
                format!("{}-{}-gram-{}", model.unit.name(), model.n, model.weighting.name())
            }
        }
    }

    pub fn tokenizer(&self) -> &TokenizerConfig {
        match self {
            RepresentationSpec::Ldr { tokenizer, .. } => tokenizer,
            RepresentationSpec::Ngram { tokenizer, .. } => tokenizer,
        }
    }

    pub fn n_features(&self) -> usize {
        match self {
            RepresentationSpec::Ldr { beta, .. } => 6 * beta.n_classes(),
            RepresentationSpec::Ngram { model, .. } => model.n_features(),
        }
    }

    /// Feature rows for already-tokenized documents.
    pub fn extract(&self, docs: &[&Document]) -> FeatureTable {
        match self {
            RepresentationSpec::Ldr { beta, .. } => extract_ldr_batch(docs, beta),
            RepresentationSpec::Ngram { model, .. } => ngram_features_batch(docs, model),
        }
    }
}

/// A trained model plus its representation, the unit that round-trips
/// through disk.
#[derive(Debug, Clone)]
pub struct ModelBundle {
    pub model: LinearModel,
    pub representation: RepresentationSpec,
}

/// On-disk shape of the bundle.
#[derive(Serialize, Deserialize)]
struct ModelFile {
    format: String,
    classes: Vec<String>,
    representation: RepresentationSpec,
    scaling: crate::classifier::Scaling,
    weights: WeightsBlock,
    hyper: crate::classifier::TrainingMeta,
}

#[derive(Serialize, Deserialize)]
struct WeightsBlock {
    feature_dim: usize,
    matrix: Vec<f64>,
    biases: Vec<f64>,
}

#[derive(Deserialize)]
struct FormatProbe {
    format: Option<String>,
}

impl ModelBundle {
    pub fn new(mut model: LinearModel, representation: RepresentationSpec) -> Result<ModelBundle> {
        // the bundle is the unit of persistence, so keep the model's metadata
        // in sync with the representation it is being tied to
        model.meta.representation = representation.id();
        let bundle = ModelBundle { model, representation };
        bundle.validate()?;
        Ok(bundle)
    }

    fn validate(&self) -> Result<()> {
        let m = &self.model;
        let d = m.feature_dim;
        if m.weights.len() != m.classes.len() * d {
            return Err(Error::InvalidParam(format!(
                "weight matrix has {} entries, expected {} classes x {} features",
                m.weights.len(),
                m.classes.len(),
                d
            )));
        }
        if m.biases.len() != m.classes.len() {
            return Err(Error::InvalidParam("bias count does not match classes".to_owned()));
        }
        if m.scaling.mean.len() != d || m.scaling.std.len() != d {
            return Err(Error::InvalidParam("scaling parameters do not match feature_dim".to_owned()));
        }
        let repr_dim = self.representation.n_features();
        if repr_dim != d {
            return Err(Error::DimensionMismatch { expected: d, got: repr_dim });
        }
        Ok(())
    }

    /// Tokenize raw texts with the bundle's own tokenizer settings.
    pub fn tokenizer(&self) -> &TokenizerConfig {
        self.representation.tokenizer()
    }

    /// Predicted label and score simplex for each document.
    pub fn predict_docs(&self, docs: &[&Document]) -> Result<Vec<(String, Vec<f64>)>> {
        let table = self.representation.extract(docs);
        self.model.predict_batch(&table)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        self.validate()?;
        let file = ModelFile {
            format: MODEL_FORMAT.to_owned(),
            classes: self.model.classes.clone(),
            representation: self.representation.clone(),
            scaling: self.model.scaling.clone(),
            weights: WeightsBlock {
                feature_dim: self.model.feature_dim,
                matrix: self.model.weights.clone(),
                biases: self.model.biases.clone(),
            },
            hyper: self.model.meta.clone(),
        };
        let out = File::create(path).map_err(|source| Error::Io { path: path.to_owned(), source })?;
        let mut w = BufWriter::new(out);
        serde_json::to_writer_pretty(&mut w, &file)
            .map_err(|e| Error::ModelParse { path: path.to_owned(), detail: e.to_string() })?;
        w.write_all(b"\n")
            .and_then(|_| w.flush())
            .map_err(|source| Error::Io { path: path.to_owned(), source })
    }

    pub fn load(path: &Path) -> Result<ModelBundle> {
        let file = File::open(path).map_err(|source| Error::Io { path: path.to_owned(), source })?;
        let mut text = String::new();
        BufReader::new(file)
            .read_to_string(&mut text)
            .map_err(|source| Error::Io { path: path.to_owned(), source })?;
        Self::from_json(&text, path)
    }

    pub fn from_json(text: &str, path: &Path) -> Result<ModelBundle> {
        // check the declared format before insisting on the full schema, so
        // foreign or future files fail with a version message
        let probe: FormatProbe = serde_json::from_str(text)
            .map_err(|e| Error::ModelParse { path: path.to_owned(), detail: e.to_string() })?;
        match probe.format.as_deref() {
            Some(MODEL_FORMAT) => {}
            Some(other) => {
                return Err(Error::FormatVersion {
                    found: other.to_owned(),
                    expected: MODEL_FORMAT.to_owned(),
                })
            }
            None => {
                return Err(Error::ModelParse {
                    path: path.to_owned(),
                    detail: "missing field `format`".to_owned(),
                })
            }
        }
        let file: ModelFile = serde_json::from_str(text)
            .map_err(|e| Error::ModelParse { path: path.to_owned(), detail: e.to_string() })?;
        let mut representation = file.representation;
        match &mut representation {
            RepresentationSpec::Ldr { beta, .. } => beta.rebuild_index(),
            RepresentationSpec::Ngram { model, .. } => model.rebuild_index(),
        }
        let bundle = ModelBundle {
            model: LinearModel {
                classes: file.classes,
                feature_dim: file.weights.feature_dim,
                weights: file.weights.matrix,
                biases: file.weights.biases,
                scaling: file.scaling,
                meta: file.hyper,
                loss_trace: Vec::new(),
            },
            representation,
        };
        bundle.validate().map_err(|e| Error::ModelParse {
            path: path.to_owned(),
            detail: e.to_string(),
        })?;
        Ok(bundle)
    }
}
