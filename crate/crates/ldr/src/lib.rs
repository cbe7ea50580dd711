//! Language variety identification with low-dimensionality document
//! representations.
//!
//! The pipeline: ingest a corpus split into train/test ([`corpus`]), weight
//! terms by tf-idf and turn the per-class weight mass into a row-stochastic
//! term/class table ([`weighting`]), then represent each document by six
//! statistics of those weights per class — `6 × |classes|` features in
//! total ([`features`]). A multinomial logistic classifier ([`classifier`])
//! and top-k n-gram baselines ([`baselines`]) ride on the same feature
//! table type, and [`eval`] holds the experimental harness: accuracy and
//! confusion metrics, two-proportion significance tests, information-gain
//! ranking, feature ablation, frequency-threshold sweeps, and an extraction
//! cost benchmark.
//!
//! ```
//! use ldr::classifier::{train_classifier, Hyperparameters};
//! use ldr::eval::{evaluate, ldr_tables};
//! use ldr::synth::{synthetic_corpus, SynthConfig};
//!
//! let corpus = synthetic_corpus(&SynthConfig {
//!     train_per_class: 10,
//!     test_per_class: 4,
//!     ..SynthConfig::default()
//! })
//! .unwrap();
//! let (beta, train, test) = ldr_tables(&corpus, 1).unwrap();
//! assert_eq!(train.n_features(), 6 * beta.n_classes());
//!
//! let model = train_classifier(
//!     &train,
//!     &train.labels_required().unwrap(),
//!     &Hyperparameters { max_iters: 50, ..Hyperparameters::default() },
//! )
//! .unwrap();
//! let report = evaluate(
//!     &model.predicted_labels(&test).unwrap(),
//!     &test.labels_required().unwrap(),
//! )
//! .unwrap();
//! assert!(report.accuracy > 0.5);
//! ```

pub mod baselines;
pub mod classifier;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod features;
pub mod fetch;
pub mod persist;
pub mod report;
pub mod synth;
pub mod weighting;

pub use classifier::{train_classifier, Classifier, Hyperparameters, LinearModel};
pub use corpus::{build_vocabulary, load_corpus, Corpus, Document, Layout, Split, TokenizerConfig, Vocabulary};
pub use error::{Error, Result};
pub use eval::{evaluate, significance_z, EvalReport};
pub use features::{extract_ldr, extract_ldr_batch, FeatureKind, FeatureTable, LdrVector};
pub use persist::{ModelBundle, RepresentationSpec};
pub use weighting::{class_term_weights, tfidf_matrix, ClassTermWeights, TfIdfMatrix};
