//! Seeded generator for synthetic language-variety corpora: a shared
//! Zipf-weighted vocabulary plus class-exclusive marker words, so varieties
//! are separable by construction and pipelines can run without any dataset.

use std::fmt::Write as _;
use std::path::Path;

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Corpus, Document, Layout, Split};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct SynthConfig {
    pub classes: Vec<String>,
    pub train_per_class: usize,
    pub test_per_class: usize,
    /// Size of the vocabulary shared by every class, sampled with
    /// weight 1/(1+rank).
    pub shared_vocab: usize,
    /// Class-exclusive marker words per class.
    pub markers_per_class: usize,
    /// Probability that a token position is a marker of the document's class.
    pub marker_rate: f64,
    /// Probability of a one-off noise token (pruned by any frequency
    /// threshold ≥ 1).
    pub noise_rate: f64,
    pub doc_len: std::ops::RangeInclusive<usize>,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            classes: ["andina", "caribe", "litoral", "meseta", "pampa"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            train_per_class: 100,
            test_per_class: 40,
            shared_vocab: 200,
            markers_per_class: 20,
            marker_rate: 0.08,
            noise_rate: 0.01,
            doc_len: 80..=160,
            seed: 42,
        }
    }
}

/// Letters-only counting suffix (a, b, ..., z, ba, bb, ...) so generated
/// tokens survive the letter-run tokenizer unchanged.
fn alpha_suffix(mut i: usize) -> String {
    let mut s = String::new();
    loop {
        s.insert(0, (b'a' + (i % 26) as u8) as char);
        i /= 26;
        if i == 0 {
            return s;
        }
    }
}

pub fn synthetic_corpus(cfg: &SynthConfig) -> Result<Corpus> {
    if cfg.classes.len() < 2 {
        return Err(Error::SingleClass(cfg.classes.len()));
    }
    if cfg.train_per_class == 0 || cfg.shared_vocab == 0 || cfg.markers_per_class == 0 {
        return Err(Error::InvalidParam(
            "train_per_class, shared_vocab and markers_per_class must be positive".to_owned(),
        ));
    }
    if !(0.0..=1.0).contains(&(cfg.marker_rate + cfg.noise_rate)) {
        return Err(Error::InvalidParam("marker_rate + noise_rate must be in [0,1]".to_owned()));
    }
    if *cfg.doc_len.start() == 0 || cfg.doc_len.is_empty() {
        return Err(Error::InvalidParam("doc_len range must be non-empty and positive".to_owned()));
    }
    let shared: Vec<String> = (0..cfg.shared_vocab).map(|i| format!("lex{}", alpha_suffix(i))).collect();
    let weights: Vec<f64> = (0..cfg.shared_vocab).map(|i| 1.0 / (1.0 + i as f64)).collect();
    let shared_dist = WeightedIndex::new(&weights)
        .map_err(|e| Error::InvalidParam(format!("bad shared-vocabulary weights: {e}")))?;
    let markers: Vec<Vec<String>> = cfg
        .classes
        .iter()
        .map(|class| {
            (0..cfg.markers_per_class)
                .map(|i| format!("{class}marker{}", alpha_suffix(i)))
                .collect()
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut noise_counter = 0usize;
    let mut documents = Vec::new();
    for (ci, class) in cfg.classes.iter().enumerate() {
        for (split, count, tag) in [
            (Split::Train, cfg.train_per_class, "train"),
            (Split::Test, cfg.test_per_class, "test"),
        ] {
            for di in 0..count {
                let len = rng.gen_range(cfg.doc_len.clone());
                let mut tokens = Vec::with_capacity(len);
                for _ in 0..len {
                    let r: f64 = rng.gen();
                    if r < cfg.marker_rate {
                        let m = rng.gen_range(0..cfg.markers_per_class);
                        tokens.push(markers[ci][m].clone());
                    } else if r < cfg.marker_rate + cfg.noise_rate {
                        tokens.push(format!("noise{}", alpha_suffix(noise_counter)));
                        noise_counter += 1;
                    } else {
                        tokens.push(shared[shared_dist.sample(&mut rng)].clone());
                    }
                }
                let mut id = String::new();
                write!(id, "{class}_{tag}_{di:03}").unwrap();
                documents.push(Document::from_tokens(id, Some(class.as_str()), split, tokens));
            }
        }
    }
    Corpus::from_documents(cfg.classes.clone(), documents, Layout::Hispablogs)
}

/// Materialize a corpus on disk in the directory-per-class layout
/// (`root/{train,test}/<class>/<id>.txt`), so CLI runs and ingestion tests
/// have a real tree to read.
pub fn write_hispablogs_layout(corpus: &Corpus, root: &Path) -> Result<()> {
    let io_err = |path: &Path, source: std::io::Error| Error::Io { path: path.to_owned(), source };
    for doc in &corpus.documents {
        let label = doc.label.as_deref().ok_or_else(|| {
            Error::InvalidParam(format!("document `{}` has no label to place it under", doc.id))
        })?;
        let dir = root.join(doc.split.to_string()).join(label);
        std::fs::create_dir_all(&dir).map_err(|e| io_err(&dir, e))?;
        let path = dir.join(format!("{}.txt", doc.id));
        std::fs::write(&path, &doc.text).map_err(|e| io_err(&path, e))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{load_corpus, TokenizerConfig};

    #[test]
    fn default_config_shapes() {
        let corpus = synthetic_corpus(&SynthConfig::default()).unwrap();
        assert_eq!(corpus.classes.len(), 5);
        assert_eq!(corpus.train_docs().count(), 500);
        assert_eq!(corpus.test_docs().count(), 200);
        for doc in &corpus.documents {
            assert!((80..=160).contains(&doc.tokens.len()));
        }
    }

    #[test]
    fn same_seed_same_corpus_different_seed_differs() {
        let a = synthetic_corpus(&SynthConfig::default()).unwrap();
        let b = synthetic_corpus(&SynthConfig::default()).unwrap();
        let texts = |c: &Corpus| c.documents.iter().map(|d| d.text.clone()).collect::<Vec<_>>();
        assert_eq!(texts(&a), texts(&b));
        let c = synthetic_corpus(&SynthConfig { seed: 43, ..SynthConfig::default() }).unwrap();
        assert_ne!(texts(&a), texts(&c));
    }

    #[test]
    fn markers_stay_exclusive_to_their_class() {
        let corpus = synthetic_corpus(&SynthConfig::default()).unwrap();
        for doc in &corpus.documents {
            let label = doc.label.as_ref().unwrap();
            for token in &doc.tokens {
                if let Some(stem) = token.split("marker").next() {
                    if token.contains("marker") {
                        assert_eq!(stem, label, "marker {token} leaked into class {label}");
                    }
                }
            }
        }
    }

    #[test]
    fn alpha_suffix_counts_in_letters() {
        assert_eq!(alpha_suffix(0), "a");
        assert_eq!(alpha_suffix(25), "z");
        assert_eq!(alpha_suffix(26), "ba");
        assert!(alpha_suffix(12345).chars().all(|c| c.is_ascii_lowercase()));
    }

    #[test]
    fn disk_layout_round_trips() {
        let tmp = tempfile::tempdir().unwrap();
        let cfg = SynthConfig {
            train_per_class: 4,
            test_per_class: 2,
            ..SynthConfig::default()
        };
        let corpus = synthetic_corpus(&cfg).unwrap();
        write_hispablogs_layout(&corpus, tmp.path()).unwrap();
        let back = load_corpus(tmp.path(), Layout::Hispablogs, &TokenizerConfig::default()).unwrap();
        assert_eq!(back.classes, corpus.classes);
        assert_eq!(back.train_docs().count(), corpus.train_docs().count());
        assert_eq!(back.test_docs().count(), corpus.test_docs().count());
        // token streams survive the write/tokenize round trip
        let mut orig: Vec<(String, Vec<String>)> =
            corpus.documents.iter().map(|d| (format!("{}.txt", d.id), d.tokens.clone())).collect();
        orig.sort();
        let mut reloaded: Vec<(String, Vec<String>)> = back
            .documents
            .iter()
            .map(|d| {
                let name = Path::new(&d.id).file_name().unwrap().to_string_lossy().into_owned();
                (name, d.tokens.clone())
            })
            .collect();
        reloaded.sort();
        assert_eq!(orig, reloaded);
    }

    #[test]
    fn config_validation() {
        let bad = SynthConfig { classes: vec!["solo".into()], ..SynthConfig::default() };
        assert!(synthetic_corpus(&bad).is_err());
        let bad = SynthConfig { marker_rate: 0.9, noise_rate: 0.2, ..SynthConfig::default() };
        assert!(synthetic_corpus(&bad).is_err());
    }
}
