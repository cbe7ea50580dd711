//! Brute-force reference implementations shared by the integration suites.
//!
//! Everything here recomputes results straight from the definitions with
//! naive scans and direct summation, deliberately sharing no code with the
//! library: term and document frequencies by rescanning raw token lists,
//! class weights by summing matrix entries term by term, and the six
//! per-class statistics by walking the token multiset one occurrence at a
//! time.

use std::collections::{BTreeSet, HashMap};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use ldr::corpus::{Corpus, Document, Layout, Split};
use ldr::weighting::ClassTermWeights;

pub fn tokens(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// Two classes, two training documents each; small enough to check every
/// number by hand.
pub fn toy2() -> Corpus {
    let docs = vec![
        Document::from_tokens("A1", Some("A"), Split::Train, tokens(&["foo", "bar", "foo"])),
        Document::from_tokens("A2", Some("A"), Split::Train, tokens(&["foo", "baz"])),
        Document::from_tokens("B1", Some("B"), Split::Train, tokens(&["qux", "bar"])),
        Document::from_tokens("B2", Some("B"), Split::Train, tokens(&["qux", "qux", "baz"])),
    ];
    Corpus::from_documents(vec!["A".into(), "B".into()], docs, Layout::Hispablogs).unwrap()
}

/// `(label, tokens)` pairs for the training split, in corpus order.
pub fn train_pairs(corpus: &Corpus) -> Vec<(String, Vec<String>)> {
    corpus
        .train_docs()
        .map(|d| (d.label.clone().expect("training document without label"), d.tokens.clone()))
        .collect()
}

/// Naive vocabulary: every token whose summed count across training
/// documents exceeds the pruning threshold.
pub fn oracle_vocab(train: &[(String, Vec<String>)], min_freq: u64) -> BTreeSet<String> {
    let mut freq: HashMap<&str, u64> = HashMap::new();
    for (_, toks) in train {
        for t in toks {
            *freq.entry(t).or_insert(0) += 1;
        }
    }
    freq.into_iter()
        .filter(|&(_, f)| f > min_freq)
        .map(|(t, _)| t.to_string())
        .collect()
}

/// Naive tf-idf, one map per training document:
/// `w(d, t) = count of t in d * ln(N / df(t))`.
pub fn oracle_tfidf(
    train: &[(String, Vec<String>)],
    vocab: &BTreeSet<String>,
) -> Vec<HashMap<String, f64>> {
    let n = train.len() as f64;
    let mut rows = Vec::with_capacity(train.len());
    for (_, toks) in train {
        let mut row = HashMap::new();
        for term in vocab {
            let tf = toks.iter().filter(|t| *t == term).count() as f64;
            if tf == 0.0 {
                continue;
            }
            let df = train.iter().filter(|(_, d)| d.iter().any(|t| t == term)).count() as f64;
            let w = tf * (n / df).ln();
            if w != 0.0 {
                row.insert(term.clone(), w);
            }
        }
        rows.push(row);
    }
    rows
}

/// Naive class weights, keyed by term:
/// `W(t, c) = sum over documents labelled c of w(d, t) / sum over all documents`,
/// with terms carrying no mass spread uniformly over the classes.
pub fn oracle_class_weights(
    train: &[(String, Vec<String>)],
    classes: &[String],
    vocab: &BTreeSet<String>,
) -> HashMap<String, Vec<f64>> {
    let matrix = oracle_tfidf(train, vocab);
    let mut out = HashMap::new();
    for term in vocab {
        let mut per_class = vec![0.0; classes.len()];
        let mut total = 0.0;
        for ((label, _), row) in train.iter().zip(&matrix) {
            let w = row.get(term).copied().unwrap_or(0.0);
            let c = classes.iter().position(|n| n == label).expect("unknown label");
            per_class[c] += w;
            total += w;
        }
        let weights = if total == 0.0 {
            vec![1.0 / classes.len() as f64; classes.len()]
        } else {
            per_class.iter().map(|&m| m / total).collect()
        };
        out.insert(term.clone(), weights);
    }
    out
}

/// Naive six-statistics extraction: walk the tokens in order, keep one
/// weight list per class over the matched occurrences, then compute
/// average, population standard deviation, minimum, maximum, probability
/// (weight sum over document length) and proportion (match count over
/// document length) directly from each list.
pub fn oracle_ldr(
    doc: &[String],
    weights: &HashMap<String, Vec<f64>>,
    n_classes: usize,
) -> Vec<f64> {
    let mut per_class: Vec<Vec<f64>> = vec![Vec::new(); n_classes];
    for tok in doc {
        if let Some(ws) = weights.get(tok) {
            for (c, &w) in ws.iter().enumerate() {
                per_class[c].push(w);
            }
        }
    }
    let l = doc.len() as f64;
    let mut out = Vec::with_capacity(6 * n_classes);
    for list in &per_class {
        if list.is_empty() {
            out.extend_from_slice(&[0.0; 6]);
            continue;
        }
        let m = list.len() as f64;
        let sum: f64 = list.iter().sum();
        let avg = sum / m;
        let var = list.iter().map(|&x| (x - avg) * (x - avg)).sum::<f64>() / m;
        let min = list.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = list.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        out.extend_from_slice(&[avg, var.sqrt(), min, max, sum / l, m / l]);
    }
    out
}

/// Random small labelled corpus: 2-4 classes, 2-5 training documents per
/// class, tokens drawn from a 20-word pool.
pub fn random_corpus(rng: &mut ChaCha8Rng) -> Corpus {
    let n_classes = rng.gen_range(2..=4);
    let classes: Vec<String> = (0..n_classes).map(|c| format!("c{c}")).collect();
    let pool: Vec<String> = (0..20).map(|w| format!("w{w:02}")).collect();
    let mut docs = Vec::new();
    for class in &classes {
        for d in 0..rng.gen_range(2..=5usize) {
            let len = rng.gen_range(1..=12);
            let toks: Vec<String> =
                (0..len).map(|_| pool[rng.gen_range(0..pool.len())].clone()).collect();
            docs.push(Document::from_tokens(
                format!("{class}_{d}"),
                Some(class.as_str()),
                Split::Train,
                toks,
            ));
        }
    }
    Corpus::from_documents(classes, docs, Layout::Hispablogs).unwrap()
}

/// Random row-stochastic weight table over a fresh vocabulary.
pub fn random_weights(rng: &mut ChaCha8Rng, n_classes: usize, n_terms: usize) -> ClassTermWeights {
    let classes: Vec<String> = (0..n_classes).map(|c| format!("c{c}")).collect();
    let terms: Vec<String> = (0..n_terms).map(|t| format!("t{t:03}")).collect();
    let mut weights = Vec::with_capacity(n_terms * n_classes);
    for _ in 0..n_terms {
        let raw: Vec<f64> = (0..n_classes).map(|_| rng.gen_range(0.0..1.0f64)).collect();
        let total: f64 = raw.iter().sum();
        if total == 0.0 {
            weights.extend(std::iter::repeat(1.0 / n_classes as f64).take(n_classes));
        } else {
            weights.extend(raw.iter().map(|r| r / total));
        }
    }
    ClassTermWeights::from_parts(classes, terms, weights)
}

/// Random token list mixing vocabulary terms with out-of-vocabulary noise.
pub fn random_doc(rng: &mut ChaCha8Rng, table: &ClassTermWeights, len: usize) -> Vec<String> {
    (0..len)
        .map(|_| {
            if rng.gen_bool(0.8) {
                table.terms[rng.gen_range(0..table.terms.len())].clone()
            } else {
                format!("oov{}", rng.gen_range(0..50))
            }
        })
        .collect()
}
