//! Comparison representations: top-k word/character n-grams with raw-count
//! or tf-idf weighting (bag-of-words is the word/1/count configuration).

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Document};
use crate::error::{Error, Result};
use crate::features::FeatureTable;
use crate::report::sig12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GramUnit {
    Word,
    Char,
}

impl GramUnit {
    pub fn name(self) -> &'static str {
        match self {
            GramUnit::Word => "word",
            GramUnit::Char => "char",
        }
    }
}

impl std::str::FromStr for GramUnit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "word" => Ok(GramUnit::Word),
            "char" => Ok(GramUnit::Char),
            other => Err(Error::InvalidParam(format!("unknown gram unit `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GramWeighting {
    Count,
    TfIdf,
}

impl GramWeighting {
    pub fn name(self) -> &'static str {
        match self {
            GramWeighting::Count => "count",
            GramWeighting::TfIdf => "tfidf",
        }
    }
}

impl std::str::FromStr for GramWeighting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "count" => Ok(GramWeighting::Count),
            "tfidf" => Ok(GramWeighting::TfIdf),
            other => Err(Error::InvalidParam(format!("unknown gram weighting `{other}`"))),
        }
    }
}

/// A fitted n-gram representation: the `k` most frequent grams of the
/// training split (frequency ties broken lexicographically) plus per-gram
/// idf when tf-idf weighted.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NgramModel {
    pub unit: GramUnit,
    pub n: usize,
    pub k: usize,
    pub weighting: GramWeighting,
    pub grams: Vec<String>,
    /// Empty for count weighting; aligned with `grams` otherwise.
    pub idf: Vec<f64>,
    #[serde(skip)]
    index: HashMap<String, u32>,
}

impl NgramModel {
    pub fn n_features(&self) -> usize {
        self.grams.len()
    }

    pub(crate) fn rebuild_index(&mut self) {
        self.index = self
            .grams
            .iter()
            .enumerate()
            .map(|(i, g)| (g.clone(), i as u32))
            .collect();
    }

    /// Line-oriented export: `#ngram v1` header, one config line, then
    /// `gram<TAB>rank[<TAB>idf]` rows. Grams never contain tabs or
    /// newlines: word grams join letter-only tokens with spaces and char
    /// grams come from whitespace-normalized text.
    pub fn write_to<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "#ngram v1")?;
        writeln!(w, "{}\t{}\t{}\t{}", self.unit.name(), self.n, self.k, self.weighting.name())?;
        for (rank, gram) in self.grams.iter().enumerate() {
            match self.weighting {
                GramWeighting::Count => writeln!(w, "{gram}\t{rank}")?,
                GramWeighting::TfIdf => writeln!(w, "{gram}\t{rank}\t{}", sig12(self.idf[rank]))?,
            }
        }
        Ok(())
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|source| Error::Io { path: path.to_owned(), source })?;
        let mut w = BufWriter::new(file);
        self.write_to(&mut w)
            .and_then(|_| w.flush())
            .map_err(|source| Error::Io { path: path.to_owned(), source })
    }

    pub fn read_from<R: BufRead>(r: R, path: &Path) -> Result<Self> {
        let parse_err = |line: usize, detail: &str| Error::FormatParse {
            path: path.to_owned(),
            line,
            detail: detail.to_owned(),
        };
        let mut lines = r.lines().enumerate();
        let header = match lines.next() {
            Some((_, Ok(line))) => line,
            Some((_, Err(source))) => return Err(Error::Io { path: path.to_owned(), source }),
            None => String::new(),
        };
        if header.trim_end() != "#ngram v1" {
            return Err(Error::FormatVersion {
                found: header.trim_end().to_owned(),
                expected: "#ngram v1".to_owned(),
            });
        }
        let config = match lines.next() {
            Some((_, Ok(line))) => line,
            Some((_, Err(source))) => return Err(Error::Io { path: path.to_owned(), source }),
            None => return Err(parse_err(2, "missing config line")),
        };
        let parts: Vec<&str> = config.trim_end().split('\t').collect();
        if parts.len() != 4 {
            return Err(parse_err(2, "config line needs `unit<TAB>n<TAB>k<TAB>weighting`"));
        }
        let unit: GramUnit = parts[0].parse().map_err(|_| parse_err(2, "bad gram unit"))?;
        let n: usize = parts[1].parse().map_err(|_| parse_err(2, "bad gram order"))?;
        let k: usize = parts[2].parse().map_err(|_| parse_err(2, "bad vocabulary size"))?;
        let weighting: GramWeighting = parts[3].parse().map_err(|_| parse_err(2, "bad weighting"))?;
        let mut grams = Vec::new();
        let mut idf = Vec::new();
        for (i, line) in lines {
            let line = line.map_err(|source| Error::Io { path: path.to_owned(), source })?;
            let line = line.trim_end_matches(['\r', '\n']);
            if line.is_empty() {
                continue;
            }
            let lineno = i + 1;
            let fields: Vec<&str> = line.split('\t').collect();
            let expected = match weighting {
                GramWeighting::Count => 2,
                GramWeighting::TfIdf => 3,
            };
            if fields.len() != expected {
                return Err(parse_err(lineno, &format!("expected {expected} tab-separated fields")));
            }
            let rank: usize = fields[1].parse().map_err(|_| parse_err(lineno, "bad rank"))?;
            if rank != grams.len() {
                return Err(parse_err(lineno, "rank out of sequence; truncated or reordered file?"));
            }
            grams.push(fields[0].to_owned());
            if weighting == GramWeighting::TfIdf {
                let v: f64 = fields[2].parse().map_err(|_| parse_err(lineno, "bad idf value"))?;
                idf.push(v);
            }
        }
        if grams.len() > k {
            return Err(parse_err(2, "more grams than the declared vocabulary size"));
        }
        let mut model = NgramModel { unit, n, k, weighting, grams, idf, index: HashMap::new() };
        model.rebuild_index();
        Ok(model)
    }

    pub fn read_file(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|source| Error::Io { path: path.to_owned(), source })?;
        Self::read_from(BufReader::new(file), path)
    }
}

/// Character stream for char grams: lowercased raw text with whitespace
/// runs collapsed to single spaces (spaces retained to keep word-boundary
/// signal); never crosses document boundaries.
fn char_stream(text: &str) -> Vec<char> {
    let mut out = Vec::with_capacity(text.len());
    let mut pending_space = false;
    for ch in text.chars() {
        if ch.is_whitespace() {
            pending_space = !out.is_empty();
        } else {
            if pending_space {
                out.push(' ');
                pending_space = false;
            }
            out.extend(ch.to_lowercase());
        }
    }
    out
}

fn doc_grams(doc: &Document, unit: GramUnit, n: usize) -> Vec<String> {
    match unit {
        GramUnit::Word => {
            if doc.tokens.len() < n {
                return Vec::new();
            }
            doc.tokens.windows(n).map(|w| w.join(" ")).collect()
        }
        GramUnit::Char => {
            let chars = char_stream(&doc.text);
            if chars.len() < n {
                return Vec::new();
            }
            chars.windows(n).map(|w| w.iter().collect()).collect()
        }
    }
}

/// Rank the training split's grams by frequency and keep the top `k`.
pub fn fit_ngram_model(
    corpus: &Corpus,
    unit: GramUnit,
    n: usize,
    k: usize,
    weighting: GramWeighting,
) -> Result<NgramModel> {
    if n < 1 {
        return Err(Error::InvalidParam("gram order must be at least 1".to_owned()));
    }
    if k < 1 {
        return Err(Error::InvalidParam("gram vocabulary size must be at least 1".to_owned()));
    }
    let train: Vec<&Document> = corpus.train_docs().collect();
    if train.is_empty() {
        return Err(Error::EmptyTraining);
    }
    // (total frequency, document frequency) per gram; u64 merges are exact
    // so the parallel reduction order cannot change the result.
    let counts: HashMap<String, (u64, u64)> = train
        .par_iter()
        .fold(HashMap::new, |mut acc: HashMap<String, (u64, u64)>, doc| {
            let mut local: HashMap<String, u64> = HashMap::new();
            for gram in doc_grams(doc, unit, n) {
                *local.entry(gram).or_insert(0) += 1;
            }
            for (gram, count) in local {
                let slot = acc.entry(gram).or_insert((0, 0));
                slot.0 += count;
                slot.1 += 1;
            }
            acc
        })
        .reduce(HashMap::new, |mut a, b| {
            for (gram, (count, df)) in b {
                let slot = a.entry(gram).or_insert((0, 0));
                slot.0 += count;
                slot.1 += df;
            }
            a
        });
    let mut ranked: Vec<(&String, u64, u64)> =
        counts.iter().map(|(gram, &(count, df))| (gram, count, df)).collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    ranked.truncate(k);
    let grams: Vec<String> = ranked.iter().map(|(gram, _, _)| (*gram).clone()).collect();
    let idf = match weighting {
        GramWeighting::Count => Vec::new(),
        GramWeighting::TfIdf => {
            let n_docs = train.len() as f64;
            ranked.iter().map(|&(_, _, df)| (n_docs / df as f64).ln()).collect()
        }
    };
    let mut model = NgramModel { unit, n, k, weighting, grams, idf, index: HashMap::new() };
    model.rebuild_index();
    Ok(model)
}

/// Feature row for one document: raw gram frequencies, times idf when
/// tf-idf weighted. Grams absent from the model are ignored.
pub fn ngram_features(doc: &Document, model: &NgramModel) -> Vec<f64> {
    let mut row = vec![0.0f64; model.grams.len()];
    for gram in doc_grams(doc, model.unit, model.n) {
        if let Some(&i) = model.index.get(&gram) {
            row[i as usize] += 1.0;
        }
    }
    if model.weighting == GramWeighting::TfIdf {
        for (v, idf) in row.iter_mut().zip(&model.idf) {
            *v *= idf;
        }
    }
    row
}

/// Row-per-document batch extraction; row order matches input order.
pub fn ngram_features_batch(docs: &[&Document], model: &NgramModel) -> FeatureTable {
    let rows: Vec<Vec<f64>> = docs.par_iter().map(|doc| ngram_features(doc, model)).collect();
    FeatureTable {
        feature_names: model.grams.clone(),
        doc_ids: docs.iter().map(|d| d.id.clone()).collect(),
        labels: docs.iter().map(|d| d.label.clone()).collect(),
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Split, TokenizerConfig};

    fn doc(id: &str, label: &str, split: Split, text: &str) -> Document {
        Document::new(id, Some(label), split, text, &TokenizerConfig::default())
    }

    fn tiny_corpus() -> Corpus {
        Corpus::from_labelled(
            vec![
                doc("a1", "A", Split::Train, "foo bar foo"),
                doc("a2", "A", Split::Train, "foo baz"),
                doc("b1", "B", Split::Train, "qux bar"),
            ],
            crate::corpus::Layout::Hispablogs,
        )
        .unwrap()
    }

    #[test]
    fn word_unigram_ranking_with_lexicographic_ties() {
        let model = fit_ngram_model(&tiny_corpus(), GramUnit::Word, 1, 10, GramWeighting::Count).unwrap();
        // foo appears 3 times; bar/baz/qux tie at lower counts
        assert_eq!(model.grams[0], "foo");
        assert_eq!(model.grams, ["foo", "bar", "baz", "qux"]);
    }

    #[test]
    fn k_truncates_and_large_k_keeps_all() {
        let c = tiny_corpus();
        let top2 = fit_ngram_model(&c, GramUnit::Word, 1, 2, GramWeighting::Count).unwrap();
        assert_eq!(top2.grams, ["foo", "bar"]);
        let all = fit_ngram_model(&c, GramUnit::Word, 1, 10_000, GramWeighting::Count).unwrap();
        assert_eq!(all.n_features(), 4);
    }

    #[test]
    fn char_grams_of_short_text() {
        let c = Corpus::from_labelled(
            vec![doc("d", "A", Split::Train, "aaab"), doc("e", "B", Split::Train, "xyxy")],
            crate::corpus::Layout::Hispablogs,
        )
        .unwrap();
        let model = fit_ngram_model(&c, GramUnit::Char, 4, 3, GramWeighting::Count).unwrap();
        assert_eq!(model.grams, ["aaab", "xyxy"]);
    }

    #[test]
    fn char_stream_normalizes_whitespace_and_case() {
        assert_eq!(char_stream("  Foo \t\n Bar "), "foo bar".chars().collect::<Vec<_>>());
        assert_eq!(char_stream(""), Vec::<char>::new());
    }

    #[test]
    fn count_features_match_brute_force() {
        let c = tiny_corpus();
        let model = fit_ngram_model(&c, GramUnit::Word, 1, 10, GramWeighting::Count).unwrap();
        let d = doc("t", "A", Split::Test, "foo foo qux nope");
        let row = ngram_features(&d, &model);
        // brute force: count each gram by scanning the token list
        for (i, gram) in model.grams.iter().enumerate() {
            let expected = d.tokens.iter().filter(|t| *t == gram).count() as f64;
            assert_eq!(row[i], expected, "gram {gram}");
        }
        assert_eq!(row, [2.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn disjoint_doc_gives_zero_vector() {
        let model = fit_ngram_model(&tiny_corpus(), GramUnit::Word, 1, 10, GramWeighting::Count).unwrap();
        let d = doc("t", "A", Split::Test, "zzz yyy");
        assert_eq!(ngram_features(&d, &model), [0.0; 4]);
    }

    #[test]
    fn doubling_a_doc_doubles_count_features() {
        let model = fit_ngram_model(&tiny_corpus(), GramUnit::Word, 1, 10, GramWeighting::Count).unwrap();
        let once = doc("t", "A", Split::Test, "foo bar baz");
        let twice = doc("t", "A", Split::Test, "foo bar baz foo bar baz");
        let r1 = ngram_features(&once, &model);
        let r2 = ngram_features(&twice, &model);
        for (a, b) in r1.iter().zip(&r2) {
            assert_eq!(2.0 * a, *b);
        }
    }

    #[test]
    fn tfidf_weighting_multiplies_by_training_idf() {
        let c = tiny_corpus();
        let model = fit_ngram_model(&c, GramUnit::Word, 1, 10, GramWeighting::TfIdf).unwrap();
        assert_eq!(model.grams.len(), model.idf.len());
        // foo: df=2 of 3 docs; bar: df=2; baz: df=1; qux: df=1
        let ln = |x: f64| x.ln();
        assert!((model.idf[0] - ln(3.0 / 2.0)).abs() < 1e-15);
        let d = doc("t", "A", Split::Test, "foo foo baz");
        let row = ngram_features(&d, &model);
        assert!((row[0] - 2.0 * ln(3.0 / 2.0)).abs() < 1e-15);
        let baz = model.grams.iter().position(|g| g == "baz").unwrap();
        assert!((row[baz] - ln(3.0)).abs() < 1e-15);
    }

    #[test]
    fn word_bigrams_join_with_space() {
        let c = tiny_corpus();
        let model = fit_ngram_model(&c, GramUnit::Word, 2, 10, GramWeighting::Count).unwrap();
        assert!(model.grams.contains(&"foo bar".to_owned()));
        let d = doc("t", "A", Split::Test, "foo bar foo");
        let row = ngram_features(&d, &model);
        let i = model.grams.iter().position(|g| g == "foo bar").unwrap();
        assert_eq!(row[i], 1.0);
    }

    #[test]
    fn test_split_does_not_influence_model() {
        let mut docs = vec![
            doc("a1", "A", Split::Train, "foo bar foo"),
            doc("a2", "A", Split::Train, "foo baz"),
            doc("b1", "B", Split::Train, "qux bar"),
        ];
        let base = Corpus::from_labelled(docs.clone(), crate::corpus::Layout::Hispablogs).unwrap();
        docs.push(doc("t1", "A", Split::Test, "zzz zzz zzz zzz zzz"));
        let with_test = Corpus::from_labelled(docs, crate::corpus::Layout::Hispablogs).unwrap();
        let m1 = fit_ngram_model(&base, GramUnit::Word, 1, 10, GramWeighting::TfIdf).unwrap();
        let m2 = fit_ngram_model(&with_test, GramUnit::Word, 1, 10, GramWeighting::TfIdf).unwrap();
        assert_eq!(m1.grams, m2.grams);
        assert_eq!(m1.idf, m2.idf);
    }

    #[test]
    fn roundtrip_through_text_format() {
        let c = tiny_corpus();
        for weighting in [GramWeighting::Count, GramWeighting::TfIdf] {
            let model = fit_ngram_model(&c, GramUnit::Word, 1, 10, weighting).unwrap();
            let mut buf = Vec::new();
            model.write_to(&mut buf).unwrap();
            let back = NgramModel::read_from(buf.as_slice(), Path::new("mem")).unwrap();
            assert_eq!(back.grams, model.grams);
            assert_eq!(back.n, model.n);
            assert_eq!(back.k, model.k);
            assert_eq!(back.weighting, model.weighting);
            for (a, b) in back.idf.iter().zip(&model.idf) {
                assert!((a - b).abs() < 1e-11);
            }
            let d = doc("t", "A", Split::Test, "foo bar");
            assert_eq!(ngram_features(&d, &back).len(), ngram_features(&d, &model).len());
        }
    }

    #[test]
    fn bad_header_and_bad_rank_are_rejected() {
        let err = NgramModel::read_from("#wrong v9\n".as_bytes(), Path::new("mem")).unwrap_err();
        assert!(matches!(err, Error::FormatVersion { .. }));
        let text = "#ngram v1\nword\t1\t10\tcount\nfoo\t0\nbar\t5\n";
        let err = NgramModel::read_from(text.as_bytes(), Path::new("mem")).unwrap_err();
        assert!(matches!(err, Error::FormatParse { line: 4, .. }));
    }

    #[test]
    fn preconditions_are_validated() {
        let c = tiny_corpus();
        assert!(fit_ngram_model(&c, GramUnit::Word, 0, 10, GramWeighting::Count).is_err());
        assert!(fit_ngram_model(&c, GramUnit::Word, 1, 0, GramWeighting::Count).is_err());
    }
}
