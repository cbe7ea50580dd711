//! Experimental harness: accuracy/confusion metrics, two-proportion
//! significance testing, information-gain ranking, feature-set ablation,
//! frequency-threshold sweep, and the extraction cost benchmark.

use std::io::Write;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::classifier::{train_classifier, Hyperparameters};
use crate::corpus::{build_vocabulary, Corpus, Document};
use crate::error::{Error, Result};
use crate::features::{
    extract_ldr, extract_ldr_batch, restrict_ldr_kinds, FeatureKind, FeatureTable,
};
use crate::report::{csv_field, linear_fit, sig12, LinearFit};
use crate::weighting::{class_term_weights, tfidf_matrix, ClassTermWeights};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Classification quality report. Confusion rows are gold classes, columns
/// are predictions, both in `classes` order.
#[derive(Debug, Clone)]
pub struct EvalReport {
    pub classes: Vec<String>,
    pub confusion: Vec<Vec<u64>>,
    pub accuracy: f64,
    pub per_class: Vec<ClassMetrics>,
    pub n_test: u64,
}

impl EvalReport {
    /// Build the report straight from a gold-by-predicted count matrix.
    pub fn from_confusion(classes: Vec<String>, confusion: Vec<Vec<u64>>) -> Result<EvalReport> {
        let c = classes.len();
        if confusion.len() != c || confusion.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidParam(format!(
                "confusion matrix must be {c}x{c} to match the class list"
            )));
        }
        let n_test: u64 = confusion.iter().flatten().sum();
        if n_test == 0 {
            return Err(Error::InvalidParam("confusion matrix is all zeros".to_owned()));
        }
        let trace: u64 = (0..c).map(|i| confusion[i][i]).sum();
        let per_class = (0..c)
            .map(|i| {
                let gold: u64 = confusion[i].iter().sum();
                let predicted: u64 = confusion.iter().map(|row| row[i]).sum();
                let hit = confusion[i][i] as f64;
                let precision = if predicted > 0 { hit / predicted as f64 } else { 0.0 };
                let recall = if gold > 0 { hit / gold as f64 } else { 0.0 };
                let f1 = if precision + recall > 0.0 {
                    2.0 * precision * recall / (precision + recall)
                } else {
                    0.0
                };
                ClassMetrics { precision, recall, f1 }
            })
            .collect();
        Ok(EvalReport {
            classes,
            confusion,
            accuracy: trace as f64 / n_test as f64,
            per_class,
            n_test,
        })
    }

    pub fn gold_count(&self, class: usize) -> u64 {
        self.confusion[class].iter().sum()
    }

    /// Per-class quality CSV (`class,gold_count,precision,recall,f1`) with
    /// accuracy and test size as leading comment lines.
    pub fn write_metrics_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "# accuracy: {:.6}", self.accuracy)?;
        writeln!(w, "# n_test: {}", self.n_test)?;
        writeln!(w, "class,gold_count,precision,recall,f1")?;
        for (i, class) in self.classes.iter().enumerate() {
            let m = &self.per_class[i];
            writeln!(
                w,
                "{},{},{:.6},{:.6},{:.6}",
                csv_field(class),
                self.gold_count(i),
                m.precision,
                m.recall,
                m.f1
            )?;
        }
        Ok(())
    }

    /// Confusion matrix CSV: `gold` column then one prediction column per
    /// class.
    pub fn write_confusion_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        write!(w, "gold")?;
        for class in &self.classes {
            write!(w, ",{}", csv_field(class))?;
        }
        writeln!(w)?;
        for (i, class) in self.classes.iter().enumerate() {
            write!(w, "{}", csv_field(class))?;
            for v in &self.confusion[i] {
                write!(w, ",{v}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

/// Score predictions against gold labels; the class list is the sorted
/// union of labels seen in either input.
pub fn evaluate(predictions: &[String], gold: &[String]) -> Result<EvalReport> {
    let mut classes: Vec<String> = predictions.iter().chain(gold).cloned().collect();
    classes.sort();
    classes.dedup();
    evaluate_with_classes(predictions, gold, &classes)
}

/// Score against a fixed class list (use when some class has no test
/// documents); labels outside the list are an error.
pub fn evaluate_with_classes(
    predictions: &[String],
    gold: &[String],
    classes: &[String],
) -> Result<EvalReport> {
    if predictions.len() != gold.len() || gold.is_empty() {
        return Err(Error::InvalidParam(format!(
            "need equally many predictions and gold labels (≥1), got {} vs {}",
            predictions.len(),
            gold.len()
        )));
    }
    let index = |label: &String| {
        classes
            .iter()
            .position(|c| c == label)
            .ok_or_else(|| Error::InvalidParam(format!("label `{label}` not in the class list")))
    };
    let c = classes.len();
    let mut confusion = vec![vec![0u64; c]; c];
    for (p, g) in predictions.iter().zip(gold) {
        confusion[index(g)?][index(p)?] += 1;
    }
    EvalReport::from_confusion(classes.to_vec(), confusion)
}

/// Two-proportion pooled z statistic for comparing accuracies of two
/// systems measured on `n_a` and `n_b` test documents.
pub fn significance_z(acc_a: f64, acc_b: f64, n_a: u64, n_b: u64) -> Result<f64> {
    for acc in [acc_a, acc_b] {
        if !(0.0..=1.0).contains(&acc) {
            return Err(Error::InvalidParam(format!("accuracy {acc} outside [0,1]")));
        }
    }
    if n_a == 0 || n_b == 0 {
        return Err(Error::InvalidParam("test sizes must be positive".to_owned()));
    }
    let (na, nb) = (n_a as f64, n_b as f64);
    let p = (acc_a * na + acc_b * nb) / (na + nb);
    // pooled proportion 0 or 1 forces acc_a == acc_b: no difference to test
    if p <= 0.0 || p >= 1.0 {
        return Ok(0.0);
    }
    Ok((acc_a - acc_b).abs() / (p * (1.0 - p) * (1.0 / na + 1.0 / nb)).sqrt())
}

#[derive(Debug, Clone)]
pub struct IgEntry {
    pub feature: String,
    /// Information gain on the full table, in bits.
    pub gain: f64,
    /// Mean/std of the gain recomputed over 10 cross-validation folds
    /// (each fold's complement, i.e. 90% of the rows).
    pub fold_mean: f64,
    pub fold_std: f64,
}

#[derive(Debug, Clone)]
pub struct IgRanking {
    /// Sorted by gain descending, ties by feature name.
    pub entries: Vec<IgEntry>,
}

impl IgRanking {
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "feature,gain_bits,fold_mean,fold_std")?;
        for e in &self.entries {
            writeln!(
                w,
                "{},{},{},{}",
                csv_field(&e.feature),
                sig12(e.gain),
                sig12(e.fold_mean),
                sig12(e.fold_std)
            )?;
        }
        Ok(())
    }
}

fn entropy_bits(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let n = total as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum()
}

/// Equal-frequency bin assignment. Rows are ranked by value; a distinct
/// value's rows all take the bin of the group's midpoint rank, so the
/// assignment depends only on the ordering of values (invariant under
/// strictly monotone transforms) and tied groups center on their span.
fn equal_frequency_bins(values: &[f64], rows: &[usize], bins: usize) -> Vec<usize> {
    let n = rows.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        values[rows[a]]
            .partial_cmp(&values[rows[b]])
            .expect("finite feature values")
    });
    let mut assignment = vec![0usize; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j < n && values[rows[order[j]]] == values[rows[order[i]]] {
            j += 1;
        }
        // midpoint rank of the tie group, in halves to stay in integers
        let bin = ((i + j - 1) * bins) / (2 * n);
        for &slot in &order[i..j] {
            assignment[slot] = bin;
        }
        i = j;
    }
    assignment
}

fn ig_on_rows(values: &[f64], label_ids: &[usize], rows: &[usize], bins: usize, c: usize) -> f64 {
    if rows.is_empty() {
        return 0.0;
    }
    let assignment = equal_frequency_bins(values, rows, bins);
    let mut class_counts = vec![0u64; c];
    let mut joint = vec![vec![0u64; c]; bins];
    let mut bin_counts = vec![0u64; bins];
    for (slot, &row) in rows.iter().enumerate() {
        let b = assignment[slot];
        class_counts[label_ids[row]] += 1;
        joint[b][label_ids[row]] += 1;
        bin_counts[b] += 1;
    }
    let n = rows.len() as f64;
    let h_class = entropy_bits(&class_counts);
    let h_cond: f64 = (0..bins)
        .map(|b| (bin_counts[b] as f64 / n) * entropy_bits(&joint[b]))
        .sum();
    // mutual information is nonnegative; clear rounding residue
    (h_class - h_cond).max(0.0)
}

/// Rank features by information gain between the equal-frequency-binned
/// feature and the class label, with a fold-recomputation stability column.
pub fn information_gain(
    features: &FeatureTable,
    labels: &[String],
    bins: usize,
    seed: u64,
) -> Result<IgRanking> {
    let n = features.n_rows();
    if n == 0 {
        return Err(Error::InvalidParam("empty feature table".to_owned()));
    }
    if labels.len() != n {
        return Err(Error::LabelMismatch { rows: n, labels: labels.len() });
    }
    if bins < 2 {
        return Err(Error::InvalidParam("need at least 2 bins".to_owned()));
    }
    for (i, row) in features.rows.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteFeature { row: i, column: j });
            }
        }
    }
    let mut classes: Vec<String> = labels.to_vec();
    classes.sort();
    classes.dedup();
    let c = classes.len();
    let label_ids: Vec<usize> = labels
        .iter()
        .map(|l| classes.binary_search(l).expect("label present"))
        .collect();

    // one seeded shuffle defines the folds for every feature
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    const FOLDS: usize = 10;
    let fold_of: Vec<usize> = {
        let mut f = vec![0usize; n];
        for (pos, &row) in order.iter().enumerate() {
            f[row] = pos * FOLDS / n;
        }
        f
    };
    let all_rows: Vec<usize> = (0..n).collect();

    let mut entries: Vec<IgEntry> = (0..features.n_features())
        .into_par_iter()
        .map(|j| {
            let column: Vec<f64> = features.rows.iter().map(|r| r[j]).collect();
            let gain = ig_on_rows(&column, &label_ids, &all_rows, bins, c);
            let fold_gains: Vec<f64> = (0..FOLDS)
                .map(|k| {
                    let rows: Vec<usize> = (0..n).filter(|&r| fold_of[r] != k).collect();
                    ig_on_rows(&column, &label_ids, &rows, bins, c)
                })
                .collect();
            let mean = fold_gains.iter().sum::<f64>() / FOLDS as f64;
            let var =
                fold_gains.iter().map(|g| (g - mean) * (g - mean)).sum::<f64>() / FOLDS as f64;
            IgEntry {
                feature: features.feature_names[j].clone(),
                gain,
                fold_mean: mean,
                fold_std: var.sqrt(),
            }
        })
        .collect();
    entries.sort_by(|a, b| {
        b.gain
            .partial_cmp(&a.gain)
            .expect("finite gains")
            .then_with(|| a.feature.cmp(&b.feature))
    });
    Ok(IgRanking { entries })
}

/// Frequency threshold → β → features → classifier, end to end, returning
/// the fitted weights plus train/test tables.
pub fn ldr_tables(
    corpus: &Corpus,
    min_freq: u64,
) -> Result<(ClassTermWeights, FeatureTable, FeatureTable)> {
    let vocab = build_vocabulary(corpus, min_freq);
    let matrix = tfidf_matrix(corpus, &vocab)?;
    let beta = class_term_weights(&matrix)?;
    let train: Vec<&Document> = corpus.train_docs().collect();
    let test: Vec<&Document> = corpus.test_docs().collect();
    let train_table = extract_ldr_batch(&train, &beta);
    let test_table = extract_ldr_batch(&test, &beta);
    Ok((beta, train_table, test_table))
}

fn fit_and_score(
    train: &FeatureTable,
    test: &FeatureTable,
    classes: &[String],
    hyper: &Hyperparameters,
) -> Result<EvalReport> {
    if test.n_rows() == 0 {
        return Err(Error::InvalidParam("corpus has no test documents".to_owned()));
    }
    let model = train_classifier(train, &train.labels_required()?, hyper)?;
    let predictions = model.predicted_labels(test)?;
    let gold = test.labels_required()?;
    evaluate_with_classes(&predictions, &gold, classes)
}

/// One full pipeline run; returns the vocabulary size actually used and the
/// test-set report.
pub fn ldr_accuracy(
    corpus: &Corpus,
    min_freq: u64,
    hyper: &Hyperparameters,
) -> Result<(usize, EvalReport)> {
    let (beta, train_table, test_table) = ldr_tables(corpus, min_freq)?;
    let report = fit_and_score(&train_table, &test_table, &corpus.classes, hyper)?;
    Ok((beta.n_terms(), report))
}

#[derive(Debug, Clone)]
pub struct AblationRow {
    /// `+`-joined statistic names in canonical order.
    pub subset: String,
    pub feature_count: usize,
    pub accuracy: f64,
}

/// Canonical display name of a statistic subset.
pub fn subset_name(kinds: &[FeatureKind]) -> String {
    FeatureKind::ALL
        .iter()
        .filter(|k| kinds.contains(k))
        .map(|k| k.name())
        .collect::<Vec<_>>()
        .join("+")
}

/// Parse `avg+std`-style subset descriptions.
pub fn parse_subset(s: &str) -> Result<Vec<FeatureKind>> {
    s.split('+').map(|part| part.trim().parse()).collect()
}

/// Retrain on restricted statistic subsets; the expensive shared work
/// (vocabulary, weights, full feature tables) happens once.
pub fn ablation_run(
    corpus: &Corpus,
    subsets: &[Vec<FeatureKind>],
    min_freq: u64,
    hyper: &Hyperparameters,
) -> Result<Vec<AblationRow>> {
    if subsets.is_empty() || subsets.iter().any(|s| s.is_empty()) {
        return Err(Error::InvalidParam("ablation needs non-empty feature subsets".to_owned()));
    }
    let (_, train_table, test_table) = ldr_tables(corpus, min_freq)?;
    subsets
        .par_iter()
        .map(|kinds| {
            let train = restrict_ldr_kinds(&train_table, kinds)?;
            let test = restrict_ldr_kinds(&test_table, kinds)?;
            let report = fit_and_score(&train, &test, &corpus.classes, hyper)?;
            Ok(AblationRow {
                subset: subset_name(kinds),
                feature_count: train.n_features(),
                accuracy: report.accuracy,
            })
        })
        .collect()
}

pub fn write_ablation_csv<W: Write>(rows: &[AblationRow], mut w: W) -> std::io::Result<()> {
    writeln!(w, "subset,feature_count,accuracy")?;
    for row in rows {
        writeln!(w, "{},{},{:.6}", csv_field(&row.subset), row.feature_count, row.accuracy)?;
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub min_freq: u64,
    pub vocab_size: usize,
    pub accuracy: f64,
}

/// Run the full pipeline once per frequency threshold; grid points run in
/// parallel, results keep input order.
pub fn threshold_sweep(
    corpus: &Corpus,
    n_values: &[u64],
    hyper: &Hyperparameters,
) -> Result<Vec<SweepRow>> {
    if n_values.is_empty() {
        return Err(Error::InvalidParam("threshold grid is empty".to_owned()));
    }
    n_values
        .par_iter()
        .map(|&n| {
            let (vocab_size, report) = ldr_accuracy(corpus, n, hyper)?;
            Ok(SweepRow { min_freq: n, vocab_size, accuracy: report.accuracy })
        })
        .collect()
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], mut w: W) -> std::io::Result<()> {
    writeln!(w, "min_freq,vocab_size,accuracy")?;
    for row in rows {
        writeln!(w, "{},{},{:.6}", row.min_freq, row.vocab_size, row.accuracy)?;
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub length: usize,
    pub median_micros: f64,
}

#[derive(Debug, Clone)]
pub struct CostReport {
    pub rows: Vec<BenchRow>,
    /// Least-squares fit of median time against document length; `None`
    /// when fewer than two distinct lengths were measured.
    pub fit: Option<LinearFit>,
}

impl CostReport {
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "length,median_micros")?;
        for row in &self.rows {
            writeln!(w, "{},{}", row.length, sig12(row.median_micros))?;
        }
        if let Some(fit) = &self.fit {
            writeln!(w, "fit: {},{},{:.6}", sig12(fit.slope), sig12(fit.intercept), fit.r2)?;
        }
        Ok(())
    }
}

/// Median wall time of feature extraction per document length. Tokens are
/// drawn from the weight table's own terms (plus a slice of unknown words),
/// timed over enough repetitions to dominate clock resolution.
pub fn cost_benchmark(
    beta: &ClassTermWeights,
    lengths: &[usize],
    trials: usize,
    seed: u64,
) -> Result<CostReport> {
    if lengths.is_empty() || lengths.contains(&0) {
        return Err(Error::InvalidParam("lengths must be positive".to_owned()));
    }
    if trials == 0 {
        return Err(Error::InvalidParam("need at least one trial".to_owned()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(lengths.len());
    for &length in lengths {
        let mut samples = Vec::with_capacity(trials);
        for _ in 0..trials {
            let tokens: Vec<String> = (0..length)
                .map(|_| {
                    if !beta.terms.is_empty() && rng.gen_bool(0.9) {
                        beta.terms[rng.gen_range(0..beta.terms.len())].clone()
                    } else {
                        "qqunknown".to_owned()
                    }
                })
                .collect();
            let repeats = (200_000 / length).clamp(1, 512);
            let _ = extract_ldr(&tokens, beta); // warm caches
            let start = Instant::now();
            for _ in 0..repeats {
                std::hint::black_box(extract_ldr(std::hint::black_box(&tokens), beta));
            }
            let elapsed = start.elapsed();
            samples.push(elapsed.as_secs_f64() * 1e6 / repeats as f64);
        }
        samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let median = if samples.len() % 2 == 1 {
            samples[samples.len() / 2]
        } else {
            (samples[samples.len() / 2 - 1] + samples[samples.len() / 2]) / 2.0
        };
        rows.push(BenchRow { length, median_micros: median });
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.length as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.median_micros).collect();
    Ok(CostReport { fit: linear_fit(&xs, &ys), rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{synthetic_corpus, SynthConfig};

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn perfect_predictions_give_diagonal_confusion() {
        let gold = s(&["a", "b", "a", "c"]);
        let report = evaluate(&gold, &gold).unwrap();
        assert_eq!(report.accuracy, 1.0);
        for (i, row) in report.confusion.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                assert_eq!(v > 0, i == j);
            }
        }
        for m in &report.per_class {
            assert_eq!((m.precision, m.recall, m.f1), (1.0, 1.0, 1.0));
        }
    }

    #[test]
    fn hand_countable_metrics() {
        let report = evaluate(&s(&["A", "B", "B"]), &s(&["A", "A", "B"])).unwrap();
        assert!((report.accuracy - 2.0 / 3.0).abs() < 1e-15);
        let a = &report.per_class[0];
        assert_eq!(a.precision, 1.0);
        assert_eq!(a.recall, 0.5);
        assert!((a.f1 - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(report.gold_count(0), 2);
        assert_eq!(report.gold_count(1), 1);
    }

    #[test]
    fn confusion_rows_sum_to_gold_counts() {
        let pred = s(&["a", "a", "b", "c", "b", "a"]);
        let gold = s(&["a", "b", "b", "c", "c", "c"]);
        let report = evaluate(&pred, &gold).unwrap();
        let total: u64 = report.confusion.iter().flatten().sum();
        assert_eq!(total, report.n_test);
        assert_eq!(report.gold_count(0), 1);
        assert_eq!(report.gold_count(1), 2);
        assert_eq!(report.gold_count(2), 3);
    }

    #[test]
    fn evaluate_validates_inputs() {
        assert!(evaluate(&s(&["a"]), &s(&["a", "b"])).is_err());
        assert!(evaluate(&[], &[]).is_err());
        assert!(evaluate_with_classes(&s(&["x"]), &s(&["a"]), &s(&["a", "b"])).is_err());
    }

    #[test]
    fn z_statistic_reference_points() {
        assert!((significance_z(0.711, 0.670, 1000, 1000).unwrap() - 1.983).abs() < 0.005);
        assert!((significance_z(0.711, 0.693, 1000, 1000).unwrap() - 0.880).abs() < 0.005);
        assert!((significance_z(0.722, 0.711, 1000, 1000).unwrap() - 0.5457).abs() < 0.005);
    }

    #[test]
    fn z_is_symmetric_zero_on_ties_and_guarded() {
        let a = significance_z(0.8, 0.6, 500, 400).unwrap();
        let b = significance_z(0.6, 0.8, 400, 500).unwrap();
        assert_eq!(a, b);
        assert_eq!(significance_z(0.5, 0.5, 100, 100).unwrap(), 0.0);
        assert_eq!(significance_z(1.0, 1.0, 100, 100).unwrap(), 0.0);
        assert_eq!(significance_z(0.0, 0.0, 100, 100).unwrap(), 0.0);
        assert!(significance_z(1.2, 0.5, 10, 10).is_err());
        assert!(significance_z(0.5, 0.5, 0, 10).is_err());
    }

    fn ig_table(rows: Vec<Vec<f64>>, names: &[&str]) -> FeatureTable {
        FeatureTable {
            feature_names: s(names),
            doc_ids: (0..rows.len()).map(|i| format!("d{i}")).collect(),
            labels: vec![None; rows.len()],
            rows,
        }
    }

    #[test]
    fn perfect_predictor_gains_full_class_entropy() {
        // 4 balanced classes, feature = class id, 4 bins
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for class in 0..4 {
            for _ in 0..25 {
                rows.push(vec![class as f64]);
                labels.push(format!("c{class}"));
            }
        }
        let ranking = information_gain(&ig_table(rows, &["f"]), &labels, 4, 1).unwrap();
        assert!((ranking.entries[0].gain - 2.0).abs() < 1e-12);
        // folds are near-balanced, so the recomputed gain stays near 2 bits
        assert!((ranking.entries[0].fold_mean - 2.0).abs() < 0.02);
        assert!(ranking.entries[0].fold_std < 0.02);
    }

    #[test]
    fn constant_and_independent_features_carry_no_gain() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..400 {
            rows.push(vec![7.5, rng.gen::<f64>()]);
            labels.push(if i % 2 == 0 { "a".to_string() } else { "b".to_string() });
        }
        let ranking = information_gain(&ig_table(rows, &["const", "noise"]), &labels, 10, 1).unwrap();
        let constant = ranking.entries.iter().find(|e| e.feature == "const").unwrap();
        assert_eq!(constant.gain, 0.0);
        let noise = ranking.entries.iter().find(|e| e.feature == "noise").unwrap();
        assert!(noise.gain < 0.05, "independent feature gained {}", noise.gain);
    }

    #[test]
    fn gain_is_invariant_under_monotone_transforms() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for _ in 0..300 {
            let x: f64 = rng.gen_range(-3.0..3.0);
            labels.push(if x + 0.3 * rng.gen::<f64>() > 0.0 { "p" } else { "n" }.to_string());
            rows.push(vec![x, x.exp(), 5.0 * x - 2.0]);
        }
        let ranking =
            information_gain(&ig_table(rows, &["raw", "exp", "affine"]), &labels, 10, 1).unwrap();
        let gain = |name: &str| ranking.entries.iter().find(|e| e.feature == name).unwrap().gain;
        assert_eq!(gain("raw"), gain("exp"));
        assert_eq!(gain("raw"), gain("affine"));
        assert!(gain("raw") > 0.3);
    }

    #[test]
    fn ranking_is_sorted_and_deterministic() {
        let rows = vec![
            vec![1.0, 0.5],
            vec![2.0, 0.5],
            vec![1.0, 0.5],
            vec![2.0, 0.5],
        ];
        let labels = s(&["a", "b", "a", "b"]);
        let r1 = information_gain(&ig_table(rows.clone(), &["good", "flat"]), &labels, 2, 3).unwrap();
        let r2 = information_gain(&ig_table(rows, &["good", "flat"]), &labels, 2, 3).unwrap();
        assert_eq!(r1.entries[0].feature, "good");
        for (a, b) in r1.entries.iter().zip(&r2.entries) {
            assert_eq!(a.gain, b.gain);
            assert_eq!(a.fold_mean, b.fold_mean);
            assert_eq!(a.fold_std, b.fold_std);
        }
    }

    fn small_synth() -> Corpus {
        synthetic_corpus(&SynthConfig {
            train_per_class: 12,
            test_per_class: 6,
            shared_vocab: 60,
            markers_per_class: 6,
            doc_len: 40..=60,
            ..SynthConfig::default()
        })
        .unwrap()
    }

    #[test]
    fn sweep_vocab_is_nonincreasing_and_deterministic() {
        let corpus = small_synth();
        let grid = [0, 1, 3, 5, 8];
        let hyper = Hyperparameters { max_iters: 60, ..Hyperparameters::default() };
        let rows = threshold_sweep(&corpus, &grid, &hyper).unwrap();
        assert_eq!(rows.len(), grid.len());
        for pair in rows.windows(2) {
            assert!(pair[1].vocab_size <= pair[0].vocab_size);
        }
        let again = threshold_sweep(&corpus, &grid, &hyper).unwrap();
        for (a, b) in rows.iter().zip(&again) {
            assert_eq!(a.accuracy, b.accuracy);
            assert_eq!(a.vocab_size, b.vocab_size);
        }
    }

    #[test]
    fn ablation_covers_subsets_and_counts_columns() {
        let corpus = small_synth();
        let hyper = Hyperparameters { max_iters: 60, ..Hyperparameters::default() };
        let subsets = vec![
            vec![FeatureKind::Avg],
            vec![FeatureKind::Std],
            vec![FeatureKind::Avg, FeatureKind::Std],
            FeatureKind::ALL.to_vec(),
        ];
        let rows = ablation_run(&corpus, &subsets, 1, &hyper).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[0].subset, "avg");
        assert_eq!(rows[0].feature_count, 5);
        assert_eq!(rows[2].subset, "avg+std");
        assert_eq!(rows[2].feature_count, 10);
        assert_eq!(rows[3].feature_count, 30);
        let acc = |name: &str| rows.iter().find(|r| r.subset == name).unwrap().accuracy;
        assert!(acc("avg+std") + 1e-9 >= acc("avg").max(acc("std")));
        assert!(ablation_run(&corpus, &[vec![]], 1, &hyper).is_err());
    }

    #[test]
    fn subset_names_parse_and_canonicalize() {
        let kinds = parse_subset("std+avg").unwrap();
        assert_eq!(subset_name(&kinds), "avg+std");
        assert!(parse_subset("avg+bogus").is_err());
    }

    #[test]
    fn bench_emits_table_and_degenerate_fit_is_rejected() {
        let beta = ClassTermWeights::from_parts(
            vec!["A".into(), "B".into()],
            vec!["x".into(), "y".into()],
            vec![0.5, 0.5, 0.25, 0.75],
        );
        let report = cost_benchmark(&beta, &[50, 100], 3, 11).unwrap();
        assert_eq!(report.rows.len(), 2);
        assert!(report.fit.is_some());
        let single = cost_benchmark(&beta, &[100, 100], 3, 11).unwrap();
        assert_eq!(single.rows.len(), 2);
        assert!(single.fit.is_none());
        let mut out = Vec::new();
        single.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("length,median_micros\n"));
        assert!(!text.contains("fit:"));
    }
}
