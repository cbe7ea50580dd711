//! Compare the six-statistics representation against word and character
//! n-gram baselines on the same corpus. The point of the comparison is the
//! feature-count column: the statistics track the baselines' accuracy with
//! orders of magnitude fewer dimensions.

use ldr::baselines::{fit_ngram_model, ngram_features_batch, GramUnit, GramWeighting};
use ldr::classifier::{train_classifier, Hyperparameters};
use ldr::corpus::{Corpus, Document};
use ldr::eval::{evaluate_with_classes, ldr_accuracy};
use ldr::synth::{synthetic_corpus, SynthConfig};

fn ngram_accuracy(
    corpus: &Corpus,
    unit: GramUnit,
    n: usize,
    k: usize,
    weighting: GramWeighting,
) -> ldr::Result<(usize, f64)> {
    let model = fit_ngram_model(corpus, unit, n, k, weighting)?;
    let train: Vec<&Document> = corpus.train_docs().collect();
    let test: Vec<&Document> = corpus.test_docs().collect();
    let train_table = ngram_features_batch(&train, &model);
    let test_table = ngram_features_batch(&test, &model);
    let classifier = train_classifier(
        &train_table,
        &train_table.labels_required()?,
        &Hyperparameters::default(),
    )?;
    let predictions = classifier.predicted_labels(&test_table)?;
    let report =
        evaluate_with_classes(&predictions, &test_table.labels_required()?, &corpus.classes)?;
    Ok((model.n_features(), report.accuracy))
}

fn main() -> ldr::Result<()> {
    let corpus = synthetic_corpus(&SynthConfig::default())?;
    println!("{:<22} {:>9} {:>9}", "representation", "features", "accuracy");

    let (vocab, report) = ldr_accuracy(&corpus, 5, &Hyperparameters::default())?;
    let _ = vocab; // the vector length is fixed at 6 per class regardless
    println!("{:<22} {:>9} {:>9.3}", "six statistics", 6 * corpus.classes.len(), report.accuracy);

    for (name, unit, n, weighting) in [
        ("bag of words", GramUnit::Word, 1, GramWeighting::Count),
        ("word 2-grams, tf-idf", GramUnit::Word, 2, GramWeighting::TfIdf),
        ("char 3-grams", GramUnit::Char, 3, GramWeighting::Count),
        ("char 4-grams", GramUnit::Char, 4, GramWeighting::Count),
    ] {
        let (features, accuracy) = ngram_accuracy(&corpus, unit, n, 10_000, weighting)?;
        println!("{name:<22} {features:>9} {accuracy:>9.3}");
    }
    Ok(())
}
