//! The full pipeline: vocabulary, term weights, six-statistics features,
//! classifier training, and a test-split evaluation report.

use ldr::classifier::{train_classifier, Hyperparameters};
use ldr::corpus::Split;
use ldr::eval::{evaluate_with_classes, ldr_tables};
use ldr::synth::{synthetic_corpus, SynthConfig};

fn main() -> ldr::Result<()> {
    let corpus = synthetic_corpus(&SynthConfig::default())?;
    let (beta, train_table, test_table) = ldr_tables(&corpus, 5)?;
    println!(
        "{} retained terms -> {} features per document",
        beta.n_terms(),
        train_table.n_features()
    );

    let model = train_classifier(
        &train_table,
        &train_table.labels_required()?,
        &Hyperparameters::default(),
    )?;
    println!(
        "trained in {} iterations, final loss {:.6}",
        model.meta.iterations, model.meta.final_loss
    );

    let predictions = model.predicted_labels(&test_table)?;
    let report =
        evaluate_with_classes(&predictions, &test_table.labels_required()?, &corpus.classes)?;

    println!(
        "\naccuracy {:.3} on {} test documents ({} per class)",
        report.accuracy,
        report.n_test,
        corpus.documents.iter().filter(|d| d.split == Split::Test).count() / corpus.classes.len()
    );
    println!("\nper-class metrics:");
    for (class, m) in report.classes.iter().zip(&report.per_class) {
        println!(
            "  {class}: precision {:.3}  recall {:.3}  f1 {:.3}",
            m.precision, m.recall, m.f1
        );
    }
    println!("\nconfusion matrix (rows = gold, columns = predicted):");
    report.write_confusion_csv(std::io::stdout().lock()).expect("stdout");
    Ok(())
}
