//! Persist a trained model to disk and use the reloaded bundle to label new
//! text. The bundle carries the representation (term weights or gram list)
//! and tokenizer settings, so prediction needs nothing but the file.

use ldr::classifier::{train_classifier, Hyperparameters};
use ldr::corpus::{Document, Split, TokenizerConfig};
use ldr::eval::ldr_tables;
use ldr::persist::{ModelBundle, RepresentationSpec};
use ldr::synth::{synthetic_corpus, SynthConfig};

fn main() -> ldr::Result<()> {
    let corpus = synthetic_corpus(&SynthConfig::default())?;
    let (beta, train_table, _) = ldr_tables(&corpus, 5)?;
    let model = train_classifier(
        &train_table,
        &train_table.labels_required()?,
        &Hyperparameters::default(),
    )?;
    let tokenizer = TokenizerConfig::default();
    let bundle = ModelBundle::new(
        model,
        RepresentationSpec::Ldr { min_freq: 5, tokenizer: tokenizer.clone(), beta },
    )?;

    let dir = std::env::temp_dir().join("ldr-example-model");
    std::fs::create_dir_all(&dir).expect("temp dir");
    let path = dir.join("model.json");
    bundle.save(&path)?;
    println!("model written to {}", path.display());

    let reloaded = ModelBundle::load(&path)?;
    println!(
        "reloaded a {} model with {} classes and {} features",
        reloaded.model.meta.representation,
        reloaded.model.classes.len(),
        reloaded.model.feature_dim
    );

    // Label a few fresh documents. Marker words steer the prediction; the
    // last document is all shared vocabulary, so scores stay spread out.
    let texts = [
        "lexa lexb andinamarkera andinamarkerc lexd",
        "pampamarkera lexc pampamarkerb lexa lexe",
        "lexa lexb lexc lexd lexe lexf",
    ];
    let docs: Vec<Document> = texts
        .iter()
        .enumerate()
        .map(|(i, text)| Document::new(format!("sample-{i}"), None, Split::Test, text, &tokenizer))
        .collect();
    let refs: Vec<&Document> = docs.iter().collect();

    println!("\npredictions:");
    for (doc, (label, scores)) in refs.iter().zip(reloaded.predict_docs(&refs)?) {
        let spread: Vec<String> = reloaded
            .model
            .classes
            .iter()
            .zip(&scores)
            .map(|(c, s)| format!("{c} {s:.2}"))
            .collect();
        println!("  {}: {} -> {label}  [{}]", doc.id, doc.tokens.join(" "), spread.join(", "));
    }
    Ok(())
}
