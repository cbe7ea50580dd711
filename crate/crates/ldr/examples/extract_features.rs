//! Build class-dependent term weights from a tiny corpus and show how a
//! document becomes a six-statistics-per-class vector.

use ldr::corpus::{build_vocabulary, Corpus, Document, Layout, Split};
use ldr::features::{extract_ldr, FeatureKind};
use ldr::weighting::{class_term_weights, tfidf_matrix};

fn doc(id: &str, label: &str, words: &str) -> Document {
    let tokens = words.split_whitespace().map(str::to_owned).collect();
    Document::from_tokens(id, Some(label), Split::Train, tokens)
}

fn main() -> ldr::Result<()> {
    let corpus = Corpus::from_labelled(
        vec![
            doc("A1", "A", "foo bar foo"),
            doc("A2", "A", "foo baz"),
            doc("B1", "B", "qux bar"),
            doc("B2", "B", "qux qux baz"),
        ],
        Layout::Hispablogs,
    )?;

    let vocab = build_vocabulary(&corpus, 0);
    let matrix = tfidf_matrix(&corpus, &vocab)?;
    let beta = class_term_weights(&matrix)?;

    println!("term weights (share of each term's tf-idf mass per class):");
    println!("{:>6}  {:>6}  {:>6}", "term", "A", "B");
    for term in &beta.terms {
        let w = beta.weights_for(term).unwrap();
        println!("{:>6}  {:>6.3}  {:>6.3}", term, w[0], w[1]);
    }

    let tokens: Vec<String> =
        "foo qux qux zzz".split_whitespace().map(str::to_owned).collect();
    let vector = extract_ldr(&tokens, &beta);
    println!("\ndocument {:?} becomes {} features:", tokens.join(" "), vector.len());
    for (c, class) in corpus.classes.iter().enumerate() {
        let block = vector.block(c);
        println!(
            "  class {class}: avg {:.3}  std {:.3}  min {:.3}  max {:.3}  prob {:.3}  prop {:.3}",
            block.avg, block.std, block.min, block.max, block.prob, block.prop
        );
    }
    println!("\nstatistic kinds, in block order: {:?}", FeatureKind::ALL.map(|k| k.name()));
    Ok(())
}
