//! Generate a synthetic multi-variety corpus and write it to disk in the
//! directory-per-class layout the loader and CLI expect. Handy for trying
//! the toolchain without downloading anything.

use ldr::synth::{synthetic_corpus, write_hispablogs_layout, SynthConfig};

fn main() -> ldr::Result<()> {
    let cfg = SynthConfig {
        classes: vec!["norte".into(), "sur".into(), "costa".into()],
        train_per_class: 50,
        test_per_class: 20,
        seed: 2024,
        ..SynthConfig::default()
    };
    let corpus = synthetic_corpus(&cfg)?;

    let root = std::env::temp_dir().join("ldr-example-corpus");
    write_hispablogs_layout(&corpus, &root)?;
    println!("wrote {} documents under {}", corpus.documents.len(), root.display());
    println!("\ntry the command-line pipeline against it:");
    let root = root.display();
    println!("  cargo run -- stats --root {root}");
    println!("  cargo run -- train --root {root} --model /tmp/model.json");
    println!("  cargo run -- evaluate --root {root} --model /tmp/model.json");

    let sample = corpus.train_docs().next().expect("corpus is never empty");
    println!(
        "\nsample document {} ({}): {} ...",
        sample.id,
        sample.label.as_deref().unwrap_or("-"),
        sample.tokens[..12.min(sample.tokens.len())].join(" ")
    );
    Ok(())
}
