//! Ingest a corpus and print per-class statistics.
//!
//! Uses the built-in synthetic corpus so it runs offline; point `--root` of
//! the `ldr stats` command at a real directory tree for the same table.

use ldr::corpus::corpus_stats;
use ldr::synth::{synthetic_corpus, SynthConfig};

fn main() -> ldr::Result<()> {
    let corpus = synthetic_corpus(&SynthConfig::default())?;
    println!(
        "{} classes, {} training / {} test documents\n",
        corpus.classes.len(),
        corpus.train_docs().count(),
        corpus.test_docs().count()
    );
    corpus_stats(&corpus).to_csv(std::io::stdout().lock()).expect("stdout");
    Ok(())
}
