//! Rank the per-class statistics by information gain against the class
//! label, with stability estimates from ten cross-validation folds.

use ldr::eval::{information_gain, ldr_tables};
use ldr::synth::{synthetic_corpus, SynthConfig};

fn main() -> ldr::Result<()> {
    let corpus = synthetic_corpus(&SynthConfig::default())?;
    let (_, train_table, _) = ldr_tables(&corpus, 5)?;
    let labels = train_table.labels_required()?;
    let ranking = information_gain(&train_table, &labels, 10, 42)?;

    println!("{:<16} {:>10} {:>12} {:>10}", "feature", "gain_bits", "fold_mean", "fold_std");
    println!("-- most informative --");
    for entry in ranking.entries.iter().take(8) {
        println!(
            "{:<16} {:>10.4} {:>12.4} {:>10.4}",
            entry.feature, entry.gain, entry.fold_mean, entry.fold_std
        );
    }
    println!("-- least informative --");
    for entry in ranking.entries.iter().rev().take(8).collect::<Vec<_>>().into_iter().rev() {
        println!(
            "{:<16} {:>10.4} {:>12.4} {:>10.4}",
            entry.feature, entry.gain, entry.fold_mean, entry.fold_std
        );
    }
    Ok(())
}
