//! Sweep the vocabulary pruning threshold and watch accuracy and
//! vocabulary size trade off.

use ldr::classifier::Hyperparameters;
use ldr::eval::threshold_sweep;
use ldr::synth::{synthetic_corpus, SynthConfig};

fn main() -> ldr::Result<()> {
    let corpus = synthetic_corpus(&SynthConfig::default())?;
    let grid: Vec<u64> = vec![0, 1, 2, 5, 10, 20, 50, 100];
    let rows = threshold_sweep(&corpus, &grid, &Hyperparameters::default())?;

    println!("{:>9} {:>11} {:>9}", "min_freq", "vocab_size", "accuracy");
    for row in &rows {
        println!("{:>9} {:>11} {:>9.3}", row.min_freq, row.vocab_size, row.accuracy);
    }
    println!("\nhigher thresholds shrink the vocabulary; accuracy collapses only");
    println!("once the class-marker terms themselves get pruned away.");
    Ok(())
}
