//! Measure feature-extraction time against document length. Matching runs
//! one hash lookup per token and the statistics passes touch only matched
//! occurrences, so the cost is linear in document length.

use ldr::eval::{cost_benchmark, ldr_tables};
use ldr::synth::{synthetic_corpus, SynthConfig};

fn main() -> ldr::Result<()> {
    let corpus = synthetic_corpus(&SynthConfig::default())?;
    let (beta, _, _) = ldr_tables(&corpus, 5)?;
    let lengths: Vec<usize> = (1..=10).map(|i| i * 1000).collect();
    let report = cost_benchmark(&beta, &lengths, 7, 42)?;

    println!("{:>8} {:>14}", "tokens", "median_micros");
    for row in &report.rows {
        println!("{:>8} {:>14.1}", row.length, row.median_micros);
    }
    if let Some(fit) = &report.fit {
        println!(
            "\nleast-squares fit: time = {:.4} us/token * length + {:.1} us  (r2 = {:.4})",
            fit.slope, fit.intercept, fit.r2
        );
    }
    Ok(())
}
