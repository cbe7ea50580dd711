//! Retrain on subsets of the six statistics to see how much each kind
//! contributes to accuracy.

use ldr::classifier::Hyperparameters;
use ldr::eval::{ablation_run, parse_subset};
use ldr::synth::{synthetic_corpus, SynthConfig};

fn main() -> ldr::Result<()> {
    let corpus = synthetic_corpus(&SynthConfig::default())?;
    let subsets: Vec<_> = [
        "avg",
        "std",
        "min",
        "max",
        "prob",
        "prop",
        "avg+std",
        "min+max",
        "prob+prop",
        "avg+std+min+max",
        "avg+std+min+max+prob+prop",
    ]
    .iter()
    .map(|s| parse_subset(s))
    .collect::<ldr::Result<_>>()?;

    let rows = ablation_run(&corpus, &subsets, 5, &Hyperparameters::default())?;
    println!("{:<28} {:>9} {:>9}", "statistics kept", "features", "accuracy");
    for row in &rows {
        println!("{:<28} {:>9} {:>9.3}", row.subset, row.feature_count, row.accuracy);
    }
    Ok(())
}
