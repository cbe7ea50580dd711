//! Two-proportion z statistics for accuracy differences: is classifier A
//! really better than classifier B on a test set of a given size?

use ldr::eval::significance_z;

fn main() -> ldr::Result<()> {
    println!("pooled z statistics at n = 1000 per system:");
    for (a, b) in [(0.711, 0.670), (0.711, 0.693), (0.722, 0.711)] {
        let z = significance_z(a, b, 1000, 1000)?;
        let verdict = if z >= 1.96 { "significant at 95%" } else { "not significant at 95%" };
        println!("  {a:.3} vs {b:.3}: z = {z:.3}  ({verdict})");
    }

    println!("\nthe same gap matters more on a bigger test set:");
    for n in [200u64, 1000, 5000] {
        let z = significance_z(0.72, 0.70, n, n)?;
        println!("  0.720 vs 0.700 at n = {n}: z = {z:.3}");
    }
    Ok(())
}
