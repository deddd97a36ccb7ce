//! Exact Plancherel probabilities, the RSK sampler and the limit shape.

use num_traits::ToPrimitive;
use plancherel_edge::dynamics::{enumerate_plancherel, frobenius_measure_mass, limit_shape_statistic, sample_plancherel};
use plancherel_edge::rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let exact = enumerate_plancherel(5)?;
    let mut r = rng::stream(7, 0);
    let draws = 200_000;
    let mut counts = std::collections::BTreeMap::new();
    for _ in 0..draws {
        *counts.entry(sample_plancherel(5, &mut r, None)).or_insert(0u32) += 1;
    }
    println!("{:<12} {:>10} {:>10}", "λ", "exact", "sampled");
    for (l, p) in &exact {
        let freq = *counts.get(l).unwrap_or(&0) as f64 / draws as f64;
        println!("{:<12} {:>10.5} {:>10.5}", l.to_string(), p.to_f64().unwrap(), freq);
    }

    for n in [1_000, 10_000, 100_000] {
        let lambda = sample_plancherel(n, &mut r, None);
        println!(
            "n = {n:>6}: λ_1 = {:>4} (2√n = {:.0}), sup distance to limit CDF {:.4}, mass {:.4}",
            lambda.row(1),
            2.0 * (n as f64).sqrt(),
            limit_shape_statistic(&lambda)?,
            frobenius_measure_mass(&lambda)
        );
    }
    Ok(())
}
