//! Contraction of lists to metric diagrams, the diagram generator and lift
//! counts.

use plancherel_edge::diagrams::{count_lifts, diagram_count, generate_diagrams};
use plancherel_edge::paths::{contract_lists, enumerate_sigma, SigmaVariant};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let regular = enumerate_sigma(&[8], &[0], 6, SigmaVariant::Regular, true)?.members.unwrap_or_default();
    let lists = regular.first().ok_or("Σ★ is empty")?;
    let d = contract_lists(lists)?;
    println!("contraction of {:?}: s = {}, genus {}, lengths {:?}", lists.lists(), d.s(), d.genus()?, d.lengths());
    println!("lifts at n = 6: {:?}", count_lifts(&d, 6, &[0])?);
    println!("{}", d.to_json()?);

    for k in 1..=2 {
        for s in [2, 4, 6] {
            println!("k = {k}, s = {s}: {} diagrams", diagram_count(s, k)?);
        }
    }
    let connected = generate_diagrams(4, 2)?.iter().filter(|d| d.components() == 1).count();
    println!("connected two-circuit diagrams at s = 4: {connected}");
    Ok(())
}
