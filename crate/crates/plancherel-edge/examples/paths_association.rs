//! Transposition lists, their associated paths, the unmatched part and the
//! Σ / Σ′ / Σ★ counts.

use plancherel_edge::paths::{associate_path, enumerate_sigma, unmatched_cycles, SigmaVariant, TranspositionLists};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lists = TranspositionLists::single(5, vec![1, 2, 1, 2, 1, 2])?;
    let path = associate_path(&lists)?;
    println!("lists {:?}: {} arrows, closed = {}, non-backtracking = {}", lists.lists(), path.arrows.len(), path.is_closed(), path.is_nonbacktracking());
    for a in &path.arrows {
        println!("  {:?} -> {:?} partner {:?}", a.from, a.to, a.partner);
    }

    let open = TranspositionLists::single(5, vec![1, 2, 3])?;
    println!("unmatched part of {:?}: {:?}", open.lists(), unmatched_cycles(&open)?);

    for m in [4, 6, 8] {
        let all = enumerate_sigma(&[m], &[0], 6, SigmaVariant::All, false)?.count;
        let nb = enumerate_sigma(&[m], &[0], 6, SigmaVariant::NonBacktracking, false)?.count;
        let reg = enumerate_sigma(&[m], &[0], 6, SigmaVariant::Regular, false)?.count;
        println!("n = 6, m = {m}: |Σ| = {all}, |Σ′| = {nb}, |Σ★| = {reg}");
    }
    Ok(())
}
