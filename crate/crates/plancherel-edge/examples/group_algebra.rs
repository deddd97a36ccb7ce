//! Jucys–Murphy elements in the group algebra and the two routes to their
//! mixed moments.

use plancherel_edge::group_algebra::{
    jm_element, jm_word_trace_group, jm_word_trace_tableau, mixed_moment_sym, sym_trace_group, sym_trace_tableau,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let x4 = jm_element(4, 5)?;
    println!("X_4 in S_5 has {} terms; tr(X_4²)/5! = {}", x4.len(), x4.pow(2)?.trace());

    for (r, t) in [(vec![2u32], vec![0usize]), (vec![2, 2], vec![0, 1]), (vec![4, 2], vec![0, 0])] {
        println!(
            "r̄ = {r:?}, t̄ = {t:?}: Y traces {} = {}, JM word traces {} = {}, M^sym ≈ {:.6}",
            sym_trace_group(&r, &t, 6)?,
            sym_trace_tableau(&r, &t, 6)?,
            jm_word_trace_group(&r, &t, 6)?,
            jm_word_trace_tableau(&r, &t, 6)?,
            mixed_moment_sym(&r, &t, 6)?.to_f64()
        );
    }
    Ok(())
}
