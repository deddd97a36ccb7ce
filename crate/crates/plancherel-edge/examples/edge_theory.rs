//! The ψ series, φ and the predicted Laplace functionals of the edge limit.

use plancherel_edge::airy::{laplace_prediction, phi, phi1, psi, TheoryOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let opts = TheoryOptions::default();
    println!("{:>6} {:>14} {:>14} {:>12}", "α", "ψ(α)", "φ(α)", "error");
    for a in [0.25, 0.5, 1.0, 1.5, 2.0] {
        let s = psi(&[a], &[0.0], 6, 1e-3)?;
        let f = phi1(a, &opts)?;
        println!("{a:>6} {:>14.8} {:>14.8} {:>12.2e}", s.value, f.value, f.error);
    }
    for gap in [0.0, 0.25, 0.5, 1.0] {
        let f = phi(&[1.0, 1.0], &[0.0, gap], &opts)?;
        let p = laplace_prediction(&[1.0, 1.0], &[0.0, gap], &opts)?;
        println!("two times, gap {gap}: φ = {:.6} ± {:.1e}, two-family prediction {:.6}", f.value, f.error, p.value);
    }
    Ok(())
}
