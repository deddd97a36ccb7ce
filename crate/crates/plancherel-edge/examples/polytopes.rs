//! Lattice points of diagram polytopes, their volume normalization and the
//! integrals I^D by quadrature and by hit-and-run.

use plancherel_edge::airy::{i_integral, i_integral_mc, lattice_count, normalization_constant, Polytope};
use plancherel_edge::diagrams::generate_diagrams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let d = &generate_diagrams(4, 1)?[0];
    let poly = Polytope::new(d, &[1.0])?;
    println!("k = 1, s = 4: dimension {} in R^{}, volume at α = 1: {:.6e}", poly.dimension(), poly.ambient_dimension(), poly.volume());
    for m in [8u64, 16, 32] {
        println!("  lattice points at m = {m}: {}", lattice_count(d, &[m])?.count);
    }
    println!("  normalization {:?}", normalization_constant(d, &[1])?);

    let d2 = generate_diagrams(4, 2)?.into_iter().find(|d| d.components() == 1).ok_or("no connected diagram")?;
    let (alpha, tau) = ([1.0, 1.5], [0.0, 0.7]);
    println!(
        "k = 2: I^D quadrature {:.6e}, hit-and-run {:?}",
        i_integral(&d2, &alpha, &tau)?,
        i_integral_mc(&d2, &alpha, &tau, 20_000, 3)?
    );
    Ok(())
}
