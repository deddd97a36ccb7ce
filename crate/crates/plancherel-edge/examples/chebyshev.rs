//! The polynomials P_l^n, their Chebyshev-U form, the Snyder expansion and
//! Kesten–McKay orthogonality.

use plancherel_edge::chebyshev::{kesten_mckay_correlation, p_from_u, p_poly, snyder_expand};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 6;
    for l in 0..=5 {
        let p = p_poly(l, n);
        assert_eq!(p.coeffs, p_from_u(l, n));
        println!("P_{l}^{n}: {:?}", p.coeffs.iter().map(ToString::to_string).collect::<Vec<_>>());
    }
    for r in [2, 4, 6] {
        let terms: Vec<String> = snyder_expand(r)?.into_iter().map(|(deg, w)| format!("{w}·U_{deg}")).collect();
        println!("x^{r} = {}", terms.join(" + "));
    }
    let mut worst = 0.0f64;
    for a in 0..=8 {
        for b in 0..a {
            worst = worst.max(kesten_mckay_correlation(a, b, n)?.abs());
        }
    }
    println!("largest normalized off-diagonal Gram entry for l ≤ 8: {worst:.2e}");
    Ok(())
}
