//! Gauss–Legendre rules.

use std::f64::consts::PI;

/// Nodes and weights of the `n`-point rule on [-1, 1], by Newton iteration
/// on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        if d != 0.0 {
            dp = d;
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    (p1, n as f64 * (z * p1 - p0) / (z * z - 1.0))
}

/// Fixed rule mapped onto [a, b].
pub struct Rule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Rule {
    pub fn new(n: usize) -> Self {
        let (nodes, weights) = gauss_legendre(n);
        Rule { nodes, weights }
    }

    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let (h, c) = ((b - a) / 2.0, (a + b) / 2.0);
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(c + h * x)).sum::<f64>() * h
    }

    /// Nodes and weights of the composite rule over `pieces` equal panels.
    pub fn panel_points(&self, a: f64, b: f64, pieces: usize) -> Vec<(f64, f64)> {
        let h = (b - a) / pieces as f64;
        let mut out = Vec::with_capacity(pieces * self.nodes.len());
        for i in 0..pieces {
            let c = a + (i as f64 + 0.5) * h;
            out.extend(self.nodes.iter().zip(&self.weights).map(|(x, w)| (c + h / 2.0 * x, w * h / 2.0)));
        }
        out
    }

    /// Composite rule over `pieces` equal panels.
    pub fn integrate_panels(&self, a: f64, b: f64, pieces: usize, mut f: impl FnMut(f64) -> f64) -> f64 {
        let h = (b - a) / pieces as f64;
        (0..pieces).map(|i| self.integrate(a + i as f64 * h, a + (i + 1) as f64 * h, &mut f)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        let r = Rule::new(10);
        let v = r.integrate(0.0, 2.0, |x| x.powi(19));
        assert!((v - 2f64.powi(20) / 20.0).abs() / v < 1e-13);
        let (_, w) = gauss_legendre(2000);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn smooth_integrand() {
        let r = Rule::new(40);
        let v = r.integrate(0.0, PI, f64::sin);
        assert!((v - 2.0).abs() < 1e-14);
    }
}
