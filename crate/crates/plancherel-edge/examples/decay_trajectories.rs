//! Edge trajectories of the decay chain, by direct simulation and by word
//! prefixes, in each coordinate flavor.

use plancherel_edge::dynamics::{decay_time, sample_trajectory, sample_trajectory_by_prefixes, Flavor};
use plancherel_edge::rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 20_000;
    let grid = [0.0, 0.25, 0.5];
    println!("decay steps for the grid: {:?}", grid.iter().map(|&t| decay_time(n, t)).collect::<Vec<_>>());

    for flavor in [Flavor::Row, Flavor::Frobenius, Flavor::Kerov] {
        let s = sample_trajectory_by_prefixes(n, &grid, flavor, 3, &mut rng::stream(1, 0))?;
        println!("{flavor:?}");
        for (g, tau) in grid.iter().enumerate() {
            println!("  τ = {tau:<4} top {:?}  primed {:?}", fmt(&s.lines[g]), fmt(&s.primed[g]));
        }
    }

    let direct = sample_trajectory(2_000, &grid, Flavor::Frobenius, 2, &mut rng::stream(2, 0))?;
    println!("direct chain at n = 2000, x_1 over time: {:?}", direct.lines.iter().map(|l| l[0]).collect::<Vec<_>>());
    Ok(())
}

fn fmt(xs: &[f64]) -> Vec<String> {
    xs.iter().map(|x| format!("{x:.3}")).collect()
}
