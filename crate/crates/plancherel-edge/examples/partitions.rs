//! Hook lengths, dimensions and the three coordinate systems of a diagram.

use plancherel_edge::partition::Partition;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lambda = Partition::new(vec![5, 3, 3, 1])?;
    println!("λ = {lambda}, |λ| = {}, λ′ = {}", lambda.size(), lambda.conjugate());
    println!("dim λ = {} (log {:.6})", lambda.dimension(), lambda.log_dimension());
    println!("hook at (1,1): {}", lambda.hook(1, 1));

    let fr = lambda.frobenius();
    println!("Frobenius: f = {:?}, f′ = {:?}, d = {}", fr.f, fr.fprime, fr.d());
    let kv = lambda.kerov();
    println!("Kerov: outer contents {:?}, inner contents {:?}", kv.iota, kv.o);

    for c in lambda.corners() {
        println!("corner {c:?}");
    }
    let smaller = lambda.remove_corner(lambda.inner_corner_rows()[0])?;
    println!("after removing the first inner corner: {smaller}");

    let total: num_bigint::BigUint = Partition::all_of_size(6).iter().map(|l| l.dimension().pow(2)).sum();
    println!("Σ dim² over partitions of 6 = {total}");
    Ok(())
}
