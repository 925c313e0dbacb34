//! Exact 4- and 5-node census by enumeration, with the scale guard.

use graphlet_sampling::exact::{exact_counts, projected_count, DEFAULT_CAP};
use graphlet_sampling::{generators, Error, IndexedGraph};

fn main() -> graphlet_sampling::Result<()> {
    let g = IndexedGraph::new(generators::erdos_renyi(300, 0.03, 9))?;
    println!("projected 4-node {}  5-node {}", projected_count(&g, 4), projected_count(&g, 5));
    let counts = exact_counts(&g, &[4, 5], DEFAULT_CAP)?;
    println!("4-node {:?}  total {}", counts.n4.as_ref().unwrap(), counts.total4().unwrap());
    println!("5-node {:?}  total {}", counts.n5.as_ref().unwrap(), counts.total5().unwrap());
    println!("patterns {:?}", counts.patterns);

    match exact_counts(&g, &[5], 1000) {
        Err(Error::ScaleCap { projected, cap }) => println!("refused: {projected} > {cap}"),
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}
