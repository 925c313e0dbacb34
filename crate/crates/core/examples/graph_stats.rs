//! Weight totals of a graph. Pass an edge list path, or get a synthetic
//! collaboration graph.
//!
//!     cargo run --release --example graph_stats -- data/ca-GrQc.txt

use graphlet_sampling::harness::{cmd_stats, load_graph};
use graphlet_sampling::{generators, IndexedGraph};

fn main() -> graphlet_sampling::Result<()> {
    let g = match std::env::args().nth(1) {
        Some(path) => load_graph(path.as_ref())?,
        None => IndexedGraph::new(generators::collaboration(2000, 1400, 0.3, 1))?,
    };
    let s = cmd_stats(&g);
    println!("nodes {}  edges {}  max degree {}", s.nodes, s.edges, s.max_degree);
    let c = s.constants;
    println!("Gamma   {:>16}", c.gamma);
    println!("Gamma^  {:>16}", c.gamma_check);
    println!("Gamma1  {:>16}", c.gamma1);
    println!("Gamma2  {:>16}", c.gamma2);
    println!("Lambda3 {:>16}", c.lambda3);
    println!("Lambda4 {:>16}", c.lambda4);
    if let Some(r) = s.gamma_ratio {
        // MOSS-4Min pays off roughly when this is well above 4
        println!("Gamma / Gamma^ = {r:.3}");
    }
    for w in s.warnings {
        println!("warning: {w}");
    }
    Ok(())
}
