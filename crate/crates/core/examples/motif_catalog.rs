//! Prints the 4- and 5-node motif classes with their pattern counts.

use graphlet_sampling::MotifCatalog;

fn main() {
    let cat = MotifCatalog::global();
    println!("4-node motifs (3-paths, 3-stars)");
    for m in cat.motifs4() {
        let (a, b) = cat.phi4(m.id);
        println!("  {:>2}  edges {:?}  phi = ({a}, {b})", m.id, m.edges);
    }
    println!("5-node motifs (5-paths, fork trees, 4-stars)");
    for m in cat.motifs5() {
        let (a, b, c) = cat.phi5(m.id);
        println!("  {:>2}  {} edges  phi = ({a}, {b}, {c})", m.id, m.edges.len());
    }
    println!("sampled by the 5-path sampler only: {:?}", cat.omega2());
    println!("needing the 4-star identity: {:?}", cat.omega3_star());
}
