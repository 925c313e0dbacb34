//! 5-node motif counts from the fork-tree and 5-path samplers combined.

use graphlet_sampling::estimators::estimate_moss5;
use graphlet_sampling::exact::{exact_counts, DEFAULT_CAP};
use graphlet_sampling::{generators, IndexedGraph, Method, Sampler};

fn main() -> graphlet_sampling::Result<()> {
    let g = IndexedGraph::new(generators::collaboration(800, 600, 0.3, 5))?;
    let k = 50_000;
    let t5 = Sampler::new(&g, Method::T5)?.run(k, 1, 4)?;
    let p5 = Sampler::new(&g, Method::Path5)?.run(k, 2, 4)?;
    let mut report = estimate_moss5(&t5, &p5, &g)?;

    let exact = exact_counts(&g, &[5], DEFAULT_CAP)?;
    report.attach_truth(&exact.truth(5).unwrap())?;
    println!("{:>3} {:>14} {:>14} {:>8}  weights", "id", "estimate", "exact", "stderr");
    for m in &report.motifs {
        println!(
            "{:>3} {:>14.0} {:>14.0} {:>8.4}  {:?}",
            m.id,
            m.estimate,
            m.truth.unwrap(),
            m.stderr.unwrap_or(f64::NAN),
            m.mixing_weights.iter().map(|w| (w * 100.0).round() / 100.0).collect::<Vec<_>>()
        );
    }
    Ok(())
}
