//! Variance of the 3-path sampler against its centered variant for the
//! motifs both sample, on a hub-heavy graph. The predicted variance ratios
//! are Gamma/(4 Gamma^) for motifs 3 and 6 and Gamma/(6 Gamma^) for motif 5.

use graphlet_sampling::estimators::{estimate_moss4, estimate_moss4min};
use graphlet_sampling::exact::{exact_counts, DEFAULT_CAP};
use graphlet_sampling::{generators, IndexedGraph, Method, Sampler};

fn main() -> graphlet_sampling::Result<()> {
    let g = IndexedGraph::new(generators::powerlaw_cluster(2000, 3, 0.5, 3))?;
    let c = g.constants();
    let ratio = c.gamma as f64 / c.gamma_check as f64;
    println!("Gamma / Gamma^ = {ratio:.2}");

    let truth = exact_counts(&g, &[4], DEFAULT_CAP)?.truth(4).unwrap();
    let k = 10_000;
    let full = Sampler::new(&g, Method::Moss4)?.run(k, 1, 2)?;
    let min = Sampler::new(&g, Method::Moss4Min)?.run(k, 2, 2)?;
    let vf = estimate_moss4(&full, &g)?.true_variances(&truth)?;
    let vm = estimate_moss4min(&min, &g)?.true_variances(&truth)?;

    for (id, d) in [(3, 4.0), (5, 6.0), (6, 4.0)] {
        println!(
            "motif {id}: Var ratio {:.2}  (approx {:.2})",
            vf[id - 1] / vm[id - 1],
            ratio / d
        );
    }
    Ok(())
}
