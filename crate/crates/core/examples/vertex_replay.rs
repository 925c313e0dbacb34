//! Records the direct sampler's draws, replays them through the
//! vertex-centric engine and checks the tallies agree.

use graphlet_sampling::vertex::replay;
use graphlet_sampling::{generators, IndexedGraph, Method, Sampler};

fn main() -> graphlet_sampling::Result<()> {
    let g = IndexedGraph::new(generators::powerlaw_cluster(500, 3, 0.4, 11))?;
    for method in Method::ALL {
        let sampler = Sampler::new(&g, method)?;
        let (direct, tape) = sampler.run_recording(5000, 3, 4)?;
        let run = replay(&sampler, &tape, None)?;
        println!(
            "{method:>9}: {} draws, {} supersteps, {} messages ({} off-edge), {} root nodes, identical = {}",
            tape.len(),
            run.message_supersteps,
            run.messages,
            run.nonlocal_messages,
            run.trials_per_root.len(),
            run.tally == direct
        );
        assert_eq!(run.tally, direct);
    }
    Ok(())
}
