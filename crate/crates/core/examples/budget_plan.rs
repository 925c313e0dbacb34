//! Pilot run, planned budget, then a check that the plan holds.

use graphlet_sampling::estimators::estimate_moss4;
use graphlet_sampling::exact::{exact_counts, DEFAULT_CAP};
use graphlet_sampling::harness::{cmd_plan, MethodChoice, RunConfig};
use graphlet_sampling::{generators, IndexedGraph, Method, Sampler};

fn main() -> graphlet_sampling::Result<()> {
    let g = IndexedGraph::new(generators::erdos_renyi(60, 0.2, 4))?;
    let mut cfg = RunConfig::new("synthetic", MethodChoice::Moss4);
    cfg.budget = 5000;
    cfg.motifs = vec![6];
    let plan = cmd_plan(&g, &cfg)?;
    let k = plan.max_budget;
    println!("planned K* = {k} for eps {} delta {}", plan.epsilon, plan.delta);

    let n6 = exact_counts(&g, &[4], DEFAULT_CAP)?.n4.unwrap()[5] as f64;
    let sampler = Sampler::new(&g, Method::Moss4)?;
    let runs = 200;
    let mut ok = 0;
    for r in 0..runs {
        let est = estimate_moss4(&sampler.run(k, 100 + r, 1)?, &g)?.estimates()[5];
        ok += u64::from((est - n6).abs() <= plan.epsilon * n6);
    }
    println!("{ok}/{runs} runs within 10% of {n6}");
    Ok(())
}
