//! Repeated runs comparing empirical NRMSE with the analytic StdErr, and
//! MOSS-4 against MOSS-4Min. Writes plot-ready CSV to stdout.

use graphlet_sampling::exact::{exact_counts, DEFAULT_CAP};
use graphlet_sampling::harness::{cmd_experiment, Document, Format, MethodChoice, Provenance, RunConfig};
use graphlet_sampling::{generators, IndexedGraph};

fn main() -> graphlet_sampling::Result<()> {
    let g = IndexedGraph::new(generators::collaboration(1500, 1000, 0.3, 2))?;
    let truth = exact_counts(&g, &[4], DEFAULT_CAP)?;
    let mut cfg = RunConfig::new("synthetic collaboration graph", MethodChoice::Moss4min);
    cfg.budget = 2000;
    cfg.repeats = 300;
    cfg.seed = 5;
    cfg.workers = 2;
    let body = cmd_experiment(&g, &cfg, Some(&truth))?;
    let doc = Document { provenance: Provenance::new("experiment", &cfg, Some(cfg.seed), &g.graph)?, body };
    doc.write(std::io::stdout().lock(), Format::Csv)
}
