//! Weighted sampling estimators for 4- and 5-node graphlet frequencies.
//!
//! The crate estimates how many connected induced subgraphs of every 4-node
//! and 5-node shape a large undirected graph contains. Four samplers draw
//! small subgraphs with exactly known inclusion probabilities:
//!
//! * [`Method::Moss4`] grows a 3-path from a node weighted by its 3-path count,
//! * [`Method::Moss4Min`] grows an order-centered 3-path and only credits the
//!   4-cycle, the chordal 4-cycle and `K4`,
//! * [`Method::T5`] grows a fork tree,
//! * [`Method::Path5`] grows a 5-path around its middle node.
//!
//! Tallies become unbiased estimates with analytic variances in
//! [`estimators`]; [`exact`] counts everything exactly for validation and
//! [`vertex`] replays the samplers as a superstep message-passing program.
//!
//! ```
//! use graphlet_sampling::{generators, IndexedGraph, Method, Sampler};
//!
//! let g = IndexedGraph::new(generators::complete(4)).unwrap();
//! let tally = Sampler::new(&g, Method::Moss4).unwrap().run(10_000, 7, 1).unwrap();
//! let report = graphlet_sampling::estimators::estimate_moss4(&tally, &g).unwrap();
//! assert!((report.motif(6).unwrap().estimate - 1.0).abs() < 0.1);
//! ```

pub mod cache;
pub mod catalog;
pub mod draw;
pub mod error;
pub mod estimators;
pub mod exact;
pub mod generators;
pub mod graph;
pub mod harness;
pub mod order;
pub mod samplers;
pub mod vertex;
pub mod weights;

pub use catalog::MotifCatalog;
pub use error::{Error, Result};
pub use graph::Graph;
pub use order::TotalOrder;
pub use samplers::{Method, Sampler, Tally};
pub use weights::{IndexedGraph, RootWeight, WeightIndex};

/// Version string embedded in every output file.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
