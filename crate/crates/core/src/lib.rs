//! Exact simulation reductions between the three formulations of the
//! ferromagnetic Ising model: spins on nodes, even subgraphs (the high
//! temperature expansion), and the Fortuin-Kasteleyn random cluster model.
//!
//! The [`reduce`] module converts one exact draw of any world into an exact
//! draw of any other using only a handful of Bernoulli draws. [`chains`]
//! builds Swendsen-Wang style Markov chains from those maps, [`cftp`] samples
//! the random-cluster and subgraphs worlds perfectly, and [`oracle`] checks
//! every distributional claim by brute force on small graphs.

pub mod cftp;
pub mod chains;
pub mod cli;
pub mod config;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod par;
pub mod reduce;
pub mod rng;
pub mod union_find;

pub use config::{ClusterPartition, Configuration, RcConfig, SpinConfig, SubgraphConfig, World};
pub use error::{Error, Result};
pub use graph::{Coupling, Param, WeightedGraph};
pub use par::Backend;
pub use rng::{BernoulliSource, RngStream};
