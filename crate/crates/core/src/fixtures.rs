//! Small named graphs used by the tests, the acceptance suite and the CLI.

use crate::error::Result;
use crate::graph::{Coupling, WeightedGraph};

pub const NAMES: [&str; 6] = ["k2", "path3", "triangle", "cycle4", "k4", "grid3x3"];

pub fn edge_list(name: &str) -> Option<(usize, Vec<(usize, usize)>)> {
    Some(match name {
        "k2" => (2, vec![(0, 1)]),
        "path3" => (3, vec![(0, 1), (1, 2)]),
        "triangle" => (3, vec![(0, 1), (1, 2), (0, 2)]),
        "cycle4" => (4, vec![(0, 1), (1, 2), (2, 3), (0, 3)]),
        "k4" => (4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]),
        "grid3x3" => {
            let mut pairs = Vec::new();
            for r in 0..3 {
                for c in 0..3 {
                    let v = 3 * r + c;
                    if c < 2 {
                        pairs.push((v, v + 1));
                    }
                    if r < 2 {
                        pairs.push((v, v + 3));
                    }
                }
            }
            (9, pairs)
        }
        _ => return None,
    })
}

/// Fixture `name` with the same coupling on every edge.
pub fn uniform(name: &str, coupling: Coupling) -> Option<WeightedGraph> {
    let (n, pairs) = edge_list(name)?;
    Some(WeightedGraph::uniform(n, &pairs, coupling).expect("fixtures are simple graphs"))
}

/// Fixture `name` with per-edge betas taken cyclically from `betas`.
pub fn mixed(name: &str, betas: &[f64]) -> Option<Result<WeightedGraph>> {
    let (n, pairs) = edge_list(name)?;
    Some(
        pairs
            .iter()
            .enumerate()
            .map(|(k, &(u, v))| Coupling::from_beta(betas[k % betas.len()]).map(|c| (u, v, c)))
            .collect::<Result<Vec<_>>>()
            .and_then(|edges| WeightedGraph::new(n, edges)),
    )
}
