#![allow(dead_code)]

use ising_reductions::fixtures;
use ising_reductions::{Coupling, WeightedGraph};
use proptest::prelude::*;

pub fn triangle_lambda(lambda: f64) -> WeightedGraph {
    fixtures::uniform("triangle", Coupling::from_lambda(lambda).unwrap()).unwrap()
}

pub fn fixture_beta(name: &str, beta: f64) -> WeightedGraph {
    fixtures::uniform(name, Coupling::from_beta(beta).unwrap()).unwrap()
}

fn coupling() -> impl Strategy<Value = Coupling> {
    prop_oneof![
        1 => Just(Coupling::ZERO),
        1 => Just(Coupling::INFINITE),
        6 => (0.0f64..3.0).prop_map(|b| Coupling::from_beta(b).unwrap()),
    ]
}

/// Random simple graph on `1..=max_nodes` nodes with at most `max_edges` edges.
pub fn graph(max_nodes: usize, max_edges: usize) -> impl Strategy<Value = WeightedGraph> {
    (1..=max_nodes).prop_flat_map(move |n| {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        let m = pairs.len();
        (
            proptest::sample::subsequence(pairs, 0..=m.min(max_edges)),
            proptest::collection::vec(coupling(), max_edges),
        )
            .prop_map(move |(chosen, cs)| {
                WeightedGraph::new(n, chosen.into_iter().zip(cs).map(|((u, v), c)| (u, v, c)))
                    .unwrap()
            })
    })
}

/// Random graph together with a random edge bit vector of matching length.
pub fn graph_and_bits(
    max_nodes: usize,
    max_edges: usize,
) -> impl Strategy<Value = (WeightedGraph, Vec<bool>)> {
    graph(max_nodes, max_edges).prop_flat_map(|g| {
        let m = g.num_edges();
        (Just(g), proptest::collection::vec(any::<bool>(), m))
    })
}
