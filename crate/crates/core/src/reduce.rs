//! Exact simulation reductions between the three worlds.
//!
//! Each function maps one exact draw from its source world, plus Bernoulli
//! draws taken from a [`BernoulliSource`], to one exact draw from its target
//! world:
//!
//! ```text
//!          subs_to_rc             rc_to_spins
//!   subs  ------------>   rc   ------------->  spins
//!         <------------        <-------------
//!          rc_to_subs             spins_to_rc
//! ```

use crate::config::{
    all_even, clusters_unchecked, weight_spins, Configuration, RcConfig, SpinConfig,
    SubgraphConfig, World,
};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::rng::BernoulliSource;

/// Edge-weight reduction: every edge with `lambda` strictly between 0 and 1
/// is resolved to 0 or 1 with `P(1) = lambda + (1 - lambda) y(e)`. The
/// resolved parameter vector is a random-cluster draw.
///
/// Edges are visited in ascending index order. Edges in `y` always come out
/// open, so the output dominates `y` pointwise.
pub fn subs_to_rc<R>(g: &WeightedGraph, y: &SubgraphConfig, rng: &mut R) -> Result<RcConfig>
where
    R: BernoulliSource + ?Sized,
{
    y.check(g)?;
    if !all_even(g, y.bits()) {
        return Err(Error::InvalidInput(
            "subgraph has a node of odd degree".into(),
        ));
    }
    let mut out = Vec::with_capacity(g.num_edges());
    for (e, edge) in g.edges().iter().enumerate() {
        let lambda = edge.coupling.lambda();
        let inside = y.get(e);
        let open = if lambda >= 1.0 {
            true
        } else if lambda <= 0.0 {
            if inside {
                return Err(Error::InvalidInput(format!(
                    "edge {e} is in the subgraph but has lambda = 0"
                )));
            }
            false
        } else if inside {
            true
        } else {
            rng.bernoulli(lambda)
        };
        out.push(open);
    }
    Ok(RcConfig::new(out))
}

/// Random cluster to subgraphs.
///
/// Builds a maximal spanning forest of the open edges by depth-first search.
/// Every open edge outside the forest joins the subgraph with probability
/// 1/2; closed edges never do. Forest edges are then fixed leaf by leaf, in
/// reverse discovery order, so that every node ends with even degree.
pub fn rc_to_subs<R>(g: &WeightedGraph, z: &RcConfig, rng: &mut R) -> Result<SubgraphConfig>
where
    R: BernoulliSource + ?Sized,
{
    z.check(g)?;
    if let Some(e) = (0..g.num_edges()).find(|&e| z.get(e) && g.edge(e).coupling.p() <= 0.0) {
        return Err(Error::InvalidInput(format!(
            "edge {e} is open but has p = 0"
        )));
    }
    let forest = SpanningForest::of_open_edges(g, z.bits());

    let mut y = vec![false; g.num_edges()];
    let mut odd = vec![false; g.num_nodes()];
    for (e, edge) in g.edges().iter().enumerate() {
        if forest.in_forest[e] {
            continue;
        }
        let q = if z.get(e) { 0.5 } else { 0.0 };
        if rng.bernoulli(q) {
            y[e] = true;
            odd[edge.u] ^= true;
            odd[edge.v] ^= true;
        }
    }
    for &v in forest.discovery.iter().rev() {
        if let Some(e) = forest.parent_edge[v] {
            if odd[v] {
                y[e] = true;
                odd[v] = false;
                let parent = g.edge(e).other(v);
                odd[parent] ^= true;
            }
        }
    }
    assert!(
        !odd.contains(&true),
        "rc_to_subs produced a node of odd degree"
    );
    Ok(SubgraphConfig::new(y))
}

/// One fair coin per cluster, taken in ascending order of each cluster's
/// smallest node; heads gives the whole cluster spin +1.
pub fn rc_to_spins<R>(g: &WeightedGraph, z: &RcConfig, rng: &mut R) -> Result<SpinConfig>
where
    R: BernoulliSource + ?Sized,
{
    z.check(g)?;
    let part = clusters_unchecked(g, z.bits());
    let mut spin_of = vec![0i8; g.num_nodes()];
    for rep in part.representatives() {
        spin_of[rep] = if rng.bernoulli(0.5) { 1 } else { -1 };
    }
    let spins = part.component_id.iter().map(|&c| spin_of[c]).collect();
    SpinConfig::new(spins)
}

/// Closes every edge whose endpoints disagree and opens each agreeing edge
/// with probability `p(e)`.
pub fn spins_to_rc<R>(g: &WeightedGraph, x: &SpinConfig, rng: &mut R) -> Result<RcConfig>
where
    R: BernoulliSource + ?Sized,
{
    if weight_spins(g, x)? <= 0.0 {
        return Err(Error::InvalidInput(
            "spins disagree across an infinite coupling".into(),
        ));
    }
    let open = g
        .edges()
        .iter()
        .map(|e| x.spin(e.u) == x.spin(e.v) && rng.bernoulli(e.coupling.p()))
        .collect();
    Ok(RcConfig::new(open))
}

pub fn subs_to_spins<R>(g: &WeightedGraph, y: &SubgraphConfig, rng: &mut R) -> Result<SpinConfig>
where
    R: BernoulliSource + ?Sized,
{
    let z = subs_to_rc(g, y, rng)?;
    rc_to_spins(g, &z, rng)
}

pub fn spins_to_subs<R>(g: &WeightedGraph, x: &SpinConfig, rng: &mut R) -> Result<SubgraphConfig>
where
    R: BernoulliSource + ?Sized,
{
    let z = spins_to_rc(g, x, rng)?;
    rc_to_subs(g, &z, rng)
}

/// Converts `from` into the `to` world. Same-world requests return a copy.
pub fn reduce<R>(
    g: &WeightedGraph,
    from: &Configuration,
    to: World,
    rng: &mut R,
) -> Result<Configuration>
where
    R: BernoulliSource + ?Sized,
{
    Ok(match (from, to) {
        (c, w) if c.world() == w => c.clone(),
        (Configuration::Subs(y), World::Rc) => Configuration::Rc(subs_to_rc(g, y, rng)?),
        (Configuration::Subs(y), World::Spins) => Configuration::Spins(subs_to_spins(g, y, rng)?),
        (Configuration::Rc(z), World::Subs) => Configuration::Subs(rc_to_subs(g, z, rng)?),
        (Configuration::Rc(z), World::Spins) => Configuration::Spins(rc_to_spins(g, z, rng)?),
        (Configuration::Spins(x), World::Rc) => Configuration::Rc(spins_to_rc(g, x, rng)?),
        (Configuration::Spins(x), World::Subs) => Configuration::Subs(spins_to_subs(g, x, rng)?),
        _ => unreachable!("same-world case handled above"),
    })
}

/// Maximal spanning forest of the open edges, with nodes in DFS discovery
/// order.
#[derive(Clone, Debug)]
pub struct SpanningForest {
    pub in_forest: Vec<bool>,
    /// Forest edge joining each non-root node to its parent.
    pub parent_edge: Vec<Option<usize>>,
    pub discovery: Vec<usize>,
}

impl SpanningForest {
    pub fn of_open_edges(g: &WeightedGraph, open: &[bool]) -> Self {
        let n = g.num_nodes();
        let mut in_forest = vec![false; g.num_edges()];
        let mut parent_edge = vec![None; n];
        let mut discovery = Vec::with_capacity(n);
        let mut visited = vec![false; n];
        let mut cursor = vec![0usize; n];
        let mut stack = Vec::new();
        for root in 0..n {
            if visited[root] {
                continue;
            }
            visited[root] = true;
            discovery.push(root);
            stack.push(root);
            while let Some(&v) = stack.last() {
                let nbrs = g.neighbors(v);
                let mut advanced = false;
                while cursor[v] < nbrs.len() {
                    let (w, e) = nbrs[cursor[v]];
                    cursor[v] += 1;
                    if open[e] && !visited[w] {
                        visited[w] = true;
                        in_forest[e] = true;
                        parent_edge[w] = Some(e);
                        discovery.push(w);
                        stack.push(w);
                        advanced = true;
                        break;
                    }
                }
                if !advanced {
                    stack.pop();
                }
            }
        }
        SpanningForest {
            in_forest,
            parent_edge,
            discovery,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Coupling;
    use crate::rng::RngStream;

    fn lam(l: f64) -> Coupling {
        Coupling::from_lambda(l).unwrap()
    }

    fn triangle(c: Coupling) -> WeightedGraph {
        WeightedGraph::uniform(3, &[(0, 1), (1, 2), (0, 2)], c).unwrap()
    }

    fn star(c: Coupling) -> WeightedGraph {
        WeightedGraph::uniform(5, &[(0, 1), (0, 2), (0, 3), (3, 4)], c).unwrap()
    }

    #[test]
    fn included_edges_stay_open() {
        let g = triangle(lam(0.2));
        let mut rng = RngStream::new(3, 0);
        for _ in 0..100 {
            let z = subs_to_rc(&g, &SubgraphConfig::ones(3), &mut rng).unwrap();
            assert_eq!(z, RcConfig::ones(3));
        }
        assert_eq!(rng.draws(), 0);
    }

    #[test]
    fn infinite_edge_always_open() {
        let g = WeightedGraph::uniform(2, &[(0, 1)], Coupling::INFINITE).unwrap();
        let mut rng = RngStream::new(3, 0);
        let z = subs_to_rc(&g, &SubgraphConfig::zeros(1), &mut rng).unwrap();
        assert!(z.get(0));
        assert_eq!(rng.draws(), 0);
    }

    #[test]
    fn odd_subgraph_rejected() {
        let g = WeightedGraph::uniform(2, &[(0, 1)], lam(0.5)).unwrap();
        let mut rng = RngStream::new(3, 0);
        assert!(matches!(
            subs_to_rc(&g, &SubgraphConfig::ones(1), &mut rng),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn zero_lambda_edge_in_subgraph_rejected() {
        let g = triangle(lam(0.0));
        let mut rng = RngStream::new(3, 0);
        assert!(matches!(
            subs_to_rc(&g, &SubgraphConfig::ones(3), &mut rng),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn closed_rc_gives_empty_subgraph() {
        let g = triangle(lam(0.5));
        let mut rng = RngStream::new(1, 0);
        let y = rc_to_subs(&g, &RcConfig::zeros(3), &mut rng).unwrap();
        assert_eq!(y, SubgraphConfig::zeros(3));
        assert_eq!(rng.draws(), 0);
    }

    #[test]
    fn open_tree_gives_empty_subgraph() {
        let g = star(lam(0.5));
        let mut rng = RngStream::new(1, 0);
        for _ in 0..50 {
            let y = rc_to_subs(&g, &RcConfig::ones(4), &mut rng).unwrap();
            assert_eq!(y, SubgraphConfig::zeros(4));
        }
        assert_eq!(rng.draws(), 0);
    }

    #[test]
    fn open_triangle_is_empty_or_full() {
        let g = triangle(lam(0.5));
        let mut rng = RngStream::new(5, 0);
        let mut full = 0;
        for _ in 0..2000 {
            let y = rc_to_subs(&g, &RcConfig::ones(3), &mut rng).unwrap();
            match y.count_ones() {
                0 => {}
                3 => full += 1,
                k => panic!("subgraph with {k} edges"),
            }
        }
        assert_eq!(rng.draws(), 2000);
        assert!((800..1200).contains(&full));
    }

    #[test]
    fn open_edge_with_zero_p_rejected() {
        let g = triangle(lam(0.0));
        let mut rng = RngStream::new(1, 0);
        assert!(rc_to_subs(&g, &RcConfig::ones(3), &mut rng).is_err());
    }

    #[test]
    fn cluster_spins_shared() {
        let g = star(lam(0.5));
        let mut rng = RngStream::new(8, 0);
        let x = rc_to_spins(&g, &RcConfig::ones(4), &mut rng).unwrap();
        assert!(x.spins().iter().all(|&s| s == x.spin(0)));
        assert_eq!(rng.draws(), 1);
        let _ = rc_to_spins(&g, &RcConfig::zeros(4), &mut rng).unwrap();
        assert_eq!(rng.draws(), 6);
    }

    #[test]
    fn disagreeing_edges_close() {
        let g = WeightedGraph::uniform(2, &[(0, 1)], lam(0.9)).unwrap();
        let mut rng = RngStream::new(2, 0);
        let x = SpinConfig::parse("+-").unwrap();
        for _ in 0..20 {
            assert!(!spins_to_rc(&g, &x, &mut rng).unwrap().get(0));
        }
        let inf = WeightedGraph::uniform(2, &[(0, 1)], Coupling::INFINITE).unwrap();
        assert!(
            spins_to_rc(&inf, &SpinConfig::parse("++").unwrap(), &mut rng)
                .unwrap()
                .get(0)
        );
        assert!(matches!(
            spins_to_rc(&inf, &x, &mut rng),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn infinite_triangle_composite_is_constant() {
        let g = triangle(Coupling::INFINITE);
        let mut rng = RngStream::new(4, 0);
        for y in [SubgraphConfig::zeros(3), SubgraphConfig::ones(3)] {
            let x = subs_to_spins(&g, &y, &mut rng).unwrap();
            assert!(x.spins().iter().all(|&s| s == x.spin(0)));
        }
    }

    #[test]
    fn forest_covers_each_component() {
        let g = WeightedGraph::uniform(6, &[(0, 1), (1, 2), (0, 2), (3, 4)], lam(0.5)).unwrap();
        let f = SpanningForest::of_open_edges(&g, &[true, true, true, true]);
        assert_eq!(f.in_forest.iter().filter(|&&b| b).count(), 3);
        assert_eq!(f.discovery.len(), 6);
        assert_eq!(f.parent_edge.iter().filter(|p| p.is_none()).count(), 3);
    }

    #[test]
    fn same_world_reduce_is_identity() {
        let g = triangle(lam(0.5));
        let mut rng = RngStream::new(4, 0);
        let c = Configuration::Rc(RcConfig::ones(3));
        assert_eq!(reduce(&g, &c, World::Rc, &mut rng).unwrap(), c);
        let out = reduce(
            &g,
            &Configuration::Rc(RcConfig::zeros(3)),
            World::Subs,
            &mut rng,
        )
        .unwrap();
        assert_eq!(out, Configuration::Subs(SubgraphConfig::zeros(3)));
    }
}
