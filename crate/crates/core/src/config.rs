//! Configurations of the three worlds and their unnormalized weights.
//!
//! Spins live on nodes, subgraph and random-cluster states on edges, aligned
//! with the graph's node and edge ordering. Every configuration has a text
//! form (`+-+` for spins, `011` for edge sets) and an enumeration index. The
//! index orders configurations lexicographically by their text form, so the
//! first character is the most significant bit and `+` sorts before `-`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::union_find::UnionFind;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpinConfig(Vec<i8>);

impl SpinConfig {
    pub fn new(spins: Vec<i8>) -> Result<Self> {
        if let Some(i) = spins.iter().position(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidConfig(format!(
                "spin at node {i} is {}, expected +1 or -1",
                spins[i]
            )));
        }
        Ok(SpinConfig(spins))
    }

    pub fn all_up(n: usize) -> Self {
        SpinConfig(vec![1; n])
    }

    pub fn spins(&self) -> &[i8] {
        &self.0
    }

    pub fn spin(&self, node: usize) -> i8 {
        self.0[node]
    }

    pub fn set(&mut self, node: usize, spin: i8) {
        debug_assert!(spin == 1 || spin == -1);
        self.0[node] = spin;
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn flipped(&self) -> Self {
        SpinConfig(self.0.iter().map(|s| -s).collect())
    }

    pub fn magnetization(&self) -> f64 {
        if self.0.is_empty() {
            return 0.0;
        }
        self.0.iter().map(|&s| f64::from(s)).sum::<f64>() / self.0.len() as f64
    }

    pub fn from_index(index: u64, n: usize) -> Self {
        SpinConfig(
            (0..n)
                .map(|i| {
                    if (index >> (n - 1 - i)) & 1 == 1 {
                        -1
                    } else {
                        1
                    }
                })
                .collect(),
        )
    }

    pub fn index(&self) -> u64 {
        self.0
            .iter()
            .fold(0, |acc, &s| (acc << 1) | u64::from(s == -1))
    }

    pub fn parse(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                other => Err(Error::InvalidConfig(format!(
                    "unexpected character `{other}` in spin string"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(SpinConfig)
    }

    pub fn check(&self, g: &WeightedGraph) -> Result<()> {
        if self.len() != g.num_nodes() {
            return Err(Error::InvalidConfig(format!(
                "spin configuration has {} entries, graph has {} nodes",
                self.len(),
                g.num_nodes()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for SpinConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.0 {
            f.write_str(if s == 1 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

impl Serialize for SpinConfig {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.0.iter())
    }
}

macro_rules! edge_config {
    ($(#[$meta:meta])* $name:ident, $what:literal) => {
        $(#[$meta])*
        #[derive(Clone, Debug, PartialEq, Eq, Hash)]
        pub struct $name(Vec<bool>);

        impl $name {
            pub fn new(bits: Vec<bool>) -> Self {
                $name(bits)
            }

            pub fn zeros(m: usize) -> Self {
                $name(vec![false; m])
            }

            pub fn ones(m: usize) -> Self {
                $name(vec![true; m])
            }

            pub fn bits(&self) -> &[bool] {
                &self.0
            }

            pub fn get(&self, edge: usize) -> bool {
                self.0[edge]
            }

            pub fn set(&mut self, edge: usize, value: bool) {
                self.0[edge] = value;
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn count_ones(&self) -> usize {
                self.0.iter().filter(|&&b| b).count()
            }

            /// Pointwise `self <= other`.
            pub fn le(&self, other: &[bool]) -> bool {
                self.0.len() == other.len()
                    && self.0.iter().zip(other).all(|(&a, &b)| !a || b)
            }

            pub fn from_index(index: u64, m: usize) -> Self {
                $name((0..m).map(|i| (index >> (m - 1 - i)) & 1 == 1).collect())
            }

            pub fn index(&self) -> u64 {
                self.0.iter().fold(0, |acc, &b| (acc << 1) | u64::from(b))
            }

            pub fn parse(s: &str) -> Result<Self> {
                s.trim()
                    .chars()
                    .map(|c| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        other => Err(Error::InvalidConfig(format!(
                            "unexpected character `{other}` in {} string",
                            $what
                        ))),
                    })
                    .collect::<Result<Vec<_>>>()
                    .map($name)
            }

            pub fn check(&self, g: &WeightedGraph) -> Result<()> {
                if self.len() != g.num_edges() {
                    return Err(Error::InvalidConfig(format!(
                        "{} configuration has {} entries, graph has {} edges",
                        $what,
                        self.len(),
                        g.num_edges()
                    )));
                }
                Ok(())
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                for &b in &self.0 {
                    f.write_str(if b { "1" } else { "0" })?;
                }
                Ok(())
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(
                &self,
                serializer: S,
            ) -> std::result::Result<S::Ok, S::Error> {
                serializer.collect_seq(self.0.iter().map(|&b| u8::from(b)))
            }
        }
    };
}

edge_config!(
    /// Edge subset of the subgraphs world: `true` means the edge is in the subgraph.
    SubgraphConfig,
    "subgraph"
);
edge_config!(
    /// Random-cluster state: `true` means the edge is open.
    RcConfig,
    "random-cluster"
);

/// Partition of the nodes into clusters of open edges. Each node is labelled
/// by the smallest node id in its cluster.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterPartition {
    pub component_id: Vec<usize>,
    pub count: usize,
}

impl ClusterPartition {
    /// Cluster representatives in ascending order.
    pub fn representatives(&self) -> impl Iterator<Item = usize> + '_ {
        self.component_id
            .iter()
            .enumerate()
            .filter(|&(i, &c)| i == c)
            .map(|(i, _)| i)
    }
}

pub fn clusters(g: &WeightedGraph, z: &RcConfig) -> Result<ClusterPartition> {
    z.check(g)?;
    Ok(clusters_unchecked(g, z.bits()))
}

pub(crate) fn clusters_unchecked(g: &WeightedGraph, open: &[bool]) -> ClusterPartition {
    let n = g.num_nodes();
    let mut uf = UnionFind::new(n);
    for (e, edge) in g.edges().iter().enumerate() {
        if open[e] {
            uf.union(edge.u, edge.v);
        }
    }
    let mut smallest = vec![usize::MAX; n];
    for i in 0..n {
        let r = uf.find(i);
        if smallest[r] == usize::MAX {
            smallest[r] = i;
        }
    }
    let component_id: Vec<usize> = (0..n).map(|i| smallest[uf.find(i)]).collect();
    ClusterPartition {
        component_id,
        count: uf.num_sets(),
    }
}

/// Per-node degree parity (`true` = odd) of `y`, counting only edges in
/// `restricted_to` when given.
pub fn degree_parity(
    g: &WeightedGraph,
    y: &SubgraphConfig,
    restricted_to: Option<&[bool]>,
) -> Result<Vec<bool>> {
    y.check(g)?;
    if let Some(mask) = restricted_to {
        if mask.len() != g.num_edges() {
            return Err(Error::InvalidConfig(format!(
                "edge restriction has {} entries, graph has {} edges",
                mask.len(),
                g.num_edges()
            )));
        }
    }
    let mut odd = vec![false; g.num_nodes()];
    for (e, edge) in g.edges().iter().enumerate() {
        if y.get(e) && restricted_to.is_none_or(|m| m[e]) {
            odd[edge.u] ^= true;
            odd[edge.v] ^= true;
        }
    }
    Ok(odd)
}

pub(crate) fn all_even(g: &WeightedGraph, bits: &[bool]) -> bool {
    let mut odd = vec![false; g.num_nodes()];
    for (e, edge) in g.edges().iter().enumerate() {
        if bits[e] {
            odd[edge.u] ^= true;
            odd[edge.v] ^= true;
        }
    }
    !odd.contains(&true)
}

/// Edge product of the spins weight, with infinite couplings acting as
/// agreement indicators.
pub fn weight_spins(g: &WeightedGraph, x: &SpinConfig) -> Result<f64> {
    x.check(g)?;
    let mut w = 1.0;
    for e in g.edges() {
        let s = f64::from(x.spin(e.u) * x.spin(e.v));
        if e.coupling.is_infinite() {
            if s < 0.0 {
                return Ok(0.0);
            }
        } else {
            w *= (e.coupling.beta() * s).exp();
        }
    }
    Ok(w)
}

/// Natural log of [`weight_spins`]; `-inf` for zero weight.
pub fn log_weight_spins(g: &WeightedGraph, x: &SpinConfig) -> Result<f64> {
    x.check(g)?;
    let mut lw = 0.0;
    for e in g.edges() {
        let s = f64::from(x.spin(e.u) * x.spin(e.v));
        if e.coupling.is_infinite() {
            if s < 0.0 {
                return Ok(f64::NEG_INFINITY);
            }
        } else {
            lw += e.coupling.beta() * s;
        }
    }
    Ok(lw)
}

/// Spins weight including the node factors of the external field. Any sign
/// pattern is accepted here.
pub fn weight_spins_field(g: &WeightedGraph, x: &SpinConfig) -> Result<f64> {
    let edge_part = weight_spins(g, x)?;
    if edge_part == 0.0 {
        return Ok(0.0);
    }
    let Some(field) = g.field() else {
        return Ok(edge_part);
    };
    let mut w = edge_part;
    for (i, &b) in field.iter().enumerate() {
        let s = x.spin(i);
        if b == f64::INFINITY {
            if s != 1 {
                return Ok(0.0);
            }
        } else if b == f64::NEG_INFINITY {
            if s != -1 {
                return Ok(0.0);
            }
        } else {
            w *= (b * f64::from(s)).exp();
        }
    }
    Ok(w)
}

/// `prod lambda(e)` over the edges of `y` when every node has even degree in
/// `y`, zero otherwise.
pub fn weight_subs(g: &WeightedGraph, y: &SubgraphConfig) -> Result<f64> {
    y.check(g)?;
    if !all_even(g, y.bits()) {
        return Ok(0.0);
    }
    Ok(g.edges()
        .iter()
        .zip(y.bits())
        .filter(|&(_, &b)| b)
        .map(|(e, _)| e.coupling.lambda())
        .product())
}

pub fn log_weight_subs(g: &WeightedGraph, y: &SubgraphConfig) -> Result<f64> {
    y.check(g)?;
    if !all_even(g, y.bits()) {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(g.edges()
        .iter()
        .zip(y.bits())
        .filter(|&(_, &b)| b)
        .map(|(e, _)| e.coupling.lambda().ln())
        .sum())
}

/// `prod_{open} p * prod_{closed} (1 - p) * 2^{#clusters}`.
pub fn weight_rc(g: &WeightedGraph, z: &RcConfig) -> Result<f64> {
    z.check(g)?;
    let mut w = 1.0;
    for (e, &open) in g.edges().iter().zip(z.bits()) {
        w *= if open {
            e.coupling.p()
        } else {
            e.coupling.one_minus_p()
        };
        if w == 0.0 {
            return Ok(0.0);
        }
    }
    let k = clusters_unchecked(g, z.bits()).count;
    Ok(w * 2f64.powi(k as i32))
}

pub fn log_weight_rc(g: &WeightedGraph, z: &RcConfig) -> Result<f64> {
    z.check(g)?;
    let mut lw = 0.0;
    for (e, &open) in g.edges().iter().zip(z.bits()) {
        lw += if open {
            e.coupling.p().ln()
        } else {
            -2.0 * e.coupling.beta()
        };
    }
    if lw == f64::NEG_INFINITY {
        return Ok(lw);
    }
    let k = clusters_unchecked(g, z.bits()).count;
    Ok(lw + k as f64 * std::f64::consts::LN_2)
}

/// The three formulations of the model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum World {
    Spins,
    Subs,
    Rc,
}

impl World {
    pub fn name(self) -> &'static str {
        match self {
            World::Spins => "spins",
            World::Subs => "subs",
            World::Rc => "rc",
        }
    }

    /// Number of sites a configuration of this world assigns.
    pub fn size(self, g: &WeightedGraph) -> usize {
        match self {
            World::Spins => g.num_nodes(),
            World::Subs | World::Rc => g.num_edges(),
        }
    }
}

impl fmt::Display for World {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for World {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl std::str::FromStr for World {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spins" => Ok(World::Spins),
            "subs" => Ok(World::Subs),
            "rc" => Ok(World::Rc),
            other => Err(Error::InvalidParameter(format!(
                "unknown world `{other}` (expected spins, subs or rc)"
            ))),
        }
    }
}

/// A configuration of any world.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(untagged)]
pub enum Configuration {
    Spins(SpinConfig),
    Subs(SubgraphConfig),
    Rc(RcConfig),
}

impl Configuration {
    pub fn world(&self) -> World {
        match self {
            Configuration::Spins(_) => World::Spins,
            Configuration::Subs(_) => World::Subs,
            Configuration::Rc(_) => World::Rc,
        }
    }

    pub fn index(&self) -> u64 {
        match self {
            Configuration::Spins(x) => x.index(),
            Configuration::Subs(y) => y.index(),
            Configuration::Rc(z) => z.index(),
        }
    }

    pub fn from_index(world: World, index: u64, g: &WeightedGraph) -> Self {
        let len = world.size(g);
        match world {
            World::Spins => Configuration::Spins(SpinConfig::from_index(index, len)),
            World::Subs => Configuration::Subs(SubgraphConfig::from_index(index, len)),
            World::Rc => Configuration::Rc(RcConfig::from_index(index, len)),
        }
    }

    /// Parses the text form (`+-` or `01` strings) for the given world.
    pub fn parse(world: World, s: &str) -> Result<Self> {
        Ok(match world {
            World::Spins => Configuration::Spins(SpinConfig::parse(s)?),
            World::Subs => Configuration::Subs(SubgraphConfig::parse(s)?),
            World::Rc => Configuration::Rc(RcConfig::parse(s)?),
        })
    }

    /// Unnormalized weight in the configuration's own world.
    pub fn weight(&self, g: &WeightedGraph) -> Result<f64> {
        match self {
            Configuration::Spins(x) => weight_spins(g, x),
            Configuration::Subs(y) => weight_subs(g, y),
            Configuration::Rc(z) => weight_rc(g, z),
        }
    }

    pub fn log_weight(&self, g: &WeightedGraph) -> Result<f64> {
        match self {
            Configuration::Spins(x) => log_weight_spins(g, x),
            Configuration::Subs(y) => log_weight_subs(g, y),
            Configuration::Rc(z) => log_weight_rc(g, z),
        }
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Configuration::Spins(x) => x.fmt(f),
            Configuration::Subs(y) => y.fmt(f),
            Configuration::Rc(z) => z.fmt(f),
        }
    }
}
