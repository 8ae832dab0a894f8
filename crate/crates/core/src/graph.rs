//! Weighted graphs, coupling parameterizations and the unidirectional field
//! transformation.
//!
//! A coupling is stored as its inverse temperature `beta`, which may be
//! `+inf`. The other two views are derived on demand:
//!
//! ```text
//! lambda = tanh(beta)            (tanh(inf) = 1)
//! p      = 1 - exp(-2 beta)      (exp(-inf) = 0)
//! ```

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::config::SpinConfig;
use crate::error::{Error, Result};

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_nan() || beta < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "beta must be nonnegative or +inf, got {beta}"
        )));
    }
    Ok(())
}

/// `tanh(beta)`, exactly 1 at `+inf`.
pub fn beta_to_lambda(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    Ok(if beta.is_infinite() { 1.0 } else { beta.tanh() })
}

/// `1 - exp(-2 beta)`, exactly 1 at `+inf`.
pub fn beta_to_p(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    Ok(if beta.is_infinite() {
        1.0
    } else {
        -(-2.0 * beta).exp_m1()
    })
}

/// Ferromagnetic edge coupling.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Coupling {
    beta: f64,
}

impl Coupling {
    pub const ZERO: Coupling = Coupling { beta: 0.0 };
    pub const INFINITE: Coupling = Coupling {
        beta: f64::INFINITY,
    };

    pub fn from_beta(beta: f64) -> Result<Self> {
        check_beta(beta)?;
        Ok(Coupling { beta })
    }

    pub fn from_lambda(lambda: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidParameter(format!(
                "lambda must lie in [0, 1], got {lambda}"
            )));
        }
        let beta = if lambda == 1.0 {
            f64::INFINITY
        } else {
            lambda.atanh()
        };
        Ok(Coupling { beta })
    }

    pub fn from_p(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!(
                "p must lie in [0, 1], got {p}"
            )));
        }
        let beta = if p == 1.0 {
            f64::INFINITY
        } else {
            -0.5 * (-p).ln_1p()
        };
        Ok(Coupling { beta })
    }

    pub fn from_param(param: Param, value: f64) -> Result<Self> {
        match param {
            Param::Beta => Self::from_beta(value),
            Param::Lambda => Self::from_lambda(value),
            Param::P => Self::from_p(value),
        }
    }

    pub fn beta(self) -> f64 {
        self.beta
    }

    pub fn lambda(self) -> f64 {
        if self.beta.is_infinite() {
            1.0
        } else {
            self.beta.tanh()
        }
    }

    pub fn p(self) -> f64 {
        if self.beta.is_infinite() {
            1.0
        } else {
            -(-2.0 * self.beta).exp_m1()
        }
    }

    /// `1 - p = exp(-2 beta)`, computed without cancellation.
    pub fn one_minus_p(self) -> f64 {
        if self.beta.is_infinite() {
            0.0
        } else {
            (-2.0 * self.beta).exp()
        }
    }

    pub fn value(self, param: Param) -> f64 {
        match param {
            Param::Beta => self.beta(),
            Param::Lambda => self.lambda(),
            Param::P => self.p(),
        }
    }

    pub fn is_infinite(self) -> bool {
        self.beta.is_infinite()
    }
}

/// Which parameterization a graph file uses for its couplings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Param {
    Beta,
    Lambda,
    P,
}

impl FromStr for Param {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "beta" => Ok(Param::Beta),
            "lambda" => Ok(Param::Lambda),
            "p" => Ok(Param::P),
            other => Err(Error::InvalidParameter(format!(
                "unknown parameterization `{other}` (expected beta, lambda or p)"
            ))),
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Param::Beta => "beta",
            Param::Lambda => "lambda",
            Param::P => "p",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub coupling: Coupling,
}

impl Edge {
    pub fn other(&self, node: usize) -> usize {
        if node == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Simple undirected graph with per-edge couplings and an optional per-node
/// external field. Immutable once built.
#[derive(Clone, Debug)]
pub struct WeightedGraph {
    num_nodes: usize,
    edges: Vec<Edge>,
    field: Option<Vec<f64>>,
    // node -> [(neighbor, edge index)]
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl WeightedGraph {
    /// Builds a graph, storing each edge with `u < v`. Self-loops, parallel
    /// edges and out-of-range endpoints are rejected.
    pub fn new<I>(num_nodes: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Coupling)>,
    {
        let mut stored = Vec::new();
        let mut seen = HashMap::new();
        let mut adjacency = vec![Vec::new(); num_nodes];
        for (a, b, coupling) in edges {
            if a >= num_nodes || b >= num_nodes {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a}, {b}) references a node outside 0..{num_nodes}"
                )));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at node {a}")));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if seen.insert((u, v), stored.len()).is_some() {
                return Err(Error::InvalidGraph(format!("parallel edge ({u}, {v})")));
            }
            adjacency[u].push((v, stored.len()));
            adjacency[v].push((u, stored.len()));
            stored.push(Edge { u, v, coupling });
        }
        Ok(WeightedGraph {
            num_nodes,
            edges: stored,
            field: None,
            adjacency,
        })
    }

    /// Same coupling on every listed edge.
    pub fn uniform(num_nodes: usize, pairs: &[(usize, usize)], coupling: Coupling) -> Result<Self> {
        Self::new(num_nodes, pairs.iter().map(|&(u, v)| (u, v, coupling)))
    }

    /// Attaches an external field. Entries may be `+-inf` but not NaN.
    pub fn with_field(mut self, field: Vec<f64>) -> Result<Self> {
        if field.len() != self.num_nodes {
            return Err(Error::InvalidGraph(format!(
                "field has {} entries for {} nodes",
                field.len(),
                self.num_nodes
            )));
        }
        if let Some(i) = field.iter().position(|b| b.is_nan()) {
            return Err(Error::InvalidParameter(format!("field at node {i} is NaN")));
        }
        self.field = Some(field);
        Ok(self)
    }

    /// Copy of this graph with every coupling replaced by `f(edge index, old)`.
    pub fn map_couplings(&self, mut f: impl FnMut(usize, Coupling) -> Coupling) -> Self {
        let mut g = self.clone();
        for (k, e) in g.edges.iter_mut().enumerate() {
            e.coupling = f(k, e.coupling);
        }
        g
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> &Edge {
        &self.edges[index]
    }

    pub fn field(&self) -> Option<&[f64]> {
        self.field.as_deref()
    }

    /// True when there is no field or every entry is zero.
    pub fn is_field_free(&self) -> bool {
        self.field
            .as_ref()
            .is_none_or(|b| b.iter().all(|&x| x == 0.0))
    }

    /// `(neighbor, edge index)` pairs incident to `node`.
    pub fn neighbors(&self, node: usize) -> &[(usize, usize)] {
        &self.adjacency[node]
    }

    pub fn find_edge(&self, a: usize, b: usize) -> Option<usize> {
        self.adjacency
            .get(a)?
            .iter()
            .find(|&&(n, _)| n == b)
            .map(|&(_, e)| e)
    }
}

/// Correspondence between the nodes of a graph with a unidirectional field and
/// the field-free graph produced by [`reduce_unidirectional_field`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeMap {
    /// `node_of[i]` is the node of the transformed graph standing for original node `i`.
    pub node_of: Vec<usize>,
    /// Node whose spin is pinned to `sign` when lifting samples back.
    pub anchor: Option<usize>,
    pub sign: i8,
}

impl NodeMap {
    /// Lifts a spins configuration of the field-free graph back to the
    /// original nodes, flipping globally so the anchor carries `sign`.
    pub fn lift(&self, x: &SpinConfig) -> SpinConfig {
        let flip = match self.anchor {
            Some(a) if x.spin(a) != self.sign => -1,
            _ => 1,
        };
        SpinConfig::new(self.node_of.iter().map(|&n| x.spin(n) * flip).collect())
            .expect("lifted spins are +-1")
    }
}

/// Removes a unidirectional field by adding a dummy node (or merging the
/// infinite-field nodes into one) joined to every field node `i` by an edge of
/// coupling `|B(i)|`. With the anchor pinned to the field's sign, the edge
/// factor `exp(|B(i)| x(i) x(anchor))` equals the node factor `exp(B(i) x(i))`.
///
/// Edges that become parallel after merging are combined by adding their
/// betas; edges that collapse to a loop are dropped.
pub fn reduce_unidirectional_field(g: &WeightedGraph) -> Result<(WeightedGraph, NodeMap)> {
    let n = g.num_nodes();
    let field = match g.field() {
        Some(b) if b.iter().any(|&x| x != 0.0) => b,
        _ => {
            let stripped = WeightedGraph::new(n, g.edges().iter().map(|e| (e.u, e.v, e.coupling)))?;
            return Ok((
                stripped,
                NodeMap {
                    node_of: (0..n).collect(),
                    anchor: None,
                    sign: 1,
                },
            ));
        }
    };
    let sign: i8 = if field.iter().all(|&b| b >= 0.0) {
        1
    } else if field.iter().all(|&b| b <= 0.0) {
        -1
    } else {
        return Err(Error::UnsupportedField(
            "field mixes positive and negative entries".into(),
        ));
    };

    let mut node_of = Vec::with_capacity(n);
    let mut anchor = None;
    let mut next = 0;
    for &b in field {
        if b.is_infinite() {
            match anchor {
                Some(a) => node_of.push(a),
                None => {
                    anchor = Some(next);
                    node_of.push(next);
                    next += 1;
                }
            }
        } else {
            node_of.push(next);
            next += 1;
        }
    }
    let anchor = match anchor {
        Some(a) => a,
        None => {
            next += 1;
            next - 1
        }
    };
    let num_nodes = next;

    let mut order: Vec<(usize, usize)> = Vec::new();
    let mut beta: HashMap<(usize, usize), f64> = HashMap::new();
    let mut add = |a: usize, b: usize, w: f64| {
        if a == b {
            return;
        }
        let key = if a < b { (a, b) } else { (b, a) };
        beta.entry(key).and_modify(|x| *x += w).or_insert_with(|| {
            order.push(key);
            w
        });
    };
    for e in g.edges() {
        add(node_of[e.u], node_of[e.v], e.coupling.beta());
    }
    for (i, &b) in field.iter().enumerate() {
        if b != 0.0 && b.is_finite() {
            add(node_of[i], anchor, b.abs());
        }
    }
    let edges = order
        .iter()
        .map(|&(u, v)| Coupling::from_beta(beta[&(u, v)]).map(|c| (u, v, c)))
        .collect::<Result<Vec<_>>>()?;
    let reduced = WeightedGraph::new(num_nodes, edges)?;
    Ok((
        reduced,
        NodeMap {
            node_of,
            anchor: Some(anchor),
            sign,
        },
    ))
}
