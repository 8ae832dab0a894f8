//! Graph and configuration files.
//!
//! Text graph format, one record per line, `#` starts a comment:
//!
//! ```text
//! param beta          # or lambda, or p
//! nodes 4             # optional; otherwise the largest id seen + 1
//! field 0 inf         # optional per-node field, inf / -inf allowed
//! 0 1 0.5             # edge i j value
//! ```
//!
//! An edge value of `inf` is only accepted under `param beta`. The JSON form
//! carries the same fields:
//! `{"param": "beta", "nodes": 4, "edges": [[0, 1, 0.5]], "field": [[0, "inf"]]}`.

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::{Configuration, World};
use crate::error::{Error, Result};
use crate::graph::{Coupling, Param, WeightedGraph};

fn parse_value(token: &str) -> Option<f64> {
    match token {
        "inf" | "+inf" | "infinity" | "+infinity" => Some(f64::INFINITY),
        "-inf" | "-infinity" => Some(f64::NEG_INFINITY),
        other => other.parse::<f64>().ok().filter(|v| v.is_finite()),
    }
}

pub fn format_value(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".to_string()
    } else if v == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        v.to_string()
    }
}

struct GraphBuilder {
    param: Param,
    nodes: Option<usize>,
    // (line, i, j, value)
    edges: Vec<(usize, usize, usize, f64)>,
    field: Vec<(usize, usize, f64)>,
}

impl GraphBuilder {
    fn build(self) -> Result<WeightedGraph> {
        let max_id = self
            .edges
            .iter()
            .flat_map(|&(_, i, j, _)| [i, j])
            .chain(self.field.iter().map(|&(_, i, _)| i))
            .max()
            .map_or(0, |m| m + 1);
        let n = self.nodes.unwrap_or(0).max(max_id);
        if let Some(declared) = self.nodes {
            if declared < max_id {
                return Err(Error::Parse {
                    line: 0,
                    msg: format!("declared {declared} nodes but ids reach {}", max_id - 1),
                });
            }
        }
        let mut seen = HashSet::new();
        let mut edges = Vec::with_capacity(self.edges.len());
        for (line, i, j, value) in self.edges {
            if i == j {
                return Err(Error::Parse {
                    line,
                    msg: format!("self-loop at node {i}"),
                });
            }
            if !seen.insert((i.min(j), i.max(j))) {
                return Err(Error::Parse {
                    line,
                    msg: format!("parallel edge ({i}, {j})"),
                });
            }
            if value.is_infinite() && self.param != Param::Beta {
                return Err(Error::Parse {
                    line,
                    msg: format!("`inf` is only allowed with param beta, not {}", self.param),
                });
            }
            let c = Coupling::from_param(self.param, value).map_err(|e| Error::Parse {
                line,
                msg: e.to_string(),
            })?;
            edges.push((i, j, c));
        }
        let mut g = WeightedGraph::new(n, edges)?;
        if !self.field.is_empty() {
            let mut b = vec![0.0; n];
            for &(_, i, v) in &self.field {
                b[i] = v;
            }
            g = g.with_field(b)?;
        }
        Ok(g)
    }
}

pub fn parse_graph_text(text: &str) -> Result<WeightedGraph> {
    let mut param = None;
    let mut nodes = None;
    let mut edges = Vec::new();
    let mut field = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let err = |msg: String| Error::Parse { line, msg };
        let index = |t: &str| {
            t.parse::<usize>()
                .map_err(|_| err(format!("bad node id `{t}`")))
        };
        match tokens.as_slice() {
            ["param", p] => {
                if param.is_some() {
                    return Err(err("duplicate param header".into()));
                }
                param = Some(p.parse::<Param>().map_err(|e| err(e.to_string()))?);
            }
            ["nodes", n] => nodes = Some(index(n)?),
            ["field", i, v] => {
                let v = parse_value(v).ok_or_else(|| err(format!("bad field value `{v}`")))?;
                field.push((line, index(i)?, v));
            }
            [i, j, v] => {
                if param.is_none() {
                    return Err(err("edge before `param` header".into()));
                }
                let v = parse_value(v).ok_or_else(|| err(format!("bad edge value `{v}`")))?;
                edges.push((line, index(i)?, index(j)?, v));
            }
            _ => return Err(err(format!("unrecognized record `{content}`"))),
        }
    }
    let param = param.ok_or(Error::Parse {
        line: 0,
        msg: "missing `param` header".into(),
    })?;
    GraphBuilder {
        param,
        nodes,
        edges,
        field,
    }
    .build()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum JsonNumber {
    Num(f64),
    Text(String),
}

impl JsonNumber {
    fn value(&self) -> Option<f64> {
        match self {
            JsonNumber::Num(v) => Some(*v),
            JsonNumber::Text(s) => parse_value(s),
        }
    }

    fn from_value(v: f64) -> Self {
        if v.is_finite() {
            JsonNumber::Num(v)
        } else {
            JsonNumber::Text(format_value(v))
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct GraphJson {
    param: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    nodes: Option<usize>,
    edges: Vec<(usize, usize, JsonNumber)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    field: Vec<(usize, JsonNumber)>,
}

pub fn parse_graph_json(text: &str) -> Result<WeightedGraph> {
    let doc: GraphJson = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        msg: e.to_string(),
    })?;
    let param = doc.param.parse::<Param>().map_err(|e| Error::Parse {
        line: 0,
        msg: e.to_string(),
    })?;
    let bad = |what: &str| Error::Parse {
        line: 0,
        msg: format!("bad {what} value"),
    };
    let edges = doc
        .edges
        .iter()
        .map(|(i, j, v)| Ok((0, *i, *j, v.value().ok_or_else(|| bad("edge"))?)))
        .collect::<Result<Vec<_>>>()?;
    let field = doc
        .field
        .iter()
        .map(|(i, v)| Ok((0, *i, v.value().ok_or_else(|| bad("field"))?)))
        .collect::<Result<Vec<_>>>()?;
    GraphBuilder {
        param,
        nodes: doc.nodes,
        edges,
        field,
    }
    .build()
}

/// Parses either format, picking JSON when the first non-blank character is `{`.
pub fn parse_graph(text: &str) -> Result<WeightedGraph> {
    if text.trim_start().starts_with('{') {
        parse_graph_json(text)
    } else {
        parse_graph_text(text)
    }
}

pub fn read_graph(path: &Path) -> Result<WeightedGraph> {
    parse_graph(&std::fs::read_to_string(path)?)
}

/// Text form of `g` with couplings written in `param`.
pub fn write_graph_text(g: &WeightedGraph, param: Param) -> String {
    let mut out = format!("param {param}\nnodes {}\n", g.num_nodes());
    if let Some(field) = g.field() {
        for (i, &b) in field.iter().enumerate() {
            if b != 0.0 {
                out.push_str(&format!("field {i} {}\n", format_value(b)));
            }
        }
    }
    for e in g.edges() {
        out.push_str(&format!(
            "{} {} {}\n",
            e.u,
            e.v,
            format_value(e.coupling.value(param))
        ));
    }
    out
}

pub fn write_graph_json(g: &WeightedGraph, param: Param) -> String {
    let doc = GraphJson {
        param: param.to_string(),
        nodes: Some(g.num_nodes()),
        edges: g
            .edges()
            .iter()
            .map(|e| (e.u, e.v, JsonNumber::from_value(e.coupling.value(param))))
            .collect(),
        field: g
            .field()
            .map(|b| {
                b.iter()
                    .enumerate()
                    .filter(|&(_, &v)| v != 0.0)
                    .map(|(i, &v)| (i, JsonNumber::from_value(v)))
                    .collect()
            })
            .unwrap_or_default(),
    };
    serde_json::to_string_pretty(&doc).expect("graph json serializes") + "\n"
}

/// Reads a configuration given as a JSON array (`[1,-1,1]` or `[0,1,1]`) or
/// as a text string (`+-+` or `011`).
pub fn parse_config(world: World, text: &str) -> Result<Configuration> {
    let trimmed = text.trim();
    if trimmed.starts_with('[') {
        let values: Vec<i64> = serde_json::from_str(trimmed)?;
        let s: String = values
            .iter()
            .map(|&v| match (world, v) {
                (World::Spins, 1) => Ok('+'),
                (World::Spins, -1) => Ok('-'),
                (World::Subs | World::Rc, 0) => Ok('0'),
                (World::Subs | World::Rc, 1) => Ok('1'),
                _ => Err(Error::InvalidConfig(format!(
                    "value {v} is not valid in the {world} world"
                ))),
            })
            .collect::<Result<_>>()?;
        Configuration::parse(world, &s)
    } else {
        Configuration::parse(world, trimmed.trim_matches('"'))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let text = "# triangle\nparam beta\n0 1 0.5\n1 2 inf  # hard\n0 2 0\nfield 1 2.5\n";
        let g = parse_graph_text(text).unwrap();
        assert_eq!(g.num_nodes(), 3);
        assert!(g.edge(1).coupling.is_infinite());
        assert_eq!(g.field().unwrap(), &[0.0, 2.5, 0.0]);
        let again = parse_graph(&write_graph_text(&g, Param::Beta)).unwrap();
        assert_eq!(again.edges(), g.edges());
        assert_eq!(again.field(), g.field());
    }

    #[test]
    fn json_round_trip() {
        let g = parse_graph_text("param beta\nnodes 4\n0 1 0.25\n2 3 inf\nfield 0 -inf\n").unwrap();
        let json = write_graph_json(&g, Param::Beta);
        let again = parse_graph(&json).unwrap();
        assert_eq!(again.num_nodes(), 4);
        assert_eq!(again.edges(), g.edges());
        assert_eq!(again.field(), g.field());
    }

    #[test]
    fn conversions_between_params() {
        let g = parse_graph_text("param beta\n0 1 0\n1 2 inf\n0 2 0.6931471805599453\n").unwrap();
        let lam = write_graph_text(&g, Param::Lambda);
        assert!(lam.contains("0 1 0\n"));
        let p = write_graph_text(&g, Param::P);
        assert!(p.contains("1 2 1\n"), "{p}");
        assert!(p.contains("0 2 0.75\n"), "{p}");
        let back = parse_graph(&p).unwrap();
        assert!(back.edge(1).coupling.is_infinite());
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let cases = [
            ("param beta\n0 1 x\n", 2),
            ("param beta\n0 1 1\n1 0 2\n", 3),
            ("param lambda\n0 1 inf\n", 2),
            ("param p\n0 1 1.5\n", 2),
            ("0 1 1\n", 1),
            ("param beta\n0 0 1\n", 2),
            ("param beta\nwhat is this\n", 2),
        ];
        for (text, line) in cases {
            match parse_graph_text(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
        assert!(matches!(
            parse_graph_text("# nothing\n"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn configs_from_text_and_json() {
        assert_eq!(
            parse_config(World::Spins, "[1,-1]").unwrap().to_string(),
            "+-"
        );
        assert_eq!(
            parse_config(World::Rc, "0110\n").unwrap().to_string(),
            "0110"
        );
        assert_eq!(
            parse_config(World::Subs, "[0, 1]").unwrap().to_string(),
            "01"
        );
        assert!(parse_config(World::Subs, "[2]").is_err());
        assert!(parse_config(World::Spins, "[0]").is_err());
    }
}
