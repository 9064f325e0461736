//! JSON graph files.
//!
//! ```json
//! { "dim": 3, "numeric": "exact",
//!   "nodes": [ { "s": ["C"], "x": ["0", "1/2", "0"] },
//!              { "s": ["C"], "v": [["1", "0", "0"]], "x": ["1", "0", "0"] } ],
//!   "edges": [[0, 1]] }
//! ```
//!
//! Exact components are `"p/q"` strings (integers may also be written as
//! plain JSON integers); float components are JSON numbers. `"cutoff": r`
//! may replace `"edges"`, in which case edges come from the radial cutoff.
//! A pair file holds `{"graphs": [g1, g2]}` or just `[g1, g2]`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{GwlError, Result};
use crate::graph::{build_radial_graph, GeometricGraph, PointRecord};
use crate::linalg::Vector;
use crate::numeric::{Num, NumericMode};

#[derive(Clone, Debug, Serialize, Deserialize)]
struct NodeRecord {
    #[serde(default)]
    s: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    v: Vec<Vec<Num>>,
    x: Vec<Num>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct GraphRecord {
    dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    numeric: Option<NumericMode>,
    nodes: Vec<NodeRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    edges: Option<Vec<[usize; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cutoff: Option<Num>,
}

#[derive(Deserialize)]
struct PairRecord {
    graphs: Vec<GraphRecord>,
}

#[derive(Serialize)]
struct PairOut<'a> {
    graphs: [&'a GraphRecord; 2],
}

fn coerce(c: &Num, mode: NumericMode) -> Result<Num> {
    match (c, mode) {
        (Num::Float(f), NumericMode::Exact) => {
            if f.fract() == 0.0 && f.abs() < 1e15 {
                Ok(Num::int(*f as i64))
            } else {
                Err(GwlError::InvalidGraph(format!(
                    "float component {f} in an exact graph; write it as \"p/q\""
                )))
            }
        }
        _ => Ok(c.in_mode(mode)),
    }
}

fn vector(cs: &[Num], dim: usize, mode: NumericMode) -> Result<Vector> {
    if cs.len() != dim {
        return Err(GwlError::DimensionMismatch {
            expected: dim,
            found: cs.len(),
        });
    }
    Ok(Vector::new(cs.iter().map(|c| coerce(c, mode)).collect::<Result<_>>()?))
}

impl GraphRecord {
    fn into_graph(self) -> Result<GeometricGraph> {
        let mode = self.numeric.unwrap_or_else(|| {
            let all_exact = self
                .nodes
                .iter()
                .flat_map(|n| n.x.iter().chain(n.v.iter().flatten()))
                .all(|c| matches!(c, Num::Exact(_)));
            if all_exact {
                NumericMode::Exact
            } else {
                NumericMode::Float
            }
        });
        let mut points = Vec::with_capacity(self.nodes.len());
        for n in &self.nodes {
            points.push(PointRecord {
                scalars: n.s.clone(),
                vectors: n.v.iter().map(|v| vector(v, self.dim, mode)).collect::<Result<_>>()?,
                position: vector(&n.x, self.dim, mode)?,
            });
        }
        match (self.edges, self.cutoff) {
            (Some(_), Some(_)) => Err(GwlError::InvalidGraph("both \"edges\" and \"cutoff\" given".into())),
            (None, Some(r)) => {
                if points.is_empty() {
                    return GeometricGraph::new(self.dim, vec![], vec![], vec![], &[]);
                }
                build_radial_graph(points, &coerce(&r, mode)?)
            }
            (edges, None) => {
                let edges: Vec<(usize, usize)> = edges.unwrap_or_default().iter().map(|e| (e[0], e[1])).collect();
                let (mut s, mut v, mut x) = (Vec::new(), Vec::new(), Vec::new());
                for p in points {
                    s.push(p.scalars);
                    v.push(p.vectors);
                    x.push(p.position);
                }
                GeometricGraph::new(self.dim, s, v, x, &edges)
            }
        }
    }

    fn from_graph(g: &GeometricGraph) -> GraphRecord {
        GraphRecord {
            dim: g.dim(),
            numeric: Some(g.mode()),
            nodes: (0..g.len())
                .map(|i| NodeRecord {
                    s: g.scalars(i).clone(),
                    v: g.vectors(i).iter().map(|v| v.0.clone()).collect(),
                    x: g.position(i).0.clone(),
                })
                .collect(),
            edges: Some(g.edges().into_iter().map(|(i, j)| [i, j]).collect()),
            cutoff: None,
        }
    }
}

pub fn parse_graph(text: &str) -> Result<GeometricGraph> {
    serde_json::from_str::<GraphRecord>(text)?.into_graph()
}

pub fn parse_pair(text: &str) -> Result<(GeometricGraph, GeometricGraph)> {
    let graphs = if text.trim_start().starts_with('[') {
        serde_json::from_str::<Vec<GraphRecord>>(text)?
    } else {
        serde_json::from_str::<PairRecord>(text)?.graphs
    };
    if graphs.len() != 2 {
        return Err(GwlError::InvalidGraph(format!(
            "a pair file holds exactly two graphs, found {}",
            graphs.len()
        )));
    }
    let mut it = graphs.into_iter();
    let g1 = it.next().unwrap().into_graph()?;
    let g2 = it.next().unwrap().into_graph()?;
    g1.check_compatible(&g2)?;
    Ok((g1, g2))
}

pub fn graph_to_json(g: &GeometricGraph) -> String {
    serde_json::to_string_pretty(&GraphRecord::from_graph(g)).expect("graph records serialise")
}

pub fn pair_to_json(g1: &GeometricGraph, g2: &GeometricGraph) -> String {
    let (a, b) = (GraphRecord::from_graph(g1), GraphRecord::from_graph(g2));
    serde_json::to_string_pretty(&PairOut { graphs: [&a, &b] }).expect("graph records serialise")
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<GeometricGraph> {
    parse_graph(&fs::read_to_string(path)?)
}

pub fn read_pair(path: impl AsRef<Path>) -> Result<(GeometricGraph, GeometricGraph)> {
    parse_pair(&fs::read_to_string(path)?)
}

pub fn write_graph(path: impl AsRef<Path>, g: &GeometricGraph) -> Result<()> {
    fs::write(path, graph_to_json(g) + "\n")?;
    Ok(())
}
