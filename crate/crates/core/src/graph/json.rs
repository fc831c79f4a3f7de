use serde::{Deserialize, Serialize};

use super::{Graph, SignedBipartiteGraph};
use crate::error::{Error, Result};

/// JSON object form `{"v": n, "edges": [[a, b], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub v: usize,
    pub edges: Vec<[usize; 2]>,
}

/// JSON object form `{"plus": m, "minus": n, "edges": [[p, q], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedGraphJson {
    pub plus: usize,
    pub minus: usize,
    pub edges: Vec<[usize; 2]>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        GraphJson {
            v: g.vertex_count(),
            edges: g.edges().into_iter().map(|(a, b)| [a, b]).collect(),
        }
    }
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;
    fn try_from(j: GraphJson) -> Result<Graph> {
        Graph::from_edges(j.v, j.edges.into_iter().map(|[a, b]| (a, b)))
    }
}

impl From<&SignedBipartiteGraph> for SignedGraphJson {
    fn from(g: &SignedBipartiteGraph) -> Self {
        SignedGraphJson {
            plus: g.plus_count(),
            minus: g.minus_count(),
            edges: g.edges().into_iter().map(|(a, b)| [a, b]).collect(),
        }
    }
}

impl TryFrom<SignedGraphJson> for SignedBipartiteGraph {
    type Error = Error;
    fn try_from(j: SignedGraphJson) -> Result<SignedBipartiteGraph> {
        SignedBipartiteGraph::from_edges(j.plus, j.minus, j.edges.into_iter().map(|[a, b]| (a, b)))
    }
}

impl Graph {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&GraphJson::from(self)).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Graph> {
        let j: GraphJson = serde_json::from_str(text).map_err(|e| Error::Parse(format!("graph json: {e}")))?;
        j.try_into()
    }
}

impl SignedBipartiteGraph {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&SignedGraphJson::from(self)).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<SignedBipartiteGraph> {
        let j: SignedGraphJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("signed graph json: {e}")))?;
        j.try_into()
    }
}
