//! Inline graph names used by tests and the command line.
//!
//! `c{k}` cycle, `p{k}` path on `k` vertices, `s{k}` star `K_{1,k}`,
//! `k{a},{b}` complete bipartite, `k{n}` complete graph. Anything else is
//! read as a JSON object (if it starts with `{`) or as graph6.

use super::{decode_graph6, Graph, SignedBipartiteGraph};
use crate::error::{Error, Result};

pub fn parse_graph(spec: &str) -> Result<Graph> {
    let spec = spec.trim();
    if spec.starts_with('{') {
        return Graph::from_json(spec);
    }
    if let Some(g) = parse_name(spec)? {
        return Ok(g);
    }
    decode_graph6(spec.strip_prefix("g6:").unwrap_or(spec))
}

/// Signed pattern: a `{"plus", "minus", "edges"}` object, or any graph
/// accepted by [`parse_graph`] signed by its BFS 2-colouring (vertex 0 of
/// each component on the `+` side).
pub fn parse_signed(spec: &str) -> Result<SignedBipartiteGraph> {
    let spec = spec.trim();
    if spec.starts_with('{') && spec.contains("\"plus\"") {
        return SignedBipartiteGraph::from_json(spec);
    }
    SignedBipartiteGraph::from_bipartite(&parse_graph(spec)?)
}

fn parse_name(spec: &str) -> Result<Option<Graph>> {
    let lower = spec.to_ascii_lowercase();
    let Some(kind) = lower.chars().next() else {
        return Ok(None);
    };
    let rest = &lower[1..];
    let nums: Vec<&str> = rest.split(',').collect();
    if nums
        .iter()
        .any(|s| s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()))
    {
        return Ok(None);
    }
    let nums: Vec<usize> = nums
        .iter()
        .map(|s| s.parse().map_err(|_| Error::Parse(format!("bad number in {spec:?}"))))
        .collect::<Result<_>>()?;
    let invalid = |why: &str| Err(Error::Parse(format!("{spec:?}: {why}")));
    match (kind, nums.as_slice()) {
        ('c', &[k]) if k >= 3 => Ok(Some(Graph::cycle(k))),
        ('c', &[_]) => invalid("cycles need at least 3 vertices"),
        ('p', &[k]) if k >= 1 => Ok(Some(Graph::path(k))),
        ('p', &[_]) => invalid("paths need at least 1 vertex"),
        ('s', &[k]) => Ok(Some(Graph::star(k))),
        ('k', &[a, b]) => Ok(Some(Graph::complete_bipartite(a, b))),
        ('k', &[k]) => Ok(Some(Graph::complete(k))),
        _ => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names() {
        assert_eq!(parse_graph("c4").unwrap(), Graph::cycle(4));
        assert_eq!(parse_graph("P3").unwrap(), Graph::path(3));
        assert_eq!(parse_graph("k3,3").unwrap(), Graph::complete_bipartite(3, 3));
        assert_eq!(parse_graph("k3").unwrap(), Graph::complete(3));
        assert_eq!(parse_graph("s3").unwrap(), Graph::star(3));
        assert_eq!(parse_graph("Cl").unwrap(), Graph::cycle(4));
        assert_eq!(parse_graph(r#"{"v":2,"edges":[[0,1]]}"#).unwrap(), Graph::complete(2));
        assert!(parse_graph("c2").is_err());
        assert!(parse_graph("not-graph6!!").is_err());
    }

    #[test]
    fn signed_names() {
        let s = parse_signed("s2").unwrap();
        assert_eq!((s.plus_count(), s.minus_count()), (1, 2));
        assert!(parse_signed("k3").is_err());
    }
}
