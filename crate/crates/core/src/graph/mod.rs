//! Core graph representations.
//!
//! [`Graph`] is a simple undirected graph on dense vertex indices `0..n`,
//! with adjacency stored as one fixed-width bitset row per vertex.
//! [`SignedBipartiteGraph`] is a bipartite graph whose two parts carry the
//! fixed labels `+` and `-`; it is stored as a [`Graph`] whose first
//! `plus_count` vertices form the `+` side.

mod canon;
mod graph6;
mod json;
mod named;

pub use canon::{
    automorphism_count, canonical_form, canonical_form_with_cap, canonical_labeling, signed_automorphism_count,
    CanonicalLabel, ColoredView, DecodedLabel, Labeling, AUTOMORPHISM_MAX_VERTICES, CANONICAL_MAX_VERTICES,
};
pub use graph6::{decode_graph6, encode_graph6};
pub use json::{GraphJson, SignedGraphJson};
pub use named::{parse_graph, parse_signed};

use std::fmt;

use crate::error::{Error, Result};

/// An unordered vertex pair, always stored with the smaller index first.
pub type Edge = (usize, usize);

/// Normalizes a pair so the smaller index comes first.
#[inline]
pub fn edge(u: usize, v: usize) -> Edge {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

#[inline]
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

/// Iterates the indices of set bits in a word slice.
pub(crate) fn iter_bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(w, &word)| {
        let mut rest = word;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(w * 64 + b)
            }
        })
    })
}

/// Simple undirected graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        let words = words_for(n);
        Graph {
            n,
            words,
            adj: vec![0; n * words],
        }
    }

    /// Builds a graph from an edge list, rejecting loops, out-of-range
    /// endpoints and repeated pairs.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at vertex {u}")));
            }
            if !g.add_edge(u, v) {
                return Err(Error::InvalidGraph(format!("parallel edge ({u}, {v})")));
            }
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|w| w.count_ones() as usize).sum::<usize>() / 2
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    /// Adds `uv`; returns false if it was already present.
    pub(crate) fn add_edge(&mut self, u: usize, v: usize) -> bool {
        debug_assert!(u != v && u < self.n && v < self.n);
        if self.has_edge(u, v) {
            return false;
        }
        self.adj[u * self.words + v / 64] |= 1 << (v % 64);
        self.adj[v * self.words + u / 64] |= 1 << (u % 64);
        true
    }

    /// Removes `uv`; returns false if it was absent.
    pub(crate) fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if !self.has_edge(u, v) {
            return false;
        }
        self.adj[u * self.words + v / 64] &= !(1 << (v % 64));
        self.adj[v * self.words + u / 64] &= !(1 << (u % 64));
        true
    }

    /// Returns a copy with `uv` added.
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Graph> {
        if u >= self.n || v >= self.n || u == v {
            return Err(Error::InvalidGraph(format!("cannot add edge ({u}, {v})")));
        }
        let mut g = self.clone();
        g.add_edge(u, v);
        Ok(g)
    }

    /// Returns a copy with `uv` removed.
    pub fn without_edge(&self, u: usize, v: usize) -> Result<Graph> {
        let mut g = self.clone();
        if !g.remove_edge(u, v) {
            return Err(Error::EdgeNotInGraph(u, v));
        }
        Ok(g)
    }

    /// Neighborhood bitset of `v`.
    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.words..(v + 1) * self.words]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        iter_bits(self.row(v))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Minimum degree; 0 for the null graph.
    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    /// Maximum degree; 0 for the null graph.
    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// All edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            out.extend(self.neighbors(u).filter(|&v| v > u).map(|v| (u, v)));
        }
        out
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for w in self.neighbors(u) {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// True for the null graph and for every graph with one component.
    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Acyclic; isolated vertices count as trivial trees.
    pub fn is_forest(&self) -> bool {
        self.edge_count() + self.components().len() == self.n
    }

    pub fn is_tree(&self) -> bool {
        self.n >= 1 && self.is_connected() && self.edge_count() + 1 == self.n
    }

    /// Vertices of degree one.
    pub fn leaves(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.degree(v) == 1).collect()
    }

    /// Relabels vertices: old vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n, "permutation length mismatch");
        let mut g = Graph::empty(self.n);
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]);
        }
        g
    }

    /// Subgraph induced on `vertices`, relabeled to `0..vertices.len()` in
    /// the given order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut g = Graph::empty(vertices.len());
        for (i, &a) in vertices.iter().enumerate() {
            for (j, &b) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(a, b) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// Proper 2-colouring found by BFS, `true` meaning `+`. Each component's
    /// smallest vertex is coloured `+`. `None` if the graph is not bipartite.
    pub fn two_coloring(&self) -> Option<Vec<Sign>> {
        let mut color: Vec<Option<Sign>> = vec![None; self.n];
        for s in 0..self.n {
            if color[s].is_some() {
                continue;
            }
            color[s] = Some(Sign::Plus);
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                let cu = color[u].expect("coloured on push");
                for w in self.neighbors(u) {
                    match color[w] {
                        None => {
                            color[w] = Some(cu.flip());
                            queue.push_back(w);
                        }
                        Some(cw) if cw == cu => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(color.into_iter().map(|c| c.expect("all coloured")).collect())
    }

    pub fn is_bipartite(&self) -> bool {
        self.two_coloring().is_some()
    }

    /// Cycle on `k >= 3` vertices, `0-1-...-(k-1)-0`.
    pub fn cycle(k: usize) -> Graph {
        assert!(k >= 3, "cycle needs at least 3 vertices");
        Graph::from_edges(k, (0..k).map(|i| (i, (i + 1) % k))).expect("valid cycle")
    }

    /// Path on `k >= 1` vertices.
    pub fn path(k: usize) -> Graph {
        Graph::from_edges(k, (1..k).map(|i| (i - 1, i))).expect("valid path")
    }

    /// Complete graph on `k` vertices.
    pub fn complete(k: usize) -> Graph {
        let mut g = Graph::empty(k);
        for u in 0..k {
            for v in u + 1..k {
                g.add_edge(u, v);
            }
        }
        g
    }

    /// `K_{a,b}` with parts `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        let mut g = Graph::empty(a + b);
        for u in 0..a {
            for v in a..a + b {
                g.add_edge(u, v);
            }
        }
        g
    }

    /// Star `K_{1,k}` with centre 0.
    pub fn star(k: usize) -> Graph {
        Graph::complete_bipartite(1, k)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

/// Side label of a vertex in a signed bipartite graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// Bipartite graph with a `+` side of `plus_count` vertices and a `-` side of
/// `minus_count` vertices. Edges are `(p, q)` with `p` a `+` index and `q` a
/// `-` index.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SignedBipartiteGraph {
    plus: usize,
    graph: Graph,
}

impl SignedBipartiteGraph {
    pub fn empty(plus: usize, minus: usize) -> Self {
        SignedBipartiteGraph {
            plus,
            graph: Graph::empty(plus + minus),
        }
    }

    pub fn from_edges<I>(plus: usize, minus: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = SignedBipartiteGraph::empty(plus, minus);
        for (p, q) in edges {
            if p >= plus || q >= minus {
                return Err(Error::InvalidGraph(format!(
                    "signed edge ({p}, {q}) out of range for parts ({plus}, {minus})"
                )));
            }
            if !g.graph.add_edge(p, plus + q) {
                return Err(Error::InvalidGraph(format!("parallel edge ({p}, {q})")));
            }
        }
        Ok(g)
    }

    /// Assigns signs to an ordinary graph. Every edge must join a `+` vertex
    /// to a `-` vertex. Vertices are reindexed with `+` first, each side in
    /// increasing original order.
    pub fn from_graph(g: &Graph, signs: &[Sign]) -> Result<Self> {
        if signs.len() != g.vertex_count() {
            return Err(Error::SignMismatch(format!(
                "{} signs for {} vertices",
                signs.len(),
                g.vertex_count()
            )));
        }
        for (u, v) in g.edges() {
            if signs[u] == signs[v] {
                return Err(Error::SignMismatch(format!(
                    "edge ({u}, {v}) joins two {:?} vertices",
                    signs[u]
                )));
            }
        }
        let (index, plus) = sign_reindex(signs);
        Ok(SignedBipartiteGraph {
            plus,
            graph: g.relabel(&index),
        })
    }

    /// Signs a bipartite graph using [`Graph::two_coloring`].
    pub fn from_bipartite(g: &Graph) -> Result<Self> {
        let signs = g
            .two_coloring()
            .ok_or_else(|| Error::SignMismatch("graph is not bipartite".into()))?;
        Self::from_graph(g, &signs)
    }

    pub fn plus_count(&self) -> usize {
        self.plus
    }

    pub fn minus_count(&self) -> usize {
        self.graph.vertex_count() - self.plus
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn has_edge(&self, p: usize, q: usize) -> bool {
        p < self.plus && q < self.minus_count() && self.graph.has_edge(p, self.plus + q)
    }

    /// Edges as `(plus index, minus index)`, lexicographic.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.graph
            .edges()
            .into_iter()
            .map(|(u, v)| (u, v - self.plus))
            .collect()
    }

    /// Underlying graph: `+` vertices are `0..plus_count`, `-` vertex `q` is
    /// `plus_count + q`.
    pub fn as_graph(&self) -> &Graph {
        &self.graph
    }

    pub fn sign(&self, v: usize) -> Sign {
        if v < self.plus {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn signs(&self) -> Vec<Sign> {
        (0..self.vertex_count()).map(|v| self.sign(v)).collect()
    }

    /// Underlying-graph vertex of a signed endpoint pair.
    pub fn vertex_of_edge(&self, (p, q): (usize, usize)) -> Edge {
        (p, self.plus + q)
    }

    /// Swaps the roles of the two sides.
    pub fn transpose(&self) -> SignedBipartiteGraph {
        let m = self.plus;
        let n = self.minus_count();
        SignedBipartiteGraph::from_edges(n, m, self.edges().into_iter().map(|(p, q)| (q, p)))
            .expect("transpose of a valid graph")
    }

    /// Degree of `+` vertex `p`.
    pub fn plus_degree(&self, p: usize) -> usize {
        self.graph.degree(p)
    }

    /// Degree of `-` vertex `q`.
    pub fn minus_degree(&self, q: usize) -> usize {
        self.graph.degree(self.plus + q)
    }

    pub(crate) fn graph_mut(&mut self) -> &mut Graph {
        &mut self.graph
    }

    pub(crate) fn from_parts_unchecked(plus: usize, graph: Graph) -> Self {
        SignedBipartiteGraph { plus, graph }
    }
}

impl fmt::Debug for SignedBipartiteGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "SignedBipartiteGraph(plus={}, minus={}, edges={:?})",
            self.plus,
            self.minus_count(),
            self.edges()
        )
    }
}

/// Maps each vertex to its new index with `+` vertices first.
fn sign_reindex(signs: &[Sign]) -> (Vec<usize>, usize) {
    let plus = signs.iter().filter(|&&s| s == Sign::Plus).count();
    let mut next_plus = 0;
    let mut next_minus = plus;
    let index = signs
        .iter()
        .map(|s| match s {
            Sign::Plus => {
                next_plus += 1;
                next_plus - 1
            }
            Sign::Minus => {
                next_minus += 1;
                next_minus - 1
            }
        })
        .collect();
    (index, plus)
}
