//! Gluing constructions: along edges, along a rooted forest, at a vertex,
//! with sign preservation, and tree-of-cycles composites.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{
    canonical_form, edge, parse_graph, parse_signed, CanonicalLabel, Edge, Graph, SignedBipartiteGraph,
};

/// A pattern `H` with a labeled root forest `F` and an optional
/// distinguished edge `f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedPattern {
    pattern: Graph,
    root_vertices: Vec<usize>,
    root_edges: Vec<Edge>,
    distinguished: Option<Edge>,
}

impl RootedPattern {
    pub fn new(
        pattern: Graph,
        root_vertices: Vec<usize>,
        root_edges: Vec<Edge>,
        distinguished: Option<Edge>,
    ) -> Result<Self> {
        let bad = |why: String| Err(Error::InvalidRootedPattern(why));
        let h = pattern.vertex_count();
        let ell = root_vertices.len();
        if ell == 0 || ell >= h {
            return bad(format!("need 0 < {ell} root vertices < {h}"));
        }
        let mut seen = BTreeSet::new();
        for &r in &root_vertices {
            if r >= h {
                return bad(format!("root vertex {r} out of range"));
            }
            if !seen.insert(r) {
                return bad(format!("root vertex {r} listed twice"));
            }
        }
        let mut edges = BTreeSet::new();
        for &(a, b) in &root_edges {
            if !seen.contains(&a) || !seen.contains(&b) {
                return bad(format!("root edge ({a}, {b}) leaves the root vertices"));
            }
            if !pattern.has_edge(a, b) {
                return bad(format!("root edge ({a}, {b}) is not a pattern edge"));
            }
            if !edges.insert(edge(a, b)) {
                return bad(format!("root edge ({a}, {b}) listed twice"));
            }
        }
        let root_edges: Vec<Edge> = edges.into_iter().collect();
        let pos = |v: usize| root_vertices.iter().position(|&r| r == v).expect("root");
        let forest = Graph::from_edges(ell, root_edges.iter().map(|&(a, b)| (pos(a), pos(b))))?;
        if !forest.is_forest() {
            return bad("root edges contain a cycle".into());
        }
        if let Some((a, b)) = distinguished {
            if a >= h || b >= h || !pattern.has_edge(a, b) {
                return bad(format!("distinguished edge ({a}, {b}) is not a pattern edge"));
            }
        }
        Ok(RootedPattern {
            pattern,
            root_vertices,
            root_edges,
            distinguished: distinguished.map(|(a, b)| edge(a, b)),
        })
    }

    /// `F = f = (a, b)`.
    pub fn edge_rooted(pattern: Graph, (a, b): Edge) -> Result<Self> {
        RootedPattern::new(pattern, vec![a, b], vec![edge(a, b)], Some(edge(a, b)))
    }

    pub fn pattern(&self) -> &Graph {
        &self.pattern
    }

    pub fn root_vertices(&self) -> &[usize] {
        &self.root_vertices
    }

    pub fn root_edges(&self) -> &[Edge] {
        &self.root_edges
    }

    pub fn distinguished_edge(&self) -> Option<Edge> {
        self.distinguished
    }

    /// The root forest relabeled onto `0..ℓ` in root order.
    pub fn forest(&self) -> Graph {
        let pos = |v: usize| self.root_vertices.iter().position(|&r| r == v).expect("root");
        Graph::from_edges(
            self.root_vertices.len(),
            self.root_edges.iter().map(|&(a, b)| (pos(a), pos(b))),
        )
        .expect("validated forest")
    }

    /// True if every pattern edge among the root vertices is a root edge.
    pub fn is_induced(&self) -> bool {
        self.pattern.induced(&self.root_vertices).edge_count() == self.root_edges.len()
    }

    /// `(h, e(H), ℓ, e(F))`.
    pub fn stats(&self) -> (usize, usize, usize, usize) {
        (
            self.pattern.vertex_count(),
            self.pattern.edge_count(),
            self.root_vertices.len(),
            self.root_edges.len(),
        )
    }
}

fn check_edge(g: &Graph, (a, b): Edge) -> Result<()> {
    if a < g.vertex_count() && b < g.vertex_count() && g.has_edge(a, b) {
        Ok(())
    } else {
        Err(Error::EdgeNotInGraph(a, b))
    }
}

/// Identifies `a1` with `a2` and `b1` with `b2`. Vertices of `h1` keep their
/// indices; the other vertices of `h2` follow in increasing order.
pub fn glue_oriented(h1: &Graph, (a1, b1): Edge, h2: &Graph, (a2, b2): Edge) -> Result<Graph> {
    check_edge(h1, (a1, b1))?;
    check_edge(h2, (a2, b2))?;
    let n1 = h1.vertex_count();
    let mut index = vec![0; h2.vertex_count()];
    let mut next = n1;
    for (v, slot) in index.iter_mut().enumerate() {
        *slot = if v == a2 {
            a1
        } else if v == b2 {
            b1
        } else {
            next += 1;
            next - 1
        };
    }
    let mut edges: BTreeSet<Edge> = h1.edges().into_iter().collect();
    edges.extend(h2.edges().into_iter().map(|(u, v)| edge(index[u], index[v])));
    Graph::from_edges(next, edges)
}

/// Both identifications of `e1` with `e2`, deduplicated up to isomorphism and
/// sorted by canonical label.
pub fn glue_along_edge(h1: &Graph, e1: Edge, h2: &Graph, e2: Edge) -> Result<Vec<Graph>> {
    glue_family(&[(h1.clone(), e1), (h2.clone(), e2)])
}

/// All marked edges identified with one shared edge, over all `2^(t-1)`
/// orientation choices (the first part fixes the orientation), deduplicated
/// up to isomorphism and sorted by canonical label.
pub fn glue_family(parts: &[(Graph, Edge)]) -> Result<Vec<Graph>> {
    let Some(((first, e0), rest)) = parts.split_first() else {
        return Err(Error::PreconditionViolated("no parts to glue".into()));
    };
    for (g, e) in parts {
        check_edge(g, *e)?;
    }
    let mut partial: Vec<Graph> = vec![first.clone()];
    for (g, (a, b)) in rest {
        let mut next = BTreeMap::new();
        for cur in &partial {
            for oriented in [(*a, *b), (*b, *a)] {
                let glued = glue_oriented(cur, *e0, g, oriented)?;
                next.entry(canonical_form(&glued)?).or_insert(glued);
            }
        }
        partial = next.into_values().collect();
    }
    let mut out: Vec<(CanonicalLabel, Graph)> = partial
        .into_iter()
        .map(|g| Ok((canonical_form(&g)?, g)))
        .collect::<Result<_>>()?;
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out.into_iter().map(|(_, g)| g).collect())
}

/// `s` copies of the pattern identified pointwise along the root forest.
/// Root vertices come first in root order, then each copy's remaining
/// vertices in increasing pattern index. The root forest must be induced.
pub fn glue_copies_along_forest(p: &RootedPattern, s: usize) -> Result<Graph> {
    if s == 0 {
        return Err(Error::PreconditionViolated("need at least one copy".into()));
    }
    if !p.is_induced() {
        return Err(Error::InvalidRootedPattern(
            "pattern has edges among the root vertices outside the root forest".into(),
        ));
    }
    if s == 1 {
        return Ok(p.pattern.clone());
    }
    let h = p.pattern.vertex_count();
    let ell = p.root_vertices.len();
    let others: Vec<usize> = (0..h).filter(|v| !p.root_vertices.contains(v)).collect();
    let mut edges = BTreeSet::new();
    for copy in 0..s {
        let mut index = vec![0; h];
        for (i, &r) in p.root_vertices.iter().enumerate() {
            index[r] = i;
        }
        for (j, &v) in others.iter().enumerate() {
            index[v] = ell + copy * others.len() + j;
        }
        edges.extend(p.pattern.edges().into_iter().map(|(u, v)| edge(index[u], index[v])));
    }
    Graph::from_edges(ell + s * others.len(), edges)
}

/// Identifies `u` in `h1` with `v` in `h2`. Vertices of `h1` keep their
/// indices; the other vertices of `h2` follow in increasing order.
pub fn glue_at_vertex(h1: &Graph, u: usize, h2: &Graph, v: usize) -> Result<Graph> {
    if u >= h1.vertex_count() {
        return Err(Error::VertexNotInGraph(u));
    }
    if v >= h2.vertex_count() {
        return Err(Error::VertexNotInGraph(v));
    }
    let n1 = h1.vertex_count();
    let index: Vec<usize> = (0..h2.vertex_count())
        .map(|x| match x.cmp(&v) {
            std::cmp::Ordering::Less => n1 + x,
            std::cmp::Ordering::Equal => u,
            std::cmp::Ordering::Greater => n1 + x - 1,
        })
        .collect();
    let mut edges = h1.edges();
    edges.extend(h2.edges().into_iter().map(|(a, b)| edge(index[a], index[b])));
    Graph::from_edges(n1 + h2.vertex_count() - 1, edges)
}

/// Hangs the tree `t` off `h` by identifying `v` with `v_t`.
pub fn attach_tree(h: &Graph, v: usize, t: &Graph, v_t: usize) -> Result<Graph> {
    if !t.is_tree() {
        return Err(Error::NotATree);
    }
    glue_at_vertex(h, v, t, v_t)
}

/// Identifies every marked signed edge `(p_i, q_i)` with one shared edge,
/// `+` endpoints together and `-` endpoints together. The shared edge is
/// `(0, 0)`; each part's other `+` and `-` vertices follow in part order.
pub fn signed_glue(parts: &[(SignedBipartiteGraph, (usize, usize))]) -> Result<SignedBipartiteGraph> {
    if parts.is_empty() {
        return Err(Error::PreconditionViolated("no parts to glue".into()));
    }
    for (g, (p, q)) in parts {
        if *p >= g.plus_count() || *q >= g.minus_count() || !g.has_edge(*p, *q) {
            return Err(Error::EdgeNotInGraph(*p, *q));
        }
    }
    if parts.len() == 1 {
        return Ok(parts[0].0.clone());
    }
    let plus = 1 + parts.iter().map(|(g, _)| g.plus_count() - 1).sum::<usize>();
    let minus = 1 + parts.iter().map(|(g, _)| g.minus_count() - 1).sum::<usize>();
    let (mut next_plus, mut next_minus) = (1, 1);
    let mut edges = BTreeSet::new();
    for (g, (p, q)) in parts {
        let plus_index: Vec<usize> = (0..g.plus_count())
            .map(|x| {
                if x == *p {
                    0
                } else {
                    next_plus += 1;
                    next_plus - 1
                }
            })
            .collect();
        let minus_index: Vec<usize> = (0..g.minus_count())
            .map(|y| {
                if y == *q {
                    0
                } else {
                    next_minus += 1;
                    next_minus - 1
                }
            })
            .collect();
        edges.extend(g.edges().into_iter().map(|(x, y)| (plus_index[x], minus_index[y])));
    }
    SignedBipartiteGraph::from_edges(plus, minus, edges)
}

/// For each tree vertex `u` a cycle of length `cycles[u]` (positions
/// `0..len` in cyclic order); for each tree edge `uv`, position
/// `attach[(uv, u)]` of `C(u)` is identified with position `attach[(uv, v)]`
/// of `C(v)`. Tree edges are keyed with the smaller endpoint first; missing
/// positions default to 0.
pub fn tree_of_cycles(t: &Graph, cycles: &[usize], attach: &BTreeMap<(Edge, usize), usize>) -> Result<Graph> {
    if !t.is_tree() {
        return Err(Error::NotATree);
    }
    if cycles.len() != t.vertex_count() {
        return Err(Error::InvalidAttachIndex(format!(
            "{} cycle lengths for {} tree vertices",
            cycles.len(),
            t.vertex_count()
        )));
    }
    for &len in cycles {
        if len % 2 == 1 {
            return Err(Error::OddCycleLength(len));
        }
        if len < 4 {
            return Err(Error::CycleTooShort(len));
        }
    }
    for (&((a, b), end), &pos) in attach {
        if a > b || !t.has_edge(a, b) {
            return Err(Error::InvalidAttachIndex(format!("({a}, {b}) is not a tree edge")));
        }
        if end != a && end != b {
            return Err(Error::InvalidAttachIndex(format!(
                "{end} is not an endpoint of ({a}, {b})"
            )));
        }
        if pos >= cycles[end] {
            return Err(Error::InvalidAttachIndex(format!(
                "position {pos} on a cycle of length {}",
                cycles[end]
            )));
        }
    }
    let offset: Vec<usize> = cycles
        .iter()
        .scan(0, |acc, &len| {
            let start = *acc;
            *acc += len;
            Some(start)
        })
        .collect();
    let total: usize = cycles.iter().sum();
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let next = parent[y];
            parent[y] = r;
            y = next;
        }
        r
    }
    for (a, b) in t.edges() {
        let pa = attach.get(&((a, b), a)).copied().unwrap_or(0);
        let pb = attach.get(&((a, b), b)).copied().unwrap_or(0);
        let (ra, rb) = (find(&mut parent, offset[a] + pa), find(&mut parent, offset[b] + pb));
        parent[ra.max(rb)] = ra.min(rb);
    }
    let mut class = vec![usize::MAX; total];
    let mut index = vec![0; total];
    let mut n = 0;
    for (x, slot) in index.iter_mut().enumerate() {
        let r = find(&mut parent, x);
        if class[r] == usize::MAX {
            class[r] = n;
            n += 1;
        }
        *slot = class[r];
    }
    let mut edges = Vec::with_capacity(total);
    for (u, &len) in cycles.iter().enumerate() {
        for i in 0..len {
            let x = offset[u] + i;
            let y = offset[u] + (i + 1) % len;
            edges.push((index[x], index[y]));
        }
    }
    Graph::from_edges(n, edges)
}

/// `ℓ_C`: half the shortest cycle length.
pub fn min_half_length(cycles: &[usize]) -> Option<usize> {
    cycles.iter().min().map(|&c| c / 2)
}

/// The goodness exponent `1/ℓ_C` of a tree-of-cycles composite.
pub fn tree_of_cycles_exponent(cycles: &[usize]) -> Option<BigRational> {
    min_half_length(cycles)
        .filter(|&l| l > 0)
        .map(|l| BigRational::new(BigInt::from(1), BigInt::from(l)))
}

/// `T'` and its root forest for leaf gluing: the smallest leaf `x` of `t`
/// is extended by a new vertex `y = t` and `F` is the edge `xy` together
/// with the remaining leaves (`x`, `y` first in root order).
pub fn leaf_extension(t: &Graph) -> Result<RootedPattern> {
    if !t.is_tree() {
        return Err(Error::NotATree);
    }
    if t.vertex_count() < 3 {
        return Err(Error::PreconditionViolated("tree needs at least 3 vertices".into()));
    }
    let n = t.vertex_count();
    let leaves = t.leaves();
    let x = leaves[0];
    let mut edges = t.edges();
    edges.push((x, n));
    let extended = Graph::from_edges(n + 1, edges)?;
    let mut roots = vec![x, n];
    roots.extend(&leaves[1..]);
    RootedPattern::new(extended, roots, vec![(x, n)], Some((x, n)))
}

/// `s` copies of the tree identified along its leaves.
pub fn glue_along_leaves(t: &Graph, s: usize) -> Result<Graph> {
    if !t.is_tree() {
        return Err(Error::NotATree);
    }
    let p = RootedPattern::new(t.clone(), t.leaves(), Vec::new(), None)?;
    glue_copies_along_forest(&p, s)
}

/// Gluing request in JSON form. Each part names a graph (inline name,
/// graph6, or JSON object) and its marked edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingSpec {
    pub mode: GluingMode,
    pub parts: Vec<GluingPart>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GluingMode {
    UnsignedFamily,
    SignedUnique,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingPart {
    pub graph: String,
    pub edge: [usize; 2],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GluingOutput {
    Family(Vec<Graph>),
    Signed(SignedBipartiteGraph),
}

impl GluingSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("gluing spec: {e}")))
    }

    pub fn run(&self) -> Result<GluingOutput> {
        match self.mode {
            GluingMode::UnsignedFamily => {
                let parts = self
                    .parts
                    .iter()
                    .map(|p| Ok((parse_graph(&p.graph)?, (p.edge[0], p.edge[1]))))
                    .collect::<Result<Vec<_>>>()?;
                glue_family(&parts).map(GluingOutput::Family)
            }
            GluingMode::SignedUnique => {
                let parts = self
                    .parts
                    .iter()
                    .map(|p| Ok((parse_signed(&p.graph)?, (p.edge[0], p.edge[1]))))
                    .collect::<Result<Vec<_>>>()?;
                signed_glue(&parts).map(GluingOutput::Signed)
            }
        }
    }
}
