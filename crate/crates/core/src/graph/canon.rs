//! Canonical labeling by colour refinement and individualization.
//!
//! The search tree has an equitable ordered partition at every node. A node
//! picks the first smallest non-singleton cell, individualizes each of its
//! vertices in turn and refines again. Leaves are discrete partitions, read
//! as vertex orders; the canonical order is the one whose relabeled
//! adjacency matrix is lexicographically largest.
//!
//! Automorphisms are harvested whenever a leaf reproduces the certificate of
//! the first or best leaf. Two prunings use them: children that lie in the
//! same orbit as an explored child (under generators fixing the current
//! prefix) are skipped, and when a leaf matches the first leaf the search
//! unwinds to the node where its path left the first path. The generators
//! found this way generate the full automorphism group, and the group order
//! is the product of the orbit lengths of the first-path children.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Graph, SignedBipartiteGraph};
use crate::error::{check_size, Error, Result};

/// Default vertex cap for [`canonical_form`].
pub const CANONICAL_MAX_VERTICES: usize = 32;
/// Vertex cap for [`automorphism_count`].
pub const AUTOMORPHISM_MAX_VERTICES: usize = 16;
const HARD_MAX_VERTICES: usize = 64;

const TAG_UNSIGNED: u8 = 0;
const TAG_SIGNED: u8 = 1;

/// Anything that can be canonically labeled: a graph plus an optional
/// `+`/`-` split where the first `plus` vertices are `+`.
pub trait ColoredView {
    fn colored(&self) -> (&Graph, Option<usize>);
}

impl ColoredView for Graph {
    fn colored(&self) -> (&Graph, Option<usize>) {
        (self, None)
    }
}

impl ColoredView for SignedBipartiteGraph {
    fn colored(&self) -> (&Graph, Option<usize>) {
        (self.as_graph(), Some(self.plus_count()))
    }
}

/// Opaque isomorphism certificate. Equal labels iff isomorphic (respecting
/// signs for signed graphs). The bytes also encode the canonical graph
/// itself, see [`CanonicalLabel::decode`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalLabel(Vec<u8>);

/// A graph recovered from its certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecodedLabel {
    Unsigned(Graph),
    Signed(SignedBipartiteGraph),
}

impl CanonicalLabel {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        if !s.len().is_multiple_of(2) {
            return Err(Error::Parse(format!("odd-length certificate hex {s:?}")));
        }
        let bytes = (0..s.len())
            .step_by(2)
            .map(|i| {
                u8::from_str_radix(&s[i..i + 2], 16).map_err(|_| Error::Parse(format!("bad certificate hex {s:?}")))
            })
            .collect::<Result<Vec<u8>>>()?;
        let label = CanonicalLabel(bytes);
        label.decode()?;
        Ok(label)
    }

    pub fn is_signed(&self) -> bool {
        self.0.first() == Some(&TAG_SIGNED)
    }

    /// Rebuilds the canonical representative.
    pub fn decode(&self) -> Result<DecodedLabel> {
        let bad = || Error::Parse("malformed canonical label".to_string());
        let (&tag, rest) = self.0.split_first().ok_or_else(bad)?;
        let (&n, rest) = rest.split_first().ok_or_else(bad)?;
        let n = n as usize;
        let (plus, bits) = match tag {
            TAG_UNSIGNED => (None, rest),
            TAG_SIGNED => {
                let (&p, rest) = rest.split_first().ok_or_else(bad)?;
                (Some(p as usize), rest)
            }
            _ => return Err(bad()),
        };
        let pairs = n * n.saturating_sub(1) / 2;
        if bits.len() != pairs.div_ceil(8) {
            return Err(bad());
        }
        let mut g = Graph::empty(n);
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                if bits[k / 8] >> (k % 8) & 1 == 1 {
                    g.add_edge(i, j);
                }
                k += 1;
            }
        }
        match plus {
            None => Ok(DecodedLabel::Unsigned(g)),
            Some(p) => {
                if p > n || g.edges().iter().any(|&(u, v)| (u < p) == (v < p)) {
                    return Err(bad());
                }
                Ok(DecodedLabel::Signed(SignedBipartiteGraph::from_parts_unchecked(p, g)))
            }
        }
    }
}

impl std::fmt::Debug for CanonicalLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CanonicalLabel({})", self.to_hex())
    }
}

impl Serialize for CanonicalLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for CanonicalLabel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        CanonicalLabel::from_hex(&s).map_err(serde::de::Error::custom)
    }
}

/// Canonical certificate plus the vertex order that produced it:
/// `order[i]` is the original vertex placed at canonical position `i`.
#[derive(Clone, Debug)]
pub struct Labeling {
    pub label: CanonicalLabel,
    pub order: Vec<usize>,
}

impl Labeling {
    /// Permutation mapping original vertex to canonical position.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (i, &v) in self.order.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }
}

/// Canonical certificate with the default vertex cap.
pub fn canonical_form<G: ColoredView + ?Sized>(g: &G) -> Result<CanonicalLabel> {
    canonical_form_with_cap(g, CANONICAL_MAX_VERTICES)
}

/// Canonical certificate with an explicit cap (at most 64).
pub fn canonical_form_with_cap<G: ColoredView + ?Sized>(g: &G, cap: usize) -> Result<CanonicalLabel> {
    Ok(labeling_with_cap(g, cap)?.label)
}

/// Certificate plus canonical vertex order, default cap.
pub fn canonical_labeling<G: ColoredView + ?Sized>(g: &G) -> Result<Labeling> {
    labeling_with_cap(g, CANONICAL_MAX_VERTICES)
}

fn labeling_with_cap<G: ColoredView + ?Sized>(g: &G, cap: usize) -> Result<Labeling> {
    let (graph, plus) = g.colored();
    check_size("graph", graph.vertex_count(), cap.min(HARD_MAX_VERTICES))?;
    let search = Search::run(graph, plus);
    let (cert, order) = search.best.expect("search always reaches a leaf");
    Ok(Labeling {
        label: encode_label(&cert, plus),
        order,
    })
}

/// `|Aut(h)|`.
pub fn automorphism_count(h: &Graph) -> Result<u64> {
    check_size("pattern", h.vertex_count(), AUTOMORPHISM_MAX_VERTICES)?;
    Ok(Search::run(h, None).group_order())
}

/// Number of automorphisms preserving both sides.
pub fn signed_automorphism_count(h: &SignedBipartiteGraph) -> Result<u64> {
    check_size("pattern", h.vertex_count(), AUTOMORPHISM_MAX_VERTICES)?;
    Ok(Search::run(h.as_graph(), Some(h.plus_count())).group_order())
}

fn encode_label(rows: &[u64], plus: Option<usize>) -> CanonicalLabel {
    let n = rows.len();
    let mut bytes = Vec::with_capacity(3 + n * n / 16);
    match plus {
        None => bytes.extend([TAG_UNSIGNED, n as u8]),
        Some(p) => bytes.extend([TAG_SIGNED, n as u8, p as u8]),
    }
    let pairs = n * n.saturating_sub(1) / 2;
    let mut packed = vec![0u8; pairs.div_ceil(8)];
    let mut k = 0;
    for (i, row) in rows.iter().enumerate().take(n) {
        for j in i + 1..n {
            if row >> j & 1 == 1 {
                packed[k / 8] |= 1 << (k % 8);
            }
            k += 1;
        }
    }
    bytes.extend(packed);
    CanonicalLabel(bytes)
}

struct Search {
    n: usize,
    adj: Vec<u64>,
    /// Individualized vertices and leaf order of the first leaf.
    first: Option<(Vec<usize>, Vec<usize>, Vec<u64>)>,
    best: Option<(Vec<u64>, Vec<usize>)>,
    generators: Vec<Vec<usize>>,
    /// Target cell and first child at each level of the first path.
    first_path: Vec<(u64, usize)>,
}

impl Search {
    fn run(g: &Graph, plus: Option<usize>) -> Search {
        let n = g.vertex_count();
        let adj: Vec<u64> = (0..n).map(|v| g.row(v)[0]).collect();
        let mut s = Search {
            n,
            adj,
            first: None,
            best: None,
            generators: Vec::new(),
            first_path: Vec::new(),
        };
        let full = if n == 0 { 0 } else { u64::MAX >> (64 - n) };
        let mut cells = Vec::new();
        match plus {
            Some(p) => {
                let plus_mask = if p == 0 { 0 } else { u64::MAX >> (64 - p) };
                for cell in [plus_mask & full, full & !plus_mask] {
                    if cell != 0 {
                        cells.push(cell);
                    }
                }
            }
            None => {
                if full != 0 {
                    cells.push(full);
                }
            }
        }
        s.refine(&mut cells);
        s.descend(cells, &mut Vec::new());
        s
    }

    /// Splits cells by neighbour counts into other cells until equitable.
    fn refine(&self, cells: &mut Vec<u64>) {
        'again: loop {
            for w in 0..cells.len() {
                let splitter = cells[w];
                for c in 0..cells.len() {
                    let cell = cells[c];
                    if cell.count_ones() < 2 {
                        continue;
                    }
                    let mut groups: Vec<(u32, u64)> = Vec::new();
                    let mut rest = cell;
                    while rest != 0 {
                        let v = rest.trailing_zeros() as usize;
                        rest &= rest - 1;
                        let k = (self.adj[v] & splitter).count_ones();
                        match groups.iter_mut().find(|(key, _)| *key == k) {
                            Some((_, m)) => *m |= 1 << v,
                            None => groups.push((k, 1 << v)),
                        }
                    }
                    if groups.len() > 1 {
                        groups.sort_unstable_by_key(|&(k, _)| k);
                        cells.splice(c..=c, groups.into_iter().map(|(_, m)| m));
                        continue 'again;
                    }
                }
            }
            return;
        }
    }

    /// Returns `Some(d)` to unwind to depth `d`.
    fn descend(&mut self, cells: Vec<u64>, path: &mut Vec<usize>) -> Option<usize> {
        let depth = path.len();
        let target = cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.count_ones() > 1)
            .min_by_key(|(i, c)| (c.count_ones(), *i))
            .map(|(i, _)| i);
        let Some(ti) = target else {
            return self.leaf(&cells, path);
        };
        let cell = cells[ti];
        let on_first_path = self.first.is_none();
        let mut explored: Vec<usize> = Vec::new();
        let mut rest = cell;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if !explored.is_empty() && self.same_orbit_as_any(v, &explored, path) {
                continue;
            }
            if on_first_path && explored.is_empty() {
                self.first_path.push((cell, v));
            }
            explored.push(v);
            let mut child = cells.clone();
            child.splice(ti..=ti, [1u64 << v, cell & !(1u64 << v)]);
            self.refine(&mut child);
            path.push(v);
            let unwind = self.descend(child, path);
            path.pop();
            if let Some(d) = unwind {
                if d < depth {
                    return Some(d);
                }
            }
        }
        None
    }

    fn leaf(&mut self, cells: &[u64], path: &[usize]) -> Option<usize> {
        let order: Vec<usize> = cells.iter().map(|c| c.trailing_zeros() as usize).collect();
        let cert = self.certificate(&order);
        let Some((first_path, first_order, first_cert)) = &self.first else {
            self.first = Some((path.to_vec(), order.clone(), cert.clone()));
            self.best = Some((cert, order));
            return None;
        };
        if cert == *first_cert {
            let gamma = compose_map(first_order, &order, self.n);
            let diverge = path
                .iter()
                .zip(first_path)
                .position(|(a, b)| a != b)
                .expect("distinct leaves diverge");
            self.generators.push(gamma);
            return Some(diverge);
        }
        let (best_cert, best_order) = self.best.as_ref().expect("set with first");
        if cert == *best_cert {
            let gamma = compose_map(best_order, &order, self.n);
            self.generators.push(gamma);
        } else if cert > *best_cert {
            self.best = Some((cert, order));
        }
        None
    }

    fn certificate(&self, order: &[usize]) -> Vec<u64> {
        let mut pos = vec![0usize; self.n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        order
            .iter()
            .map(|&v| {
                let mut row = 0u64;
                let mut nb = self.adj[v];
                while nb != 0 {
                    let w = nb.trailing_zeros() as usize;
                    nb &= nb - 1;
                    row |= 1 << pos[w];
                }
                row
            })
            .collect()
    }

    fn orbits_fixing(&self, fixed: &[usize]) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for g in &self.generators {
            if fixed.iter().any(|&v| g[v] != v) {
                continue;
            }
            for (v, &w) in g.iter().enumerate() {
                let (a, b) = (find(&mut parent, v), find(&mut parent, w));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        (0..self.n).map(|v| find(&mut parent, v)).collect()
    }

    fn same_orbit_as_any(&self, v: usize, explored: &[usize], fixed: &[usize]) -> bool {
        let orbit = self.orbits_fixing(fixed);
        explored.iter().any(|&u| orbit[u] == orbit[v])
    }

    fn group_order(&self) -> u64 {
        let first_path = &self.first.as_ref().expect("search ran").0;
        let mut order: u64 = 1;
        for (depth, &(cell, v)) in self.first_path.iter().enumerate() {
            let orbit = self.orbits_fixing(&first_path[..depth]);
            let size = (0..self.n)
                .filter(|&w| cell >> w & 1 == 1 && orbit[w] == orbit[v])
                .count() as u64;
            order *= size;
        }
        order
    }
}

/// Permutation sending `from[i]` to `to[i]`.
fn compose_map(from: &[usize], to: &[usize], n: usize) -> Vec<usize> {
    let mut gamma = vec![0; n];
    for (&a, &b) in from.iter().zip(to) {
        gamma[a] = b;
    }
    gamma
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Sign;

    #[test]
    fn relabeled_cycle_has_same_label() {
        let c4 = Graph::cycle(4);
        let other = c4.relabel(&[2, 0, 3, 1]);
        assert_eq!(canonical_form(&c4).unwrap(), canonical_form(&other).unwrap());
    }

    #[test]
    fn p4_and_claw_differ() {
        assert_ne!(
            canonical_form(&Graph::path(4)).unwrap(),
            canonical_form(&Graph::star(3)).unwrap()
        );
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(automorphism_count(&Graph::cycle(4)).unwrap(), 8);
        assert_eq!(automorphism_count(&Graph::complete_bipartite(3, 3)).unwrap(), 72);
        assert_eq!(automorphism_count(&Graph::complete(2)).unwrap(), 2);
        assert_eq!(automorphism_count(&Graph::empty(0)).unwrap(), 1);
        assert_eq!(automorphism_count(&Graph::empty(10)).unwrap(), 3_628_800);
        assert_eq!(automorphism_count(&Graph::complete(16)).unwrap(), 20_922_789_888_000);
        assert!(matches!(
            automorphism_count(&Graph::empty(17)),
            Err(Error::SizeExceeded { .. })
        ));
    }

    #[test]
    fn signed_sides_are_not_exchanged() {
        let star = SignedBipartiteGraph::from_edges(1, 2, [(0, 0), (0, 1)]).unwrap();
        let flipped = star.transpose();
        assert_ne!(canonical_form(&star).unwrap(), canonical_form(&flipped).unwrap());
        assert_ne!(canonical_form(&star).unwrap(), canonical_form(star.as_graph()).unwrap());
        assert_eq!(signed_automorphism_count(&star).unwrap(), 2);
        let c4 = SignedBipartiteGraph::from_bipartite(&Graph::cycle(4)).unwrap();
        assert_eq!(signed_automorphism_count(&c4).unwrap(), 4);
    }

    #[test]
    fn label_decodes_to_isomorphic_graph() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 0), (3, 4)]).unwrap();
        let label = canonical_form(&g).unwrap();
        let DecodedLabel::Unsigned(d) = label.decode().unwrap() else {
            panic!("expected unsigned");
        };
        assert_eq!(canonical_form(&d).unwrap(), label);
        let hex = label.to_hex();
        assert_eq!(CanonicalLabel::from_hex(&hex).unwrap(), label);

        let signs = [Sign::Plus, Sign::Minus, Sign::Plus, Sign::Minus];
        let s = SignedBipartiteGraph::from_graph(&Graph::path(4), &signs).unwrap();
        let sl = canonical_form(&s).unwrap();
        let DecodedLabel::Signed(ds) = sl.decode().unwrap() else {
            panic!("expected signed");
        };
        assert_eq!(canonical_form(&ds).unwrap(), sl);
    }

    #[test]
    fn large_symmetric_graphs_finish() {
        for g in [
            Graph::empty(32),
            Graph::complete(32),
            Graph::complete_bipartite(16, 16),
            Graph::cycle(32),
        ] {
            let a = canonical_form(&g).unwrap();
            let perm: Vec<usize> = (0..32).map(|i| (i * 7 + 3) % 32).collect();
            assert_eq!(a, canonical_form(&g.relabel(&perm)).unwrap());
        }
        assert!(canonical_form(&Graph::empty(33)).is_err());
    }
}
