//! Exact extremal numbers by vertex augmentation.
//!
//! Any `H`-free graph with `e` edges on `k` vertices loses at most
//! `floor(2e/k)` edges when a minimum-degree vertex is deleted, and the
//! result is still `H`-free. So for a target `t_k` every `H`-free graph with
//! at least `t_k` edges arises, up to isomorphism, from one on `k - 1`
//! vertices with at least `t_{k-1} = t_k - floor(2 t_k / k)` edges by adding
//! a new minimum-degree vertex. Each level is kept as a set of canonical
//! forms. The bipartite version deletes a minimum-degree `+` vertex, which
//! costs at most `floor(e/k)` edges.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::embedding::{has_copy_using_edge, has_copy_using_vertex, has_signed_copy_using_edge, EmbeddingSearch};
use crate::error::Result;
use crate::graph::{canonical_form, CanonicalLabel, Graph, SignedBipartiteGraph};

/// Optimal value and the optimal graph with the least canonical label, in
/// canonical vertex order.
pub(crate) struct Optimum<G> {
    pub value: usize,
    pub witness: G,
}

fn binomial2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Calls `f` on every `k`-subset of `items`, in lexicographic order.
fn for_each_subset(items: &[usize], k: usize, f: &mut impl FnMut(&[usize]) -> Result<()>) -> Result<()> {
    if k > items.len() {
        return Ok(());
    }
    let mut idx: Vec<usize> = (0..k).collect();
    let mut chosen: Vec<usize> = idx.iter().map(|&i| items[i]).collect();
    loop {
        f(&chosen)?;
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + items.len() - k) else {
            return Ok(());
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
        for j in i..k {
            chosen[j] = items[idx[j]];
        }
    }
}

/// Runs the level-by-level augmentation. `targets[k]` is the edge target for
/// level `k`; returns the final level keyed by canonical label.
fn grow<G, F>(root: G, targets: &[usize], expand: F) -> Result<BTreeMap<CanonicalLabel, G>>
where
    G: Send + Sync + Clone,
    F: Fn(&G, usize) -> Result<Vec<(CanonicalLabel, G)>> + Sync,
{
    let mut level = vec![root];
    let mut last = BTreeMap::new();
    for &t in &targets[1..] {
        let children: Vec<Vec<(CanonicalLabel, G)>> = level.par_iter().map(|g| expand(g, t)).collect::<Result<_>>()?;
        let mut next = BTreeMap::new();
        for (label, g) in children.into_iter().flatten() {
            next.entry(label).or_insert(g);
        }
        if next.is_empty() {
            return Ok(next);
        }
        level = next.values().cloned().collect();
        last = next;
    }
    Ok(last)
}

fn best_of<G: Clone>(
    level: &BTreeMap<CanonicalLabel, G>,
    edges: impl Fn(&G) -> usize,
) -> Option<(usize, CanonicalLabel)> {
    let value = level.values().map(&edges).max()?;
    let label = level
        .iter()
        .find(|(_, g)| edges(g) == value)
        .map(|(l, _)| l.clone())
        .expect("maximum is attained");
    Some((value, label))
}

fn turan_targets(n: usize, t: usize) -> Vec<usize> {
    let mut targets = vec![0; n + 1];
    targets[n] = t;
    for k in (2..=n).rev() {
        targets[k - 1] = targets[k] - 2 * targets[k] / k;
    }
    targets
}

fn expand_turan(g: &Graph, target: usize, forbidden: &[Graph]) -> Result<Vec<(CanonicalLabel, Graph)>> {
    let k = g.vertex_count();
    let e = g.edge_count();
    let degrees: Vec<usize> = (0..k).map(|v| g.degree(v)).collect();
    let top = degrees.iter().min().map_or(0, |&d| (d + 1).min(k));
    let mut out = Vec::new();
    for s in target.saturating_sub(e)..=top {
        let forced: Vec<usize> = (0..k).filter(|&v| s > 0 && degrees[v] == s - 1).collect();
        let optional: Vec<usize> = (0..k).filter(|&v| degrees[v] >= s).collect();
        if forced.len() > s {
            continue;
        }
        for_each_subset(&optional, s - forced.len(), &mut |extra| {
            let mut child = Graph::empty(k + 1);
            for (a, b) in g.edges() {
                child.add_edge(a, b);
            }
            for &v in forced.iter().chain(extra) {
                child.add_edge(v, k);
            }
            for h in forbidden {
                if has_copy_using_vertex(&child, h, k)? {
                    return Ok(());
                }
            }
            out.push((canonical_form(&child)?, child));
            Ok(())
        })?;
    }
    Ok(out)
}

/// Graphs on `n` vertices with at least `t` edges and no forbidden copy.
fn turan_level(n: usize, t: usize, forbidden: &[Graph]) -> Result<BTreeMap<CanonicalLabel, Graph>> {
    let targets = turan_targets(n, t);
    grow(Graph::empty(0), &targets, |g, t| expand_turan(g, t, forbidden))
}

/// `ex(n, forbidden)` for forbidden patterns that all have edges.
pub(crate) fn turan_branch_and_bound(n: usize, forbidden: &[Graph]) -> Result<Optimum<Graph>> {
    let mut prev = 0;
    for k in 1..=n {
        let upper = if k >= 3 {
            binomial2(k).min(prev * k / (k - 2))
        } else {
            binomial2(k)
        };
        for t in (0..=upper).rev() {
            let level = turan_level(k, t, forbidden)?;
            if let Some((value, label)) = best_of(&level, Graph::edge_count) {
                if k == n {
                    return Ok(Optimum {
                        value,
                        witness: decode_unsigned(&label),
                    });
                }
                prev = value;
                break;
            }
        }
    }
    Ok(Optimum {
        value: 0,
        witness: Graph::empty(0),
    })
}

fn decode_unsigned(label: &CanonicalLabel) -> Graph {
    match label.decode().expect("label produced by canonical_form") {
        crate::graph::DecodedLabel::Unsigned(g) => g,
        crate::graph::DecodedLabel::Signed(_) => unreachable!("unsigned search"),
    }
}

fn decode_signed(label: &CanonicalLabel) -> SignedBipartiteGraph {
    match label.decode().expect("label produced by canonical_form") {
        crate::graph::DecodedLabel::Signed(g) => g,
        crate::graph::DecodedLabel::Unsigned(_) => unreachable!("signed search"),
    }
}

/// Exhaustive depth-first search over all labeled free graphs on `n`
/// vertices, adding edges in lexicographic order.
pub(crate) fn turan_exhaustive(n: usize, forbidden: &[Graph]) -> Result<Optimum<Graph>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|b| (0..b).map(move |a| (a, b))).collect();
    struct State<'a> {
        pairs: Vec<(usize, usize)>,
        forbidden: &'a [Graph],
        best: usize,
        label: Option<CanonicalLabel>,
    }
    fn dfs(g: &mut Graph, i: usize, st: &mut State) -> Result<()> {
        let cur = g.edge_count();
        if cur + (st.pairs.len() - i) < st.best {
            return Ok(());
        }
        if i == st.pairs.len() {
            let label = canonical_form(g)?;
            if cur > st.best || st.label.as_ref().is_none_or(|l| label < *l) {
                st.best = cur;
                st.label = Some(label);
            }
            return Ok(());
        }
        let (a, b) = st.pairs[i];
        g.add_edge(a, b);
        let mut free = true;
        for h in st.forbidden {
            if has_copy_using_edge(g, h, (a, b))? {
                free = false;
                break;
            }
        }
        if free {
            dfs(g, i + 1, st)?;
        }
        g.remove_edge(a, b);
        dfs(g, i + 1, st)
    }
    let mut st = State {
        pairs,
        forbidden,
        best: 0,
        label: None,
    };
    dfs(&mut Graph::empty(n), 0, &mut st)?;
    Ok(Optimum {
        value: st.best,
        witness: decode_unsigned(&st.label.expect("empty graph is free")),
    })
}

fn zarankiewicz_targets(m: usize, t: usize) -> Vec<usize> {
    let mut targets = vec![0; m + 1];
    targets[m] = t;
    for k in (1..=m).rev() {
        targets[k - 1] = targets[k] - targets[k] / k;
    }
    targets
}

fn expand_zarankiewicz(
    g: &SignedBipartiteGraph,
    target: usize,
    forbidden: &[SignedBipartiteGraph],
) -> Result<Vec<(CanonicalLabel, SignedBipartiteGraph)>> {
    let k = g.plus_count();
    let n = g.minus_count();
    let e = g.edge_count();
    let top = (0..k).map(|p| g.plus_degree(p)).min().unwrap_or(n);
    let minus: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    for s in target.saturating_sub(e)..=top {
        for_each_subset(&minus, s, &mut |nbrs| {
            let edges = g.edges().into_iter().chain(nbrs.iter().map(|&q| (k, q)));
            let child = SignedBipartiteGraph::from_edges(k + 1, n, edges)?;
            for h in forbidden {
                for x in 0..h.plus_count() {
                    if h.plus_degree(x) <= s && EmbeddingSearch::signed(h, &child).fix(x, k).exists()? {
                        return Ok(());
                    }
                }
            }
            out.push((canonical_form(&child)?, child));
            Ok(())
        })?;
    }
    Ok(out)
}

fn zarankiewicz_level(
    m: usize,
    n: usize,
    t: usize,
    forbidden: &[SignedBipartiteGraph],
) -> Result<BTreeMap<CanonicalLabel, SignedBipartiteGraph>> {
    let targets = zarankiewicz_targets(m, t);
    if m == 0 {
        let root = SignedBipartiteGraph::empty(0, n);
        let mut level = BTreeMap::new();
        if t == 0 {
            level.insert(canonical_form(&root)?, root);
        }
        return Ok(level);
    }
    grow(SignedBipartiteGraph::empty(0, n), &targets, |g, t| {
        expand_zarankiewicz(g, t, forbidden)
    })
}

/// `z(m, n, forbidden)` for forbidden patterns that all have edges. The
/// search grows the larger side so subsets range over the smaller one.
pub(crate) fn zarankiewicz_branch_and_bound(
    m: usize,
    n: usize,
    forbidden: &[SignedBipartiteGraph],
) -> Result<Optimum<SignedBipartiteGraph>> {
    let transposed = n > m;
    let (rows, cols) = if transposed { (n, m) } else { (m, n) };
    let patterns: Vec<SignedBipartiteGraph> = if transposed {
        forbidden.iter().map(SignedBipartiteGraph::transpose).collect()
    } else {
        forbidden.to_vec()
    };
    let mut prev = 0;
    for k in 0..=rows {
        let upper = if k >= 2 {
            (k * cols).min(prev * k / (k - 1))
        } else {
            k * cols
        };
        for t in (0..=upper).rev() {
            let level = zarankiewicz_level(k, cols, t, &patterns)?;
            let Some(value) = level.values().map(SignedBipartiteGraph::edge_count).max() else {
                continue;
            };
            if k == rows {
                let mut best: Option<CanonicalLabel> = None;
                for g in level.values().filter(|g| g.edge_count() == value) {
                    let g = if transposed { g.transpose() } else { g.clone() };
                    let label = canonical_form(&g)?;
                    if best.as_ref().is_none_or(|b| label < *b) {
                        best = Some(label);
                    }
                }
                return Ok(Optimum {
                    value,
                    witness: decode_signed(&best.expect("level is non-empty")),
                });
            }
            prev = value;
            break;
        }
    }
    unreachable!("the last level always returns")
}

/// Exhaustive depth-first search over all labeled signed hosts with parts
/// `(m, n)`, adding edges `(p, q)` in lexicographic order.
pub(crate) fn zarankiewicz_exhaustive(
    m: usize,
    n: usize,
    forbidden: &[SignedBipartiteGraph],
) -> Result<Optimum<SignedBipartiteGraph>> {
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|p| (0..n).map(move |q| (p, q))).collect();
    struct State<'a> {
        pairs: Vec<(usize, usize)>,
        forbidden: &'a [SignedBipartiteGraph],
        best: usize,
        label: Option<CanonicalLabel>,
    }
    fn dfs(g: &mut SignedBipartiteGraph, i: usize, st: &mut State) -> Result<()> {
        let cur = g.edge_count();
        if cur + (st.pairs.len() - i) < st.best {
            return Ok(());
        }
        if i == st.pairs.len() {
            let label = canonical_form(g)?;
            if cur > st.best || st.label.as_ref().is_none_or(|l| label < *l) {
                st.best = cur;
                st.label = Some(label);
            }
            return Ok(());
        }
        let (p, q) = st.pairs[i];
        let plus = g.plus_count();
        g.graph_mut().add_edge(p, plus + q);
        let mut free = true;
        for h in st.forbidden {
            if has_signed_copy_using_edge(g, h, (p, q))? {
                free = false;
                break;
            }
        }
        if free {
            dfs(g, i + 1, st)?;
        }
        g.graph_mut().remove_edge(p, plus + q);
        dfs(g, i + 1, st)
    }
    let mut st = State {
        pairs,
        forbidden,
        best: 0,
        label: None,
    };
    dfs(&mut SignedBipartiteGraph::empty(m, n), 0, &mut st)?;
    Ok(Optimum {
        value: st.best,
        witness: decode_signed(&st.label.expect("empty host is free")),
    })
}
