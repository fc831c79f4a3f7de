//! Injective edge-preserving maps of a pattern into a host.
//!
//! The search is a backtracking over pattern vertices with candidate sets
//! computed as intersections of host adjacency bitsets. By default pattern
//! vertices are placed in index order, so the stream is lexicographic on the
//! map. Counting and existence checks switch to a connectivity-greedy order.

use std::ops::Deref;

use crate::error::{check_size, Error, Result};
use crate::gluing::RootedPattern;
use crate::graph::{automorphism_count, signed_automorphism_count, words_for, Graph, SignedBipartiteGraph};

pub const PATTERN_MAX_VERTICES: usize = 12;
pub const HOST_MAX_VERTICES: usize = 4096;

/// Position `i` holds the host vertex assigned to pattern vertex `i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Embedding(pub Vec<usize>);

impl Embedding {
    pub fn map(&self) -> &[usize] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }
}

impl Deref for Embedding {
    type Target = [usize];
    fn deref(&self) -> &[usize] {
        &self.0
    }
}

/// Configures one embedding enumeration.
#[derive(Clone, Debug)]
pub struct EmbeddingSearch<'a> {
    pattern: &'a Graph,
    host: &'a Graph,
    pattern_plus: Option<usize>,
    host_plus: usize,
    fixed: Vec<(usize, usize)>,
    lexicographic: bool,
}

impl<'a> EmbeddingSearch<'a> {
    pub fn new(pattern: &'a Graph, host: &'a Graph) -> Self {
        EmbeddingSearch {
            pattern,
            host,
            pattern_plus: None,
            host_plus: 0,
            fixed: Vec::new(),
            lexicographic: true,
        }
    }

    /// Sign-respecting search: `+` pattern vertices go to `+` host vertices.
    pub fn signed(pattern: &'a SignedBipartiteGraph, host: &'a SignedBipartiteGraph) -> Self {
        EmbeddingSearch {
            pattern_plus: Some(pattern.plus_count()),
            host_plus: host.plus_count(),
            ..EmbeddingSearch::new(pattern.as_graph(), host.as_graph())
        }
    }

    /// Sign-respecting search on plain graphs whose first `pattern_plus`
    /// and `host_plus` vertices form the `+` sides.
    pub fn with_sides(mut self, pattern_plus: usize, host_plus: usize) -> Self {
        self.pattern_plus = Some(pattern_plus);
        self.host_plus = host_plus;
        self
    }

    /// Pins pattern vertex `x` to host vertex `w`.
    pub fn fix(mut self, x: usize, w: usize) -> Self {
        self.fixed.push((x, w));
        self
    }

    /// Drops the lexicographic order guarantee in favour of a faster
    /// search order.
    pub fn any_order(mut self) -> Self {
        self.lexicographic = false;
        self
    }

    pub fn iter(&self) -> Result<Embeddings<'a>> {
        Embeddings::new(self)
    }

    pub fn count(&self) -> Result<u64> {
        Ok(self.clone().any_order().iter()?.count_remaining())
    }

    pub fn exists(&self) -> Result<bool> {
        Ok(self.clone().any_order().iter()?.advance())
    }
}

struct Level {
    cands: Vec<u64>,
    word: usize,
}

/// Stream of embeddings produced by an [`EmbeddingSearch`].
pub struct Embeddings<'a> {
    host: &'a Graph,
    order: Vec<usize>,
    back: Vec<Vec<usize>>,
    fixed: Vec<Option<usize>>,
    side: Vec<Option<Vec<u64>>>,
    host_degree: Vec<usize>,
    pattern_degree: Vec<usize>,
    map: Vec<usize>,
    used: Vec<u64>,
    stack: Vec<Level>,
    started: bool,
    done: bool,
}

impl<'a> Embeddings<'a> {
    fn new(s: &EmbeddingSearch<'a>) -> Result<Self> {
        let (h, g) = (s.pattern, s.host);
        check_size("pattern", h.vertex_count(), PATTERN_MAX_VERTICES)?;
        check_size("host", g.vertex_count(), HOST_MAX_VERTICES)?;
        let hn = h.vertex_count();
        let gn = g.vertex_count();
        let mut fixed = vec![None; hn];
        let mut done = hn > gn;
        for &(x, w) in &s.fixed {
            if x >= hn {
                return Err(Error::InvalidPartialMap(format!("pattern vertex {x} out of range")));
            }
            if w >= gn {
                return Err(Error::InvalidPartialMap(format!("host vertex {w} out of range")));
            }
            match fixed[x] {
                Some(prev) if prev != w => {
                    return Err(Error::InvalidPartialMap(format!(
                        "pattern vertex {x} pinned to both {prev} and {w}"
                    )))
                }
                _ => fixed[x] = Some(w),
            }
        }
        let mut seen = vec![false; gn];
        for w in fixed.iter().flatten() {
            if std::mem::replace(&mut seen[*w], true) {
                done = true;
            }
        }
        let words = words_for(gn);
        let side = match s.pattern_plus {
            None => vec![None; hn],
            Some(pp) => {
                let plus = range_mask(words, 0, s.host_plus.min(gn));
                let minus = range_mask(words, s.host_plus.min(gn), gn);
                (0..hn)
                    .map(|x| Some(if x < pp { plus.clone() } else { minus.clone() }))
                    .collect()
            }
        };
        for (x, w) in fixed.iter().enumerate() {
            if let (Some(w), Some(mask)) = (w, &side[x]) {
                if mask[w / 64] >> (w % 64) & 1 == 0 {
                    done = true;
                }
            }
        }
        let order = if s.lexicographic {
            (0..hn).collect()
        } else {
            greedy_order(h, &fixed)
        };
        let mut pos = vec![0; hn];
        for (d, &x) in order.iter().enumerate() {
            pos[x] = d;
        }
        let back = order
            .iter()
            .enumerate()
            .map(|(d, &x)| h.neighbors(x).filter(|&y| pos[y] < d).collect())
            .collect();
        Ok(Embeddings {
            host: g,
            order,
            back,
            fixed,
            side,
            host_degree: (0..gn).map(|v| g.degree(v)).collect(),
            pattern_degree: (0..hn).map(|x| h.degree(x)).collect(),
            map: vec![usize::MAX; hn],
            used: vec![0; words],
            stack: Vec::new(),
            started: false,
            done,
        })
    }

    fn candidates(&self, d: usize) -> Vec<u64> {
        let x = self.order[d];
        let words = self.used.len();
        let mut c = match &self.side[x] {
            Some(mask) => mask.clone(),
            None => range_mask(words, 0, self.host.vertex_count()),
        };
        if let Some(w) = self.fixed[x] {
            let keep = c[w / 64] & (1 << (w % 64));
            c.iter_mut().for_each(|word| *word = 0);
            c[w / 64] = keep;
        }
        for &y in &self.back[d] {
            let row = self.host.row(self.map[y]);
            c.iter_mut().zip(row).for_each(|(a, b)| *a &= b);
        }
        c.iter_mut().zip(&self.used).for_each(|(a, b)| *a &= !b);
        c
    }

    fn pop(&mut self, d: usize) -> Option<usize> {
        let need = self.pattern_degree[self.order[d]];
        let level = &mut self.stack[d];
        while level.word < level.cands.len() {
            let word = &mut level.cands[level.word];
            if *word == 0 {
                level.word += 1;
                continue;
            }
            let w = level.word * 64 + word.trailing_zeros() as usize;
            *word &= *word - 1;
            if self.host_degree[w] >= need {
                return Some(w);
            }
        }
        None
    }

    fn set_used(&mut self, w: usize, on: bool) {
        if on {
            self.used[w / 64] |= 1 << (w % 64);
        } else {
            self.used[w / 64] &= !(1 << (w % 64));
        }
    }

    /// Moves to the next embedding, leaving it in `self.map`.
    fn advance(&mut self) -> bool {
        if self.done {
            return false;
        }
        let hn = self.order.len();
        if hn == 0 {
            self.done = true;
            return !std::mem::replace(&mut self.started, true);
        }
        if !self.started {
            self.started = true;
            let cands = self.candidates(0);
            self.stack.push(Level { cands, word: 0 });
        } else {
            let x = self.order[hn - 1];
            self.set_used(self.map[x], false);
        }
        loop {
            let d = self.stack.len() - 1;
            match self.pop(d) {
                None => {
                    self.stack.pop();
                    if d == 0 {
                        self.done = true;
                        return false;
                    }
                    let x = self.order[d - 1];
                    self.set_used(self.map[x], false);
                }
                Some(w) => {
                    self.map[self.order[d]] = w;
                    self.set_used(w, true);
                    if d + 1 == hn {
                        return true;
                    }
                    let cands = self.candidates(d + 1);
                    self.stack.push(Level { cands, word: 0 });
                }
            }
        }
    }

    fn count_remaining(mut self) -> u64 {
        let hn = self.order.len();
        if hn <= 1 || self.started {
            let mut total = 0;
            while self.advance() {
                total += 1;
            }
            return total;
        }
        // The last level needs no degree filter: a candidate adjacent to
        // every placed neighbour already has enough degree.
        let mut total = 0u64;
        if self.done {
            return 0;
        }
        self.started = true;
        let cands = self.candidates(0);
        self.stack.push(Level { cands, word: 0 });
        loop {
            let d = self.stack.len() - 1;
            match self.pop(d) {
                None => {
                    self.stack.pop();
                    if d == 0 {
                        return total;
                    }
                    let x = self.order[d - 1];
                    self.set_used(self.map[x], false);
                }
                Some(w) => {
                    self.map[self.order[d]] = w;
                    self.set_used(w, true);
                    if d + 2 == hn {
                        let last = self.candidates(d + 1);
                        total += last.iter().map(|w| w.count_ones() as u64).sum::<u64>();
                        self.set_used(w, false);
                    } else {
                        let cands = self.candidates(d + 1);
                        self.stack.push(Level { cands, word: 0 });
                    }
                }
            }
        }
    }
}

impl Iterator for Embeddings<'_> {
    type Item = Embedding;

    fn next(&mut self) -> Option<Embedding> {
        self.advance().then(|| Embedding(self.map.clone()))
    }
}

fn range_mask(words: usize, lo: usize, hi: usize) -> Vec<u64> {
    let mut m = vec![0u64; words];
    for v in lo..hi {
        m[v / 64] |= 1 << (v % 64);
    }
    m
}

/// Fixed vertices first, then repeatedly the vertex with most placed
/// neighbours (ties: higher degree, then lower index).
fn greedy_order(h: &Graph, fixed: &[Option<usize>]) -> Vec<usize> {
    let n = h.vertex_count();
    let mut order: Vec<usize> = (0..n).filter(|&x| fixed[x].is_some()).collect();
    let mut placed = vec![false; n];
    for &x in &order {
        placed[x] = true;
    }
    while order.len() < n {
        let next = (0..n)
            .filter(|&x| !placed[x])
            .max_by_key(|&x| {
                let back = h.neighbors(x).filter(|&y| placed[y]).count();
                (back, h.degree(x), std::cmp::Reverse(x))
            })
            .expect("unplaced vertex remains");
        placed[next] = true;
        order.push(next);
    }
    order
}

/// All embeddings of `h` into `g`, lexicographic on the map.
pub fn embeddings<'a>(h: &'a Graph, g: &'a Graph) -> Result<Embeddings<'a>> {
    EmbeddingSearch::new(h, g).iter()
}

/// All sign-respecting embeddings, lexicographic on the map.
pub fn signed_embeddings<'a>(h: &'a SignedBipartiteGraph, g: &'a SignedBipartiteGraph) -> Result<Embeddings<'a>> {
    EmbeddingSearch::signed(h, g).iter()
}

pub fn count_embeddings(h: &Graph, g: &Graph) -> Result<u64> {
    EmbeddingSearch::new(h, g).count()
}

pub fn count_signed_embeddings(h: &SignedBipartiteGraph, g: &SignedBipartiteGraph) -> Result<u64> {
    EmbeddingSearch::signed(h, g).count()
}

/// Unlabeled copies: embeddings divided by `|Aut(h)|`.
pub fn count_copies(h: &Graph, g: &Graph) -> Result<u64> {
    Ok(count_embeddings(h, g)? / automorphism_count(h)?)
}

/// Unlabeled sign-respecting copies.
pub fn count_signed_copies(h: &SignedBipartiteGraph, g: &SignedBipartiteGraph) -> Result<u64> {
    Ok(count_signed_embeddings(h, g)? / signed_automorphism_count(h)?)
}

/// True iff `g` contains no copy of `h`.
pub fn is_free(g: &Graph, h: &Graph) -> Result<bool> {
    Ok(!EmbeddingSearch::new(h, g).exists()?)
}

pub fn is_free_signed(g: &SignedBipartiteGraph, h: &SignedBipartiteGraph) -> Result<bool> {
    Ok(!EmbeddingSearch::signed(h, g).exists()?)
}

/// True iff some copy of `h` in `g` uses the edge `uv`.
pub fn has_copy_using_edge(g: &Graph, h: &Graph, (u, v): (usize, usize)) -> Result<bool> {
    for (a, b) in h.edges() {
        for (x, y) in [(u, v), (v, u)] {
            if EmbeddingSearch::new(h, g).fix(a, x).fix(b, y).exists()? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// True iff some sign-respecting copy of `h` in `g` uses the signed edge
/// `(p, q)`.
pub fn has_signed_copy_using_edge(
    g: &SignedBipartiteGraph,
    h: &SignedBipartiteGraph,
    (p, q): (usize, usize),
) -> Result<bool> {
    let (gp, hp) = (g.plus_count(), h.plus_count());
    for (x, y) in h.edges() {
        if EmbeddingSearch::signed(h, g).fix(x, p).fix(hp + y, gp + q).exists()? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// True iff some copy of `h` in `g` uses vertex `w`.
pub fn has_copy_using_vertex(g: &Graph, h: &Graph, w: usize) -> Result<bool> {
    for x in 0..h.vertex_count() {
        if h.degree(x) <= g.degree(w) && EmbeddingSearch::new(h, g).fix(x, w).exists()? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Every embedding `φ` of the rooted pattern into `g` with
/// `φ(root_vertices[i]) = psi[i]`, lexicographic on the map.
///
/// `psi` must embed the root forest: the right length, injective, and every
/// root edge sent to a host edge.
pub fn enumerate_extensions<'a>(psi: &[usize], p: &'a RootedPattern, g: &'a Graph) -> Result<Embeddings<'a>> {
    validate_partial_map(psi, p, g)?;
    let mut search = EmbeddingSearch::new(p.pattern(), g);
    for (&x, &w) in p.root_vertices().iter().zip(psi) {
        search = search.fix(x, w);
    }
    search.iter()
}

pub(crate) fn validate_partial_map(psi: &[usize], p: &RootedPattern, g: &Graph) -> Result<()> {
    let roots = p.root_vertices();
    if psi.len() != roots.len() {
        return Err(Error::InvalidPartialMap(format!(
            "{} images for {} root vertices",
            psi.len(),
            roots.len()
        )));
    }
    for (i, &w) in psi.iter().enumerate() {
        if w >= g.vertex_count() {
            return Err(Error::InvalidPartialMap(format!("host vertex {w} out of range")));
        }
        if psi[..i].contains(&w) {
            return Err(Error::InvalidPartialMap(format!("host vertex {w} used twice")));
        }
    }
    for &(a, b) in p.root_edges() {
        let ia = roots
            .iter()
            .position(|&r| r == a)
            .expect("root edge endpoints are roots");
        let ib = roots
            .iter()
            .position(|&r| r == b)
            .expect("root edge endpoints are roots");
        if !g.has_edge(psi[ia], psi[ib]) {
            return Err(Error::InvalidPartialMap(format!(
                "root edge ({a}, {b}) maps to non-edge ({}, {})",
                psi[ia], psi[ib]
            )));
        }
    }
    Ok(())
}
