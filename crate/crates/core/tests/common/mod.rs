//! Brute-force references shared by the integration tests. Nothing here
//! calls the search code under test.
#![allow(dead_code)]

use edgeglue::Graph;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Every injective map `0..h -> 0..n` in lexicographic order that sends
/// pattern edges to host edges. With `sides = Some((hp, gp))`, pattern
/// vertices below `hp` must land below `gp` and the rest at or above it.
pub fn naive_embeddings(h: &Graph, g: &Graph, sides: Option<(usize, usize)>) -> Vec<Vec<usize>> {
    let (k, n) = (h.vertex_count(), g.vertex_count());
    let mut out = Vec::new();
    let mut map = Vec::with_capacity(k);
    fn rec(
        h: &Graph,
        g: &Graph,
        sides: Option<(usize, usize)>,
        map: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        k: usize,
        n: usize,
    ) {
        if map.len() == k {
            if h.edges().iter().all(|&(a, b)| g.has_edge(map[a], map[b])) {
                out.push(map.clone());
            }
            return;
        }
        for w in 0..n {
            if map.contains(&w) {
                continue;
            }
            if let Some((hp, gp)) = sides {
                if (map.len() < hp) != (w < gp) {
                    continue;
                }
            }
            map.push(w);
            rec(h, g, sides, map, out, k, n);
            map.pop();
        }
    }
    rec(h, g, sides, &mut map, &mut out, k, n);
    out
}

/// Backtracking copy test: extend a partial map one pattern vertex at a
/// time, checking edges back to already placed vertices.
pub fn naive_contains(g: &Graph, h: &Graph) -> bool {
    fn rec(g: &Graph, h: &Graph, map: &mut Vec<usize>) -> bool {
        let x = map.len();
        if x == h.vertex_count() {
            return true;
        }
        for w in 0..g.vertex_count() {
            if map.contains(&w) {
                continue;
            }
            if (0..x).all(|y| !h.has_edge(x, y) || g.has_edge(w, map[y])) {
                map.push(w);
                if rec(g, h, map) {
                    return true;
                }
                map.pop();
            }
        }
        false
    }
    h.vertex_count() <= g.vertex_count() && rec(g, h, &mut Vec::new())
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
}

/// `ex(n, h)` by trying all `2^C(n,2)` graphs.
pub fn turan_brute(n: usize, h: &Graph) -> usize {
    let pairs = pairs(n);
    let mut best = 0;
    for mask in 0u64..1 << pairs.len() {
        let e = mask.count_ones() as usize;
        if e <= best {
            continue;
        }
        let g = Graph::from_edges(
            n,
            pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &p)| p),
        )
        .unwrap();
        if !naive_contains(&g, h) {
            best = e;
        }
    }
    best
}

/// `z(m, n, C4)` over all `2^(mn)` bipartite adjacency patterns, as rows of
/// an `m x n` 0/1 matrix: a copy is two rows sharing two columns. Rows are
/// chosen in order and a prefix that already holds a copy is abandoned,
/// since every completion of it does too.
pub fn zarankiewicz_c4_brute(m: usize, n: usize) -> usize {
    fn rec(rows: &mut Vec<u32>, m: usize, n: usize, edges: usize, best: &mut usize) {
        if rows.len() == m {
            *best = (*best).max(edges);
            return;
        }
        for r in 0u32..1 << n {
            if rows.iter().all(|&q| (q & r).count_ones() < 2) {
                rows.push(r);
                rec(rows, m, n, edges + r.count_ones() as usize, best);
                rows.pop();
            }
        }
    }
    let mut best = 0;
    rec(&mut Vec::new(), m, n, 0, &mut best);
    best
}

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    Graph::from_edges(n, pairs(n).into_iter().filter(|_| rng.random_bool(p))).unwrap()
}

/// Exact `C(n, k)`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Sample mean and standard deviation.
pub fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}
