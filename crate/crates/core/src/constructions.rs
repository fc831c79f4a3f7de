//! Seeded random hosts and lower-bound constructions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::embedding::embeddings;
use crate::error::{Error, Result};
use crate::graph::{edge, Graph, Sign, SignedBipartiteGraph};

pub const SAMPLER_ALGORITHM: &str = "chacha8";

/// Seed plus stream index for the ChaCha8 generator. Streams split
/// independent trials off one master seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SeededSampler {
    pub seed: u64,
    pub stream: u64,
}

impl SeededSampler {
    pub fn new(seed: u64) -> Self {
        SeededSampler { seed, stream: 0 }
    }

    pub fn algorithm(&self) -> &'static str {
        SAMPLER_ALGORITHM
    }

    /// Sampler for trial `index`, derived deterministically from this one.
    pub fn split(&self, index: u64) -> SeededSampler {
        SeededSampler {
            seed: self.seed,
            stream: self.stream.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(index + 1),
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

fn bernoulli(rng: &mut ChaCha8Rng, num: u64, den: u64) -> bool {
    rng.random_range(0..den) < num
}

/// `G(n, p)` with exact rational `p`: pairs `(a, b)`, `a < b`, are visited in
/// lexicographic order and each is kept with probability `p`.
pub fn sample_gnp(n: usize, p: &BigRational, s: &SeededSampler) -> Result<Graph> {
    if p.is_negative() || *p > BigRational::one() {
        return Err(Error::PreconditionViolated(format!("p = {p} outside [0, 1]")));
    }
    let (num, den) = match (p.numer().to_u64(), p.denom().to_u64()) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(Error::PreconditionViolated(
                "p needs numerator and denominator below 2^64".into(),
            ))
        }
    };
    let mut rng = s.rng();
    let mut g = Graph::empty(n);
    for a in 0..n {
        for b in a + 1..n {
            if bernoulli(&mut rng, num, den) {
                g.add_edge(a, b);
            }
        }
    }
    Ok(g)
}

/// `G(n, p)` for a real `p`, same pair order as [`sample_gnp`].
pub fn sample_gnp_f64(n: usize, p: f64, s: &SeededSampler) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::PreconditionViolated(format!("p = {p} outside [0, 1]")));
    }
    let mut rng = s.rng();
    let mut g = Graph::empty(n);
    for a in 0..n {
        for b in a + 1..n {
            if rng.random::<f64>() < p {
                g.add_edge(a, b);
            }
        }
    }
    Ok(g)
}

/// `p = n^{-(v(F)-2)/(e(F)-1)} / 4`.
pub fn deletion_probability(n: usize, f: &Graph) -> Result<f64> {
    let e = f.edge_count();
    if e < 2 {
        return Err(Error::TooFewEdges(e));
    }
    let exponent = (f.vertex_count() as f64 - 2.0) / (e as f64 - 1.0);
    Ok(0.25 * (n as f64).powf(-exponent))
}

/// Repeatedly takes the first copy of `f` in enumeration order and deletes
/// the least edge of its image. Returns the `f`-free graph and the number of
/// deleted edges.
pub fn delete_per_copy(g: &Graph, f: &Graph) -> Result<(Graph, usize)> {
    let mut g = g.clone();
    let pattern_edges = f.edges();
    let mut deleted = 0;
    loop {
        let Some(emb) = embeddings(f, &g)?.next() else {
            return Ok((g, deleted));
        };
        let Some((a, b)) = pattern_edges.iter().map(|&(x, y)| edge(emb[x], emb[y])).min() else {
            return Err(Error::PreconditionViolated("pattern has no edges".into()));
        };
        g.remove_edge(a, b);
        deleted += 1;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeletionOutcome {
    pub p: f64,
    pub sampled_edges: usize,
    pub deleted: usize,
    #[serde(skip)]
    pub graph: Graph,
}

/// Samples `G(n, p)` at the deletion probability and removes one edge per
/// surviving copy of `f`.
pub fn deletion_construction(n: usize, f: &Graph, s: &SeededSampler) -> Result<DeletionOutcome> {
    let p = deletion_probability(n, f)?;
    let sampled = sample_gnp_f64(n, p, s)?;
    let sampled_edges = sampled.edge_count();
    let (graph, deleted) = delete_per_copy(&sampled, f)?;
    Ok(DeletionOutcome {
        p,
        sampled_edges,
        deleted,
        graph,
    })
}

/// `Δ(G) <= K δ(G)`; a graph with an isolated vertex qualifies only when it
/// has no edges.
pub fn almost_regular(g: &Graph, k: &BigRational) -> bool {
    if g.vertex_count() == 0 {
        return true;
    }
    let (min, max) = (g.min_degree(), g.max_degree());
    if min == 0 {
        return max == 0;
    }
    BigRational::from_integer(BigInt::from(max)) <= k * BigInt::from(min)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignSplit {
    /// Side of each original vertex.
    pub signs: Vec<Sign>,
    /// Crossing edges, `+` vertices first in original order.
    pub graph: SignedBipartiteGraph,
}

/// Uniform split into `ceil(v/2)` `+` and `floor(v/2)` `-` vertices keeping
/// only crossing edges.
pub fn random_sign_split(g: &Graph, s: &SeededSampler) -> Result<SignSplit> {
    let n = g.vertex_count();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut s.rng());
    let mut signs = vec![Sign::Minus; n];
    for &v in &order[..n.div_ceil(2)] {
        signs[v] = Sign::Plus;
    }
    let crossing = Graph::from_edges(n, g.edges().into_iter().filter(|&(a, b)| signs[a] != signs[b]))?;
    let graph = SignedBipartiteGraph::from_graph(&crossing, &signs)?;
    Ok(SignSplit { signs, graph })
}

/// `floor(1 / max(q1, q2))` disjoint copies of `g0` padded with isolated
/// vertices to parts `(m, n)`.
pub fn disjoint_blowup(
    g0: &SignedBipartiteGraph,
    q1: &BigRational,
    q2: &BigRational,
    m: usize,
    n: usize,
) -> Result<SignedBipartiteGraph> {
    let mismatch = |why: String| Err(Error::PartSizeMismatch(why));
    for q in [q1, q2] {
        if !q.is_positive() || *q > BigRational::one() {
            return mismatch(format!("q = {q} outside (0, 1]"));
        }
    }
    let part = |q: &BigRational, size: usize| {
        let scaled = q * BigInt::from(size);
        scaled.is_integer().then(|| scaled.to_integer().to_usize()).flatten()
    };
    let (Some(pm), Some(pn)) = (part(q1, m), part(q2, n)) else {
        return mismatch(format!("q1 m and q2 n must be integers for ({m}, {n})"));
    };
    if (g0.plus_count(), g0.minus_count()) != (pm, pn) {
        return mismatch(format!(
            "base graph has parts ({}, {}), expected ({pm}, {pn})",
            g0.plus_count(),
            g0.minus_count()
        ));
    }
    let q = q1.max(q2);
    let copies = (BigRational::one() / q).floor().to_integer().to_usize().unwrap_or(0);
    if copies == 0 || pm.is_zero() && pn.is_zero() {
        return Ok(SignedBipartiteGraph::empty(m, n));
    }
    let edges = (0..copies).flat_map(|i| g0.edges().into_iter().map(move |(p, r)| (i * pm + p, i * pn + r)));
    SignedBipartiteGraph::from_edges(m, n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::{is_free, is_free_signed};
    use crate::graph::encode_graph6;

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn gnp_extremes_and_determinism() {
        let s = SeededSampler::new(7);
        assert_eq!(sample_gnp(6, &r(0, 1), &s).unwrap().edge_count(), 0);
        assert_eq!(sample_gnp(6, &r(1, 1), &s).unwrap(), Graph::complete(6));
        let a = sample_gnp(30, &r(1, 3), &s).unwrap();
        let b = sample_gnp(30, &r(1, 3), &s).unwrap();
        assert_eq!(encode_graph6(&a), encode_graph6(&b));
        let c = sample_gnp(30, &r(1, 3), &s.split(1)).unwrap();
        assert_ne!(a, c);
        assert!(sample_gnp(3, &r(3, 2), &s).is_err());
    }

    #[test]
    fn deletion_probabilities() {
        let c4 = Graph::cycle(4);
        assert!((deletion_probability(64, &c4).unwrap() - 1.0 / 64.0).abs() < 1e-15);
        let p16 = 1.0 / (4.0 * 2f64.powf(8.0 / 3.0));
        assert!((deletion_probability(16, &c4).unwrap() - p16).abs() < 1e-15);
        assert_eq!(
            deletion_probability(10, &Graph::complete(2)),
            Err(Error::TooFewEdges(1))
        );
    }

    #[test]
    fn per_copy_deletion() {
        let c4 = Graph::cycle(4);
        let (g, d) = delete_per_copy(&Graph::complete_bipartite(2, 2), &c4).unwrap();
        assert_eq!((g.edge_count(), d), (3, 1));
        let (g, d) = delete_per_copy(&Graph::complete_bipartite(2, 3), &c4).unwrap();
        assert!(is_free(&g, &c4).unwrap());
        assert!(d <= 3 && g.edge_count() >= 3);
        let free = Graph::path(5);
        assert_eq!(delete_per_copy(&free, &c4).unwrap(), (free, 0));
    }

    #[test]
    fn deletion_output_is_free() {
        let master = SeededSampler::new(11);
        for i in 0..20 {
            let out = deletion_construction(16, &Graph::cycle(4), &master.split(i)).unwrap();
            assert!(is_free(&out.graph, &Graph::cycle(4)).unwrap());
            assert_eq!(out.sampled_edges - out.deleted, out.graph.edge_count());
        }
    }

    #[test]
    fn almost_regularity() {
        assert!(almost_regular(&Graph::complete_bipartite(3, 3), &r(1, 1)));
        assert!(!almost_regular(&Graph::star(5), &r(4, 1)));
        assert!(almost_regular(&Graph::star(5), &r(5, 1)));
        assert!(almost_regular(&Graph::empty(4), &r(1, 2)));
        let pendant = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert!(!almost_regular(&pendant, &r(100, 1)));
    }

    #[test]
    fn sign_splits() {
        let s = SeededSampler::new(3);
        assert_eq!(random_sign_split(&Graph::empty(5), &s).unwrap().graph.edge_count(), 0);
        let one = random_sign_split(&Graph::complete(2), &s).unwrap().graph;
        assert_eq!((one.plus_count(), one.minus_count(), one.edge_count()), (1, 1, 1));
        for i in 0..50 {
            let split = random_sign_split(&Graph::complete(4), &s.split(i)).unwrap();
            assert_eq!(split.graph.edge_count(), 4);
        }
        let odd = random_sign_split(&Graph::cycle(5), &s).unwrap().graph;
        assert_eq!((odd.plus_count(), odd.minus_count()), (3, 2));
    }

    #[test]
    fn blowups() {
        let base = SignedBipartiteGraph::from_edges(2, 2, [(0, 0), (0, 1), (1, 0)]).unwrap();
        let c4 = SignedBipartiteGraph::from_bipartite(&Graph::cycle(4)).unwrap();
        let g = disjoint_blowup(&base, &r(1, 2), &r(1, 2), 4, 4).unwrap();
        assert_eq!((g.plus_count(), g.minus_count(), g.edge_count()), (4, 4, 6));
        assert!(is_free_signed(&g, &c4).unwrap());
        assert_eq!(disjoint_blowup(&base, &r(1, 1), &r(1, 1), 2, 2).unwrap(), base);
        let g = disjoint_blowup(&base, &r(1, 2), &r(1, 3), 4, 6).unwrap();
        assert_eq!((g.plus_count(), g.minus_count(), g.edge_count()), (4, 6, 6));
        assert!(matches!(
            disjoint_blowup(&base, &r(1, 2), &r(1, 2), 5, 4),
            Err(Error::PartSizeMismatch(_))
        ));
    }
}
