//! Greedy balanced families of embeddings, their verification, heavy/light
//! splitting, glued-copy assembly and copy-count bounds.
//!
//! A family is built in one pass over the host edges. For each edge `e`
//! (optionally in a seeded shuffled order) and both orientations, the
//! embeddings sending the distinguished edge `f` onto `e` are offered in
//! enumeration order; an embedding joins when it keeps every degree within
//! its cap. Degrees only grow, so an embedding refused once stays refused and
//! the pass ends with a maximal family.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, ToPrimitive};
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::bounds::{eta_prime, format_rational, Rational};
use crate::constructions::SeededSampler;
use crate::embedding::{Embedding, EmbeddingSearch};
use crate::error::{Error, Result};
use crate::gluing::RootedPattern;
use crate::graph::{decode_graph6, edge, encode_graph6, signed_automorphism_count, Edge, Graph, SignedBipartiteGraph};

/// Caps on the family. `None` means unlimited.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyConstraints {
    pub epsilon: Rational,
    pub gamma: Rational,
    /// Most members with a given root image `ψ` that also cover a given
    /// vertex `u` outside `ψ(F)`.
    pub per_pair_cap: Option<u64>,
    /// Most members sending `f` onto a given host edge.
    pub per_edge_cap: Option<u64>,
    pub target_size: Option<usize>,
    /// Inputs used when the caps came from a formula.
    pub derivation: Option<BTreeMap<String, String>>,
}

impl FamilyConstraints {
    pub fn unlimited() -> Self {
        FamilyConstraints {
            epsilon: Rational::from_integer(1.into()),
            gamma: Rational::from_integer(1.into()),
            per_pair_cap: None,
            per_edge_cap: None,
            target_size: None,
            derivation: None,
        }
    }

    pub fn with_caps(per_pair_cap: Option<u64>, per_edge_cap: Option<u64>) -> Self {
        FamilyConstraints {
            per_pair_cap,
            per_edge_cap,
            ..FamilyConstraints::unlimited()
        }
    }

    /// Caps `floor(γ p^{e(H)-e(F)} n^{h-ℓ})` and
    /// `floor((1+ε) η' p^{e(H)} n^h / e(G))` with `η' = η / 2^{3e(H)}`.
    pub fn derive_unsigned(
        p: &RootedPattern,
        host: &Graph,
        density: f64,
        epsilon: &Rational,
        gamma: &Rational,
        eta: &Rational,
    ) -> Self {
        let (h, e_h, ell, e_f) = p.stats();
        let n = host.vertex_count() as f64;
        let pair = gamma.to_f64().unwrap_or(0.0) * density.powi((e_h - e_f) as i32) * n.powi((h - ell) as i32);
        let ep = eta_prime(eta, e_h);
        let per_edge = (1.0 + epsilon.to_f64().unwrap_or(0.0))
            * ep.to_f64().unwrap_or(0.0)
            * density.powi(e_h as i32)
            * n.powi(h as i32)
            / host.edge_count().max(1) as f64;
        let derivation = BTreeMap::from([
            ("p".to_string(), density.to_string()),
            ("n".to_string(), host.vertex_count().to_string()),
            ("e(G)".to_string(), host.edge_count().to_string()),
            ("epsilon".to_string(), format_rational(epsilon)),
            ("gamma".to_string(), format_rational(gamma)),
            ("eta".to_string(), format_rational(eta)),
            ("eta_prime".to_string(), format_rational(&ep)),
        ]);
        FamilyConstraints {
            epsilon: epsilon.clone(),
            gamma: gamma.clone(),
            per_pair_cap: Some(pair.floor().max(0.0) as u64),
            per_edge_cap: Some(per_edge.floor().max(0.0) as u64),
            target_size: None,
            derivation: Some(derivation),
        }
    }

    /// Caps `floor(γA)` and `floor((1+ε)A)` for signed families.
    pub fn derive_signed(a: &Rational, epsilon: &Rational, gamma: &Rational) -> Self {
        let one = Rational::from_integer(1.into());
        let floor = |r: Rational| r.floor().to_integer().to_u64().unwrap_or(0);
        FamilyConstraints {
            epsilon: epsilon.clone(),
            gamma: gamma.clone(),
            per_pair_cap: Some(floor(gamma * a)),
            per_edge_cap: Some(floor((one + epsilon) * a)),
            target_size: None,
            derivation: Some(BTreeMap::from([
                ("A".to_string(), format_rational(a)),
                ("epsilon".to_string(), format_rational(epsilon)),
                ("gamma".to_string(), format_rational(gamma)),
            ])),
        }
    }
}

/// Builder options beyond the caps.
#[derive(Clone, Copy, Debug, Default)]
pub struct BuildOptions {
    /// Shuffle the host edge order with this sampler.
    pub shuffle: Option<SeededSampler>,
    /// Keep at most one embedding per unlabeled copy.
    pub unlabeled: bool,
}

type PairKey = (Vec<usize>, usize);

/// A family of embeddings of a rooted pattern into a host.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalancedFamily {
    pub host: Graph,
    /// `+` side sizes `(pattern, host)` for sign-respecting families.
    pub signed: Option<(usize, usize)>,
    pub pattern: RootedPattern,
    pub unlabeled: bool,
    pub members: Vec<Embedding>,
}

#[derive(Default)]
struct Degrees {
    edge: BTreeMap<Edge, u64>,
    pair: BTreeMap<PairKey, u64>,
}

impl Degrees {
    fn pairs_of(p: &RootedPattern, emb: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let psi: Vec<usize> = p.root_vertices().iter().map(|&r| emb[r]).collect();
        let others = emb.iter().copied().filter(|w| !psi.contains(w)).collect();
        (psi, others)
    }

    fn admits(&self, p: &RootedPattern, f: Edge, emb: &[usize], c: &FamilyConstraints) -> bool {
        if let Some(cap) = c.per_edge_cap {
            let e = edge(emb[f.0], emb[f.1]);
            if self.edge.get(&e).copied().unwrap_or(0) >= cap {
                return false;
            }
        }
        if let Some(cap) = c.per_pair_cap {
            let (psi, others) = Degrees::pairs_of(p, emb);
            let mut key = (psi, 0);
            for u in others {
                key.1 = u;
                if self.pair.get(&key).copied().unwrap_or(0) >= cap {
                    return false;
                }
            }
        }
        true
    }

    fn add(&mut self, p: &RootedPattern, f: Edge, emb: &[usize]) {
        *self.edge.entry(edge(emb[f.0], emb[f.1])).or_default() += 1;
        let (psi, others) = Degrees::pairs_of(p, emb);
        for u in others {
            *self.pair.entry((psi.clone(), u)).or_default() += 1;
        }
    }

    fn of(fam: &BalancedFamily, f: Edge) -> Degrees {
        let mut d = Degrees::default();
        for m in &fam.members {
            d.add(&fam.pattern, f, m);
        }
        d
    }
}

/// Image of an embedding as an unlabeled copy: vertex set and edge set.
fn copy_key(h: &Graph, emb: &[usize]) -> (Vec<usize>, Vec<Edge>) {
    let mut vertices = emb.to_vec();
    vertices.sort_unstable();
    let mut edges: Vec<Edge> = h.edges().into_iter().map(|(a, b)| edge(emb[a], emb[b])).collect();
    edges.sort_unstable();
    (vertices, edges)
}

impl BalancedFamily {
    fn distinguished(&self) -> Result<Edge> {
        self.pattern
            .distinguished_edge()
            .ok_or_else(|| Error::PreconditionViolated("pattern has no distinguished edge".into()))
    }

    fn search<'a>(&'a self) -> EmbeddingSearch<'a> {
        match self.signed {
            None => EmbeddingSearch::new(self.pattern.pattern(), &self.host),
            Some((pp, hp)) => EmbeddingSearch::new(self.pattern.pattern(), &self.host).with_sides(pp, hp),
        }
    }

    /// Number of members restricting to each root image `ψ`.
    pub fn root_degrees(&self) -> BTreeMap<Vec<usize>, u64> {
        let mut out = BTreeMap::new();
        for m in &self.members {
            let psi = self.pattern.root_vertices().iter().map(|&r| m[r]).collect();
            *out.entry(psi).or_default() += 1;
        }
        out
    }

    /// Number of members sending `f` onto each host edge.
    pub fn edge_degrees(&self) -> Result<BTreeMap<Edge, u64>> {
        Ok(Degrees::of(self, self.distinguished()?).edge)
    }

    /// Number of members with root image `ψ` covering `u`.
    pub fn pair_degrees(&self) -> Result<BTreeMap<(Vec<usize>, usize), u64>> {
        Ok(Degrees::of(self, self.distinguished()?).pair)
    }

    pub fn to_json(&self) -> FamilyJson {
        FamilyJson {
            host: encode_graph6(&self.host),
            host_plus: self.signed.map(|s| s.1),
            pattern: PatternJson {
                graph6: encode_graph6(self.pattern.pattern()),
                plus: self.signed.map(|s| s.0),
                roots: self.pattern.root_vertices().to_vec(),
                root_edges: self.pattern.root_edges().iter().map(|&(a, b)| [a, b]).collect(),
                distinguished: self.pattern.distinguished_edge().map(|(a, b)| [a, b]),
            },
            unlabeled: self.unlabeled,
            members: self.members.iter().map(|m| m.to_vec()).collect(),
        }
    }

    pub fn from_json(json: &FamilyJson) -> Result<Self> {
        let host = decode_graph6(&json.host)?;
        let graph = decode_graph6(&json.pattern.graph6)?;
        let signed = match (json.pattern.plus, json.host_plus) {
            (None, None) => None,
            (Some(pp), Some(hp)) if pp <= graph.vertex_count() && hp <= host.vertex_count() => Some((pp, hp)),
            _ => {
                return Err(Error::Parse(
                    "family needs both or neither of host_plus and pattern.plus".into(),
                ))
            }
        };
        let pattern = RootedPattern::new(
            graph,
            json.pattern.roots.clone(),
            json.pattern.root_edges.iter().map(|&[a, b]| (a, b)).collect(),
            json.pattern.distinguished.map(|[a, b]| (a, b)),
        )?;
        Ok(BalancedFamily {
            host,
            signed,
            pattern,
            unlabeled: json.unlabeled,
            members: json.members.iter().cloned().map(Embedding).collect(),
        })
    }
}

/// Serialized family: graphs as graph6, members as vertex images.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyJson {
    pub host: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub host_plus: Option<usize>,
    pub pattern: PatternJson,
    #[serde(default)]
    pub unlabeled: bool,
    pub members: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternJson {
    pub graph6: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plus: Option<usize>,
    pub roots: Vec<usize>,
    pub root_edges: Vec<[usize; 2]>,
    pub distinguished: Option<[usize; 2]>,
}

fn build(
    host: Graph,
    signed: Option<(usize, usize)>,
    pattern: RootedPattern,
    c: &FamilyConstraints,
    opts: &BuildOptions,
) -> Result<BalancedFamily> {
    let mut fam = BalancedFamily {
        host,
        signed,
        pattern,
        unlabeled: opts.unlabeled,
        members: Vec::new(),
    };
    let f = fam.distinguished()?;
    let mut order = fam.host.edges();
    if let Some(s) = &opts.shuffle {
        order.shuffle(&mut s.rng());
    }
    let mut degrees = Degrees::default();
    let mut copies = BTreeSet::new();
    let mut members = Vec::new();
    let target = c.target_size.unwrap_or(usize::MAX);
    'edges: for (u, v) in order {
        for (x, y) in [(u, v), (v, u)] {
            let search = fam.search().fix(f.0, x).fix(f.1, y);
            for emb in search.iter()? {
                if members.len() >= target {
                    break 'edges;
                }
                if let Some(cap) = c.per_edge_cap {
                    if degrees.edge.get(&edge(u, v)).copied().unwrap_or(0) >= cap {
                        continue 'edges;
                    }
                }
                if opts.unlabeled && copies.contains(&copy_key(fam.pattern.pattern(), &emb)) {
                    continue;
                }
                if degrees.admits(&fam.pattern, f, &emb, c) {
                    degrees.add(&fam.pattern, f, &emb);
                    if opts.unlabeled {
                        copies.insert(copy_key(fam.pattern.pattern(), &emb));
                    }
                    members.push(emb);
                }
            }
        }
    }
    fam.members = members;
    Ok(fam)
}

/// Greedy family of embeddings of `p` in `g` within the caps of `c`.
pub fn build_balanced_family(
    g: &Graph,
    p: &RootedPattern,
    c: &FamilyConstraints,
    opts: &BuildOptions,
) -> Result<BalancedFamily> {
    build(g.clone(), None, p.clone(), c, opts)
}

/// Greedy family of sign-respecting embeddings of `h` in `g`; the root
/// forest is the distinguished edge `f = (p, q)`.
pub fn build_signed_balanced_family(
    g: &SignedBipartiteGraph,
    h: &SignedBipartiteGraph,
    (p, q): (usize, usize),
    c: &FamilyConstraints,
    opts: &BuildOptions,
) -> Result<BalancedFamily> {
    if p >= h.plus_count() || q >= h.minus_count() || !h.has_edge(p, q) {
        return Err(Error::EdgeNotInGraph(p, q));
    }
    let f = h.vertex_of_edge((p, q));
    let pattern = RootedPattern::edge_rooted(h.as_graph().clone(), f)?;
    build(
        g.as_graph().clone(),
        Some((h.plus_count(), g.plus_count())),
        pattern,
        c,
        opts,
    )
}

/// Outcome of recomputing a family's degrees from scratch.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct FamilyReport {
    pub members: usize,
    /// Indices of members that are not valid embeddings.
    pub invalid_members: Vec<usize>,
    /// Indices of members repeating an earlier member (or copy, when
    /// unlabeled).
    pub duplicate_members: Vec<usize>,
    /// Host edges whose `f`-degree exceeds the edge cap.
    pub edge_violations: Vec<(Edge, u64)>,
    /// `(ψ, u, degree)` above the pair cap.
    pub pair_violations: Vec<(Vec<usize>, usize, u64)>,
    pub target: Option<f64>,
    pub target_met: Option<bool>,
}

impl FamilyReport {
    pub fn violation_count(&self) -> usize {
        self.invalid_members.len()
            + self.duplicate_members.len()
            + self.edge_violations.len()
            + self.pair_violations.len()
    }
}

fn is_valid_member(fam: &BalancedFamily, m: &[usize]) -> bool {
    let h = fam.pattern.pattern();
    let n = fam.host.vertex_count();
    if m.len() != h.vertex_count() || m.iter().any(|&w| w >= n) {
        return false;
    }
    let distinct: BTreeSet<_> = m.iter().collect();
    if distinct.len() != m.len() {
        return false;
    }
    if let Some((pp, hp)) = fam.signed {
        if m.iter().enumerate().any(|(x, &w)| (x < pp) != (w < hp)) {
            return false;
        }
    }
    h.edges().iter().all(|&(a, b)| fam.host.has_edge(m[a], m[b]))
}

/// Recomputes all degrees and lists every violation. `target` is an
/// optional lower bound on the family size.
pub fn verify_family(fam: &BalancedFamily, c: &FamilyConstraints, target: Option<f64>) -> Result<FamilyReport> {
    let f = fam.distinguished()?;
    let mut report = FamilyReport {
        members: fam.members.len(),
        target,
        target_met: target.map(|t| fam.members.len() as f64 >= t),
        ..FamilyReport::default()
    };
    let mut seen = BTreeSet::new();
    let mut degrees = Degrees::default();
    for (i, m) in fam.members.iter().enumerate() {
        if !is_valid_member(fam, m) {
            report.invalid_members.push(i);
            continue;
        }
        let key = if fam.unlabeled {
            copy_key(fam.pattern.pattern(), m)
        } else {
            (m.to_vec(), Vec::new())
        };
        if !seen.insert(key) {
            report.duplicate_members.push(i);
        }
        degrees.add(&fam.pattern, f, m);
    }
    if let Some(cap) = c.per_edge_cap {
        report.edge_violations = degrees
            .edge
            .iter()
            .filter(|(_, &d)| d > cap)
            .map(|(&e, &d)| (e, d))
            .collect();
    }
    if let Some(cap) = c.per_pair_cap {
        report.pair_violations = degrees
            .pair
            .iter()
            .filter(|(_, &d)| d > cap)
            .map(|((psi, u), &d)| (psi.clone(), *u, d))
            .collect();
    }
    Ok(report)
}

/// First embedding outside the family (or outside its copies, when
/// unlabeled) that could still join without breaking a cap, scanning every
/// embedding of the pattern. `None` certifies that the family is maximal.
pub fn find_recruitable(fam: &BalancedFamily, c: &FamilyConstraints) -> Result<Option<Embedding>> {
    let f = fam.distinguished()?;
    let degrees = Degrees::of(fam, f);
    let taken: BTreeSet<_> = fam
        .members
        .iter()
        .map(|m| {
            if fam.unlabeled {
                copy_key(fam.pattern.pattern(), m)
            } else {
                (m.to_vec(), Vec::new())
            }
        })
        .collect();
    for emb in fam.search().iter()? {
        let key = if fam.unlabeled {
            copy_key(fam.pattern.pattern(), &emb)
        } else {
            (emb.to_vec(), Vec::new())
        };
        if !taken.contains(&key) && degrees.admits(&fam.pattern, f, &emb, c) {
            return Ok(Some(emb));
        }
    }
    Ok(None)
}

/// Partition of keys by `degree >= threshold`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeavyLight<K> {
    pub heavy: Vec<K>,
    pub light: Vec<K>,
    pub heavy_mass: u64,
    pub light_mass: u64,
}

pub fn heavy_light_split<K: Clone + Ord>(degrees: &BTreeMap<K, u64>, threshold: &Rational) -> HeavyLight<K> {
    let mut out = HeavyLight {
        heavy: Vec::new(),
        light: Vec::new(),
        heavy_mass: 0,
        light_mass: 0,
    };
    for (k, &d) in degrees {
        if BigRational::from_integer(BigInt::from(d)) >= *threshold {
            out.heavy.push(k.clone());
            out.heavy_mass += d;
        } else {
            out.light.push(k.clone());
            out.light_mass += d;
        }
    }
    out
}

/// Copies of several patterns sharing exactly one host edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssembledCopy {
    /// One member per family.
    pub parts: Vec<Embedding>,
    /// Host vertices covered, increasing.
    pub vertices: Vec<usize>,
    /// The union of the parts' images, relabeled onto `0..vertices.len()`.
    pub glued: Graph,
}

/// Picks one member from each family so that all of them send their
/// distinguished edge onto `shared` and pairwise meet only in its endpoints.
/// Returns `None` when every combination is blocked.
pub fn assemble_glued_copies(families: &[BalancedFamily], shared: Edge) -> Result<Option<AssembledCopy>> {
    let shared = edge(shared.0, shared.1);
    let mut candidates = Vec::with_capacity(families.len());
    for (i, fam) in families.iter().enumerate() {
        let f = fam.distinguished()?;
        let list: Vec<&Embedding> = fam.members.iter().filter(|m| edge(m[f.0], m[f.1]) == shared).collect();
        if list.is_empty() {
            return Err(Error::EmptyCandidateSet(i));
        }
        candidates.push(list);
    }
    let Some(host) = families.first().map(|f| &f.host) else {
        return Ok(None);
    };
    fn pick(
        i: usize,
        candidates: &[Vec<&Embedding>],
        used: &mut BTreeSet<usize>,
        chosen: &mut Vec<Embedding>,
        shared: Edge,
    ) -> bool {
        if i == candidates.len() {
            return true;
        }
        for m in &candidates[i] {
            let fresh = m.iter().filter(|&&w| w != shared.0 && w != shared.1);
            if fresh.clone().any(|w| used.contains(w)) {
                continue;
            }
            let added: Vec<usize> = fresh.copied().collect();
            used.extend(&added);
            chosen.push((*m).clone());
            if pick(i + 1, candidates, used, chosen, shared) {
                return true;
            }
            chosen.pop();
            for w in added {
                used.remove(&w);
            }
        }
        false
    }
    let mut used = BTreeSet::new();
    let mut chosen = Vec::new();
    if !pick(0, &candidates, &mut used, &mut chosen, shared) {
        return Ok(None);
    }
    let mut vertices: BTreeSet<usize> = [shared.0, shared.1].into();
    let mut edges = BTreeSet::new();
    for (fam, m) in families.iter().zip(&chosen) {
        vertices.extend(m.iter().copied());
        edges.extend(fam.pattern.pattern().edges().into_iter().map(|(a, b)| edge(m[a], m[b])));
    }
    let vertices: Vec<usize> = vertices.into_iter().collect();
    debug_assert!(edges.iter().all(|&(a, b)| host.has_edge(a, b)));
    let pos = |w: usize| vertices.binary_search(&w).expect("covered vertex");
    let glued = Graph::from_edges(vertices.len(), edges.into_iter().map(|(a, b)| (pos(a), pos(b))))?;
    Ok(Some(AssembledCopy {
        parts: chosen,
        vertices,
        glued,
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CopyBoundReport {
    pub embeddings: u64,
    pub automorphisms: u64,
    pub copies: u64,
    /// `(K/2)^{e(H)} z`.
    pub bound: String,
    pub pass: bool,
}

/// Counts sign-respecting copies of `h` in `g` against `(K/2)^{e(H)} z`.
/// Requires `K >= 4` and `e(g) >= K z`.
pub fn rough_count_check(
    g: &SignedBipartiteGraph,
    h: &SignedBipartiteGraph,
    z: usize,
    k: &Rational,
) -> Result<CopyBoundReport> {
    if *k < Rational::from_integer(4.into()) {
        return Err(Error::PreconditionViolated(format!("K = {} < 4", format_rational(k))));
    }
    let zr = Rational::from_usize(z).expect("usize fits");
    if Rational::from_usize(g.edge_count()).expect("usize fits") < k * &zr {
        return Err(Error::PreconditionViolated(format!(
            "e(G) = {} < K z = {}",
            g.edge_count(),
            format_rational(&(k * &zr))
        )));
    }
    let embeddings = EmbeddingSearch::signed(h, g).count()?;
    let automorphisms = signed_automorphism_count(h)?;
    let copies = embeddings / automorphisms;
    let half = k / Rational::from_integer(2.into());
    let bound = num_traits::pow(half, h.edge_count()) * zr;
    let pass = Rational::from_integer(BigInt::from(copies)) >= bound;
    Ok(CopyBoundReport {
        embeddings,
        automorphisms,
        copies,
        bound: format_rational(&bound),
        pass,
    })
}
