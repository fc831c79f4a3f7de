//! Exact Turán and Zarankiewicz numbers with witnesses.

mod search;
mod store;

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

pub use store::{RecordQuery, RecordStore, STORE_ENV};

use crate::embedding::{is_free, is_free_signed};
use crate::error::{check_size, Error, Result};
use crate::graph::{
    canonical_form, decode_graph6, encode_graph6, CanonicalLabel, DecodedLabel, Graph, SignedBipartiteGraph,
};

pub const TURAN_ORACLE_MAX_N: usize = 7;
pub const TURAN_SEARCH_MAX_N: usize = 10;
pub const ZARANKIEWICZ_ORACLE_MAX_CELLS: usize = 36;
pub const ZARANKIEWICZ_SEARCH_MAX_CELLS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Turan,
    Zarankiewicz,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Oracle,
    BranchAndBound,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Oracle => "oracle",
            Method::BranchAndBound => "branch-and-bound",
        }
    }
}

/// Host size: `n` for Turán numbers, `(m, n)` for Zarankiewicz numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Size {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    pub n: usize,
}

/// One computed extremal number. Forbidden patterns are stored as sorted
/// canonical labels; the witness is graph6 of the host in canonical order
/// (`+` vertices first in the bipartite case).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremalRecord {
    pub kind: Kind,
    pub forbidden: Vec<CanonicalLabel>,
    pub size: Size,
    pub value: usize,
    pub witness: String,
    pub method: Method,
    pub runtime_ms: u64,
}

impl ExtremalRecord {
    pub fn key(&self) -> (Kind, &[CanonicalLabel], Size) {
        (self.kind, &self.forbidden, self.size)
    }

    /// Checks that the witness has the declared size and edge count and
    /// avoids every forbidden pattern.
    pub fn validate(&self) -> Result<()> {
        let bad = |why: String| Err(Error::InvariantViolation(why));
        if self.forbidden.is_empty() {
            return Err(Error::EmptyForbiddenSet);
        }
        let host = decode_graph6(&self.witness)?;
        if host.edge_count() != self.value {
            return bad(format!(
                "witness has {} edges, record says {}",
                host.edge_count(),
                self.value
            ));
        }
        match (self.kind, self.size.m) {
            (Kind::Turan, None) => {
                if host.vertex_count() != self.size.n {
                    return bad(format!("witness has {} vertices", host.vertex_count()));
                }
                for label in &self.forbidden {
                    let DecodedLabel::Unsigned(h) = label.decode()? else {
                        return bad("signed pattern in a Turán record".into());
                    };
                    if !is_free(&host, &h)? {
                        return bad(format!("witness contains forbidden pattern {}", label.to_hex()));
                    }
                }
            }
            (Kind::Zarankiewicz, Some(m)) => {
                let n = self.size.n;
                if host.vertex_count() != m + n || host.edges().iter().any(|&(a, b)| (a < m) == (b < m)) {
                    return bad(format!("witness is not a signed host with parts ({m}, {n})"));
                }
                let signed = SignedBipartiteGraph::from_edges(m, n, host.edges().into_iter().map(|(a, b)| (a, b - m)))?;
                for label in &self.forbidden {
                    let DecodedLabel::Signed(h) = label.decode()? else {
                        return bad("unsigned pattern in a Zarankiewicz record".into());
                    };
                    if !is_free_signed(&signed, &h)? {
                        return bad(format!("witness contains forbidden pattern {}", label.to_hex()));
                    }
                }
            }
            _ => return bad("size does not match kind".into()),
        }
        Ok(())
    }
}

/// Sorted, deduplicated canonical labels: the store key for a forbidden set.
pub fn forbidden_labels<G: crate::graph::ColoredView>(patterns: &[G]) -> Result<Vec<CanonicalLabel>> {
    let mut labels = patterns.iter().map(|h| canonical_form(h)).collect::<Result<Vec<_>>>()?;
    labels.sort();
    labels.dedup();
    Ok(labels)
}

/// `ex(n, forbidden)`: the most edges in an `n`-vertex graph containing no
/// forbidden pattern.
pub fn exact_turan(n: usize, forbidden: &[Graph], method: Method) -> Result<ExtremalRecord> {
    let start = Instant::now();
    if forbidden.is_empty() {
        return Err(Error::EmptyForbiddenSet);
    }
    let limit = match method {
        Method::Oracle => TURAN_ORACLE_MAX_N,
        Method::BranchAndBound => TURAN_SEARCH_MAX_N,
    };
    check_size("host", n, limit)?;
    let mut active = Vec::new();
    for h in forbidden {
        if h.edge_count() > 0 {
            active.push(h.clone());
        } else if h.vertex_count() <= n {
            return Err(Error::PreconditionViolated(format!(
                "edgeless pattern on {} vertices is in every graph on {n} vertices",
                h.vertex_count()
            )));
        }
    }
    let (value, witness) = if active.is_empty() {
        let w = canonical_witness(&Graph::complete(n))?;
        (w.edge_count(), w)
    } else {
        let best = match method {
            Method::Oracle => search::turan_exhaustive(n, &active)?,
            Method::BranchAndBound => search::turan_branch_and_bound(n, &active)?,
        };
        (best.value, best.witness)
    };
    let record = ExtremalRecord {
        kind: Kind::Turan,
        forbidden: forbidden_labels(forbidden)?,
        size: Size { m: None, n },
        value,
        witness: encode_graph6(&witness),
        method,
        runtime_ms: start.elapsed().as_millis() as u64,
    };
    record.validate()?;
    Ok(record)
}

fn canonical_witness(g: &Graph) -> Result<Graph> {
    match canonical_form(g)?.decode()? {
        DecodedLabel::Unsigned(g) => Ok(g),
        DecodedLabel::Signed(_) => unreachable!("unsigned input"),
    }
}

/// `z(m, n, h)`: the most edges in a signed host with `m` `+` and `n` `-`
/// vertices containing no sign-respecting copy of `h`.
pub fn exact_zarankiewicz(m: usize, n: usize, h: &SignedBipartiteGraph, method: Method) -> Result<ExtremalRecord> {
    exact_zarankiewicz_family(m, n, std::slice::from_ref(h), method)
}

pub fn exact_zarankiewicz_family(
    m: usize,
    n: usize,
    forbidden: &[SignedBipartiteGraph],
    method: Method,
) -> Result<ExtremalRecord> {
    let start = Instant::now();
    if forbidden.is_empty() {
        return Err(Error::EmptyForbiddenSet);
    }
    let limit = match method {
        Method::Oracle => ZARANKIEWICZ_ORACLE_MAX_CELLS,
        Method::BranchAndBound => ZARANKIEWICZ_SEARCH_MAX_CELLS,
    };
    check_size("host cells", m * n, limit)?;
    check_size("host", m + n, crate::graph::CANONICAL_MAX_VERTICES)?;
    let mut active = Vec::new();
    for h in forbidden {
        if h.edge_count() > 0 {
            active.push(h.clone());
        } else if h.plus_count() <= m && h.minus_count() <= n {
            return Err(Error::PreconditionViolated(format!(
                "edgeless pattern with parts ({}, {}) is in every host with parts ({m}, {n})",
                h.plus_count(),
                h.minus_count()
            )));
        }
    }
    let (value, witness) = if active.is_empty() {
        let full = SignedBipartiteGraph::from_edges(m, n, (0..m).flat_map(|p| (0..n).map(move |q| (p, q))))?;
        match canonical_form(&full)?.decode()? {
            DecodedLabel::Signed(g) => (m * n, g),
            DecodedLabel::Unsigned(_) => unreachable!("signed input"),
        }
    } else {
        let best = match method {
            Method::Oracle => search::zarankiewicz_exhaustive(m, n, &active)?,
            Method::BranchAndBound => search::zarankiewicz_branch_and_bound(m, n, &active)?,
        };
        (best.value, best.witness)
    };
    let record = ExtremalRecord {
        kind: Kind::Zarankiewicz,
        forbidden: forbidden_labels(forbidden)?,
        size: Size { m: Some(m), n },
        value,
        witness: encode_graph6(witness.as_graph()),
        method,
        runtime_ms: start.elapsed().as_millis() as u64,
    };
    record.validate()?;
    Ok(record)
}

/// One line of an ex-versus-z comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RatioRow {
    Computed {
        n: usize,
        ex: usize,
        z: usize,
        /// `ex / z`, absent when `z = 0`.
        ratio: Option<BigRational>,
    },
    Skipped {
        n: usize,
        reason: String,
    },
}

/// `ex(n, h)` against `z(n, n, signed h)` for each size.
pub fn ratio_report(h: &Graph, signed: &SignedBipartiteGraph, sizes: &[usize]) -> Vec<RatioRow> {
    sizes
        .iter()
        .map(|&n| {
            let row = || -> Result<RatioRow> {
                let ex = exact_turan(n, std::slice::from_ref(h), Method::BranchAndBound)?.value;
                let z = exact_zarankiewicz(n, n, signed, Method::BranchAndBound)?.value;
                let ratio = (z > 0).then(|| BigRational::new(BigInt::from(ex), BigInt::from(z)));
                Ok(RatioRow::Computed { n, ex, z, ratio })
            };
            row().unwrap_or_else(|e| RatioRow::Skipped {
                n,
                reason: e.to_string(),
            })
        })
        .collect()
}
