//! graph6 text encoding (McKay's format).
//!
//! Vertex count `n` is written as one byte `n + 63` for `n <= 62`, or as `~`
//! followed by three 6-bit groups for `n <= 258047`. The upper triangle of
//! the adjacency matrix follows column by column (`x(0,1), x(0,2), x(1,2),
//! x(0,3), ...`), packed big-endian into 6-bit groups, each offset by 63.

use super::Graph;
use crate::error::{Error, Result};

const MAX_N: usize = 258_047;

pub fn encode_graph6(g: &Graph) -> String {
    let n = g.vertex_count();
    assert!(n <= MAX_N, "graph6 supports at most {MAX_N} vertices");
    let mut out = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            k += 1;
            if k == 6 {
                out.push(acc + 63);
                acc = 0;
                k = 0;
            }
        }
    }
    if k > 0 {
        out.push((acc << (6 - k)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are ASCII")
}

pub fn decode_graph6(text: &str) -> Result<Graph> {
    let bytes = text.trim_end_matches(['\n', '\r']).as_bytes();
    let bad = |why: &str| Error::Parse(format!("graph6 {text:?}: {why}"));
    if let Some(&b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(bad(&format!("byte {b} outside 63..=126")));
    }
    let (n, body) = match bytes.first() {
        None => return Err(bad("empty input")),
        Some(&126) => {
            if bytes.get(1) == Some(&126) {
                return Err(bad("eight-byte size form is not supported"));
            }
            if bytes.len() < 4 {
                return Err(bad("truncated size"));
            }
            let n = bytes[1..4]
                .iter()
                .fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
            (n, &bytes[4..])
        }
        Some(&b) => ((b - 63) as usize, &bytes[1..]),
    };
    let bits = n * n.saturating_sub(1) / 2;
    if body.len() != bits.div_ceil(6) {
        return Err(bad(&format!(
            "expected {} data bytes for {n} vertices, found {}",
            bits.div_ceil(6),
            body.len()
        )));
    }
    let mut g = Graph::empty(n);
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = body[k / 6] - 63;
            if byte >> (5 - k % 6) & 1 == 1 {
                g.add_edge(i, j);
            }
            k += 1;
        }
    }
    if bits % 6 != 0 {
        let last = body[body.len() - 1] - 63;
        if last & ((1 << (6 - bits % 6)) - 1) != 0 {
            return Err(bad("non-zero padding bits"));
        }
    }
    Ok(g)
}
