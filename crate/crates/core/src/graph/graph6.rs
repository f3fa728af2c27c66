//! graph6 encoding as published with nauty (`formats.txt`).
//!
//! Only the undirected graph6 flavour is handled; sparse6 and digraph6 are not.

use super::{Graph, MAX_VERTICES};
use crate::error::{Error, Result};

const HEADER: &str = ">>graph6<<";

fn err<T>(offset: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Graph6 {
        offset,
        message: message.into(),
    })
}

/// Parses one graph6 record. Surrounding ASCII whitespace and the optional
/// `>>graph6<<` header are accepted; byte offsets in errors refer to the input.
pub fn parse_graph6(text: &str) -> Result<Graph> {
    let lead = text.len() - text.trim_start().len();
    let mut body = text.trim();
    let mut base = lead;
    if let Some(rest) = body.strip_prefix(HEADER) {
        body = rest;
        base += HEADER.len();
    }
    let bytes = body.as_bytes();
    if bytes.is_empty() {
        return err(base, "empty graph6 string");
    }
    for (i, &b) in bytes.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return err(
                base + i,
                format!("byte {b:#04x} outside the graph6 range 63..=126"),
            );
        }
    }

    let (n, mut pos) = if bytes[0] != 126 {
        (usize::from(bytes[0] - 63), 1)
    } else if bytes.len() >= 2 && bytes[1] == 126 {
        if bytes.len() < 8 {
            return err(base + bytes.len(), "truncated 8-byte vertex count");
        }
        (decode_groups(&bytes[2..8]), 8)
    } else {
        if bytes.len() < 4 {
            return err(base + bytes.len(), "truncated 4-byte vertex count");
        }
        (decode_groups(&bytes[1..4]), 4)
    };
    if n > MAX_VERTICES {
        return Err(Error::TooManyVertices {
            n,
            limit: MAX_VERTICES,
        });
    }

    let pairs = n * n.saturating_sub(1) / 2;
    let needed = pairs.div_ceil(6);
    let have = bytes.len() - pos;
    if have != needed {
        return err(
            base + pos + have.min(needed),
            format!("expected {needed} adjacency bytes for n = {n}, found {have}"),
        );
    }

    let mut g = Graph::empty(n)?;
    let mut k = 0usize;
    'outer: for j in 1..n {
        for i in 0..j {
            let byte = bytes[pos + k / 6] - 63;
            if byte & (0b10_0000 >> (k % 6)) != 0 {
                g.add_edge(i, j)?;
            }
            k += 1;
            if k == pairs {
                break 'outer;
            }
        }
    }
    pos += needed;
    if pairs % 6 != 0 {
        let last = bytes[pos - 1] - 63;
        let pad_bits = 6 - pairs % 6;
        if last & ((1u8 << pad_bits) - 1) != 0 {
            return err(base + pos - 1, "nonzero padding bits");
        }
    }
    Ok(g)
}

fn decode_groups(groups: &[u8]) -> usize {
    groups
        .iter()
        .fold(0usize, |acc, &b| (acc << 6) | usize::from(b - 63))
}

/// Encodes a graph as graph6, without header or trailing newline.
pub fn to_graph6(g: &Graph) -> String {
    let n = g.order();
    let mut out: Vec<u8> = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | u8::from(g.has_edge(i, j));
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are ASCII")
}
