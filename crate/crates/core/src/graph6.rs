//! graph6 encoding of simple undirected graphs.
//!
//! Size header `N(n)`, then the upper triangle of the adjacency matrix in
//! column order (`x(0,1) x(0,2) x(1,2) x(0,3) ...`) packed big-endian into
//! 6-bit groups, zero-padded, each group offset by 63.

use thiserror::Error;

use crate::graph::Graph;

/// Largest vertex count the format can express.
pub const GRAPH6_MAX_VERTICES: u64 = 68_719_476_735;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Graph6Error {
    #[error("{0} vertices exceed the graph6 limit")]
    TooLarge(usize),
    #[error("malformed size header")]
    MalformedHeader,
    #[error("byte {byte:#04x} at offset {offset} is outside 63..=126")]
    ByteOutOfRange { offset: usize, byte: u8 },
    #[error("adjacency payload has {found} bytes, expected {expected}")]
    BitCountMismatch { expected: usize, found: usize },
    #[error("padding bits are not zero")]
    NonzeroPadding,
}

fn encode_size(n: usize, out: &mut Vec<u8>) -> Result<(), Graph6Error> {
    let n64 = n as u64;
    if n64 > GRAPH6_MAX_VERTICES {
        return Err(Graph6Error::TooLarge(n));
    }
    if n <= 62 {
        out.push(63 + n as u8);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(63 + ((n64 >> shift) & 63) as u8);
        }
    } else {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(63 + ((n64 >> shift) & 63) as u8);
        }
    }
    Ok(())
}

pub fn encode_graph6(graph: &Graph) -> Result<Vec<u8>, Graph6Error> {
    let n = graph.order();
    let mut out = Vec::new();
    encode_size(n, &mut out)?;
    let mut acc = 0u8;
    let mut nbits = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | u8::from(graph.has_edge(i, j));
            nbits += 1;
            if nbits == 6 {
                out.push(63 + acc);
                acc = 0;
                nbits = 0;
            }
        }
    }
    if nbits > 0 {
        out.push(63 + (acc << (6 - nbits)));
    }
    Ok(out)
}

pub fn encode_graph6_string(graph: &Graph) -> Result<String, Graph6Error> {
    Ok(String::from_utf8(encode_graph6(graph)?).expect("graph6 is ASCII"))
}

fn sextet(bytes: &[u8], offset: usize) -> Result<u64, Graph6Error> {
    match bytes.get(offset) {
        Some(&b) if (63..=126).contains(&b) => Ok(u64::from(b - 63)),
        Some(&byte) => Err(Graph6Error::ByteOutOfRange { offset, byte }),
        None => Err(Graph6Error::MalformedHeader),
    }
}

/// Decodes one graph6 string; a trailing newline is tolerated.
pub fn decode_graph6(input: &[u8]) -> Result<Graph, Graph6Error> {
    let bytes = input.strip_suffix(b"\n").unwrap_or(input);
    let bytes = bytes.strip_suffix(b"\r").unwrap_or(bytes);
    let (n, header) = match bytes {
        [] => return Err(Graph6Error::MalformedHeader),
        [126, 126, ..] => {
            let mut n = 0u64;
            for k in 0..6 {
                n = (n << 6) | sextet(bytes, 2 + k)?;
            }
            if n <= 258_047 {
                return Err(Graph6Error::MalformedHeader);
            }
            (n, 8)
        }
        [126, ..] => {
            let mut n = 0u64;
            for k in 0..3 {
                n = (n << 6) | sextet(bytes, 1 + k)?;
            }
            if n <= 62 {
                return Err(Graph6Error::MalformedHeader);
            }
            (n, 4)
        }
        _ => (sextet(bytes, 0)?, 1),
    };
    let n = usize::try_from(n).map_err(|_| Graph6Error::MalformedHeader)?;
    let bits = n.saturating_mul(n.saturating_sub(1)) / 2;
    let expected = bits.div_ceil(6);
    let payload = &bytes[header..];
    if payload.len() != expected {
        return Err(Graph6Error::BitCountMismatch { expected, found: payload.len() });
    }
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let chunk = sextet(payload, k / 6).map_err(|e| match e {
                Graph6Error::ByteOutOfRange { offset, byte } => Graph6Error::ByteOutOfRange { offset: offset + header, byte },
                other => other,
            })?;
            if chunk >> (5 - k % 6) & 1 == 1 {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    if k % 6 != 0 {
        let last = sextet(payload, k / 6).map_err(|e| match e {
            Graph6Error::ByteOutOfRange { offset, byte } => Graph6Error::ByteOutOfRange { offset: offset + header, byte },
            other => other,
        })?;
        if last & ((1 << (6 - k % 6)) - 1) != 0 {
            return Err(Graph6Error::NonzeroPadding);
        }
    }
    Ok(Graph::from_edges(n, edges).expect("decoded edges are simple"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::double_generalized_petersen;

    #[test]
    fn small_encodings() {
        let k2 = Graph::from_edges(2, [(0, 1)]).unwrap();
        assert_eq!(encode_graph6(&k2).unwrap(), b"A_");
        assert_eq!(encode_graph6(&Graph::empty(1)).unwrap(), b"@");
        assert_eq!(encode_graph6(&Graph::empty(0)).unwrap(), b"?");
        // the 5-vertex example used by petgraph's tests
        let g = Graph::from_edges(5, [(0, 2), (0, 4), (1, 3), (3, 4)]).unwrap();
        assert_eq!(encode_graph6(&g).unwrap(), b"DQc");
    }

    #[test]
    fn small_decodings() {
        assert_eq!(decode_graph6(b"A_").unwrap().edges().collect::<Vec<_>>(), vec![(0, 1)]);
        let e2 = decode_graph6(b"A?").unwrap();
        assert_eq!((e2.order(), e2.edge_count()), (2, 0));
        assert_eq!(decode_graph6(b"DQc\n").unwrap().edge_count(), 4);
    }

    #[test]
    fn errors_are_distinct() {
        assert_eq!(decode_graph6(b""), Err(Graph6Error::MalformedHeader));
        assert_eq!(decode_graph6(b"~?"), Err(Graph6Error::MalformedHeader));
        assert_eq!(decode_graph6(b"D"), Err(Graph6Error::BitCountMismatch { expected: 2, found: 0 }));
        assert_eq!(decode_graph6(b"DQcc"), Err(Graph6Error::BitCountMismatch { expected: 2, found: 3 }));
        assert_eq!(decode_graph6(b"DQ "), Err(Graph6Error::ByteOutOfRange { offset: 2, byte: b' ' }));
        assert_eq!(decode_graph6(b"A`"), Err(Graph6Error::NonzeroPadding));
        assert!(matches!(decode_graph6(b"\x10"), Err(Graph6Error::ByteOutOfRange { offset: 0, .. })));
    }

    #[test]
    fn long_header() {
        let g = Graph::from_edges(100, (0..99).map(|i| (i, i + 1))).unwrap();
        let enc = encode_graph6(&g).unwrap();
        assert_eq!(&enc[..4], &[126, 63, 63 + 1, 63 + 36]);
        assert_eq!(decode_graph6(&enc).unwrap(), g);
    }

    #[test]
    fn dgp_round_trip() {
        let (g, _) = double_generalized_petersen(10, 2).unwrap();
        let back = decode_graph6(&encode_graph6(&g).unwrap()).unwrap();
        assert_eq!(back.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
    }
}
