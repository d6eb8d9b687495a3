//! graph6 short form (orders 1..=62).
//!
//! Layout: one byte `n + 63`, then the upper triangle read column by column
//! (`(0,1), (0,2), (1,2), (0,3), ...`), packed six bits per byte, most
//! significant bit first, each byte offset by 63. Padding bits are zero.

use super::{Graph, GraphError};

pub const GRAPH6_MAX_ORDER: usize = 62;

fn body_len(n: usize) -> usize {
    (n * (n - 1) / 2).div_ceil(6)
}

pub fn parse_graph6(text: &str) -> Result<Graph, GraphError> {
    let bytes = text.trim_end_matches(['\n', '\r']).as_bytes();
    let Some((&head, body)) = bytes.split_first() else {
        return Err(GraphError::MalformedEncoding("empty input".into()));
    };
    if let Some(&b) = bytes.iter().find(|b| !(63..=126).contains(*b)) {
        return Err(GraphError::MalformedEncoding(format!("byte {b} outside 63..=126")));
    }
    if head == 126 {
        return Err(GraphError::OrderOutOfRange { order: 63, max: GRAPH6_MAX_ORDER });
    }
    let n = (head - 63) as usize;
    if n == 0 {
        return Err(GraphError::OrderOutOfRange { order: 0, max: GRAPH6_MAX_ORDER });
    }
    if body.len() != body_len(n) {
        return Err(GraphError::MalformedEncoding(format!(
            "order {n} needs {} data bytes, found {}",
            body_len(n),
            body.len()
        )));
    }
    let bit = |k: usize| (body[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
    let mut g = Graph::empty(n);
    let mut k = 0;
    for v in 1..n {
        for u in 0..v {
            if bit(k) {
                g.add_edge(u, v);
            }
            k += 1;
        }
    }
    let total = body.len() * 6;
    if (k..total).any(bit) {
        return Err(GraphError::MalformedEncoding("nonzero padding bits".into()));
    }
    Ok(g)
}

pub fn emit_graph6(g: &Graph) -> Result<String, GraphError> {
    let n = g.order();
    if n > GRAPH6_MAX_ORDER {
        return Err(GraphError::OrderOutOfRange { order: n, max: GRAPH6_MAX_ORDER });
    }
    let mut body = vec![0u8; body_len(n)];
    let mut k = 0;
    for v in 1..n {
        for u in 0..v {
            if g.has_edge(u, v) {
                body[k / 6] |= 1 << (5 - k % 6);
            }
            k += 1;
        }
    }
    let mut out = String::with_capacity(body.len() + 1);
    out.push((n as u8 + 63) as char);
    out.extend(body.into_iter().map(|b| (b + 63) as char));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const PAIR: [&str; 2] = ["N]?GWWGAGP@FAMAM@F?", "Ns_??KF@oK?p@a@b_po"];

    #[test]
    fn small_encodings() {
        assert_eq!(parse_graph6("@").unwrap(), Graph::empty(1));
        assert_eq!(emit_graph6(&Graph::empty(1)).unwrap(), "@");
        assert_eq!(emit_graph6(&Graph::complete(2)).unwrap(), "A_");
        assert_eq!(parse_graph6("A_\n").unwrap(), Graph::complete(2));
    }

    #[test]
    fn order_fifteen_strings_round_trip() {
        for s in PAIR {
            let g = parse_graph6(s).unwrap();
            assert_eq!(g.order(), 15);
            assert_eq!(emit_graph6(&g).unwrap(), s);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_graph6(""), Err(GraphError::MalformedEncoding(_))));
        assert!(matches!(parse_graph6("?"), Err(GraphError::OrderOutOfRange { order: 0, .. })));
        assert!(matches!(parse_graph6("~??"), Err(GraphError::OrderOutOfRange { .. })));
        assert!(matches!(parse_graph6("A"), Err(GraphError::MalformedEncoding(_))));
        assert!(matches!(parse_graph6("A__"), Err(GraphError::MalformedEncoding(_))));
        assert!(matches!(parse_graph6("A "), Err(GraphError::MalformedEncoding(_))));
        // K2 uses one bit; setting a padding bit is not canonical
        assert!(matches!(parse_graph6("A`"), Err(GraphError::MalformedEncoding(_))));
        assert!(matches!(emit_graph6(&Graph::empty(63)), Err(GraphError::OrderOutOfRange { .. })));
    }

    proptest! {
        #[test]
        fn round_trip(n in 1usize..=62, seed in any::<u64>()) {
            let mut state = seed;
            let mut g = Graph::empty(n);
            for v in 1..n {
                for u in 0..v {
                    state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    if state >> 63 == 1 {
                        g.add_edge(u, v);
                    }
                }
            }
            let s = emit_graph6(&g).unwrap();
            let back = parse_graph6(&s).unwrap();
            prop_assert_eq!(&back, &g);
            prop_assert_eq!(emit_graph6(&back).unwrap(), s);
        }
    }
}
