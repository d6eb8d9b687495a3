//! Exhaustive generation of all unlabeled graphs of small order.
//!
//! Each graph of order `n + 1` arises from one of order `n` by adding a vertex
//! of maximum degree, so extending every order-`n` representative by every
//! neighbourhood at least as large as its maximum degree and deduplicating by
//! canonical label covers every class.

use std::collections::HashSet;

use super::{bits, canonical_label, Graph, GraphError};

/// Number of unlabeled graphs of order `n` (index `n`), for `n <= 10`.
pub const GRAPH_COUNTS: [u64; 11] = [1, 1, 2, 4, 11, 34, 156, 1044, 12346, 274668, 12005168];

/// Canonical representatives of every graph of order `n`, sorted by
/// canonical label. Practical up to order 9.
pub fn all_graphs(n: usize) -> Result<Vec<Graph>, GraphError> {
    if n == 0 || n > 10 {
        return Err(GraphError::OrderOutOfRange { order: n, max: 10 });
    }
    let mut level = vec![Graph::empty(1)];
    for k in 1..n {
        let mut seen = HashSet::new();
        for g in &level {
            let max_deg = (0..k).map(|v| g.degree(v)).max().unwrap_or(0);
            for nbrs in 0u64..1 << k {
                let d = nbrs.count_ones() as usize;
                if d < max_deg {
                    continue;
                }
                // adding v raises each neighbour's degree by one
                if bits(nbrs).any(|u| g.degree(u) + 1 > d) {
                    continue;
                }
                let mut h = g.disjoint_union(&Graph::empty(1));
                for u in bits(nbrs) {
                    h.add_edge(u, k);
                }
                seen.insert(canonical_label(&h)?);
            }
        }
        let mut labels: Vec<_> = seen.into_iter().collect();
        labels.sort_unstable();
        level = labels.iter().map(|l| l.to_graph()).collect();
    }
    Ok(level)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_counts_through_order_seven() {
        for (n, &count) in GRAPH_COUNTS.iter().enumerate().take(8).skip(1) {
            assert_eq!(all_graphs(n).unwrap().len() as u64, count, "order {n}");
        }
    }
}
