//! Simple undirected graphs stored as packed adjacency rows.
//!
//! Every graph used by the experiments has at most a few dozen vertices, so a
//! row is a single `u64` and vertex sets are plain bitmasks.

mod canon;
mod generate;
mod graph6;

use std::fmt;

use num_traits::{One, Zero};

pub use canon::{are_isomorphic, canonical_form, canonical_label, CanonicalLabel, CANON_MAX_ORDER};
pub use generate::{all_graphs, GRAPH_COUNTS};
pub use graph6::{emit_graph6, parse_graph6, GRAPH6_MAX_ORDER};

/// Largest order a [`Graph`] can hold.
pub const MAX_ORDER: usize = 64;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("malformed graph6 encoding: {0}")]
    MalformedEncoding(String),
    #[error("order {order} outside the supported range 1..={max}")]
    OrderOutOfRange { order: usize, max: usize },
}

/// Bitmask with the lowest `n` bits set.
#[inline]
pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterate over the set bits of a mask, lowest first.
#[inline]
pub(crate) fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let v = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(v)
        }
    })
}

/// A simple undirected graph on vertices `0..order`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    order: usize,
    rows: Vec<u64>,
}

impl Graph {
    /// Edgeless graph on `order` vertices.
    ///
    /// Panics if `order` is zero or exceeds [`MAX_ORDER`].
    pub fn empty(order: usize) -> Self {
        assert!((1..=MAX_ORDER).contains(&order), "graph order {order} outside 1..={MAX_ORDER}");
        Graph { order, rows: vec![0; order] }
    }

    pub fn complete(order: usize) -> Self {
        Graph::empty(order).complement()
    }

    pub fn path(order: usize) -> Self {
        Graph::from_edges(order, (1..order).map(|v| (v - 1, v)))
    }

    pub fn cycle(order: usize) -> Self {
        let mut g = Graph::path(order);
        if order > 2 {
            g.add_edge(0, order - 1);
        }
        g
    }

    /// `K_{1,leaves}` with the centre at vertex 0.
    pub fn star(leaves: usize) -> Self {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v)))
    }

    pub fn from_edges<I>(order: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(order);
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// Build from raw adjacency rows. Rows are masked to the order, the
    /// diagonal is cleared and the relation is checked for symmetry.
    pub fn from_rows(order: usize, rows: &[u64]) -> Self {
        let mut g = Graph::empty(order);
        assert_eq!(rows.len(), order, "row count must match the order");
        let mask = full_mask(order);
        for (v, &r) in rows.iter().enumerate() {
            g.rows[v] = r & mask & !(1u64 << v);
        }
        for u in 0..order {
            for v in bits(g.rows[u]) {
                assert!(g.rows[v] >> u & 1 == 1, "adjacency rows are not symmetric");
            }
        }
        g
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    /// Neighbourhood of `v` as a bitmask.
    #[inline]
    pub fn neighbors(&self, v: usize) -> u64 {
        self.rows[v]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u] >> v & 1 == 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.order && v < self.order, "vertex out of range");
        assert_ne!(u, v, "self-loops are not allowed");
        self.rows[u] |= 1 << v;
        self.rows[v] |= 1 << u;
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.rows[u] &= !(1 << v);
        self.rows[v] &= !(1 << u);
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].count_ones() as usize
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.order).map(|v| self.degree(v)).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// Every vertex as a bitmask.
    #[inline]
    pub fn vertex_mask(&self) -> u64 {
        full_mask(self.order)
    }

    pub fn complement(&self) -> Graph {
        let mask = self.vertex_mask();
        let rows = self.rows.iter().enumerate().map(|(v, r)| !r & mask & !(1u64 << v)).collect();
        Graph { order: self.order, rows }
    }

    /// `self ∪ other`, with `other`'s vertices shifted after `self`'s.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let n = self.order;
        let mut g = Graph::empty(n + other.order);
        g.rows[..n].copy_from_slice(&self.rows);
        for (v, r) in other.rows.iter().enumerate() {
            g.rows[n + v] = r << n;
        }
        g
    }

    /// `self ∨ other`: the disjoint union plus every edge between the two parts.
    pub fn join(&self, other: &Graph) -> Graph {
        let n = self.order;
        let mut g = self.disjoint_union(other);
        let left = full_mask(n);
        let right = g.vertex_mask() & !left;
        for v in 0..g.order {
            g.rows[v] |= if v < n { right } else { left };
        }
        g
    }

    /// Graph whose vertex `i` is vertex `perm[i]` of `self`.
    pub fn relabeled(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.order);
        let mut inverse = vec![0; self.order];
        for (i, &p) in perm.iter().enumerate() {
            inverse[p] = i;
        }
        let rows = perm.iter().map(|&p| bits(self.rows[p]).fold(0u64, |acc, w| acc | 1 << inverse[w])).collect();
        Graph { order: self.order, rows }
    }

    /// Connected components of the subgraph induced on `mask`.
    pub fn components(&self, mask: u64) -> Vec<u64> {
        components_by(mask, |v| self.rows[v])
    }

    /// Connected components of the complement restricted to `mask`.
    pub fn co_components(&self, mask: u64) -> Vec<u64> {
        components_by(mask, |v| !self.rows[v] & !(1u64 << v))
    }

    pub fn is_connected(&self) -> bool {
        self.components(self.vertex_mask()).len() == 1
    }

    /// True when some four vertices induce a path `P_4`.
    pub fn induced_p4_exists(&self) -> bool {
        let n = self.order;
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    for d in c + 1..n {
                        if induces_p4(self, [a, b, c, d]) {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    /// Dense adjacency matrix over any ring.
    pub fn adjacency_matrix<T: Zero + One + Clone>(&self) -> Vec<Vec<T>> {
        (0..self.order)
            .map(|u| (0..self.order).map(|v| if self.has_edge(u, v) { T::one() } else { T::zero() }).collect())
            .collect()
    }
}

fn components_by(mask: u64, neighbors: impl Fn(usize) -> u64) -> Vec<u64> {
    let mut left = mask;
    let mut out = Vec::new();
    while left != 0 {
        let seed = left & left.wrapping_neg();
        let mut comp = seed;
        let mut frontier = seed;
        while frontier != 0 {
            let mut next = 0;
            for v in bits(frontier) {
                next |= neighbors(v);
            }
            frontier = next & mask & !comp;
            comp |= frontier;
        }
        out.push(comp);
        left &= !comp;
    }
    out
}

fn induces_p4(g: &Graph, vs: [usize; 4]) -> bool {
    let mut deg = [0u8; 4];
    let mut edges = 0;
    for i in 0..4 {
        for j in i + 1..4 {
            if g.has_edge(vs[i], vs[j]) {
                deg[i] += 1;
                deg[j] += 1;
                edges += 1;
            }
        }
    }
    // three edges with degrees {1,1,2,2} is exactly P4 (a triangle plus an
    // isolated vertex or the star K_{1,3} fail the degree test)
    edges == 3 && deg.iter().filter(|&&d| d == 2).count() == 2
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match emit_graph6(self) {
            Ok(s) => write!(f, "Graph({s})"),
            Err(_) => write!(f, "Graph(order={}, edges={})", self.order, self.edge_count()),
        }
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_p4(g: &Graph) -> bool {
        // oracle: try every ordered 4-tuple as a path a-b-c-d
        let n = g.order();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let vs = [a, b, c, d];
                        let distinct = (0..4).all(|i| (i + 1..4).all(|j| vs[i] != vs[j]));
                        if distinct
                            && g.has_edge(a, b)
                            && g.has_edge(b, c)
                            && g.has_edge(c, d)
                            && !g.has_edge(a, c)
                            && !g.has_edge(a, d)
                            && !g.has_edge(b, d)
                        {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    fn all_labeled(n: usize) -> impl Iterator<Item = Graph> {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        (0u64..1 << pairs.len()).map(move |m| Graph::from_edges(n, bits(m).map(|i| pairs[i])))
    }

    #[test]
    fn complement_examples() {
        assert_eq!(Graph::complete(3).complement(), Graph::empty(3));
        assert_eq!(Graph::empty(1).complement(), Graph::empty(1));
        let star_c = Graph::star(3).complement();
        assert_eq!(star_c.edge_count(), 3);
        assert!(are_isomorphic(&star_c, &Graph::complete(3).disjoint_union(&Graph::empty(1))).unwrap());
    }

    #[test]
    fn complement_is_an_involution_exhaustively() {
        for n in 1..=6 {
            for g in all_labeled(n) {
                assert_eq!(g.complement().complement(), g);
            }
        }
    }

    #[test]
    fn union_and_join_examples() {
        let e1 = Graph::empty(1);
        assert_eq!(e1.disjoint_union(&e1), Graph::empty(2));
        let k2k1 = Graph::complete(2).disjoint_union(&e1);
        assert_eq!((k2k1.order(), k2k1.edge_count()), (3, 1));
        assert_eq!(e1.join(&e1), Graph::complete(2));
        let e2 = Graph::empty(2);
        assert!(are_isomorphic(&e2.join(&e2), &Graph::cycle(4)).unwrap());
        assert!(are_isomorphic(&e1.join(&Graph::empty(3)), &Graph::star(3)).unwrap());
    }

    #[test]
    fn join_matches_de_morgan() {
        for n in 1..=4 {
            for g in all_labeled(n) {
                for h in all_labeled(3) {
                    let via = g.complement().disjoint_union(&h.complement()).complement();
                    assert_eq!(g.join(&h), via);
                }
            }
        }
    }

    #[test]
    fn p4_scan_matches_brute_force() {
        assert!(Graph::path(4).induced_p4_exists());
        assert!(!Graph::cycle(4).induced_p4_exists());
        for n in 1..=6 {
            for g in all_labeled(n) {
                assert_eq!(g.induced_p4_exists(), brute_p4(&g), "{g:?}");
            }
        }
    }

    #[test]
    fn components_and_relabel() {
        let g = Graph::complete(2).disjoint_union(&Graph::path(3));
        assert_eq!(g.components(g.vertex_mask()), vec![0b00011, 0b11100]);
        assert_eq!(Graph::star(3).co_components(0b1111).len(), 2);
        let p = Graph::path(4).relabeled(&[1, 3, 0, 2]);
        assert_eq!(p.edge_count(), 3);
        assert!(are_isomorphic(&p, &Graph::path(4)).unwrap());
    }
}
