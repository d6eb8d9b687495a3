//! Canonical labelling by partition refinement and backtracking.
//!
//! Ordered partitions are refined to equitable ones, a non-singleton cell is
//! individualised, and the search tree is explored depth first. The canonical
//! form is the lexicographically largest relabelled adjacency over all leaves.
//! Automorphisms found from equal leaves prune sibling branches by orbit and
//! jump back over subtrees already known to be equivalent.

use super::{bits, Graph, GraphError};

/// Largest order accepted by [`canonical_label`].
pub const CANON_MAX_ORDER: usize = 32;

/// Total-order key on isomorphism classes of graphs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalLabel {
    order: u8,
    rows: Vec<u64>,
}

impl CanonicalLabel {
    pub fn order(&self) -> usize {
        self.order as usize
    }

    /// Serialised form: order byte followed by each canonical row, big endian.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![self.order];
        for r in &self.rows {
            out.extend_from_slice(&r.to_be_bytes());
        }
        out
    }

    /// The canonical representative graph.
    pub fn to_graph(&self) -> Graph {
        Graph::from_rows(self.order as usize, &self.rows)
    }
}

pub fn canonical_label(g: &Graph) -> Result<CanonicalLabel, GraphError> {
    let (rows, _) = search(g)?;
    Ok(CanonicalLabel { order: g.order() as u8, rows })
}

/// The canonical representative of `g`'s isomorphism class.
pub fn canonical_form(g: &Graph) -> Result<Graph, GraphError> {
    let (rows, _) = search(g)?;
    Ok(Graph::from_rows(g.order(), &rows))
}

pub fn are_isomorphic(g: &Graph, h: &Graph) -> Result<bool, GraphError> {
    if g.order() != h.order() || g.edge_count() != h.edge_count() {
        return Ok(false);
    }
    let mut dg = g.degrees();
    let mut dh = h.degrees();
    dg.sort_unstable();
    dh.sort_unstable();
    if dg != dh {
        return Ok(false);
    }
    Ok(canonical_label(g)? == canonical_label(h)?)
}

fn search(g: &Graph) -> Result<(Vec<u64>, Vec<usize>), GraphError> {
    let n = g.order();
    if n > CANON_MAX_ORDER {
        return Err(GraphError::OrderOutOfRange { order: n, max: CANON_MAX_ORDER });
    }
    let mut cells = vec![g.vertex_mask()];
    refine(g, &mut cells);
    let mut s = Search { g, first: None, best: None, generators: Vec::new() };
    let mut path = Vec::new();
    s.descend(cells, &mut path);
    let best = s.best.expect("search visits at least one leaf");
    Ok((best.cert, best.lab))
}

/// Split cells until every vertex of a cell has the same number of
/// neighbours in every cell. Splits happen in place, ordered by count.
fn refine(g: &Graph, cells: &mut Vec<u64>) {
    'restart: loop {
        for si in 0..cells.len() {
            let splitter = cells[si];
            for ci in 0..cells.len() {
                let cell = cells[ci];
                if cell.count_ones() < 2 {
                    continue;
                }
                let mut groups: Vec<(u32, u64)> = Vec::new();
                for v in bits(cell) {
                    let c = (g.neighbors(v) & splitter).count_ones();
                    match groups.iter_mut().find(|(k, _)| *k == c) {
                        Some((_, m)) => *m |= 1 << v,
                        None => groups.push((c, 1 << v)),
                    }
                }
                if groups.len() > 1 {
                    groups.sort_unstable_by_key(|&(k, _)| k);
                    cells.splice(ci..=ci, groups.into_iter().map(|(_, m)| m));
                    continue 'restart;
                }
            }
        }
        return;
    }
}

struct Leaf {
    cert: Vec<u64>,
    lab: Vec<usize>,
    path: Vec<usize>,
}

struct Search<'a> {
    g: &'a Graph,
    first: Option<Leaf>,
    best: Option<Leaf>,
    generators: Vec<Vec<usize>>,
}

impl Search<'_> {
    /// Returns `Some(level)` when the caller should unwind to the node at
    /// depth `level`.
    fn descend(&mut self, cells: Vec<u64>, path: &mut Vec<usize>) -> Option<usize> {
        let n = self.g.order();
        if cells.len() == n {
            return self.leaf(&cells, path);
        }
        let depth = path.len();
        let target = (0..cells.len())
            .filter(|&i| cells[i].count_ones() > 1)
            .min_by_key(|&i| cells[i].count_ones())
            .expect("non-discrete partition has a non-singleton cell");
        let mut tried: Vec<usize> = Vec::new();
        for v in bits(cells[target]) {
            if !tried.is_empty() {
                let orbit = self.orbits_fixing(path);
                if tried.iter().any(|&w| orbit[w] == orbit[v]) {
                    continue;
                }
            }
            tried.push(v);
            let mut next = cells.clone();
            next.splice(target..=target, [1u64 << v, cells[target] & !(1u64 << v)]);
            refine(self.g, &mut next);
            path.push(v);
            let jump = self.descend(next, path);
            path.pop();
            if let Some(level) = jump {
                if level < depth {
                    return Some(level);
                }
            }
        }
        None
    }

    fn leaf(&mut self, cells: &[u64], path: &[usize]) -> Option<usize> {
        let lab: Vec<usize> = cells.iter().map(|c| c.trailing_zeros() as usize).collect();
        let cert = certificate(self.g, &lab);
        let leaf = Leaf { cert, lab, path: path.to_vec() };
        let Some(first) = &self.first else {
            self.best = Some(Leaf { cert: leaf.cert.clone(), lab: leaf.lab.clone(), path: leaf.path.clone() });
            self.first = Some(leaf);
            return None;
        };
        for reference in [first, self.best.as_ref().expect("best set with first")] {
            if reference.cert == leaf.cert {
                let mut gamma = vec![0; leaf.lab.len()];
                for (a, b) in reference.lab.iter().zip(&leaf.lab) {
                    gamma[*a] = *b;
                }
                let common = reference.path.iter().zip(&leaf.path).take_while(|(a, b)| a == b).count();
                self.generators.push(gamma);
                return Some(common);
            }
        }
        if leaf.cert > self.best.as_ref().expect("best set with first").cert {
            self.best = Some(leaf);
        }
        None
    }

    /// Orbit representative of each vertex under the known automorphisms
    /// that fix `path` pointwise.
    fn orbits_fixing(&self, path: &[usize]) -> Vec<usize> {
        let n = self.g.order();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for gamma in &self.generators {
            if path.iter().any(|&v| gamma[v] != v) {
                continue;
            }
            for (v, &w) in gamma.iter().enumerate() {
                let (a, b) = (find(&mut parent, v), find(&mut parent, w));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        (0..n).map(|v| find(&mut parent, v)).collect()
    }
}

fn certificate(g: &Graph, lab: &[usize]) -> Vec<u64> {
    let mut pos = vec![0; lab.len()];
    for (i, &v) in lab.iter().enumerate() {
        pos[v] = i;
    }
    lab.iter().map(|&v| bits(g.neighbors(v)).fold(0u64, |acc, w| acc | 1u64 << pos[w])).collect()
}
