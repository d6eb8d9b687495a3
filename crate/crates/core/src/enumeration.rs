//! Counting and exhaustive generation of hierarchies and cographs.
//!
//! Coefficients come from the Euler-transform recurrence for
//! `2H(x) + 1 - x + x^m = exp(sum_k H(x^k)/k)` (drop `x^m` when
//! unrestricted). With `b_k = sum_{d|k} d h_d` and `e_n` the coefficients of
//! the right-hand side,
//!
//! ```text
//! n e_n = sum_{k=1..n} b_k e_{n-k}
//! h_n   = (sum_{d|n, d<n} d h_d + sum_{k=1..n-1} b_k e_{n-k}) / n + [n=1] - [n=m]
//! ```
//!
//! Generation mirrors `H = Z + MSET_{>=2}(H)`: a hierarchy of size `n` is a
//! non-increasing list of at least two smaller classes, each named by its
//! size and its rank within that size.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, FromPrimitive, One, Zero};

use crate::cotree::{Cotree, Hierarchy, Label, Tree};
use crate::graph::Graph;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum EnumerationError {
    #[error("pattern size {0} is below 2")]
    PatternTooSmall(usize),
}

/// Which hierarchies a table counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Avoid {
    Unrestricted,
    /// Hierarchies with no subhierarchy isomorphic to a fixed pattern of
    /// this size.
    Size(usize),
}

/// Exact coefficients `H_1..H_N` (or their pattern-avoiding analogue).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffTable {
    avoid: Avoid,
    coeffs: Vec<BigUint>,
}

impl CoeffTable {
    pub fn avoid(&self) -> Avoid {
        self.avoid
    }

    /// Truncation order N.
    pub fn max_order(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of `x^n`; zero for `n = 0` or `n > N`.
    pub fn get(&self, n: usize) -> BigUint {
        match n {
            0 => BigUint::zero(),
            _ => self.coeffs.get(n - 1).cloned().unwrap_or_default(),
        }
    }

    /// `H_1..H_N` in order.
    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }
}

/// Runs the recurrence in `T`, returning `None` on overflow.
pub fn hierarchy_coefficients<T>(max_order: usize, avoid: Avoid) -> Option<Vec<T>>
where
    T: Clone + Zero + One + CheckedAdd + CheckedSub + CheckedMul + CheckedDiv + FromPrimitive,
{
    let m = match avoid {
        Avoid::Unrestricted => None,
        Avoid::Size(m) => Some(m),
    };
    let int = |k: usize| T::from_usize(k);
    let mut h: Vec<T> = vec![T::zero(); max_order + 1];
    let mut b: Vec<T> = vec![T::zero(); max_order + 1];
    let mut e: Vec<T> = vec![T::zero(); max_order + 1];
    e[0] = T::one();
    for n in 1..=max_order {
        let mut proper = T::zero();
        for d in (1..n).filter(|d| n % d == 0) {
            proper = proper.checked_add(&int(d)?.checked_mul(&h[d])?)?;
        }
        let mut r = proper.clone();
        for k in 1..n {
            r = r.checked_add(&b[k].checked_mul(&e[n - k])?)?;
        }
        let nn = int(n)?;
        let mut hn = r.checked_div(&nn)?;
        if n == 1 {
            hn = hn.checked_add(&T::one())?;
        }
        if Some(n) == m {
            hn = hn.checked_sub(&T::one())?;
        }
        b[n] = proper.checked_add(&nn.checked_mul(&hn)?)?;
        let mut s = T::zero();
        for k in 1..=n {
            s = s.checked_add(&b[k].checked_mul(&e[n - k])?)?;
        }
        e[n] = s.checked_div(&nn)?;
        h[n] = hn;
    }
    h.remove(0);
    Some(h)
}

pub fn count_hierarchies(max_order: usize) -> CoeffTable {
    let coeffs = hierarchy_coefficients(max_order, Avoid::Unrestricted).expect("big integers do not overflow");
    CoeffTable { avoid: Avoid::Unrestricted, coeffs }
}

/// The table depends on the pattern only through its size `m`.
pub fn count_avoiding(max_order: usize, m: usize) -> Result<CoeffTable, EnumerationError> {
    if m < 2 {
        return Err(EnumerationError::PatternTooSmall(m));
    }
    let coeffs = hierarchy_coefficients(max_order, Avoid::Size(m)).expect("big integers do not overflow");
    Ok(CoeffTable { avoid: Avoid::Size(m), coeffs })
}

/// Unlabeled cographs of order `n`: two root labels per hierarchy.
pub fn count_cographs(n: usize) -> BigUint {
    match n {
        0 => BigUint::zero(),
        1 => BigUint::one(),
        _ => count_hierarchies(n).get(n) * 2u32,
    }
}

/// `1 - H_n^(m) / H_n`: the share of size-`n` hierarchies that contain a
/// given size-`m` pattern.
pub fn containment_fraction(n: usize, m: usize) -> Result<BigRational, EnumerationError> {
    let avoiding = count_avoiding(n, m)?.get(n);
    let all = count_hierarchies(n).get(n);
    if all.is_zero() {
        return Ok(BigRational::zero());
    }
    let ratio = BigRational::new(BigInt::from(avoiding), BigInt::from(all));
    Ok(BigRational::one() - ratio)
}

/// A child class: the hierarchy of `size` leaves at position `rank` in the
/// generation order of that size.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Part {
    pub size: u32,
    pub rank: u32,
}

/// Every hierarchy of each size up to a bound, as non-increasing part lists.
/// Size 1 holds the leaf, stored as an empty list.
#[derive(Clone, Debug)]
pub struct HierarchyCatalog {
    levels: Vec<Vec<Box<[Part]>>>,
}

impl HierarchyCatalog {
    pub fn new(max_size: usize) -> Self {
        let mut cat = HierarchyCatalog { levels: vec![Vec::new()] };
        if max_size >= 1 {
            cat.levels.push(vec![Box::new([])]);
        }
        for n in 2..=max_size {
            let level = cat.first_parts(n).into_iter().flat_map(|f| cat.chunk(n, f)).collect();
            cat.levels.push(level);
        }
        cat
    }

    pub fn max_size(&self) -> usize {
        self.levels.len() - 1
    }

    /// Number of classes of `size` leaves.
    pub fn count(&self, size: usize) -> usize {
        self.levels.get(size).map_or(0, Vec::len)
    }

    pub fn parts(&self, size: usize, rank: usize) -> &[Part] {
        &self.levels[size][rank]
    }

    /// Largest parts a size-`n` hierarchy can start with, in generation
    /// order. Each one heads an independent [`chunk`](Self::chunk).
    /// Needs every size below `n` in the catalog.
    pub fn first_parts(&self, n: usize) -> Vec<Part> {
        assert!(n <= self.max_size() + 1, "catalog too small for size {n}");
        let mut out = Vec::new();
        for s in (1..n).rev() {
            for r in (0..self.count(s)).rev() {
                out.push(Part { size: s as u32, rank: r as u32 });
            }
        }
        out
    }

    /// All size-`n` part lists starting with `first`, in generation order.
    pub fn chunk(&self, n: usize, first: Part) -> Vec<Box<[Part]>> {
        let mut out = Vec::new();
        let mut prefix = vec![first];
        self.fill(n - first.size as usize, first, &mut prefix, &mut out);
        out
    }

    fn fill(&self, rem: usize, max: Part, prefix: &mut Vec<Part>, out: &mut Vec<Box<[Part]>>) {
        if rem == 0 {
            out.push(prefix.clone().into_boxed_slice());
            return;
        }
        for s in (1..=rem.min(max.size as usize)).rev() {
            let top = if s == max.size as usize { max.rank as usize + 1 } else { self.count(s) };
            for r in (0..top).rev() {
                let p = Part { size: s as u32, rank: r as u32 };
                prefix.push(p);
                self.fill(rem - s, p, prefix, out);
                prefix.pop();
            }
        }
    }

    /// The tree for a part list; children follow list order.
    pub fn tree_of(&self, parts: &[Part]) -> Tree {
        if parts.is_empty() {
            return Tree::Leaf;
        }
        Tree::Node(parts.iter().map(|p| self.tree_of(self.parts(p.size as usize, p.rank as usize))).collect())
    }

    /// The cograph of a part list under `root_label`, built without an
    /// intermediate tree.
    pub fn realize(&self, parts: &[Part], root_label: Label) -> Graph {
        let n: usize = parts.iter().map(|p| p.size as usize).sum::<usize>().max(1);
        let mut g = Graph::empty(n);
        self.realize_into(parts, root_label, &mut g, 0);
        g
    }

    fn realize_into(&self, parts: &[Part], label: Label, g: &mut Graph, base: usize) {
        let end = base + parts.iter().map(|q| q.size as usize).sum::<usize>();
        let mut start = base;
        for p in parts {
            let size = p.size as usize;
            if label == Label::Join {
                for v in start..start + size {
                    for w in start + size..end {
                        g.add_edge(v, w);
                    }
                }
            }
            self.realize_into(self.parts(size, p.rank as usize), label.flipped(), g, start);
            start += size;
        }
    }
}

/// Size-`n` hierarchies, one per isomorphism class, in canonical child order.
pub fn enumerate_hierarchies(n: usize) -> Box<dyn Iterator<Item = Hierarchy> + Send> {
    match n {
        0 => Box::new(std::iter::empty()),
        1 => Box::new(std::iter::once(Hierarchy::leaf())),
        _ => {
            let cat = Arc::new(HierarchyCatalog::new(n - 1));
            let firsts = cat.first_parts(n);
            Box::new(firsts.into_iter().flat_map(move |f| {
                let cat = Arc::clone(&cat);
                let chunk = cat.chunk(n, f);
                chunk.into_iter().map(move |parts| Hierarchy::new(cat.tree_of(&parts)).canonicalized())
            }))
        }
    }
}

/// Order-`n` cographs as canonical cotrees: the union-rooted and the
/// join-rooted cotree over each hierarchy.
pub fn enumerate_cographs(n: usize) -> Box<dyn Iterator<Item = Cotree> + Send> {
    if n == 1 {
        return Box::new(std::iter::once(Hierarchy::leaf().with_root_label(Label::Union)));
    }
    Box::new(
        enumerate_hierarchies(n)
            .flat_map(|h| [Label::Union, Label::Join].map(|l| h.with_root_label(l).canonicalized())),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cotree::{decompose, find_subhierarchy, parse_hierarchy};
    use crate::graph::canonical_label;
    use std::collections::HashSet;

    const H: [u64; 15] = [1, 1, 2, 5, 12, 33, 90, 261, 766, 2312, 7068, 21965, 68954, 218751, 699534];
    const H2: [u64; 15] = [1, 0, 1, 2, 4, 9, 20, 47, 112, 274, 678, 1709, 4346, 11176, 28966];

    fn as_u64(t: &CoeffTable) -> Vec<u64> {
        t.coeffs().iter().map(|c| u64::try_from(c).unwrap()).collect()
    }

    #[test]
    fn known_sequences() {
        assert_eq!(as_u64(&count_hierarchies(15)), H);
        assert_eq!(as_u64(&count_avoiding(15, 2).unwrap()), H2);
        assert_eq!(count_cographs(15), BigUint::from(1_399_068u32));
        assert_eq!(count_cographs(1), BigUint::one());
        assert_eq!(count_cographs(2), BigUint::from(2u32));
    }

    #[test]
    fn avoidance_edge_cases() {
        let t9 = count_avoiding(12, 9).unwrap();
        assert_eq!(t9.get(8), BigUint::from(261u32));
        assert_eq!(t9.get(9), BigUint::from(765u32));
        assert_eq!(t9.avoid(), Avoid::Size(9));
        assert_eq!(count_avoiding(5, 1), Err(EnumerationError::PatternTooSmall(1)));
        let all = count_hierarchies(40);
        for m in [2, 3, 5, 9] {
            let t = count_avoiding(40, m).unwrap();
            for n in 1..=40 {
                if n < m {
                    assert_eq!(t.get(n), all.get(n));
                } else {
                    assert!(t.get(n) < all.get(n), "m={m} n={n}");
                }
            }
        }
    }

    #[test]
    fn fixed_width_matches_big_integers_until_overflow() {
        let big = count_hierarchies(60);
        let small: Option<Vec<u64>> = hierarchy_coefficients(20, Avoid::Unrestricted);
        assert_eq!(small.unwrap(), as_u64(&count_hierarchies(20)));
        assert!(hierarchy_coefficients::<u64>(60, Avoid::Unrestricted).is_none());
        assert!(big.get(60).bits() > 64);
    }

    #[test]
    fn containment_fractions() {
        assert!(containment_fraction(5, 9).unwrap().is_zero());
        let f = containment_fraction(9, 9).unwrap();
        assert_eq!(f, BigRational::new(1.into(), 766.into()));
        let f = containment_fraction(15, 2).unwrap();
        assert_eq!(f, BigRational::one() - BigRational::new(28966.into(), 699534.into()));
    }

    #[test]
    fn small_enumerations() {
        let texts: HashSet<String> = enumerate_hierarchies(3).map(|h| h.canonical_form()).collect();
        assert_eq!(texts, HashSet::from(["(. . .)".to_string(), "((. .) .)".to_string()]));
        let c2: Vec<String> = enumerate_cographs(2).map(|t| t.canonical_form()).collect();
        assert_eq!(c2, vec!["U(. .)", "J(. .)"]);
        assert_eq!(enumerate_hierarchies(9).count(), 766);
        assert_eq!(enumerate_cographs(9).count(), 1532);
    }

    #[test]
    fn enumeration_matches_counts() {
        let table = count_hierarchies(12);
        for n in 1..=12 {
            let mut seen = HashSet::new();
            for h in enumerate_hierarchies(n) {
                assert!(h.out_degrees().iter().all(|&d| d >= 2));
                assert_eq!(h.size(), n);
                assert!(seen.insert(h.canonical_form()));
            }
            assert_eq!(BigUint::from(seen.len()), table.get(n), "size {n}");
        }
    }

    #[test]
    fn avoidance_by_search_matches_counts() {
        let patterns = ["(. .)", "(. . . .)", "((. .) . .)", "((. .) (. .))", "(((. .) .) .)", "((. . .) .)"];
        for text in patterns {
            let pattern = parse_hierarchy(text).unwrap();
            let table = count_avoiding(10, pattern.size()).unwrap();
            for n in 1..=10 {
                let avoiding =
                    enumerate_hierarchies(n).filter(|h| find_subhierarchy(h, &pattern).unwrap().is_none()).count();
                assert_eq!(BigUint::from(avoiding), table.get(n), "{text} n={n}");
            }
        }
    }

    #[test]
    fn cograph_realizations_are_distinct_and_decompose_back() {
        for n in 1..=7 {
            let mut labels = HashSet::new();
            for t in enumerate_cographs(n) {
                let g = t.realize();
                assert_eq!(decompose(&g).unwrap(), t);
                assert!(labels.insert(canonical_label(&g).unwrap()));
            }
            assert_eq!(BigUint::from(labels.len()), count_cographs(n));
        }
    }

    #[test]
    fn catalog_realization_matches_tree_realization() {
        let cat = HierarchyCatalog::new(8);
        for n in 2..=8 {
            for rank in 0..cat.count(n) {
                let parts = cat.parts(n, rank);
                for label in [Label::Union, Label::Join] {
                    let direct = cat.realize(parts, label);
                    let via_tree = Hierarchy::new(cat.tree_of(parts)).with_root_label(label).realize();
                    assert_eq!(direct, via_tree);
                }
            }
        }
    }
}
