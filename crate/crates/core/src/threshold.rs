//! Threshold graphs: creation sequences, recognition, enumeration, and
//! spectral collision counts within the family.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::graph::{bits, canonical_label, emit_graph6, Graph};
use crate::spectral::{gen_spectrum, graph_charpoly, IntPolynomial, SpectrumKind};

/// Largest order the exhaustive checks accept by default.
pub const THRESHOLD_BUDGET: usize = 12;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum ThresholdError {
    #[error("order {order} exceeds the budget of {budget}")]
    BudgetExceeded { order: usize, budget: usize },
    #[error("order must be at least {min}, got {order}")]
    OrderTooSmall { order: usize, min: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    Isolated,
    Dominating,
}

/// Steps for vertices `1..n`; vertex 0 starts the graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CreationSequence {
    steps: Vec<Step>,
}

impl CreationSequence {
    pub fn new(steps: Vec<Step>) -> Self {
        CreationSequence { steps }
    }

    /// Bit `i` of `mask` set means vertex `i + 1` dominates.
    pub fn from_mask(order: usize, mask: u64) -> Self {
        let steps = (0..order.saturating_sub(1))
            .map(|i| if mask >> i & 1 == 1 { Step::Dominating } else { Step::Isolated })
            .collect();
        CreationSequence { steps }
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn order(&self) -> usize {
        self.steps.len() + 1
    }
}

pub fn realize_threshold(seq: &CreationSequence) -> Graph {
    let mut g = Graph::empty(seq.order());
    for (i, step) in seq.steps.iter().enumerate() {
        if *step == Step::Dominating {
            for u in 0..=i {
                g.add_edge(u, i + 1);
            }
        }
    }
    g
}

/// Peels isolated or dominating vertices until one remains.
pub fn is_threshold(g: &Graph) -> bool {
    let mut alive = g.vertex_mask();
    while alive.count_ones() > 1 {
        let rest = |v: usize| alive & !(1u64 << v);
        let peel = bits(alive).find(|&v| {
            let nb = g.neighbors(v) & alive;
            nb == 0 || nb == rest(v)
        });
        match peel {
            Some(v) => alive &= !(1u64 << v),
            None => return false,
        }
    }
    true
}

/// One graph per unlabeled threshold graph of order `n`, in creation-mask
/// order.
pub fn enumerate_threshold(n: usize) -> Vec<Graph> {
    assert!((1..=63).contains(&n), "order {n} out of range");
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mask in 0u64..1 << (n - 1) {
        let g = realize_threshold(&CreationSequence::from_mask(n, mask));
        if seen.insert(canonical_label(&g).expect("order within canonical range")) {
            out.push(g);
        }
    }
    out
}

fn check_budget(n: usize, budget: usize) -> Result<(), ThresholdError> {
    if n > budget {
        return Err(ThresholdError::BudgetExceeded { order: n, budget });
    }
    Ok(())
}

/// Threshold graphs of order `n` grouped by characteristic polynomial;
/// only groups with at least two members.
pub fn charpoly_collisions(n: usize, kind: SpectrumKind) -> Vec<Vec<Graph>> {
    let mut groups: BTreeMap<Vec<BigInt>, Vec<Graph>> = BTreeMap::new();
    for g in enumerate_threshold(n) {
        let p: IntPolynomial = graph_charpoly(&g, kind);
        groups.entry(p.coeffs().to_vec()).or_default().push(g);
    }
    groups.into_values().filter(|v| v.len() > 1).collect()
}

/// True when no two threshold graphs of order `n` share an adjacency
/// characteristic polynomial.
pub fn check_lazzarin(n: usize) -> Result<bool, ThresholdError> {
    check_budget(n, THRESHOLD_BUDGET)?;
    if n == 0 {
        return Err(ThresholdError::OrderTooSmall { order: n, min: 1 });
    }
    Ok(charpoly_collisions(n, SpectrumKind::Adjacency).is_empty())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThresholdSurvey {
    pub order: usize,
    pub kind: SpectrumKind,
    pub total: usize,
    pub with_mate: usize,
    /// Every collision group also agrees on the complement's spectrum.
    pub all_generalized: bool,
    #[serde(serialize_with = "ratio_text")]
    pub fraction: BigRational,
    /// Collision groups as graph6 strings.
    pub classes: Vec<Vec<String>>,
}

fn ratio_text<S: serde::Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Order-`n` threshold graphs sharing a characteristic polynomial of the
/// chosen kind with another member of the family.
pub fn threshold_survey(n: usize, kind: SpectrumKind) -> Result<ThresholdSurvey, ThresholdError> {
    check_budget(n, THRESHOLD_BUDGET)?;
    if n == 0 {
        return Err(ThresholdError::OrderTooSmall { order: n, min: 1 });
    }
    let total = 1usize << (n - 1);
    let groups = charpoly_collisions(n, kind);
    let with_mate = groups.iter().map(Vec::len).sum();
    let all_generalized = groups.iter().all(|grp| {
        let first = gen_spectrum(&grp[0], kind);
        grp[1..].iter().all(|g| gen_spectrum(g, kind) == first)
    });
    let classes = groups
        .iter()
        .map(|grp| grp.iter().map(|g| emit_graph6(g).expect("threshold orders fit graph6")).collect())
        .collect();
    Ok(ThresholdSurvey {
        order: n,
        kind,
        total,
        with_mate,
        all_generalized,
        fraction: BigRational::new(with_mate.into(), total.into()),
        classes,
    })
}

/// Share of order-`n` threshold graphs with a signless-Laplacian cospectral
/// threshold mate.
pub fn q_mate_fraction(n: usize) -> Result<ThresholdSurvey, ThresholdError> {
    check_budget(n, THRESHOLD_BUDGET)?;
    if n < 4 {
        return Err(ThresholdError::OrderTooSmall { order: n, min: 4 });
    }
    threshold_survey(n, SpectrumKind::SignlessLaplacian)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cotree::decompose;
    use crate::graph::{all_graphs, are_isomorphic};

    #[test]
    fn creation_examples() {
        let k2 = realize_threshold(&CreationSequence::new(vec![Step::Dominating]));
        assert_eq!(k2, Graph::complete(2));
        let star = realize_threshold(&CreationSequence::new(vec![Step::Isolated, Step::Isolated, Step::Dominating]));
        assert!(are_isomorphic(&star, &Graph::star(3)).unwrap());
        assert!(is_threshold(&star));
        assert!(!is_threshold(&Graph::path(4)));
        assert!(!is_threshold(&Graph::cycle(4)));
        assert!(is_threshold(&Graph::empty(1)));
    }

    #[test]
    fn enumeration_counts_and_membership() {
        assert_eq!(enumerate_threshold(2).len(), 2);
        for n in 1..=10 {
            let family = enumerate_threshold(n);
            assert_eq!(family.len(), 1 << (n - 1));
            for g in &family {
                assert!(is_threshold(g));
                assert!(decompose(g).is_ok());
            }
        }
    }

    #[test]
    fn peeling_agrees_with_enumeration() {
        for n in 1..=8 {
            let members: HashSet<_> = enumerate_threshold(n).iter().map(|g| canonical_label(g).unwrap()).collect();
            for g in all_graphs(n).unwrap() {
                assert_eq!(is_threshold(&g), members.contains(&canonical_label(&g).unwrap()), "{g}");
            }
        }
    }

    #[test]
    fn degree_sequences_determine_threshold_graphs() {
        for n in 1..=10 {
            let mut seen = HashSet::new();
            for g in enumerate_threshold(n) {
                let mut d = g.degrees();
                d.sort_unstable();
                assert!(seen.insert(d));
            }
        }
    }

    #[test]
    fn no_adjacency_mates_among_threshold_graphs() {
        for n in 1..=10 {
            assert!(check_lazzarin(n).unwrap(), "order {n}");
        }
        assert_eq!(check_lazzarin(13), Err(ThresholdError::BudgetExceeded { order: 13, budget: 12 }));
    }

    #[test]
    fn q_mates_cover_an_eighth() {
        let f4 = q_mate_fraction(4).unwrap();
        assert!(f4.fraction >= BigRational::new(1.into(), 4.into()));
        let eighth = BigRational::new(1.into(), 8.into());
        for n in 4..=9 {
            let f = q_mate_fraction(n).unwrap();
            assert!(f.fraction >= eighth, "order {n}: {}", f.fraction);
            assert!(f.all_generalized, "order {n}");
        }
        assert!(matches!(q_mate_fraction(3), Err(ThresholdError::OrderTooSmall { .. })));
        let a = threshold_survey(8, SpectrumKind::Adjacency).unwrap();
        assert_eq!((a.with_mate, a.total), (0, 128));
        assert!(a.classes.is_empty());
    }
}
