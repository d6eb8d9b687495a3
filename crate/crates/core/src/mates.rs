//! Cospectral mates: collision search over graph corpora and the cograph
//! family, discovery of the order-9 base pair, the substitution mate
//! constructor, and the union/join stability check.

use std::collections::{HashMap, HashSet};
use std::sync::atomic::{AtomicUsize, Ordering};

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cotree::{
    decompose, find_labeled_subtree, hierarchy_of, parse_cotree, realize_quasi, substitute_star, Cotree, CotreeError,
    Label,
};
use crate::enumeration::{HierarchyCatalog, Part};
use crate::graph::{
    are_isomorphic, canonical_form, canonical_label, emit_graph6, parse_graph6, CanonicalLabel, Graph, GraphError,
    GRAPH_COUNTS, MAX_ORDER,
};
use crate::spectral::{
    digest, fingerprint, gen_spectrum, graph_charpoly, graph_charpoly_i128, is_generalized_cospectral, IntPolynomial,
    Polynomial, SpectrumKind,
};

/// Largest order [`dgs_survey`] enumerates by default.
pub const DGS_SURVEY_BUDGET: usize = 16;

/// Order of the corpus [`discover_base_pair`] expects.
pub const BASE_PAIR_ORDER: usize = 9;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum MatesError {
    #[error("graph {index} has order {found}, expected {expected}")]
    OrderMismatch { index: usize, expected: usize, found: usize },
    #[error("corpus holds {found} graphs of order {order}, expected {expected}")]
    CorpusIncomplete { order: usize, expected: u64, found: u64 },
    #[error("no cograph has a generalized cospectral mate in the corpus")]
    NoBasePair,
    #[error("base pair is not unique: {0}")]
    AmbiguousBasePair(String),
    #[error("cotree does not contain the base pattern")]
    PatternAbsent,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("order {order} exceeds the budget of {budget}")]
    BudgetExceeded { order: usize, budget: usize },
    #[error("order must be positive")]
    EmptyOrder,
    #[error("malformed base pair cache: {0}")]
    MalformedCache(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Cotree(#[from] CotreeError),
}

/// Characteristic polynomial in the narrowest exact form that holds it.
/// Equal polynomials always get the same variant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum ExactPoly {
    Narrow(Polynomial<i128>),
    Wide(IntPolynomial),
}

fn exact_charpoly(g: &Graph, kind: SpectrumKind) -> ExactPoly {
    if let Some(p) = graph_charpoly_i128(g, kind) {
        return ExactPoly::Narrow(p);
    }
    let p = graph_charpoly(g, kind);
    match p.coeffs().iter().map(ToPrimitive::to_i128).collect::<Option<Vec<_>>>() {
        Some(c) => ExactPoly::Narrow(Polynomial::from_coeffs(c)),
        None => ExactPoly::Wide(p),
    }
}

/// Exact polynomials of a graph and of its complement.
type SpectrumKey = (ExactPoly, ExactPoly);

/// A size-`n` part list with the digests of its union- and join-rooted
/// realizations.
type DigestedParts = (Box<[Part]>, u128, u128);

fn spectrum_digest(g: &Graph, kind: SpectrumKind) -> u128 {
    digest(kind, &exact_charpoly(g, kind), &exact_charpoly(&g.complement(), kind))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassMember {
    /// Position in the scanned stream.
    pub index: usize,
    pub graph6: String,
    pub cograph: bool,
    /// Canonical cotree text, for cographs.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub cotree: Option<String>,
}

/// Pairwise non-isomorphic graphs sharing one generalized spectrum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollisionClass {
    pub fingerprint: String,
    /// Fingerprint of the class holding the complements.
    pub complement_fingerprint: String,
    pub members: Vec<ClassMember>,
}

impl CollisionClass {
    pub fn graphs(&self) -> Result<Vec<Graph>, GraphError> {
        self.members.iter().map(|m| parse_graph6(&m.graph6)).collect()
    }

    pub fn has_cograph(&self) -> bool {
        self.members.iter().any(|m| m.cograph)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollisionReport {
    pub kind: SpectrumKind,
    pub order: Option<usize>,
    pub scanned: u64,
    /// Classes grouped with their complement class.
    pub complement_orbits: usize,
    pub classes: Vec<CollisionClass>,
}

impl CollisionReport {
    fn new(kind: SpectrumKind, order: Option<usize>, scanned: u64, classes: Vec<CollisionClass>) -> Self {
        let orbits: HashSet<(&str, &str)> = classes
            .iter()
            .map(|c| {
                let (a, b) = (c.fingerprint.as_str(), c.complement_fingerprint.as_str());
                (a.min(b), a.max(b))
            })
            .collect();
        CollisionReport { kind, order, scanned, complement_orbits: orbits.len(), classes }
    }

    /// Total number of graphs across all classes.
    pub fn graphs_with_mates(&self) -> u64 {
        self.classes.iter().map(|c| c.members.len() as u64).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum IsoKey {
    Cotree(String),
    Label(CanonicalLabel),
}

fn build_class(kind: SpectrumKind, members: Vec<(usize, Graph)>) -> Result<Option<CollisionClass>, MatesError> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut first = None;
    for (index, g) in members {
        let cotree = decompose(&g).ok().map(|t| t.canonical_form());
        let key = match &cotree {
            Some(text) => IsoKey::Cotree(text.clone()),
            None => IsoKey::Label(canonical_label(&g)?),
        };
        if !seen.insert(key) {
            continue;
        }
        out.push(ClassMember { index, graph6: emit_graph6(&g)?, cograph: cotree.is_some(), cotree });
        first.get_or_insert(g);
    }
    if out.len() < 2 {
        return Ok(None);
    }
    let gs = gen_spectrum(&first.expect("class is non-empty"), kind);
    let text = |bytes: Vec<u8>| String::from_utf8(bytes).expect("fingerprints are ASCII");
    Ok(Some(CollisionClass {
        fingerprint: text(fingerprint(&gs)),
        complement_fingerprint: text(fingerprint(&gs.swapped())),
        members: out,
    }))
}

/// Confirms digest buckets exactly and builds the sorted class list.
fn assemble<F>(
    kind: SpectrumKind,
    mut keyed: Vec<(u128, usize)>,
    graph_of: F,
) -> Result<Vec<CollisionClass>, MatesError>
where
    F: Fn(usize) -> Graph,
{
    keyed.par_sort_unstable();
    let mut classes = Vec::new();
    for run in keyed.chunk_by(|a, b| a.0 == b.0) {
        if run.len() < 2 {
            continue;
        }
        let mut groups: Vec<(SpectrumKey, Vec<(usize, Graph)>)> = Vec::new();
        for &(_, id) in run {
            let g = graph_of(id);
            let key = (exact_charpoly(&g, kind), exact_charpoly(&g.complement(), kind));
            match groups.iter_mut().find(|(k, _)| *k == key) {
                Some((_, v)) => v.push((id, g)),
                None => groups.push((key, vec![(id, g)])),
            }
        }
        for (_, members) in groups {
            classes.extend(build_class(kind, members)?);
        }
    }
    classes.sort_by(|a, b| a.fingerprint.cmp(&b.fingerprint));
    Ok(classes)
}

/// Groups a corpus of equal-order graphs by generalized spectrum, keeping
/// classes with at least two non-isomorphic members.
pub fn find_collision_classes<I>(corpus: I, kind: SpectrumKind) -> Result<CollisionReport, MatesError>
where
    I: IntoIterator<Item = Graph>,
{
    let graphs: Vec<Graph> = corpus.into_iter().collect();
    collision_report(&graphs, kind)
}

fn collision_report(graphs: &[Graph], kind: SpectrumKind) -> Result<CollisionReport, MatesError> {
    let order = graphs.first().map(Graph::order);
    if let Some(expected) = order {
        if let Some((index, g)) = graphs.iter().enumerate().find(|(_, g)| g.order() != expected) {
            return Err(MatesError::OrderMismatch { index, expected, found: g.order() });
        }
    }
    let keyed = graphs.par_iter().enumerate().map(|(i, g)| (spectrum_digest(g, kind), i)).collect();
    let classes = assemble(kind, keyed, |i| graphs[i].clone())?;
    Ok(CollisionReport::new(kind, order, graphs.len() as u64, classes))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurveySummary {
    pub order: usize,
    pub kind: SpectrumKind,
    pub total: u64,
    pub with_mate_in_family: u64,
    pub report: CollisionReport,
}

/// Counts order-`n` cographs with a generalized cospectral mate that is
/// itself a cograph.
pub fn dgs_survey(n: usize, kind: SpectrumKind) -> Result<SurveySummary, MatesError> {
    dgs_survey_with_progress(n, kind, &|_, _| {})
}

/// [`dgs_survey`] reporting `(finished, total)` work chunks as it goes.
pub fn dgs_survey_with_progress(
    n: usize,
    kind: SpectrumKind,
    progress: &(dyn Fn(usize, usize) + Sync),
) -> Result<SurveySummary, MatesError> {
    if n == 0 {
        return Err(MatesError::EmptyOrder);
    }
    if n > DGS_SURVEY_BUDGET {
        return Err(MatesError::BudgetExceeded { order: n, budget: DGS_SURVEY_BUDGET });
    }
    if n == 1 {
        let report = CollisionReport::new(kind, Some(1), 1, Vec::new());
        return Ok(SurveySummary { order: 1, kind, total: 1, with_mate_in_family: 0, report });
    }
    let cat = HierarchyCatalog::new(n - 1);
    let firsts = cat.first_parts(n);
    let done = AtomicUsize::new(0);
    let chunks: Vec<Vec<DigestedParts>> = firsts
        .par_iter()
        .map(|&f| {
            let out = cat
                .chunk(n, f)
                .into_iter()
                .map(|parts| {
                    let g = cat.realize(&parts, Label::Union);
                    let p = exact_charpoly(&g, kind);
                    let pc = exact_charpoly(&g.complement(), kind);
                    // the join-rooted cotree realizes the complement
                    (parts, digest(kind, &p, &pc), digest(kind, &pc, &p))
                })
                .collect();
            progress(done.fetch_add(1, Ordering::Relaxed) + 1, firsts.len());
            out
        })
        .collect();
    let lists: Vec<DigestedParts> = chunks.into_iter().flatten().collect();
    let mut keyed = Vec::with_capacity(2 * lists.len());
    for (i, (_, du, dj)) in lists.iter().enumerate() {
        keyed.push((*du, 2 * i));
        keyed.push((*dj, 2 * i + 1));
    }
    let total = keyed.len() as u64;
    let classes = assemble(kind, keyed, |id| {
        let label = if id % 2 == 0 { Label::Union } else { Label::Join };
        cat.realize(&lists[id / 2].0, label)
    })?;
    let report = CollisionReport::new(kind, Some(n), total, classes);
    Ok(SurveySummary { order: n, kind, total, with_mate_in_family: report.graphs_with_mates(), report })
}

/// A cograph `left` with a non-cograph generalized cospectral mate `right`
/// of the same order, plus the cotree of `left`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasePair {
    left: Graph,
    right: Graph,
    t_star: Cotree,
}

/// Serializable view of a [`BasePair`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasePairRecord {
    pub left: String,
    pub right: String,
    pub t_star: String,
    pub t_star_root: char,
    pub hierarchy: String,
}

impl BasePair {
    /// Checks every pair invariant before accepting the graphs.
    pub fn new(left: Graph, right: Graph) -> Result<Self, MatesError> {
        let violated = |m: &str| Err(MatesError::PreconditionViolated(m.to_string()));
        let t_star = match decompose(&left) {
            Ok(t) => t,
            Err(_) => return violated("left graph is not a cograph"),
        };
        if !right.induced_p4_exists() {
            return violated("right graph is a cograph");
        }
        if left.order() != right.order()
            || !is_generalized_cospectral(&left, &right, SpectrumKind::Adjacency).unwrap_or(false)
        {
            return violated("graphs are not generalized cospectral");
        }
        if are_isomorphic(&left, &right)? {
            return violated("graphs are isomorphic");
        }
        Ok(BasePair { left, right, t_star })
    }

    pub fn left(&self) -> &Graph {
        &self.left
    }

    pub fn right(&self) -> &Graph {
        &self.right
    }

    pub fn t_star(&self) -> &Cotree {
        &self.t_star
    }

    pub fn record(&self) -> Result<BasePairRecord, MatesError> {
        Ok(BasePairRecord {
            left: emit_graph6(&self.left)?,
            right: emit_graph6(&self.right)?,
            t_star: self.t_star.canonical_form(),
            t_star_root: self.t_star.root_label().letter(),
            hierarchy: hierarchy_of(&self.t_star).canonical_form(),
        })
    }

    /// Three lines: graph6 of the left graph, graph6 of the right graph,
    /// canonical cotree text of the left graph.
    pub fn to_cache_text(&self) -> Result<String, MatesError> {
        let r = self.record()?;
        Ok(format!("{}\n{}\n{}\n", r.left, r.right, r.t_star))
    }

    pub fn from_cache_text(text: &str) -> Result<Self, MatesError> {
        let bad = |m: String| MatesError::MalformedCache(m);
        let lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
        let [left, right, tree] = lines[..] else {
            return Err(bad(format!("expected 3 lines, found {}", lines.len())));
        };
        let left = parse_graph6(left).map_err(|e| bad(e.to_string()))?;
        let right = parse_graph6(right).map_err(|e| bad(e.to_string()))?;
        let t_star = parse_cotree(tree).map_err(|e| bad(e.to_string()))?;
        let pair = BasePair::new(left, right).map_err(|e| bad(e.to_string()))?;
        if t_star.canonicalized() != pair.t_star {
            return Err(bad("cotree line does not match the left graph".into()));
        }
        Ok(pair)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Discovery {
    #[serde(skip)]
    pub base: BasePair,
    pub base_pair: BasePairRecord,
    /// The class of the left graph, with every mate found.
    pub base_class: CollisionClass,
    /// Cographs with a mate, as graph6, grouped by complement orbit.
    pub cograph_orbits: Vec<Vec<String>>,
    pub report: CollisionReport,
}

/// Scans every graph of order 9 for the cograph that is not determined by
/// its generalized spectrum.
pub fn discover_base_pair<I>(all_order9: I) -> Result<Discovery, MatesError>
where
    I: IntoIterator<Item = Graph>,
{
    let graphs: Vec<Graph> = all_order9.into_iter().collect();
    let expected = GRAPH_COUNTS[BASE_PAIR_ORDER];
    if let Some((index, g)) = graphs.iter().enumerate().find(|(_, g)| g.order() != BASE_PAIR_ORDER) {
        return Err(MatesError::OrderMismatch { index, expected: BASE_PAIR_ORDER, found: g.order() });
    }
    if graphs.len() as u64 != expected {
        return Err(MatesError::CorpusIncomplete { order: BASE_PAIR_ORDER, expected, found: graphs.len() as u64 });
    }
    let report = collision_report(&graphs, SpectrumKind::Adjacency)?;

    // complement orbits of cographs that have a mate
    let mut orbits: HashMap<CanonicalLabel, Vec<(CanonicalLabel, Graph)>> = HashMap::new();
    for class in report.classes.iter().filter(|c| c.has_cograph()) {
        for m in class.members.iter().filter(|m| m.cograph) {
            let g = parse_graph6(&m.graph6)?;
            let own = canonical_label(&g)?;
            let key = own.clone().min(canonical_label(&g.complement())?);
            let orbit = orbits.entry(key).or_default();
            if !orbit.iter().any(|(l, _)| *l == own) {
                orbit.push((own, g));
            }
        }
    }
    let mut orbit_list: Vec<_> = orbits.into_iter().collect();
    orbit_list.sort_by(|a, b| a.0.cmp(&b.0));
    let cograph_orbits: Vec<Vec<String>> = orbit_list
        .iter()
        .map(|(_, members)| members.iter().map(|(_, g)| emit_graph6(g)).collect())
        .collect::<Result<_, _>>()?;
    let (_, members) = match orbit_list.len() {
        0 => return Err(MatesError::NoBasePair),
        1 => orbit_list.pop().expect("one orbit"),
        k => return Err(MatesError::AmbiguousBasePair(format!("{k} complement orbits: {cograph_orbits:?}"))),
    };
    let (_, left_raw) = members.into_iter().min_by(|a, b| a.0.cmp(&b.0)).expect("orbit is non-empty");
    let left_g6 = emit_graph6(&left_raw)?;
    let base_class = report
        .classes
        .iter()
        .find(|c| c.members.iter().any(|m| m.graph6 == left_g6))
        .expect("left graph comes from a class")
        .clone();
    let mut mates = Vec::new();
    for m in base_class.members.iter().filter(|m| !m.cograph) {
        let g = parse_graph6(&m.graph6)?;
        mates.push((canonical_label(&g)?, g));
    }
    let (_, right_raw) = mates
        .into_iter()
        .min_by(|a, b| a.0.cmp(&b.0))
        .ok_or_else(|| MatesError::AmbiguousBasePair("the cograph's mates are all cographs".into()))?;
    let base = BasePair::new(canonical_form(&left_raw)?, canonical_form(&right_raw)?)?;
    Ok(Discovery { base_pair: base.record()?, base, base_class, cograph_orbits, report })
}

/// Replaces the first occurrence of the base pattern in `t` by the right
/// graph of the base pair.
pub fn construct_mate(t: &Cotree, base: &BasePair) -> Result<Graph, MatesError> {
    let path = find_labeled_subtree(t, &base.t_star).ok_or(MatesError::PatternAbsent)?;
    let quasi = substitute_star(t, &path, base.right.clone())?;
    Ok(realize_quasi(&quasi))
}

/// Outcome of checking a graph against a proposed mate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MateCheck {
    pub generalized_cospectral: bool,
    pub isomorphic: bool,
    pub mate_has_induced_p4: bool,
}

impl MateCheck {
    pub fn is_valid_mate(&self) -> bool {
        self.generalized_cospectral && !self.isomorphic
    }
}

pub fn check_mate(g: &Graph, mate: &Graph, kind: SpectrumKind) -> Result<MateCheck, MatesError> {
    let generalized_cospectral = g.order() == mate.order() && is_generalized_cospectral(g, mate, kind).unwrap_or(false);
    Ok(MateCheck {
        generalized_cospectral,
        isomorphic: are_isomorphic(g, mate)?,
        mate_has_induced_p4: mate.induced_p4_exists(),
    })
}

/// Given generalized cospectral `g1` and `g2`, true iff `g1 ∪ h` and
/// `g2 ∪ h` are generalized cospectral and so are `g1 ∨ h` and `g2 ∨ h`.
pub fn verify_union_join(g1: &Graph, g2: &Graph, h: &Graph) -> Result<bool, MatesError> {
    let kind = SpectrumKind::Adjacency;
    if g1.order() != g2.order() || !is_generalized_cospectral(g1, g2, kind).unwrap_or(false) {
        return Err(MatesError::PreconditionViolated("first two graphs are not generalized cospectral".into()));
    }
    let order = g1.order() + h.order();
    if order > MAX_ORDER {
        return Err(GraphError::OrderOutOfRange { order, max: MAX_ORDER }.into());
    }
    let union = is_generalized_cospectral(&g1.disjoint_union(h), &g2.disjoint_union(h), kind).unwrap_or(false);
    let join = is_generalized_cospectral(&g1.join(h), &g2.join(h), kind).unwrap_or(false);
    Ok(union && join)
}
