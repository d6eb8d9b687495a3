//! Hierarchies, cotrees and quasi-cotrees.
//!
//! A [`Hierarchy`] is a rooted unordered tree without unary internal
//! vertices. A [`Cotree`] adds a root label; every other internal label is
//! implied because labels alternate with depth. A [`QuasiCotree`] is a
//! cotree in which one leaf stands for an arbitrary graph.
//!
//! Vertices are addressed by [`VertexPath`]: child indices from the root, in
//! the tree's stored child order. Trees built by [`decompose`], the
//! enumerators, or the parser reading canonical text are stored in canonical
//! order.

mod parse;

use std::fmt;

use crate::graph::{bits, Graph};

pub use parse::{parse_cotree, parse_hierarchy, parse_quasi_cotree, parse_tree, ParsedTree};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum CotreeError {
    #[error("syntax error at byte {pos}: {msg}")]
    SyntaxError { pos: usize, msg: String },
    #[error("internal vertex with a single child at byte {0}")]
    UnaryInternalNode(usize),
    #[error("more than one star leaf")]
    MultipleStarLeaves,
    #[error("a quasi-cotree needs exactly one star leaf")]
    StarAbsentWhenRequired,
    #[error("graph is not a cograph (it contains an induced P4)")]
    NotACograph,
    #[error("pattern must have at least two leaves")]
    PatternTooSmall,
    #[error("no vertex at path {0:?}")]
    VertexNotFound(VertexPath),
}

/// Child indices from the root down to a vertex.
pub type VertexPath = Vec<usize>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Union,
    Join,
}

impl Label {
    pub fn flipped(self) -> Label {
        match self {
            Label::Union => Label::Join,
            Label::Join => Label::Union,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Label::Union => 'U',
            Label::Join => 'J',
        }
    }

    /// Label of a vertex `depth` levels below a vertex labelled `self`.
    pub fn at_depth(self, depth: usize) -> Label {
        if depth.is_multiple_of(2) {
            self
        } else {
            self.flipped()
        }
    }
}

/// Unlabelled rooted tree; internal vertices have at least two children.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Tree {
    Leaf,
    Node(Vec<Tree>),
}

impl Tree {
    pub fn size(&self) -> usize {
        match self {
            Tree::Leaf => 1,
            Tree::Node(ch) => ch.iter().map(Tree::size).sum(),
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Tree::Leaf)
    }

    pub fn children(&self) -> &[Tree] {
        match self {
            Tree::Leaf => &[],
            Tree::Node(ch) => ch,
        }
    }

    pub fn at(&self, path: &[usize]) -> Option<&Tree> {
        path.iter().try_fold(self, |t, &i| t.children().get(i))
    }

    /// Canonical text. With `root` set, every internal vertex carries its
    /// label letter.
    fn canonical_text(&self, root: Option<Label>) -> String {
        match self {
            Tree::Leaf => ".".to_string(),
            Tree::Node(ch) => {
                let mut parts: Vec<String> = ch.iter().map(|c| c.canonical_text(root.map(Label::flipped))).collect();
                parts.sort_unstable();
                let prefix = root.map(|l| l.letter().to_string()).unwrap_or_default();
                format!("{prefix}({})", parts.join(" "))
            }
        }
    }

    fn text(&self, root: Option<Label>, out: &mut String) {
        match self {
            Tree::Leaf => out.push('.'),
            Tree::Node(ch) => {
                if let Some(l) = root {
                    out.push(l.letter());
                }
                out.push('(');
                for (i, c) in ch.iter().enumerate() {
                    if i > 0 {
                        out.push(' ');
                    }
                    c.text(root.map(Label::flipped), out);
                }
                out.push(')');
            }
        }
    }

    /// Copy with every child list sorted by canonical text (labelled when
    /// `root` is set, which moves leaves ahead of internal vertices).
    fn canonicalized(&self, root: Option<Label>) -> Tree {
        match self {
            Tree::Leaf => Tree::Leaf,
            Tree::Node(ch) => {
                let child_label = root.map(Label::flipped);
                let mut keyed: Vec<(String, Tree)> = ch
                    .iter()
                    .map(|c| {
                        let c = c.canonicalized(child_label);
                        (c.canonical_text(child_label), c)
                    })
                    .collect();
                keyed.sort_by(|a, b| a.0.cmp(&b.0));
                Tree::Node(keyed.into_iter().map(|(_, c)| c).collect())
            }
        }
    }

    fn is_valid(&self) -> bool {
        match self {
            Tree::Leaf => true,
            Tree::Node(ch) => ch.len() >= 2 && ch.iter().all(Tree::is_valid),
        }
    }

    /// Pre-order search for a vertex whose subtree satisfies `pred`.
    /// `pred` gets the subtree's unlabelled canonical text and its depth.
    fn find_by_text(&self, size: usize, pred: &dyn Fn(&str, usize) -> bool) -> Option<VertexPath> {
        fn walk(
            t: &Tree,
            size: usize,
            depth: usize,
            path: &mut VertexPath,
            pred: &dyn Fn(&str, usize) -> bool,
        ) -> Option<VertexPath> {
            let s = t.size();
            if s < size {
                return None;
            }
            if s == size && pred(&t.canonical_text(None), depth) {
                return Some(path.clone());
            }
            for (i, c) in t.children().iter().enumerate() {
                path.push(i);
                let hit = walk(c, size, depth + 1, path, pred);
                path.pop();
                if hit.is_some() {
                    return hit;
                }
            }
            None
        }
        walk(self, size, 0, &mut Vec::new(), pred)
    }
}

/// The unlabelled skeleton of a cotree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hierarchy {
    tree: Tree,
}

impl Hierarchy {
    /// Panics if some internal vertex has fewer than two children.
    pub fn new(tree: Tree) -> Self {
        assert!(tree.is_valid(), "internal vertices need at least two children");
        Hierarchy { tree }
    }

    pub fn leaf() -> Self {
        Hierarchy { tree: Tree::Leaf }
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn size(&self) -> usize {
        self.tree.size()
    }

    /// Equal for two hierarchies exactly when they are isomorphic as rooted
    /// unordered trees.
    pub fn canonical_form(&self) -> String {
        self.tree.canonical_text(None)
    }

    pub fn canonicalized(&self) -> Hierarchy {
        Hierarchy { tree: self.tree.canonicalized(None) }
    }

    pub fn with_root_label(&self, root_label: Label) -> Cotree {
        Cotree { tree: self.tree.clone(), root_label }
    }

    /// Every internal out-degree, in pre-order.
    pub fn out_degrees(&self) -> Vec<usize> {
        fn walk(t: &Tree, out: &mut Vec<usize>) {
            if let Tree::Node(ch) = t {
                out.push(ch.len());
                ch.iter().for_each(|c| walk(c, out));
            }
        }
        let mut out = Vec::new();
        walk(&self.tree, &mut out);
        out
    }
}

impl fmt::Display for Hierarchy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.tree.text(None, &mut s);
        f.write_str(&s)
    }
}

/// A hierarchy with a root label; labels alternate down the tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cotree {
    tree: Tree,
    root_label: Label,
}

impl Cotree {
    pub fn new(hierarchy: Hierarchy, root_label: Label) -> Self {
        Cotree { tree: hierarchy.tree, root_label }
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn root_label(&self) -> Label {
        self.root_label
    }

    pub fn size(&self) -> usize {
        self.tree.size()
    }

    pub fn canonical_form(&self) -> String {
        if self.tree.is_leaf() {
            return ".".into();
        }
        self.tree.canonical_text(Some(self.root_label))
    }

    pub fn canonicalized(&self) -> Cotree {
        Cotree { tree: self.tree.canonicalized(Some(self.root_label)), root_label: self.root_label }
    }

    /// Label of the vertex at `path`, or `None` for a leaf or a missing path.
    pub fn label_at(&self, path: &[usize]) -> Option<Label> {
        match self.tree.at(path)? {
            Tree::Leaf => None,
            Tree::Node(_) => Some(self.root_label.at_depth(path.len())),
        }
    }

    /// The subtree rooted at `path`, with its inherited label.
    pub fn subtree(&self, path: &[usize]) -> Option<Cotree> {
        let tree = self.tree.at(path)?.clone();
        Some(Cotree { tree, root_label: self.root_label.at_depth(path.len()) })
    }

    /// The cograph: two leaves are adjacent exactly when their lowest common
    /// ancestor is a join. Leaves are numbered in stored order.
    pub fn realize(&self) -> Graph {
        let mut g = Graph::empty(self.size());
        let mut next = 0;
        realize_tree(&self.tree, self.root_label, &mut g, &mut next);
        g
    }
}

impl fmt::Display for Cotree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.tree.text(Some(self.root_label), &mut s);
        f.write_str(&s)
    }
}

fn connect_children(g: &mut Graph, masks: &[u64]) {
    let all = masks.iter().fold(0, |a, m| a | m);
    for &m in masks {
        for v in bits(m) {
            for w in bits(all & !m) {
                if v < w {
                    g.add_edge(v, w);
                }
            }
        }
    }
}

fn realize_tree(t: &Tree, label: Label, g: &mut Graph, next: &mut usize) -> u64 {
    match t {
        Tree::Leaf => {
            *next += 1;
            1 << (*next - 1)
        }
        Tree::Node(ch) => {
            let masks: Vec<u64> = ch.iter().map(|c| realize_tree(c, label.flipped(), g, next)).collect();
            if label == Label::Join {
                connect_children(g, &masks);
            }
            masks.iter().fold(0, |a, m| a | m)
        }
    }
}

/// The cotree of the complement: same hierarchy, every label swapped.
pub fn complement_cotree(t: &Cotree) -> Cotree {
    Cotree { tree: t.tree.clone(), root_label: t.root_label.flipped() }
}

pub fn hierarchy_of(t: &Cotree) -> Hierarchy {
    Hierarchy { tree: t.tree.clone() }
}

/// Cotree of a cograph, in canonical child order.
pub fn decompose(g: &Graph) -> Result<Cotree, CotreeError> {
    fn build(g: &Graph, mask: u64) -> Result<(Tree, Label), CotreeError> {
        if mask.count_ones() == 1 {
            return Ok((Tree::Leaf, Label::Union));
        }
        let comps = g.components(mask);
        let (parts, label) = if comps.len() > 1 {
            (comps, Label::Union)
        } else {
            let co = g.co_components(mask);
            if co.len() == 1 {
                return Err(CotreeError::NotACograph);
            }
            (co, Label::Join)
        };
        let children = parts.into_iter().map(|m| build(g, m).map(|(t, _)| t)).collect::<Result<_, _>>()?;
        Ok((Tree::Node(children), label))
    }
    let (tree, root_label) = build(g, g.vertex_mask())?;
    Ok(Cotree { tree: tree.canonicalized(Some(root_label)), root_label })
}

/// First vertex (pre-order) whose full subtree is isomorphic to `pattern`.
pub fn find_subhierarchy(h: &Hierarchy, pattern: &Hierarchy) -> Result<Option<VertexPath>, CotreeError> {
    if pattern.size() < 2 {
        return Err(CotreeError::PatternTooSmall);
    }
    let want = pattern.canonical_form();
    Ok(h.tree.find_by_text(pattern.size(), &|text, _| text == want))
}

/// Like [`find_subhierarchy`], but the inherited label of the matching
/// vertex must equal the pattern's root label.
pub fn find_labeled_subtree(t: &Cotree, pattern: &Cotree) -> Option<VertexPath> {
    let want = pattern.tree.canonical_text(None);
    let label = pattern.root_label;
    let root = t.root_label;
    let leaf_pattern = pattern.tree.is_leaf();
    t.tree.find_by_text(pattern.size(), &|text, depth| text == want && (leaf_pattern || root.at_depth(depth) == label))
}

/// Leaf of a quasi-cotree: a plain vertex or the distinguished graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum QuasiTree {
    Leaf,
    Star(Graph),
    Node(Vec<QuasiTree>),
}

impl QuasiTree {
    fn from_tree(t: &Tree) -> QuasiTree {
        match t {
            Tree::Leaf => QuasiTree::Leaf,
            Tree::Node(ch) => QuasiTree::Node(ch.iter().map(QuasiTree::from_tree).collect()),
        }
    }

    fn star_count(&self) -> usize {
        match self {
            QuasiTree::Leaf => 0,
            QuasiTree::Star(_) => 1,
            QuasiTree::Node(ch) => ch.iter().map(QuasiTree::star_count).sum(),
        }
    }

    fn order(&self) -> usize {
        match self {
            QuasiTree::Leaf => 1,
            QuasiTree::Star(g) => g.order(),
            QuasiTree::Node(ch) => ch.iter().map(QuasiTree::order).sum(),
        }
    }

    fn text(&self, label: Label, out: &mut String) {
        match self {
            QuasiTree::Leaf => out.push('.'),
            QuasiTree::Star(g) => {
                out.push('{');
                out.push_str(&crate::graph::emit_graph6(g).expect("star payload fits graph6"));
                out.push('}');
            }
            QuasiTree::Node(ch) => {
                out.push(label.letter());
                out.push('(');
                for (i, c) in ch.iter().enumerate() {
                    if i > 0 {
                        out.push(' ');
                    }
                    c.text(label.flipped(), out);
                }
                out.push(')');
            }
        }
    }
}

/// A cotree with exactly one leaf replaced by a graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuasiCotree {
    tree: QuasiTree,
    root_label: Label,
}

impl QuasiCotree {
    pub fn new(tree: QuasiTree, root_label: Label) -> Result<Self, CotreeError> {
        match tree.star_count() {
            0 => Err(CotreeError::StarAbsentWhenRequired),
            1 => Ok(QuasiCotree { tree, root_label }),
            _ => Err(CotreeError::MultipleStarLeaves),
        }
    }

    pub fn tree(&self) -> &QuasiTree {
        &self.tree
    }

    pub fn root_label(&self) -> Label {
        self.root_label
    }

    /// Number of vertices of the realized graph.
    pub fn order(&self) -> usize {
        self.tree.order()
    }
}

impl fmt::Display for QuasiCotree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.tree.text(self.root_label, &mut s);
        f.write_str(&s)
    }
}

/// Replace the subtree at `path` by a star leaf carrying `payload`.
pub fn substitute_star(t: &Cotree, path: &[usize], payload: Graph) -> Result<QuasiCotree, CotreeError> {
    if t.tree.at(path).is_none() {
        return Err(CotreeError::VertexNotFound(path.to_vec()));
    }
    fn rebuild(t: &Tree, path: &[usize], payload: &mut Option<Graph>) -> QuasiTree {
        match path.split_first() {
            None => QuasiTree::Star(payload.take().expect("payload used once")),
            Some((&i, rest)) => QuasiTree::Node(
                t.children()
                    .iter()
                    .enumerate()
                    .map(|(j, c)| if j == i { rebuild(c, rest, payload) } else { QuasiTree::from_tree(c) })
                    .collect(),
            ),
        }
    }
    let tree = rebuild(&t.tree, path, &mut Some(payload));
    Ok(QuasiCotree { tree, root_label: t.root_label })
}

/// Evaluate unions and joins with the star contributing its payload graph.
/// Vertices follow leaf order with the payload expanded in place.
pub fn realize_quasi(qt: &QuasiCotree) -> Graph {
    fn walk(t: &QuasiTree, label: Label, g: &mut Graph, next: &mut usize) -> u64 {
        match t {
            QuasiTree::Leaf => {
                *next += 1;
                1 << (*next - 1)
            }
            QuasiTree::Star(p) => {
                let base = *next;
                for u in 0..p.order() {
                    for w in bits(p.neighbors(u)) {
                        if u < w {
                            g.add_edge(base + u, base + w);
                        }
                    }
                }
                *next += p.order();
                crate::graph::full_mask(p.order()) << base
            }
            QuasiTree::Node(ch) => {
                let masks: Vec<u64> = ch.iter().map(|c| walk(c, label.flipped(), g, next)).collect();
                if label == Label::Join {
                    connect_children(g, &masks);
                }
                masks.iter().fold(0, |a, m| a | m)
            }
        }
    }
    let mut g = Graph::empty(qt.order());
    walk(&qt.tree, qt.root_label, &mut g, &mut 0);
    g
}
