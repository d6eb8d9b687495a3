//! Text grammar for trees.
//!
//! ```text
//! tree  := label? "(" tree (ws tree)+ ")" | "." | "{" graph6 "}"
//! label := "U" | "J"
//! ```
//!
//! Labels may appear on any internal vertex but must alternate; the root
//! label is implied by any one of them. A star leaf `{...}` makes the text a
//! quasi-cotree.

use super::{Cotree, CotreeError, Hierarchy, Label, QuasiCotree, QuasiTree, Tree};
use crate::graph::{parse_graph6, Graph};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParsedTree {
    Hierarchy(Hierarchy),
    Cotree(Cotree),
    Quasi(QuasiCotree),
}

enum Raw {
    Leaf,
    Star(Graph),
    Node { label: Option<Label>, children: Vec<Raw>, pos: usize },
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: impl Into<String>) -> CotreeError {
        CotreeError::SyntaxError { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn tree(&mut self) -> Result<Raw, CotreeError> {
        let start = self.pos;
        let label = match self.src.get(self.pos) {
            Some(b'U') => Some(Label::Union),
            Some(b'J') => Some(Label::Join),
            _ => None,
        };
        if label.is_some() {
            self.pos += 1;
        }
        match self.src.get(self.pos) {
            Some(b'.') if label.is_none() => {
                self.pos += 1;
                Ok(Raw::Leaf)
            }
            Some(b'{') if label.is_none() => self.star(),
            Some(b'(') => {
                self.pos += 1;
                let mut children = Vec::new();
                loop {
                    self.skip_ws();
                    match self.src.get(self.pos) {
                        Some(b')') => {
                            self.pos += 1;
                            break;
                        }
                        None => return Err(self.err("unclosed '('")),
                        _ => children.push(self.tree()?),
                    }
                }
                if children.len() < 2 {
                    return Err(CotreeError::UnaryInternalNode(start));
                }
                Ok(Raw::Node { label, children, pos: start })
            }
            Some(&c) => Err(self.err(format!("unexpected '{}'", c as char))),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn star(&mut self) -> Result<Raw, CotreeError> {
        self.pos += 1;
        let head = *self.src.get(self.pos).ok_or_else(|| self.err("unterminated star"))?;
        if !(64..=125).contains(&head) {
            return Err(self.err("star payload must be short-form graph6"));
        }
        let n = (head - 63) as usize;
        let len = 1 + (n * (n - 1) / 2).div_ceil(6);
        let end = self.pos + len;
        let body = self.src.get(self.pos..end).ok_or_else(|| self.err("truncated graph6 payload"))?;
        let text = std::str::from_utf8(body).map_err(|_| self.err("payload is not ASCII"))?;
        let g = parse_graph6(text).map_err(|e| self.err(e.to_string()))?;
        self.pos = end;
        if self.src.get(self.pos) != Some(&b'}') {
            return Err(self.err("expected '}' after graph6 payload"));
        }
        self.pos += 1;
        Ok(Raw::Star(g))
    }
}

fn parse_raw(text: &str) -> Result<Raw, CotreeError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    p.skip_ws();
    let raw = p.tree()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(raw)
}

/// Root label implied by the labels present, if any.
fn root_label(raw: &Raw) -> Result<Option<Label>, CotreeError> {
    fn walk(raw: &Raw, depth: usize, root: &mut Option<Label>) -> Result<(), CotreeError> {
        if let Raw::Node { label, children, pos } = raw {
            if let Some(l) = label {
                let implied = l.at_depth(depth);
                match root {
                    Some(r) if *r != implied => {
                        return Err(CotreeError::SyntaxError { pos: *pos, msg: "labels do not alternate".into() })
                    }
                    _ => *root = Some(implied),
                }
            }
            for c in children {
                walk(c, depth + 1, root)?;
            }
        }
        Ok(())
    }
    let mut root = None;
    walk(raw, 0, &mut root)?;
    Ok(root)
}

fn star_count(raw: &Raw) -> usize {
    match raw {
        Raw::Leaf => 0,
        Raw::Star(_) => 1,
        Raw::Node { children, .. } => children.iter().map(star_count).sum(),
    }
}

fn to_tree(raw: Raw) -> Tree {
    match raw {
        Raw::Leaf => Tree::Leaf,
        Raw::Star(_) => unreachable!("stars are handled by to_quasi"),
        Raw::Node { children, .. } => Tree::Node(children.into_iter().map(to_tree).collect()),
    }
}

fn to_quasi(raw: Raw) -> QuasiTree {
    match raw {
        Raw::Leaf => QuasiTree::Leaf,
        Raw::Star(g) => QuasiTree::Star(g),
        Raw::Node { children, .. } => QuasiTree::Node(children.into_iter().map(to_quasi).collect()),
    }
}

pub fn parse_tree(text: &str) -> Result<ParsedTree, CotreeError> {
    let raw = parse_raw(text)?;
    let root = root_label(&raw)?;
    match star_count(&raw) {
        0 => Ok(match root {
            Some(l) => ParsedTree::Cotree(Cotree { tree: to_tree(raw), root_label: l }),
            None => ParsedTree::Hierarchy(Hierarchy { tree: to_tree(raw) }),
        }),
        1 => {
            let label = match (&raw, root) {
                (_, Some(l)) => l,
                (Raw::Star(_), None) => Label::Union,
                _ => return Err(CotreeError::SyntaxError { pos: 0, msg: "quasi-cotree needs a root label".into() }),
            };
            Ok(ParsedTree::Quasi(QuasiCotree { tree: to_quasi(raw), root_label: label }))
        }
        _ => Err(CotreeError::MultipleStarLeaves),
    }
}

pub fn parse_hierarchy(text: &str) -> Result<Hierarchy, CotreeError> {
    match parse_tree(text)? {
        ParsedTree::Hierarchy(h) => Ok(h),
        ParsedTree::Cotree(_) => Err(CotreeError::SyntaxError { pos: 0, msg: "hierarchies carry no labels".into() }),
        ParsedTree::Quasi(_) => Err(CotreeError::SyntaxError { pos: 0, msg: "hierarchies have no star leaf".into() }),
    }
}

/// A lone `.` parses as the single-vertex cotree.
pub fn parse_cotree(text: &str) -> Result<Cotree, CotreeError> {
    match parse_tree(text)? {
        ParsedTree::Cotree(t) => Ok(t),
        ParsedTree::Hierarchy(h) if h.tree.is_leaf() => Ok(Cotree { tree: h.tree, root_label: Label::Union }),
        ParsedTree::Hierarchy(_) => Err(CotreeError::SyntaxError { pos: 0, msg: "missing root label".into() }),
        ParsedTree::Quasi(_) => Err(CotreeError::SyntaxError { pos: 0, msg: "unexpected star leaf".into() }),
    }
}

pub fn parse_quasi_cotree(text: &str) -> Result<QuasiCotree, CotreeError> {
    match parse_tree(text)? {
        ParsedTree::Quasi(q) => Ok(q),
        _ => Err(CotreeError::StarAbsentWhenRequired),
    }
}
