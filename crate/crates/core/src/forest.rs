//! Ordered forests of rooted trees with a fixed branching arity, and the
//! pair calculus (expansion, reduction, composition) shared by arc pair
//! diagrams and tree pairs.

use std::fmt;
use std::sync::Arc as Shared;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ForestError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("expected {expected} trees, found {found}")]
    TreeCount { expected: usize, found: usize },
    #[error("leaf index {index} out of range for {count} leaves")]
    IndexOutOfRange { index: usize, count: usize },
}

pub type ForestResult<T> = Result<T, ForestError>;

#[derive(Debug, PartialEq, Eq, Hash)]
pub struct Node {
    children: Box<[Tree]>,
    leaves: usize,
}

/// A rooted tree; internal nodes share structure between values.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Tree {
    Leaf,
    Node(Shared<Node>),
}

impl Tree {
    pub fn node(children: Vec<Tree>) -> Tree {
        let leaves = children.iter().map(Tree::leaf_count).sum();
        Tree::Node(Shared::new(Node {
            children: children.into_boxed_slice(),
            leaves,
        }))
    }

    /// A node whose children are all leaves.
    pub fn caret(arity: usize) -> Tree {
        Tree::node(vec![Tree::Leaf; arity])
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Tree::Leaf)
    }

    pub fn children(&self) -> &[Tree] {
        match self {
            Tree::Leaf => &[],
            Tree::Node(n) => &n.children,
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Tree::Leaf => 1,
            Tree::Node(n) => n.leaves,
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Tree::Leaf => 0,
            Tree::Node(n) => 1 + n.children.iter().map(Tree::node_count).sum::<usize>(),
        }
    }

    fn is_caret(&self) -> bool {
        match self {
            Tree::Leaf => false,
            Tree::Node(n) => n.children.iter().all(Tree::is_leaf),
        }
    }

    fn expand_leaf(&self, index: usize, arity: usize) -> Tree {
        match self {
            Tree::Leaf => Tree::caret(arity),
            Tree::Node(n) => {
                let mut offset = 0;
                let mut children = n.children.to_vec();
                for child in children.iter_mut() {
                    let count = child.leaf_count();
                    if index < offset + count {
                        *child = child.expand_leaf(index - offset, arity);
                        break;
                    }
                    offset += count;
                }
                Tree::node(children)
            }
        }
    }

    /// Replaces the caret whose first leaf is `index` by a leaf.
    fn collapse_caret(&self, index: usize) -> Option<Tree> {
        match self {
            Tree::Leaf => None,
            Tree::Node(_) if index == 0 && self.is_caret() => Some(Tree::Leaf),
            Tree::Node(n) => {
                let mut offset = 0;
                let mut children = n.children.to_vec();
                for child in children.iter_mut() {
                    let count = child.leaf_count();
                    if index < offset + count {
                        *child = child.collapse_caret(index - offset)?;
                        return Some(Tree::node(children));
                    }
                    offset += count;
                }
                None
            }
        }
    }

    fn union(&self, other: &Tree) -> Tree {
        match (self, other) {
            (Tree::Leaf, t) | (t, Tree::Leaf) => t.clone(),
            (Tree::Node(a), Tree::Node(b)) => {
                if Shared::ptr_eq(a, b) {
                    return self.clone();
                }
                Tree::node(
                    a.children
                        .iter()
                        .zip(b.children.iter())
                        .map(|(x, y)| x.union(y))
                        .collect(),
                )
            }
        }
    }

    /// Indices (in leaf order) of leaves of `self` that are internal in
    /// `target`.
    fn leaves_refined_by(&self, target: &Tree, offset: usize, out: &mut Vec<usize>) {
        match (self, target) {
            (_, Tree::Leaf) => {}
            (Tree::Leaf, Tree::Node(_)) => out.push(offset),
            (Tree::Node(a), Tree::Node(b)) => {
                let mut off = offset;
                for (x, y) in a.children.iter().zip(b.children.iter()) {
                    x.leaves_refined_by(y, off, out);
                    off += x.leaf_count();
                }
            }
        }
    }

    /// True when every node of `self` is a node of `other`.
    pub fn is_subtree_of(&self, other: &Tree) -> bool {
        match (self, other) {
            (Tree::Leaf, _) => true,
            (Tree::Node(_), Tree::Leaf) => false,
            (Tree::Node(a), Tree::Node(b)) => a
                .children
                .iter()
                .zip(b.children.iter())
                .all(|(x, y)| x.is_subtree_of(y)),
        }
    }

    /// Child-position path of every leaf, in order.
    pub fn leaf_paths(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::with_capacity(self.leaf_count());
        let mut path = Vec::new();
        self.collect_paths(&mut path, &mut out);
        out
    }

    fn collect_paths(&self, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        match self {
            Tree::Leaf => out.push(path.clone()),
            Tree::Node(n) => {
                for (i, child) in n.children.iter().enumerate() {
                    path.push(i);
                    child.collect_paths(path, out);
                    path.pop();
                }
            }
        }
    }

    /// Builds the smallest tree having all given paths as nodes or leaves.
    pub fn from_paths<'a>(paths: impl IntoIterator<Item = &'a [usize]>, arity: usize) -> Tree {
        let mut tree = Tree::Leaf;
        for path in paths {
            tree = tree.with_path(path, arity);
        }
        tree
    }

    /// Builds the smallest tree having an internal node at each path.
    pub fn from_node_paths<'a>(paths: impl IntoIterator<Item = &'a [usize]>, arity: usize) -> Tree {
        let mut tree = Tree::Leaf;
        for path in paths {
            let mut p = path.to_vec();
            p.push(0);
            tree = tree.with_path(&p, arity);
        }
        tree
    }

    fn with_path(&self, path: &[usize], arity: usize) -> Tree {
        let Some((&head, rest)) = path.split_first() else {
            return self.clone();
        };
        let mut children = match self {
            Tree::Leaf => vec![Tree::Leaf; arity],
            Tree::Node(n) => n.children.to_vec(),
        };
        children[head] = children[head].with_path(rest, arity);
        Tree::node(children)
    }

    /// Replaces the subtree at `path`; every node along the path must exist.
    pub fn replace_at(&self, path: &[usize], sub: Tree) -> Tree {
        let Some((&head, rest)) = path.split_first() else {
            return sub;
        };
        let mut children = self.children().to_vec();
        assert!(head < children.len(), "path leaves the tree");
        children[head] = children[head].replace_at(rest, sub);
        Tree::node(children)
    }

    /// The subtree at `path`.
    pub fn subtree(&self, path: &[usize]) -> &Tree {
        path.iter().fold(self, |t, &c| &t.children()[c])
    }

    fn write(&self, out: &mut String) {
        match self {
            Tree::Leaf => out.push('.'),
            Tree::Node(n) => {
                out.push('(');
                for (i, c) in n.children.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    c.write(out);
                }
                out.push(')');
            }
        }
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write(&mut s);
        f.write_str(&s)
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    arity: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn err(&self, msg: &str) -> ForestError {
        ForestError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn expect(&mut self, c: u8) -> ForestResult<()> {
        self.skip_ws();
        if self.bytes.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn tree(&mut self) -> ForestResult<Tree> {
        self.skip_ws();
        match self.bytes.get(self.pos) {
            Some(b'.') => {
                self.pos += 1;
                Ok(Tree::Leaf)
            }
            Some(b'(') => {
                self.pos += 1;
                let mut children = Vec::with_capacity(self.arity);
                for i in 0..self.arity {
                    if i > 0 {
                        self.expect(b',')?;
                    }
                    children.push(self.tree()?);
                }
                self.expect(b')')?;
                Ok(Tree::node(children))
            }
            _ => Err(self.err("expected '.' or '('")),
        }
    }
}

/// A sequence of trees of common arity; leaves are numbered across the
/// trees in order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Forest {
    arity: usize,
    trees: Vec<Tree>,
}

impl Forest {
    pub fn new(arity: usize, trees: Vec<Tree>) -> Forest {
        Forest { arity, trees }
    }

    /// `count` single-leaf trees.
    pub fn trivial(arity: usize, count: usize) -> Forest {
        Forest {
            arity,
            trees: vec![Tree::Leaf; count],
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn trees(&self) -> &[Tree] {
        &self.trees
    }

    pub fn leaf_count(&self) -> usize {
        self.trees.iter().map(Tree::leaf_count).sum()
    }

    pub fn node_count(&self) -> usize {
        self.trees.iter().map(Tree::node_count).sum()
    }

    /// Index of the first leaf of each tree.
    pub fn tree_starts(&self) -> Vec<usize> {
        let mut acc = 0;
        self.trees
            .iter()
            .map(|t| {
                let s = acc;
                acc += t.leaf_count();
                s
            })
            .collect()
    }

    /// Locates a leaf: (tree index, index within the tree).
    fn locate(&self, index: usize) -> ForestResult<(usize, usize)> {
        let mut offset = 0;
        for (t, tree) in self.trees.iter().enumerate() {
            let count = tree.leaf_count();
            if index < offset + count {
                return Ok((t, index - offset));
            }
            offset += count;
        }
        Err(ForestError::IndexOutOfRange { index, count: offset })
    }

    pub fn expand_leaf(&self, index: usize) -> ForestResult<Forest> {
        let (t, local) = self.locate(index)?;
        let mut trees = self.trees.clone();
        trees[t] = trees[t].expand_leaf(local, self.arity);
        Ok(Forest {
            arity: self.arity,
            trees,
        })
    }

    /// Collapses the caret whose first leaf is `index`, if there is one.
    pub fn collapse_caret(&self, index: usize) -> Option<Forest> {
        let (t, local) = self.locate(index).ok()?;
        let collapsed = self.trees[t].collapse_caret(local)?;
        let mut trees = self.trees.clone();
        trees[t] = collapsed;
        Some(Forest {
            arity: self.arity,
            trees,
        })
    }

    pub fn has_caret_at(&self, index: usize) -> bool {
        self.locate(index)
            .ok()
            .and_then(|(t, local)| self.trees[t].collapse_caret(local))
            .is_some()
    }

    /// Smallest common refinement.
    pub fn union(&self, other: &Forest) -> Forest {
        let trees = self
            .trees
            .iter()
            .zip(other.trees.iter())
            .map(|(a, b)| a.union(b))
            .collect();
        Forest {
            arity: self.arity,
            trees,
        }
    }

    pub fn is_refined_by(&self, other: &Forest) -> bool {
        self.trees
            .iter()
            .zip(other.trees.iter())
            .all(|(a, b)| a.is_subtree_of(b))
    }

    fn leaves_refined_by(&self, target: &Forest) -> Vec<usize> {
        let mut out = Vec::new();
        let mut offset = 0;
        for (a, b) in self.trees.iter().zip(target.trees.iter()) {
            a.leaves_refined_by(b, offset, &mut out);
            offset += a.leaf_count();
        }
        out
    }

    /// (tree index, child path) of every leaf, in order.
    pub fn leaf_paths(&self) -> Vec<(usize, Vec<usize>)> {
        self.trees
            .iter()
            .enumerate()
            .flat_map(|(t, tree)| tree.leaf_paths().into_iter().map(move |p| (t, p)))
            .collect()
    }

    pub fn parse(text: &str, arity: usize, count: usize) -> ForestResult<Forest> {
        let mut p = Parser {
            bytes: text.as_bytes(),
            pos: 0,
            arity,
        };
        let mut trees = Vec::with_capacity(count);
        loop {
            trees.push(p.tree()?);
            p.skip_ws();
            if p.bytes.get(p.pos) == Some(&b',') {
                p.pos += 1;
            } else {
                break;
            }
        }
        p.skip_ws();
        if p.pos != p.bytes.len() {
            return Err(p.err("trailing input"));
        }
        if trees.len() != count {
            return Err(ForestError::TreeCount {
                expected: count,
                found: trees.len(),
            });
        }
        Ok(Forest { arity, trees })
    }
}

impl fmt::Display for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.trees.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", t)?;
        }
        Ok(())
    }
}

/// Domain and range forests with a cyclic leaf correspondence: domain
/// leaf `i` goes to range leaf `(i + offset) mod N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pair {
    pub domain: Forest,
    pub range: Forest,
    pub offset: usize,
}

impl Pair {
    pub fn new(domain: Forest, range: Forest, offset: usize) -> Pair {
        Pair { domain, range, offset }
    }

    pub fn leaf_count(&self) -> usize {
        self.domain.leaf_count()
    }

    pub fn arity(&self) -> usize {
        self.domain.arity()
    }

    pub fn target(&self, i: usize) -> usize {
        (i + self.offset) % self.leaf_count()
    }

    /// Expands domain leaf `i` together with its partner range leaf.
    pub fn expand_domain(&self, i: usize) -> Pair {
        let n = self.leaf_count();
        let j = self.target(i);
        let o = self.offset;
        let offset = if i == 0 || o < j { o } else { o + self.arity() - 1 };
        Pair {
            domain: self.domain.expand_leaf(i).expect("leaf index in range"),
            range: self.range.expand_leaf(j).expect("leaf index in range"),
            offset: offset % (n + self.arity() - 1),
        }
    }

    /// Expands until the domain forest is refined by `target`.
    pub fn expand_domain_to(&self, target: &Forest) -> Pair {
        let mut pair = self.clone();
        loop {
            let todo = pair.domain.leaves_refined_by(target);
            if todo.is_empty() {
                return pair;
            }
            for &i in todo.iter().rev() {
                pair = pair.expand_domain(i);
            }
        }
    }

    pub fn expand_range_to(&self, target: &Forest) -> Pair {
        self.inverse().expand_domain_to(target).inverse()
    }

    pub fn inverse(&self) -> Pair {
        let n = self.leaf_count();
        Pair {
            domain: self.range.clone(),
            range: self.domain.clone(),
            offset: (n - self.offset) % n,
        }
    }

    /// `self ∘ other`, without reducing.
    pub fn compose(&self, other: &Pair) -> Pair {
        let common = other.range.union(&self.domain);
        let g = other.expand_range_to(&common);
        let f = self.expand_domain_to(&common);
        let n = common.leaf_count();
        Pair {
            domain: g.domain,
            range: f.range,
            offset: (g.offset + f.offset) % n,
        }
    }

    /// A domain index `i` at which a corresponding caret pair can be
    /// cancelled, if any.
    pub fn reducible_at(&self) -> Option<usize> {
        let n = self.leaf_count();
        (0..n).find(|&i| self.domain.has_caret_at(i) && self.range.has_caret_at(self.target(i)))
    }

    fn collapse(&self, i: usize) -> Pair {
        let j = self.target(i);
        let o = self.offset;
        let offset = if i == 0 || o < j { o } else { o - (self.arity() - 1) };
        Pair {
            domain: self.domain.collapse_caret(i).expect("caret present"),
            range: self.range.collapse_caret(j).expect("caret present"),
            offset,
        }
    }

    /// Cancels corresponding caret pairs until none remain.
    pub fn reduce(&self) -> Pair {
        let mut pair = self.clone();
        while let Some(i) = pair.reducible_at() {
            pair = pair.collapse(i);
        }
        pair
    }

    pub fn is_reduced(&self) -> bool {
        self.reducible_at().is_none()
    }
}
