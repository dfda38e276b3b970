//! Thompson's group T as binary tree pairs over the halves `[0,1/2]` and
//! `[1/2,1]`, and its relation to the central gap: the isomorphism from
//! rist(C), the boundary action of stab(C), and factorization over the
//! images of β, γ, δ.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::circle::{Angle, PLCircleMap};
use crate::diagram::LeafContext;
use crate::element::{central_only, Element};
use crate::forest::{Forest, ForestError, Pair, Tree};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ThompsonError {
    #[error("element is not supported on the central arcs")]
    NotInRist,
    #[error("element does not fix the central gap")]
    NotInStab,
    #[error("{0} is not a dyadic point")]
    NotDyadic(Angle),
    #[error("cannot parse tree pair {0:?}")]
    Parse(String),
    #[error("domain has {domain} leaves but range has {range}")]
    LeafCountMismatch { domain: usize, range: usize },
    #[error(transparent)]
    Forest(#[from] ForestError),
}

pub type ThompsonResult<T> = Result<T, ThompsonError>;

/// A pair of binary forests with two trees each and a leaf offset.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TreePair {
    pair: Pair,
}

/// A dyadic interval `[lo, lo + 1/2^exp]`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Dyadic {
    lo: Angle,
    exp: u32,
}

fn dyadic_leaves(forest: &Forest) -> Vec<Dyadic> {
    forest
        .leaf_paths()
        .into_iter()
        .map(|(t, path)| {
            let mut d = Dyadic {
                lo: Angle::frac(t as i64, 2),
                exp: 1,
            };
            for c in path {
                d.exp += 1;
                if c == 1 {
                    d.lo = d.lo.add(&Angle::from_grid(3, d.exp));
                }
            }
            d
        })
        .collect()
}

/// Left endpoints of the leaves of a binary forest, in order.
pub(crate) fn cut_points(forest: &Forest) -> Vec<Angle> {
    dyadic_leaves(forest).into_iter().map(|d| d.lo).collect()
}

impl TreePair {
    pub fn new(domain: Forest, range: Forest, offset: i64) -> ThompsonResult<TreePair> {
        let check = |f: &Forest| f.arity() == 2 && f.trees().len() == 2;
        if !check(&domain) || !check(&range) {
            return Err(ThompsonError::Parse("tree pairs need two binary trees per side".into()));
        }
        let n = domain.leaf_count();
        if range.leaf_count() != n {
            return Err(ThompsonError::LeafCountMismatch {
                domain: n,
                range: range.leaf_count(),
            });
        }
        let offset = offset.rem_euclid(n as i64) as usize;
        Ok(TreePair {
            pair: Pair::new(domain, range, offset),
        })
    }

    pub fn identity() -> TreePair {
        TreePair {
            pair: Pair::new(Forest::trivial(2, 2), Forest::trivial(2, 2), 0),
        }
    }

    /// θ ↦ θ + 1/2.
    pub fn half_rotation() -> TreePair {
        TreePair {
            pair: Pair::new(Forest::trivial(2, 2), Forest::trivial(2, 2), 1),
        }
    }

    pub fn domain(&self) -> &Forest {
        &self.pair.domain
    }

    pub fn range(&self) -> &Forest {
        &self.pair.range
    }

    pub fn offset(&self) -> usize {
        self.pair.offset
    }

    pub fn leaf_count(&self) -> usize {
        self.pair.leaf_count()
    }

    /// Number of carets on one side.
    pub fn caret_count(&self) -> usize {
        self.pair.domain.node_count()
    }

    pub fn expand_domain(&self, i: usize) -> TreePair {
        TreePair {
            pair: self.pair.expand_domain(i),
        }
    }

    pub fn reduce(&self) -> TreePair {
        TreePair {
            pair: self.pair.reduce(),
        }
    }

    /// `self ∘ other`, reduced.
    pub fn compose(&self, other: &TreePair) -> TreePair {
        TreePair {
            pair: self.pair.compose(&other.pair).reduce(),
        }
    }

    pub fn inverse(&self) -> TreePair {
        TreePair {
            pair: self.pair.inverse(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.reduce() == TreePair::identity()
    }

    pub fn to_pl(&self) -> PLCircleMap {
        let dom = dyadic_leaves(&self.pair.domain);
        let ran = dyadic_leaves(&self.pair.range);
        let points = (0..dom.len())
            .map(|i| (dom[i].lo.clone(), ran[self.pair.target(i)].lo.clone()))
            .collect();
        PLCircleMap::new(points).expect("tree pairs are orientation preserving")
    }

    pub fn evaluate(&self, t: &Angle) -> Angle {
        let dom = dyadic_leaves(&self.pair.domain);
        let ran = dyadic_leaves(&self.pair.range);
        let i = dom.iter().rposition(|d| &d.lo <= t).unwrap_or(dom.len() - 1);
        let (d, r) = (&dom[i], &ran[self.pair.target(i)]);
        r.lo.add(&d.lo.ccw_to(t).mul_pow2(d.exp as i64 - r.exp as i64))
    }
}

pub fn tp_reduce(t: &TreePair) -> TreePair {
    t.reduce()
}

pub fn tp_compose(s: &TreePair, t: &TreePair) -> TreePair {
    s.compose(t)
}

pub fn tp_inverse(t: &TreePair) -> TreePair {
    t.inverse()
}

pub fn tp_to_pl(t: &TreePair) -> PLCircleMap {
    t.to_pl()
}

impl fmt::Display for TreePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} ; {} ; {}]", self.pair.domain, self.pair.range, self.pair.offset)
    }
}

impl FromStr for TreePair {
    type Err = ThompsonError;

    fn from_str(s: &str) -> ThompsonResult<TreePair> {
        let err = || ThompsonError::Parse(s.to_string());
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(err)?;
        let parts: Vec<&str> = inner.split(';').collect();
        if parts.len() != 3 {
            return Err(err());
        }
        let domain = Forest::parse(parts[0], 2, 2)?;
        let range = Forest::parse(parts[1], 2, 2)?;
        let offset = BigInt::from_str(parts[2].trim()).map_err(|_| err())?;
        let n = BigInt::from(domain.leaf_count());
        let offset = offset.mod_floor(&n).to_i64().expect("offset below leaf count");
        TreePair::new(domain, range, offset)
    }
}

/// Ternary tree with leaf middle children to binary tree.
fn ternary_to_binary(t: &Tree, keep_middle: bool) -> Option<Tree> {
    match t {
        Tree::Leaf => Some(Tree::Leaf),
        Tree::Node(_) => {
            let c = t.children();
            if keep_middle && !c[1].is_leaf() {
                return None;
            }
            Some(Tree::node(vec![
                ternary_to_binary(&c[0], keep_middle)?,
                ternary_to_binary(&c[2], keep_middle)?,
            ]))
        }
    }
}

fn binary_to_ternary(t: &Tree) -> Tree {
    match t {
        Tree::Leaf => Tree::Leaf,
        Tree::Node(_) => {
            let c = t.children();
            Tree::node(vec![binary_to_ternary(&c[0]), Tree::Leaf, binary_to_ternary(&c[1])])
        }
    }
}

/// Indices of the leaves bordering the central gap.
fn central_adjacent_indices(forest: &Forest) -> Vec<usize> {
    let diagram = crate::diagram::ArcDiagram::from_forest(forest.clone()).expect("forest is a diagram");
    diagram
        .leaf_contexts()
        .iter()
        .enumerate()
        .filter(|(_, c)| matches!(c, LeafContext::CentralAdjacent(..)))
        .map(|(i, _)| i)
        .collect()
}

/// Reads the central arcs of `f` (reduced, central arcs only) as a tree
/// pair through their dyadic labels.
fn read_central(f: &Element, keep_middle: bool) -> Option<TreePair> {
    let p = f.pair();
    let side = |forest: &Forest| -> Option<Forest> {
        let t = forest.trees();
        Some(Forest::new(
            2,
            vec![
                ternary_to_binary(&t[0], keep_middle)?,
                ternary_to_binary(&t[2], keep_middle)?,
            ],
        ))
    };
    let domain = side(&p.domain)?;
    let range = side(&p.range)?;
    let rank = central_adjacent_indices(&p.range).iter().position(|&i| i == p.offset)?;
    Some(TreePair {
        pair: Pair::new(domain, range, rank),
    })
}

/// The isomorphism from rist(C) to T.
pub fn tau(f: &Element) -> ThompsonResult<TreePair> {
    let r = f.reduce();
    if !(central_only(&r.pair().domain) && central_only(&r.pair().range)) {
        return Err(ThompsonError::NotInRist);
    }
    Ok(read_central(&r, true).ok_or(ThompsonError::NotInRist)?.reduce())
}

/// The element of rist(C) with the given tree pair.
pub fn tau_inv(t: &TreePair) -> Element {
    let side = |forest: &Forest| {
        let b = forest.trees();
        crate::diagram::ArcDiagram::from_trees([
            binary_to_ternary(&b[0]),
            Tree::Leaf,
            binary_to_ternary(&b[1]),
            Tree::Leaf,
        ])
    };
    let domain = side(&t.pair.domain);
    let range = side(&t.pair.range);
    let offset = central_adjacent_indices(range.forest())[t.pair.offset];
    Element::make(domain, range, offset as i64).expect("central diagrams built from a tree pair are isomorphic")
}

/// How an element of stab(C) acts on the boundary of the central gap.
pub fn boundary_action(f: &Element) -> ThompsonResult<TreePair> {
    if !f.is_in_stab_c() {
        return Err(ThompsonError::NotInStab);
    }
    let r = f.reduce();
    Ok(read_central(&r, false).ok_or(ThompsonError::NotInStab)?.reduce())
}

/// Path of binary choices locating the dyadic point `p` as a cut.
fn cut_forest(p: &Angle) -> ThompsonResult<Forest> {
    if !p.is_dyadic() {
        return Err(ThompsonError::NotDyadic(p.clone()));
    }
    let half = Angle::frac(1, 2);
    let mut trees = vec![Tree::Leaf, Tree::Leaf];
    if p.is_zero() || p == &half {
        return Ok(Forest::new(2, trees));
    }
    let t = if p < &half { 0 } else { 1 };
    let mut lo = Angle::frac(t as i64, 2);
    let mut exp = 1;
    let mut path = Vec::new();
    loop {
        let mid = lo.add(&Angle::from_grid(3, exp + 1));
        if &mid == p {
            break;
        }
        if p < &mid {
            path.push(0);
        } else {
            path.push(1);
            lo = mid;
        }
        exp += 1;
    }
    trees[t] = Tree::from_node_paths([path.as_slice()], 2);
    Ok(Forest::new(2, trees))
}

/// A tree pair sending the dyadic point `p` to `q`.
pub fn t_transporter(p: &Angle, q: &Angle) -> ThompsonResult<TreePair> {
    let mut dp = cut_forest(p)?;
    let mut dq = cut_forest(q)?;
    while dp.leaf_count() < dq.leaf_count() {
        dp = dp.expand_leaf(dp.leaf_count() - 1)?;
    }
    while dq.leaf_count() < dp.leaf_count() {
        dq = dq.expand_leaf(dq.leaf_count() - 1)?;
    }
    let pos = |forest: &Forest, x: &Angle| {
        dyadic_leaves(forest)
            .iter()
            .position(|d| &d.lo == x)
            .expect("cut present")
    };
    let (i, j) = (pos(&dp, p), pos(&dq, q));
    Ok(TreePair::new(dp, dq, j as i64 - i as i64)
        .expect("equal leaf counts")
        .reduce())
}

/// Generators of T used for factoring: the images of β, γ, δ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TGen {
    B,
    G,
    D,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TLetter {
    pub gen: TGen,
    pub inverse: bool,
}

impl TLetter {
    fn new(gen: TGen, inverse: bool) -> TLetter {
        TLetter { gen, inverse }
    }

    pub fn inverted(self) -> TLetter {
        match self.gen {
            // the half rotation is an involution
            TGen::D => self,
            _ => TLetter::new(self.gen, !self.inverse),
        }
    }

    pub fn tree_pair(self) -> TreePair {
        let text = match self.gen {
            TGen::B => "[.,(.,.) ; (.,.),. ; 0]",
            TGen::G => "[(.,(.,.)),. ; ((.,.),.),. ; 0]",
            TGen::D => "[.,. ; .,. ; 1]",
        };
        let t: TreePair = text.parse().expect("generator tree pairs parse");
        if self.inverse {
            t.inverse()
        } else {
            t
        }
    }
}

impl fmt::Display for TLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.gen {
            TGen::B => 'B',
            TGen::G => 'G',
            TGen::D => 'D',
        };
        write!(f, "{}{}", c, if self.inverse { "'" } else { "" })
    }
}

/// Range state `(T0, T1)` with the offset, acted on by post-composition.
struct RangeState {
    t0: Tree,
    t1: Tree,
    offset: usize,
    n: usize,
}

impl RangeState {
    fn apply(&mut self, letter: TLetter, moves: &mut Vec<TLetter>) {
        let (t0, t1) = (self.t0.clone(), self.t1.clone());
        match (letter.gen, letter.inverse) {
            (TGen::B, false) => {
                let c = t1.children();
                self.t0 = Tree::node(vec![t0, c[0].clone()]);
                self.t1 = c[1].clone();
            }
            (TGen::B, true) => {
                let c = t0.children();
                self.t0 = c[0].clone();
                self.t1 = Tree::node(vec![c[1].clone(), t1]);
            }
            (TGen::G, false) => {
                let c = t0.children();
                let r = c[1].children();
                self.t0 = Tree::node(vec![Tree::node(vec![c[0].clone(), r[0].clone()]), r[1].clone()]);
            }
            (TGen::G, true) => {
                let c = t0.children();
                let l = c[0].children();
                self.t0 = Tree::node(vec![l[0].clone(), Tree::node(vec![l[1].clone(), c[1].clone()])]);
            }
            (TGen::D, _) => {
                let shift = t0.leaf_count();
                self.offset = (self.offset + self.n - shift % self.n) % self.n;
                self.t0 = t1;
                self.t1 = t0;
            }
        }
        moves.push(letter);
    }

    /// Brings the range to `(., right vine)` without moving leaves.
    fn normalize(&mut self, moves: &mut Vec<TLetter>) {
        while !self.t1.is_leaf() {
            self.apply(TLetter::new(TGen::B, false), moves);
        }
        while !self.t0.is_leaf() {
            if self.t0.children()[1].is_leaf() {
                self.apply(TLetter::new(TGen::B, true), moves);
            } else {
                self.apply(TLetter::new(TGen::G, false), moves);
            }
        }
    }
}

fn normalizing_moves(forest: &Forest, offset: usize) -> (Vec<TLetter>, RangeState) {
    let trees = forest.trees();
    let mut state = RangeState {
        t0: trees[0].clone(),
        t1: trees[1].clone(),
        offset,
        n: forest.leaf_count(),
    };
    let mut moves = Vec::new();
    state.normalize(&mut moves);
    (moves, state)
}

/// A word over the images of β, γ, δ (leftmost applied last) whose
/// product is `t`.
pub fn factor_t(t: &TreePair) -> Vec<TLetter> {
    let t = t.reduce();
    let (u, mut state) = normalizing_moves(&t.pair.range, t.pair.offset);
    let (v, _) = normalizing_moves(&t.pair.domain, 0);
    // u ∘ t ∘ v⁻¹ is a rotation of the leaves of (., right vine)
    let mut r = Vec::new();
    if state.offset != 0 {
        for _ in 1..state.offset {
            state.apply(TLetter::new(TGen::B, false), &mut r);
        }
        state.apply(TLetter::new(TGen::D, false), &mut r);
        state.normalize(&mut r);
    }
    debug_assert_eq!(state.offset, 0);
    // t = u⁻¹ ∘ r⁻¹ ∘ v; a move list m1..mp is the word "mp … m1"
    let mut word: Vec<TLetter> = u.iter().map(|m| m.inverted()).collect();
    word.extend(r.iter().map(|m| m.inverted()));
    word.extend(v.iter().rev().copied());
    free_reduce_t(word)
}

fn free_reduce_t(word: Vec<TLetter>) -> Vec<TLetter> {
    let mut out: Vec<TLetter> = Vec::with_capacity(word.len());
    for l in word {
        match out.last() {
            Some(&p) if p.gen == l.gen && (p.inverse != l.inverse || l.gen == TGen::D) => {
                out.pop();
            }
            _ => out.push(l),
        }
    }
    out
}

/// Product of a T word, leftmost letter applied last.
pub fn eval_t_word(word: &[TLetter]) -> TreePair {
    word.iter()
        .fold(TreePair::identity(), |acc, l| acc.compose(&l.tree_pair()))
}

pub fn format_t_word(word: &[TLetter]) -> String {
    word.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ")
}
