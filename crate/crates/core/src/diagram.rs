//! Arc diagrams: four ternary trees over the base subdivision, one per
//! base interval, each internal node standing for a primary arc.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::circle::Angle;
use crate::forest::{Forest, ForestError, Tree};
use crate::lamination::{primary_interval, Arc, Child, StandardInterval};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error(transparent)]
    Forest(#[from] ForestError),
}

pub type DiagramResult<T> = Result<T, DiagramError>;

/// Tag carried by each leaf of a diagram.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LeafContext {
    /// Borders the central gap between the central arcs labelled `d1` and
    /// `d2` (ccw; `d2 = 0` stands for 1).
    CentralAdjacent(Angle, Angle),
    /// Lies behind the given arc.
    BehindArc(Arc),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ArcDiagram {
    forest: Forest,
}

pub(crate) fn child_of(index: usize) -> Child {
    Child::ALL[index]
}

impl ArcDiagram {
    pub fn base() -> ArcDiagram {
        ArcDiagram {
            forest: Forest::trivial(3, 4),
        }
    }

    pub fn from_forest(forest: Forest) -> DiagramResult<ArcDiagram> {
        if forest.arity() != 3 || forest.trees().len() != 4 {
            return Err(ForestError::TreeCount {
                expected: 4,
                found: forest.trees().len(),
            }
            .into());
        }
        Ok(ArcDiagram { forest })
    }

    pub fn from_trees(trees: [Tree; 4]) -> ArcDiagram {
        ArcDiagram {
            forest: Forest::new(3, trees.to_vec()),
        }
    }

    pub fn forest(&self) -> &Forest {
        &self.forest
    }

    pub fn trees(&self) -> &[Tree] {
        self.forest.trees()
    }

    pub fn leaf_count(&self) -> usize {
        self.forest.leaf_count()
    }

    pub fn arc_count(&self) -> usize {
        2 + self.forest.node_count()
    }

    /// The standard interval of every leaf, ccw from 1/6.
    pub fn leaves(&self) -> Vec<StandardInterval> {
        self.forest
            .leaf_paths()
            .into_iter()
            .map(|(t, path)| {
                path.iter()
                    .fold(StandardInterval::base(t), |acc, &c| acc.child(child_of(c)))
            })
            .collect()
    }

    /// Left endpoint of every leaf.
    pub fn boundaries(&self) -> Vec<Angle> {
        self.leaves().iter().map(|l| l.lo().clone()).collect()
    }

    /// Every arc with the pair of boundary indices carrying its endpoints,
    /// base arcs first, then in preorder.
    pub fn arcs_with_boundaries(&self) -> Vec<(Arc, (usize, usize))> {
        let starts = self.forest.tree_starts();
        let mut out = vec![
            (Arc::upper_base(), (starts[1], starts[2])),
            (Arc::lower_base(), (starts[3], 0)),
        ];
        for (t, tree) in self.trees().iter().enumerate() {
            collect_arcs(tree, StandardInterval::base(t), starts[t], &mut out);
        }
        out
    }

    pub fn arcs(&self) -> Vec<Arc> {
        self.arcs_with_boundaries().into_iter().map(|(a, _)| a).collect()
    }

    pub fn arc_set(&self) -> BTreeSet<Arc> {
        self.arcs().into_iter().collect()
    }

    pub fn contains_arc(&self, arc: &Arc) -> bool {
        match primary_interval(arc) {
            None => true,
            Some(interval) => {
                let mut tree = &self.trees()[interval.base_index()];
                for c in interval.path() {
                    match tree {
                        Tree::Leaf => return false,
                        Tree::Node(_) => tree = &tree.children()[c.index()],
                    }
                }
                !tree.is_leaf()
            }
        }
    }

    pub fn leaf_contexts(&self) -> Vec<LeafContext> {
        let half = Angle::frac(1, 2);
        let mut out = Vec::with_capacity(self.leaf_count());
        for (t, tree) in self.trees().iter().enumerate() {
            let ctx = match t {
                0 => LeafContext::CentralAdjacent(Angle::zero(), half.clone()),
                1 => LeafContext::BehindArc(Arc::upper_base()),
                2 => LeafContext::CentralAdjacent(half.clone(), Angle::zero()),
                _ => LeafContext::BehindArc(Arc::lower_base()),
            };
            collect_contexts(tree, StandardInterval::base(t), ctx, &mut out);
        }
        out
    }

    pub fn expand_at(&self, leaf_index: usize) -> DiagramResult<ArcDiagram> {
        Ok(ArcDiagram {
            forest: self.forest.expand_leaf(leaf_index)?,
        })
    }

    /// The smallest diagram containing every given arc.
    pub fn minimal_containing<'a>(arcs: impl IntoIterator<Item = &'a Arc>) -> ArcDiagram {
        let mut paths: [Vec<Vec<usize>>; 4] = Default::default();
        for arc in arcs {
            if let Some(interval) = primary_interval(arc) {
                paths[interval.base_index()].push(interval.path().iter().map(|c| c.index()).collect());
            }
        }
        let trees = paths.map(|ps| Tree::from_node_paths(ps.iter().map(|p| p.as_slice()), 3));
        ArcDiagram::from_trees(trees)
    }

    pub fn common_refinement(&self, other: &ArcDiagram) -> ArcDiagram {
        ArcDiagram {
            forest: self.forest.union(&other.forest),
        }
    }

    /// Index of the leaf containing `t` (half-open on the right).
    pub fn leaf_containing(&self, t: &Angle) -> usize {
        let leaves = self.leaves();
        leaves
            .iter()
            .position(|l| l.lo() == t || l.contains_interior(t))
            .expect("leaves partition the circle")
    }
}

fn collect_arcs(tree: &Tree, interval: StandardInterval, first: usize, out: &mut Vec<(Arc, (usize, usize))>) {
    if let Tree::Node(_) = tree {
        let kids = tree.children();
        let mid = first + kids[0].leaf_count();
        let right = mid + kids[1].leaf_count();
        out.push((interval.primary_arc(), (mid, right)));
        let mut offset = first;
        for (i, kid) in kids.iter().enumerate() {
            collect_arcs(kid, interval.child(child_of(i)), offset, out);
            offset += kid.leaf_count();
        }
    }
}

fn collect_contexts(tree: &Tree, interval: StandardInterval, ctx: LeafContext, out: &mut Vec<LeafContext>) {
    match tree {
        Tree::Leaf => out.push(ctx),
        Tree::Node(_) => {
            let arc = interval.primary_arc();
            let kids = tree.children();
            let contexts = match &ctx {
                LeafContext::CentralAdjacent(d1, d2) => {
                    let mid = d1.ccw_midpoint(d2);
                    [
                        LeafContext::CentralAdjacent(d1.clone(), mid.clone()),
                        LeafContext::BehindArc(arc),
                        LeafContext::CentralAdjacent(mid, d2.clone()),
                    ]
                }
                LeafContext::BehindArc(_) => [ctx.clone(), LeafContext::BehindArc(arc), ctx.clone()],
            };
            for ((i, kid), c) in kids.iter().enumerate().zip(contexts) {
                collect_contexts(kid, interval.child(child_of(i)), c, out);
            }
        }
    }
}

/// `base_diagram`.
pub fn base_diagram() -> ArcDiagram {
    ArcDiagram::base()
}

impl fmt::Display for ArcDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.forest, f)
    }
}

impl FromStr for ArcDiagram {
    type Err = DiagramError;

    fn from_str(s: &str) -> DiagramResult<ArcDiagram> {
        Ok(ArcDiagram {
            forest: Forest::parse(s, 3, 4)?,
        })
    }
}
