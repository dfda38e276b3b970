//! Leaves of the Basilica lamination, standard intervals, central arcs
//! with their dyadic labels, and gaps.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use thiserror::Error;

use crate::circle::{cyclic_between, Angle, CircleError, CyclicInterval};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaminationError {
    #[error("{{{a}, {b}}} is not an arc (descent step {step})")]
    NotAnArc { a: Angle, b: Angle, step: usize },
    #[error("arc {0} is not central")]
    NotCentral(Arc),
    #[error("label {0} is not dyadic")]
    NotDyadic(Angle),
    #[error("cannot parse {0:?}")]
    Parse(String),
    #[error(transparent)]
    Circle(#[from] CircleError),
}

pub type LaminationResult<T> = Result<T, LaminationError>;

/// Position of a child in a 1:2:1 subdivision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Child {
    Left,
    Middle,
    Right,
}

impl Child {
    pub const ALL: [Child; 3] = [Child::Left, Child::Middle, Child::Right];

    pub fn index(self) -> usize {
        match self {
            Child::Left => 0,
            Child::Middle => 1,
            Child::Right => 2,
        }
    }
}

/// An interval reachable from the four base intervals by 1:2:1
/// subdivision. Its length is `1 / (3 * 2^exp)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StandardInterval {
    lo: Angle,
    exp: u32,
    base: usize,
    path: Vec<Child>,
}

const BASE_LO: [(i64, i64); 4] = [(1, 6), (1, 3), (2, 3), (5, 6)];
const BASE_EXP: [u32; 4] = [1, 0, 1, 0];

/// The four base intervals `[1/6,1/3], [1/3,2/3], [2/3,5/6], [5/6,7/6]`.
pub fn base_intervals() -> [StandardInterval; 4] {
    std::array::from_fn(|i| StandardInterval {
        lo: Angle::frac(BASE_LO[i].0, BASE_LO[i].1),
        exp: BASE_EXP[i],
        base: i,
        path: Vec::new(),
    })
}

impl StandardInterval {
    pub fn base(index: usize) -> StandardInterval {
        base_intervals()[index].clone()
    }

    pub fn lo(&self) -> &Angle {
        &self.lo
    }

    pub fn hi(&self) -> Angle {
        self.lo.add(&self.length())
    }

    pub fn length(&self) -> Angle {
        Angle::from_grid(1, self.exp)
    }

    /// `n` such that the length is `1 / (3 * 2^n)`.
    pub fn exp(&self) -> u32 {
        self.exp
    }

    pub fn base_index(&self) -> usize {
        self.base
    }

    pub fn path(&self) -> &[Child] {
        &self.path
    }

    pub fn interval(&self) -> CyclicInterval {
        CyclicInterval::new(self.lo.clone(), self.hi())
    }

    fn quarter(&self) -> Angle {
        Angle::from_grid(1, self.exp + 2)
    }

    pub fn child(&self, which: Child) -> StandardInterval {
        let q = self.quarter();
        let (lo, exp) = match which {
            Child::Left => (self.lo.clone(), self.exp + 2),
            Child::Middle => (self.lo.add(&q), self.exp + 1),
            Child::Right => (self.hi().sub(&q), self.exp + 2),
        };
        let mut path = self.path.clone();
        path.push(which);
        StandardInterval {
            lo,
            exp,
            base: self.base,
            path,
        }
    }

    /// The left quarter, middle half and right quarter.
    pub fn subdivide(&self) -> [StandardInterval; 3] {
        Child::ALL.map(|c| self.child(c))
    }

    /// The arc joining `lo + |I|/4` and `hi - |I|/4`.
    pub fn primary_arc(&self) -> Arc {
        let n = self.exp + 2;
        let mid = self.lo.add(&Angle::from_grid(1, self.exp + 1));
        // mid = k / 2^n = 3k / (3 * 2^n)
        let k = mid.grid_numer(n) / 3u32;
        Arc::from_index(n, k)
    }

    pub fn contains_interior(&self, t: &Angle) -> bool {
        cyclic_between(&self.lo, t, &self.hi())
    }

    /// Replays the stored path from the base interval.
    pub fn replay(&self) -> StandardInterval {
        self.path
            .iter()
            .fold(StandardInterval::base(self.base), |acc, &c| acc.child(c))
    }

    /// Locates the standard interval with the given endpoints, if any.
    pub fn from_endpoints(lo: &Angle, hi: &Angle) -> Option<StandardInterval> {
        let target = lo.ccw_to(hi);
        if target.is_zero() {
            return None;
        }
        let mut current = base_intervals()
            .into_iter()
            .find(|b| &b.lo == lo || b.contains_interior(lo))?;
        loop {
            let len = current.length();
            if len < target {
                return None;
            }
            if &current.lo == lo && len == target {
                return Some(current);
            }
            if len == target {
                return None;
            }
            let next = current
                .subdivide()
                .into_iter()
                .find(|c| &c.lo == lo || c.contains_interior(lo))?;
            current = next;
        }
    }
}

impl fmt::Display for StandardInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi())
    }
}

/// A leaf of the lamination, indexed by `(n, k)`: its far side is the ccw
/// interval from `(3k-1)/(3*2^n)` to `(3k+1)/(3*2^n)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Arc {
    n: u32,
    k: BigUint,
    lo: Angle,
    hi: Angle,
}

impl Arc {
    pub fn from_index(n: u32, k: impl Into<BigUint>) -> Arc {
        assert!(n >= 1, "arc level starts at 1");
        let modulus = BigUint::from(1u32) << n;
        let k = k.into() % modulus;
        let three_k = BigInt::from(k.clone()) * 3;
        let lo = Angle::from_grid(&three_k - 1, n);
        let hi = Angle::from_grid(&three_k + 1, n);
        Arc { n, k, lo, hi }
    }

    /// `{1/3, 2/3}`.
    pub fn upper_base() -> Arc {
        Arc::from_index(1, 1u32)
    }

    /// `{1/6, 5/6}`.
    pub fn lower_base() -> Arc {
        Arc::from_index(1, 0u32)
    }

    pub fn level(&self) -> u32 {
        self.n
    }

    pub fn index(&self) -> &BigUint {
        &self.k
    }

    /// Endpoints in ascending order of their representatives.
    pub fn endpoints(&self) -> (Angle, Angle) {
        if self.lo < self.hi {
            (self.lo.clone(), self.hi.clone())
        } else {
            (self.hi.clone(), self.lo.clone())
        }
    }

    pub fn farside(&self) -> CyclicInterval {
        CyclicInterval::new(self.lo.clone(), self.hi.clone())
    }

    pub fn has_endpoint(&self, t: &Angle) -> bool {
        &self.lo == t || &self.hi == t
    }

    /// Compact form without spaces, e.g. `{1/3,2/3}`.
    pub fn compact(&self) -> String {
        let (a, b) = self.endpoints();
        format!("{{{},{}}}", a, b)
    }
}

impl Ord for Arc {
    fn cmp(&self, other: &Arc) -> Ordering {
        self.n.cmp(&other.n).then_with(|| self.k.cmp(&other.k))
    }
}

impl PartialOrd for Arc {
    fn partial_cmp(&self, other: &Arc) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.endpoints();
        write!(f, "{{{}, {}}}", a, b)
    }
}

impl fmt::Debug for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Arc {
    type Err = LaminationError;

    fn from_str(s: &str) -> LaminationResult<Arc> {
        let t = s.trim();
        let inner = t
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| LaminationError::Parse(s.to_string()))?;
        let (a, b) = inner
            .split_once(',')
            .ok_or_else(|| LaminationError::Parse(s.to_string()))?;
        arc_check(&a.parse()?, &b.parse()?)
    }
}

/// Result of the arc_check descent.
struct Descent {
    arc: Arc,
    ancestors: Vec<Arc>,
    interval: Option<StandardInterval>,
}

fn same_pair(a: &Angle, b: &Angle, x: &Angle, y: &Angle) -> bool {
    (a == x && b == y) || (a == y && b == x)
}

fn descend(a: &Angle, b: &Angle) -> LaminationResult<Descent> {
    let reject = |step| LaminationError::NotAnArc {
        a: a.clone(),
        b: b.clone(),
        step,
    };
    for base in [Arc::upper_base(), Arc::lower_base()] {
        if same_pair(a, b, &base.lo, &base.hi) {
            return Ok(Descent {
                arc: base,
                ancestors: Vec::new(),
                interval: None,
            });
        }
    }
    let mut current = base_intervals()
        .into_iter()
        .find(|i| i.contains_interior(a) && i.contains_interior(b))
        .ok_or_else(|| reject(0))?;
    let mut ancestors = match current.base {
        1 => vec![Arc::upper_base()],
        3 => vec![Arc::lower_base()],
        _ => Vec::new(),
    };
    let mut step = 1;
    loop {
        let primary = current.primary_arc();
        if same_pair(a, b, &primary.lo, &primary.hi) {
            return Ok(Descent {
                arc: primary,
                ancestors,
                interval: Some(current),
            });
        }
        let child = Child::ALL
            .into_iter()
            .find(|&c| {
                let ch = current.child(c);
                ch.contains_interior(a) && ch.contains_interior(b)
            })
            .ok_or_else(|| reject(step))?;
        if child == Child::Middle {
            ancestors.push(primary);
        }
        current = current.child(child);
        step += 1;
    }
}

/// Validates `{a, b}` as a leaf of the lamination.
pub fn arc_check(a: &Angle, b: &Angle) -> LaminationResult<Arc> {
    descend(a, b).map(|d| d.arc)
}

/// The arc with both endpoints doubled.
pub fn double_arc(arc: &Arc) -> Arc {
    arc_check(&arc.lo.double(), &arc.hi.double()).expect("the lamination is invariant under doubling")
}

pub fn farside(arc: &Arc) -> CyclicInterval {
    arc.farside()
}

/// Arcs separating `arc` from the central gap, outermost first.
pub fn ancestors(arc: &Arc) -> Vec<Arc> {
    descend(&arc.lo, &arc.hi)
        .expect("arc values are always valid")
        .ancestors
}

/// The standard interval whose primary arc is `arc`; `None` for the two
/// base arcs.
pub fn primary_interval(arc: &Arc) -> Option<StandardInterval> {
    descend(&arc.lo, &arc.hi).expect("arc values are always valid").interval
}

pub fn is_central(arc: &Arc) -> bool {
    ancestors(arc).is_empty()
}

/// Dyadic label of a central arc: `{1/6,5/6}` is 0, `{1/3,2/3}` is 1/2 and
/// each further central arc takes the midpoint of its neighbours' labels.
pub fn central_label(arc: &Arc) -> LaminationResult<Angle> {
    if arc == &Arc::lower_base() {
        return Ok(Angle::zero());
    }
    if arc == &Arc::upper_base() {
        return Ok(Angle::frac(1, 2));
    }
    let (a, b) = (&arc.lo, &arc.hi);
    let not_central = || LaminationError::NotCentral(arc.clone());
    let (mut current, mut d1, mut d2) = if StandardInterval::base(0).contains_interior(a) {
        (StandardInterval::base(0), Angle::zero(), Angle::frac(1, 2))
    } else if StandardInterval::base(2).contains_interior(a) {
        (StandardInterval::base(2), Angle::frac(1, 2), Angle::zero())
    } else {
        return Err(not_central());
    };
    loop {
        let mid = d1.ccw_midpoint(&d2);
        let primary = current.primary_arc();
        if &primary == arc {
            return Ok(mid);
        }
        let left = current.child(Child::Left);
        let right = current.child(Child::Right);
        if left.contains_interior(a) && left.contains_interior(b) {
            current = left;
            d2 = mid;
        } else if right.contains_interior(a) && right.contains_interior(b) {
            current = right;
            d1 = mid;
        } else {
            return Err(not_central());
        }
    }
}

/// Inverse of [`central_label`].
pub fn arc_for_label(d: &Angle) -> LaminationResult<Arc> {
    if !d.is_dyadic() {
        return Err(LaminationError::NotDyadic(d.clone()));
    }
    let half = Angle::frac(1, 2);
    if d.is_zero() {
        return Ok(Arc::lower_base());
    }
    if d == &half {
        return Ok(Arc::upper_base());
    }
    let (mut current, mut d1, mut d2) = if d < &half {
        (StandardInterval::base(0), Angle::zero(), half)
    } else {
        (StandardInterval::base(2), half, Angle::zero())
    };
    loop {
        let mid = d1.ccw_midpoint(&d2);
        if &mid == d {
            return Ok(current.primary_arc());
        }
        if cyclic_between(&d1, d, &mid) {
            current = current.child(Child::Left);
            d2 = mid;
        } else {
            current = current.child(Child::Right);
            d1 = mid;
        }
    }
}

/// All arcs of level at most `max_level`, by recursive generation from the
/// base subdivision, sorted by `(n, k)`.
pub fn arcs_to_level(max_level: u32) -> Vec<Arc> {
    let mut out = vec![Arc::lower_base(), Arc::upper_base()];
    let mut stack: Vec<StandardInterval> = base_intervals().to_vec();
    while let Some(interval) = stack.pop() {
        if interval.exp + 2 > max_level {
            continue;
        }
        out.push(interval.primary_arc());
        stack.extend(interval.subdivide());
    }
    out.sort();
    out
}

/// Which side of an arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Farside,
    Centerside,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Farside => Side::Centerside,
            Side::Centerside => Side::Farside,
        }
    }
}

/// A gap of the lamination: the central gap, or the gap just behind an
/// arc (on its far side).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GapId {
    Central,
    Behind(Arc),
}

pub fn gap_depth(gap: &GapId) -> usize {
    match gap {
        GapId::Central => 0,
        GapId::Behind(arc) => 1 + ancestors(arc).len(),
    }
}

pub fn gap_color(gap: &GapId) -> u8 {
    (gap_depth(gap) % 2) as u8
}

pub fn neighbor_gap(arc: &Arc, side: Side) -> GapId {
    match side {
        Side::Farside => GapId::Behind(arc.clone()),
        Side::Centerside => match ancestors(arc).pop() {
            None => GapId::Central,
            Some(parent) => GapId::Behind(parent),
        },
    }
}

impl fmt::Display for GapId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GapId::Central => write!(f, "central"),
            GapId::Behind(arc) => write!(f, "behind {}", arc),
        }
    }
}

impl FromStr for GapId {
    type Err = LaminationError;

    fn from_str(s: &str) -> LaminationResult<GapId> {
        let t = s.trim();
        if t == "central" {
            return Ok(GapId::Central);
        }
        match t.strip_prefix("behind") {
            Some(rest) => Ok(GapId::Behind(rest.parse()?)),
            None => Err(LaminationError::Parse(s.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(s: &str) -> Angle {
        s.parse().unwrap()
    }

    fn arc(s: &str) -> Arc {
        s.parse().unwrap()
    }

    #[test]
    fn base_intervals_and_lengths() {
        let b = base_intervals();
        let shown: Vec<String> = b.iter().map(|i| i.to_string()).collect();
        assert_eq!(shown, ["[1/6,1/3]", "[1/3,2/3]", "[2/3,5/6]", "[5/6,1/6]"]);
        let lens: Vec<Angle> = b.iter().map(|i| i.length()).collect();
        assert_eq!(lens, [a("1/6"), a("1/3"), a("1/6"), a("1/3")]);
    }

    #[test]
    fn primary_arcs_and_subdivision() {
        assert_eq!(StandardInterval::base(1).primary_arc(), arc("{5/12, 7/12}"));
        assert_eq!(StandardInterval::base(3).primary_arc().to_string(), "{1/12, 11/12}");
        assert_eq!(StandardInterval::base(0).primary_arc(), arc("{5/24,7/24}"));
        let kids: Vec<String> = StandardInterval::base(1)
            .subdivide()
            .iter()
            .map(|i| i.to_string())
            .collect();
        assert_eq!(kids, ["[1/3,5/12]", "[5/12,7/12]", "[7/12,2/3]"]);
        let kids: Vec<String> = StandardInterval::base(0)
            .subdivide()
            .iter()
            .map(|i| i.to_string())
            .collect();
        assert_eq!(kids, ["[1/6,5/24]", "[5/24,7/24]", "[7/24,1/3]"]);
    }

    #[test]
    fn arc_check_examples() {
        let up = arc_check(&a("1/3"), &a("2/3")).unwrap();
        assert_eq!((up.level(), up.index().clone()), (1, BigUint::from(1u32)));
        assert!(arc_check(&a("2/3"), &a("0")).is_err());
        assert!(arc_check(&a("1/6"), &a("1/3")).is_err());
        assert!(arc_check(&a("1/12"), &a("5/12")).is_err());
    }

    #[test]
    fn doubling() {
        assert_eq!(double_arc(&arc("{1/6,5/6}")), Arc::upper_base());
        assert_eq!(double_arc(&arc("{5/24,7/24}")), arc("{5/12,7/12}"));
        assert_eq!(double_arc(&Arc::upper_base()), Arc::upper_base());
    }

    #[test]
    fn farsides() {
        assert_eq!(Arc::upper_base().farside().to_string(), "[1/3,2/3]");
        assert_eq!(Arc::lower_base().farside().to_string(), "[5/6,1/6]");
        assert_eq!(arc("{5/12,7/12}").farside().to_string(), "[5/12,7/12]");
    }

    #[test]
    fn ancestor_examples() {
        assert!(ancestors(&Arc::upper_base()).is_empty());
        assert_eq!(ancestors(&arc("{5/12,7/12}")), vec![Arc::upper_base()]);
        assert_eq!(ancestors(&arc("{11/12,1/12}")), vec![Arc::lower_base()]);
        let deep = arc("{17/96,19/96}");
        assert!(ancestors(&deep).is_empty());
        let nested = StandardInterval::base(1).child(Child::Middle).primary_arc();
        assert_eq!(ancestors(&nested), vec![Arc::upper_base(), arc("{5/12,7/12}")]);
    }

    #[test]
    fn labels() {
        assert_eq!(central_label(&Arc::upper_base()).unwrap(), a("1/2"));
        assert_eq!(central_label(&Arc::lower_base()).unwrap(), a("0"));
        assert_eq!(central_label(&arc("{5/24,7/24}")).unwrap(), a("1/4"));
        assert_eq!(central_label(&arc("{17/24,19/24}")).unwrap(), a("3/4"));
        assert!(matches!(
            central_label(&arc("{5/12,7/12}")),
            Err(LaminationError::NotCentral(_))
        ));
        for d in ["0", "1/2", "1/4", "3/4", "1/8", "5/8", "13/16"] {
            let x = arc_for_label(&a(d)).unwrap();
            assert_eq!(central_label(&x).unwrap(), a(d));
        }
        assert!(arc_for_label(&a("1/3")).is_err());
    }

    #[test]
    fn gaps() {
        assert_eq!(gap_depth(&GapId::Central), 0);
        assert_eq!(gap_depth(&GapId::Behind(Arc::upper_base())), 1);
        assert_eq!(gap_depth(&GapId::Behind(arc("{5/12,7/12}"))), 2);
        assert_eq!(
            neighbor_gap(&arc("{5/12,7/12}"), Side::Centerside),
            GapId::Behind(Arc::upper_base())
        );
        assert_eq!(neighbor_gap(&Arc::upper_base(), Side::Centerside), GapId::Central);
        let g: GapId = "behind {1/3, 2/3}".parse().unwrap();
        assert_eq!(g.to_string(), "behind {1/3, 2/3}");
        assert_eq!("central".parse::<GapId>().unwrap(), GapId::Central);
    }

    #[test]
    fn standard_interval_lookup() {
        let i = StandardInterval::from_endpoints(&a("5/24"), &a("7/24")).unwrap();
        assert_eq!(i.replay(), i);
        assert_eq!(i.path(), &[Child::Middle]);
        assert!(StandardInterval::from_endpoints(&a("1/6"), &a("1/4")).is_none());
        assert!(StandardInterval::from_endpoints(&a("1/3"), &a("2/3")).is_some());
        assert!(StandardInterval::from_endpoints(&a("5/6"), &a("1/6")).is_some());
    }

    #[test]
    fn generated_arc_count() {
        // 2 base arcs plus 2^(n-1) arcs at each level n >= 2
        assert_eq!(arcs_to_level(1).len(), 2);
        assert_eq!(arcs_to_level(4).len(), 2 + 2 + 4 + 8);
    }
}
