//! Deciding whether a piecewise-linear circle map is a dyadic
//! rearrangement of the Basilica, and recovering its arc pair diagram.

use std::collections::VecDeque;

use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use crate::circle::{power_of_two_exponent, ratio_to_string, Angle, CyclicInterval, PLCircleMap, Segment};
use crate::diagram::ArcDiagram;
use crate::element::{Element, ElementError};
use crate::forest::{Forest, Tree};
use crate::lamination::{arc_check, arcs_to_level, base_intervals, Arc, StandardInterval};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MembershipError {
    #[error("segment starting at {x} has slope {}, not a power of two", ratio_to_string(.slope))]
    SlopeNotPowerOfTwo { x: Angle, slope: BigRational },
    #[error("breakpoint coordinate {0} is not an endpoint of an arc")]
    BreakpointNotArcEndpoint(Angle),
    #[error("the image of arc {0} is not an arc")]
    ArcNotPreserved(Arc),
    #[error("leaf {0} does not map onto a standard interval")]
    ImageNotStandard(StandardInterval),
}

pub type MembershipResult<T> = Result<T, MembershipError>;

impl MembershipError {
    /// Machine-readable reason code.
    pub fn code(&self) -> &'static str {
        match self {
            MembershipError::SlopeNotPowerOfTwo { .. } => "SlopeNotPowerOfTwo",
            MembershipError::BreakpointNotArcEndpoint(_) => "BreakpointNotArcEndpoint",
            MembershipError::ArcNotPreserved(_) => "ArcNotPreserved",
            MembershipError::ImageNotStandard(_) => "ImageNotStandard",
        }
    }

    /// The offending value, without spaces.
    pub fn witness(&self) -> String {
        match self {
            MembershipError::SlopeNotPowerOfTwo { slope, .. } => ratio_to_string(slope),
            MembershipError::BreakpointNotArcEndpoint(x) => x.to_string(),
            MembershipError::ArcNotPreserved(a) => a.compact(),
            MembershipError::ImageNotStandard(leaf) => leaf.to_string(),
        }
    }
}

fn dyadic_exponent(r: &BigRational) -> Option<u32> {
    let d = r.denom().magnitude();
    (d.count_ones() == 1).then(|| d.trailing_zeros().unwrap_or(0) as u32)
}

fn image_is_arc(f: &PLCircleMap, arc: &Arc) -> bool {
    let (a, b) = arc.endpoints();
    match (f.eval(&a), f.eval(&b)) {
        (Ok(x), Ok(y)) => x != y && arc_check(&x, &y).is_ok(),
        _ => false,
    }
}

/// First arc (base arcs, then by level) whose image is not an arc.
fn arc_witness(f: &PLCircleMap, extra: &[Arc], max_level: u32) -> Option<Arc> {
    extra
        .iter()
        .find(|a| !image_is_arc(f, a))
        .cloned()
        .or_else(|| arcs_to_level(max_level).into_iter().find(|a| !image_is_arc(f, a)))
}

/// Primary arcs of standard intervals inside one affine piece, shallowest
/// first, down to exponent `max_exp`.
fn segment_witness(f: &PLCircleMap, seg: &Segment, max_exp: u32) -> Option<Arc> {
    let full = seg.dx >= BigRational::one();
    let end = Angle::from_ratio(&(seg.x.to_ratio() + &seg.dx)).ok()?;
    let span = CyclicInterval::new(seg.x.clone(), end);
    let mut queue: VecDeque<StandardInterval> = base_intervals().into_iter().collect();
    while let Some(interval) = queue.pop_front() {
        if interval.exp() > max_exp {
            continue;
        }
        let iv = interval.interval();
        let overlaps = full || iv.lo == span.lo || span.contains_interior(&iv.lo) || iv.contains_interior(&span.lo);
        if !overlaps {
            continue;
        }
        if full || span.contains_interval(&iv) {
            let arc = interval.primary_arc();
            if !image_is_arc(f, &arc) {
                return Some(arc);
            }
        }
        queue.extend(interval.subdivide());
    }
    None
}

struct Recognizer<'a> {
    f: &'a PLCircleMap,
    breakpoints: Vec<Angle>,
    bound: u32,
}

impl Recognizer<'_> {
    fn build(&self, interval: StandardInterval, images: &mut Vec<StandardInterval>) -> MembershipResult<Tree> {
        let split = self.breakpoints.iter().any(|x| interval.contains_interior(x));
        if !split {
            let lo = self.f.eval(interval.lo());
            let hi = self.f.eval(&interval.hi());
            if let (Ok(lo), Ok(hi)) = (lo, hi) {
                if let Some(image) = StandardInterval::from_endpoints(&lo, &hi) {
                    images.push(image);
                    return Ok(Tree::Leaf);
                }
            }
        }
        if interval.exp() >= self.bound {
            return Err(MembershipError::ImageNotStandard(interval));
        }
        let mut children = Vec::with_capacity(3);
        for child in interval.subdivide() {
            children.push(self.build(child, images)?);
        }
        Ok(Tree::node(children))
    }
}

/// Recognizes a dyadic rearrangement of the Basilica from its breakpoints.
pub fn recognize(f: &PLCircleMap) -> MembershipResult<Element> {
    let segments = f.segments();
    let mut m_max: u32 = 0;
    let mut dyadic_offsets = true;
    for seg in &segments {
        let slope = seg.slope();
        let j = power_of_two_exponent(&slope).ok_or_else(|| MembershipError::SlopeNotPowerOfTwo {
            x: seg.x.clone(),
            slope: slope.clone(),
        })?;
        // segment is t -> 2^j t + c with c = 2^j n / 2^m
        let c = seg.intercept();
        match dyadic_exponent(&c) {
            Some(e) => m_max = m_max.max(e + j.unsigned_abs() as u32),
            None => dyadic_offsets = false,
        }
    }
    for (x, y) in f.real_breakpoints() {
        for p in [x, y] {
            if !p.is_arc_endpoint() {
                return Err(MembershipError::BreakpointNotArcEndpoint(p.clone()));
            }
            m_max = m_max.max(p.exponent());
        }
    }
    let base = [Arc::upper_base(), Arc::lower_base()];
    if !dyadic_offsets {
        // some arc is moved off the lamination; look globally, then inside
        // the offending pieces, and otherwise let refinement report it
        let witness = arc_witness(f, &base, (m_max + 4).clamp(8, 12)).or_else(|| {
            segments
                .iter()
                .filter(|s| dyadic_exponent(&s.intercept()).is_none())
                .find_map(|s| segment_witness(f, s, m_max + 12))
        });
        if let Some(arc) = witness {
            return Err(MembershipError::ArcNotPreserved(arc));
        }
    }

    let recognizer = Recognizer {
        f,
        breakpoints: f.real_breakpoints().iter().map(|(x, _)| x.clone()).collect(),
        bound: m_max + 2,
    };
    let mut images = Vec::new();
    let mut trees = Vec::with_capacity(4);
    for interval in base_intervals() {
        match recognizer.build(interval, &mut images) {
            Ok(t) => trees.push(t),
            Err(e) => {
                return Err(match arc_witness(f, &base, (m_max + 2).min(12)) {
                    Some(arc) => MembershipError::ArcNotPreserved(arc),
                    None => e,
                })
            }
        }
    }
    let domain = ArcDiagram::from_forest(Forest::new(3, trees)).expect("four ternary trees");

    let mut range_paths: [Vec<Vec<usize>>; 4] = Default::default();
    for image in &images {
        range_paths[image.base_index()].push(image.path().iter().map(|c| c.index()).collect());
    }
    let range_trees: Vec<Tree> = range_paths
        .iter()
        .map(|ps| Tree::from_paths(ps.iter().map(|p| p.as_slice()), 3))
        .collect();
    let range = ArcDiagram::from_forest(Forest::new(3, range_trees)).expect("four ternary trees");
    let first = &images[0];
    let offset = range
        .leaves()
        .iter()
        .position(|l| l == first)
        .ok_or_else(|| MembershipError::ImageNotStandard(domain.leaves()[0].clone()))?;
    if range.leaf_count() != domain.leaf_count() {
        return Err(MembershipError::ImageNotStandard(domain.leaves()[0].clone()));
    }
    match Element::make(domain, range, offset as i64) {
        Ok(e) => Ok(e.reduce()),
        Err(ElementError::ArcMismatch(arc)) => Err(MembershipError::ArcNotPreserved(arc)),
        Err(other) => unreachable!("recognized diagrams are well formed: {}", other),
    }
}

/// True iff every slope is a power of two and every breakpoint lies on
/// the `k / (3 * 2^n)` grid (the latter holds for every stored map).
pub fn t3_check(f: &PLCircleMap) -> bool {
    f.slopes().iter().all(|s| power_of_two_exponent(s).is_some())
}

/// `recognize(to_pl(f))` equals `f`.
pub fn roundtrip(f: &Element) -> bool {
    recognize(&f.to_pl()).map(|g| g.equal(f)).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::Generator;

    fn pl(s: &str) -> PLCircleMap {
        s.parse().unwrap()
    }

    #[test]
    fn recognizes_generators() {
        for g in Generator::ALL {
            let e = Element::generator(g);
            assert_eq!(recognize(&e.to_pl()).unwrap(), e, "{:?}", g);
        }
        assert_eq!(recognize(&pl("0:1/2")).unwrap(), Element::generator(Generator::Delta));
        assert_eq!(recognize(&PLCircleMap::identity()).unwrap(), Element::identity());
    }

    #[test]
    fn rejections() {
        let err = recognize(&pl("0:1/3")).unwrap_err();
        assert_eq!(err, MembershipError::ArcNotPreserved(Arc::upper_base()));
        assert_eq!(err.witness(), "{1/3,2/3}");
        let err = recognize(&pl("0:0,1/6:1/2")).unwrap_err();
        assert_eq!(err.code(), "SlopeNotPowerOfTwo");
        assert_eq!(err.witness(), "3");
        let err = recognize(&pl("0:0,1/4:1/2")).unwrap_err();
        assert!(matches!(err, MembershipError::SlopeNotPowerOfTwo { .. }));
        let err = recognize(&pl("0:0,1/2:1/4,3/4:1/2")).unwrap_err();
        assert_eq!(err, MembershipError::BreakpointNotArcEndpoint(Angle::zero()));
        let err = recognize(&pl("0:1/4")).unwrap_err();
        assert_eq!(err.code(), "ArcNotPreserved");
    }

    #[test]
    fn t3_examples() {
        assert!(t3_check(&Element::generator(Generator::Gamma).to_pl()));
        assert!(t3_check(&pl("0:1/3")));
        assert!(!t3_check(&pl("0:0,1/6:1/2")));
    }

    #[test]
    fn roundtrips() {
        assert!(roundtrip(&Element::identity()));
        let a = Element::generator(Generator::Alpha);
        let b = Element::generator(Generator::Beta);
        assert!(roundtrip(&a.compose(&b).compose(&a)));
    }
}
