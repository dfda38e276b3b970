//! Elements of the group as arc pair diagrams: a domain diagram, a range
//! diagram and the leaf offset of the ccw correspondence.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::circle::{Angle, PLCircleMap};
use crate::diagram::{ArcDiagram, DiagramError};
use crate::forest::{Forest, Pair, Tree};
use crate::lamination::{arc_check, neighbor_gap, Arc, GapId, LaminationError, Side};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ElementError {
    #[error("domain has {domain} leaves but range has {range}")]
    LeafCountMismatch { domain: usize, range: usize },
    #[error("domain arc {0} is not carried onto a range arc")]
    ArcMismatch(Arc),
    #[error("cannot parse element {0:?}")]
    Parse(String),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Lamination(#[from] LaminationError),
}

pub type ElementResult<T> = Result<T, ElementError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    Alpha,
    Beta,
    Gamma,
    Delta,
}

impl Generator {
    pub const ALL: [Generator; 4] = [Generator::Alpha, Generator::Beta, Generator::Gamma, Generator::Delta];

    fn diagram_text(self) -> &'static str {
        match self {
            Generator::Alpha => "[.,(.,.,.),.,. ; .,.,.,(.,.,.) ; 5]",
            Generator::Beta => "[.,.,(.,.,.),. ; (.,.,.),.,.,. ; 0]",
            Generator::Gamma => "[(.,.,(.,.,.)),.,.,. ; ((.,.,.),.,.),.,.,. ; 0]",
            Generator::Delta => "[.,.,.,. ; .,.,.,. ; 2]",
        }
    }

    pub fn letter(self) -> char {
        match self {
            Generator::Alpha => 'a',
            Generator::Beta => 'b',
            Generator::Gamma => 'g',
            Generator::Delta => 'd',
        }
    }

    pub fn from_letter(c: char) -> Option<Generator> {
        Generator::ALL.into_iter().find(|g| g.letter() == c)
    }
}

impl FromStr for Generator {
    type Err = ElementError;

    fn from_str(s: &str) -> ElementResult<Generator> {
        match s.trim().to_ascii_lowercase().as_str() {
            "alpha" | "a" => Ok(Generator::Alpha),
            "beta" | "b" => Ok(Generator::Beta),
            "gamma" | "g" => Ok(Generator::Gamma),
            "delta" | "d" => Ok(Generator::Delta),
            _ => Err(ElementError::UnknownGenerator(s.to_string())),
        }
    }
}

/// An arc pair diagram. Domain leaf `i` is sent affinely onto range leaf
/// `(i + offset) mod N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Element {
    pair: Pair,
}

impl Element {
    /// Validates a diagram pair; the offset is taken modulo the leaf count.
    pub fn make(domain: ArcDiagram, range: ArcDiagram, offset: i64) -> ElementResult<Element> {
        Element::make_big(domain, range, &BigInt::from(offset))
    }

    pub fn make_big(domain: ArcDiagram, range: ArcDiagram, offset: &BigInt) -> ElementResult<Element> {
        let n = domain.leaf_count();
        if range.leaf_count() != n {
            return Err(ElementError::LeafCountMismatch {
                domain: n,
                range: range.leaf_count(),
            });
        }
        let offset = offset
            .mod_floor(&BigInt::from(n))
            .to_usize()
            .expect("offset below leaf count");
        let norm = |p: usize, q: usize| if p < q { (p, q) } else { (q, p) };
        let targets: HashSet<(usize, usize)> = range
            .arcs_with_boundaries()
            .into_iter()
            .map(|(_, (p, q))| norm(p, q))
            .collect();
        for (arc, (p, q)) in domain.arcs_with_boundaries() {
            if !targets.contains(&norm((p + offset) % n, (q + offset) % n)) {
                return Err(ElementError::ArcMismatch(arc));
            }
        }
        Ok(Element {
            pair: Pair::new(domain.forest().clone(), range.forest().clone(), offset),
        })
    }

    pub fn identity() -> Element {
        Element {
            pair: Pair::new(Forest::trivial(3, 4), Forest::trivial(3, 4), 0),
        }
    }

    pub fn generator(g: Generator) -> Element {
        g.diagram_text().parse().expect("generator diagrams are valid")
    }

    pub fn pair(&self) -> &Pair {
        &self.pair
    }

    pub fn domain(&self) -> ArcDiagram {
        ArcDiagram::from_forest(self.pair.domain.clone()).expect("domain is a diagram")
    }

    pub fn range(&self) -> ArcDiagram {
        ArcDiagram::from_forest(self.pair.range.clone()).expect("range is a diagram")
    }

    pub fn offset(&self) -> usize {
        self.pair.offset
    }

    pub fn leaf_count(&self) -> usize {
        self.pair.leaf_count()
    }

    /// Arcs in the domain diagram (equal to the number in the range).
    pub fn arc_count(&self) -> usize {
        self.leaf_count() / 2
    }

    /// Adds the primary arc of domain leaf `i` and of its partner.
    pub fn expand_domain(&self, i: usize) -> Element {
        Element {
            pair: self.pair.expand_domain(i),
        }
    }

    pub fn reduce(&self) -> Element {
        Element {
            pair: self.pair.reduce(),
        }
    }

    pub fn is_reduced(&self) -> bool {
        self.pair.is_reduced()
    }

    /// `self ∘ other`, reduced.
    pub fn compose(&self, other: &Element) -> Element {
        Element {
            pair: self.pair.compose(&other.pair).reduce(),
        }
    }

    /// `self ∘ other` without the final reduction.
    pub fn compose_unreduced(&self, other: &Element) -> Element {
        Element {
            pair: self.pair.compose(&other.pair),
        }
    }

    pub fn inverse(&self) -> Element {
        Element {
            pair: self.pair.inverse(),
        }
    }

    /// `other⁻¹ ∘ self ∘ other`.
    pub fn conjugate_by(&self, other: &Element) -> Element {
        other.inverse().compose(&self.compose(other))
    }

    pub fn equal(&self, other: &Element) -> bool {
        self.reduce() == other.reduce()
    }

    pub fn is_identity(&self) -> bool {
        self.reduce() == Element::identity()
    }

    pub fn to_pl(&self) -> PLCircleMap {
        let dom = self.domain().leaves();
        let ran = self.range().leaves();
        let points = (0..dom.len())
            .map(|i| (dom[i].lo().clone(), ran[self.pair.target(i)].lo().clone()))
            .collect();
        PLCircleMap::new(points).expect("leaf correspondence is orientation preserving")
    }

    pub fn evaluate(&self, t: &Angle) -> Angle {
        let dom = self.domain().leaves();
        let ran = self.range().leaves();
        let i = dom
            .iter()
            .position(|l| l.lo() == t || l.contains_interior(t))
            .expect("leaves partition the circle");
        let (d, r) = (&dom[i], &ran[self.pair.target(i)]);
        let power = d.exp() as i64 - r.exp() as i64;
        r.lo().add(&d.lo().ccw_to(t).mul_pow2(power))
    }

    pub fn image_of_arc(&self, arc: &Arc) -> ElementResult<Arc> {
        let (a, b) = arc.endpoints();
        Ok(arc_check(&self.evaluate(&a), &self.evaluate(&b))?)
    }

    pub fn image_of_gap(&self, gap: &GapId) -> ElementResult<GapId> {
        let (arc, side) = match gap {
            GapId::Central => (Arc::upper_base(), Side::Centerside),
            GapId::Behind(a) => (a.clone(), Side::Farside),
        };
        let image = self.image_of_arc(&arc)?;
        let preserved = self.evaluate(&arc.farside().lo) == image.farside().lo;
        let side = if preserved { side } else { side.flip() };
        Ok(neighbor_gap(&image, side))
    }

    pub fn is_in_stab_c(&self) -> bool {
        self.image_of_gap(&GapId::Central)
            .map(|g| g == GapId::Central)
            .unwrap_or(false)
    }

    pub fn is_in_rist_c(&self) -> bool {
        let r = self.reduce();
        central_only(&r.pair.domain) && central_only(&r.pair.range)
    }
}

/// True when every arc of the forest is central: trees 1 and 3 are leaves
/// and no middle child in trees 0 and 2 is subdivided.
pub(crate) fn central_only(forest: &Forest) -> bool {
    fn outer_only(t: &Tree) -> bool {
        match t {
            Tree::Leaf => true,
            Tree::Node(_) => {
                let c = t.children();
                c[1].is_leaf() && outer_only(&c[0]) && outer_only(&c[2])
            }
        }
    }
    let trees = forest.trees();
    trees[1].is_leaf() && trees[3].is_leaf() && outer_only(&trees[0]) && outer_only(&trees[2])
}

pub fn generator(g: Generator) -> Element {
    Element::generator(g)
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} ; {} ; {}]", self.pair.domain, self.pair.range, self.pair.offset)
    }
}

impl FromStr for Element {
    type Err = ElementError;

    fn from_str(s: &str) -> ElementResult<Element> {
        let err = || ElementError::Parse(s.to_string());
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(err)?;
        let parts: Vec<&str> = inner.split(';').collect();
        if parts.len() != 3 {
            return Err(err());
        }
        let domain: ArcDiagram = parts[0].parse()?;
        let range: ArcDiagram = parts[1].parse()?;
        let offset = BigInt::from_str(parts[2].trim()).map_err(|_| err())?;
        Element::make_big(domain, range, &offset)
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

    fn gen(g: Generator) -> Element {
        Element::generator(g)
    }

    #[test]
    fn make_examples() {
        let base = ArcDiagram::base;
        assert_eq!(Element::make(base(), base(), 0).unwrap(), Element::identity());
        assert_eq!(Element::make(base(), base(), 2).unwrap(), gen(Generator::Delta));
        assert!(matches!(
            Element::make(base(), base(), 1),
            Err(ElementError::ArcMismatch(_))
        ));
        let six = base().expand_at(1).unwrap();
        assert!(matches!(
            Element::make(six, base(), 0),
            Err(ElementError::LeafCountMismatch { .. })
        ));
    }

    #[test]
    fn generator_breakpoints() {
        let table = [
            (Generator::Alpha, "1/3:1/6,2/3:5/6"),
            (Generator::Beta, "1/6:1/6,2/3:7/24,17/24:1/3,5/6:5/6"),
            (Generator::Gamma, "1/6:1/6,7/24:19/96,29/96:5/24,1/3:1/3"),
            (Generator::Delta, "0:1/2"),
        ];
        for (g, expected) in table {
            assert_eq!(gen(g).to_pl().to_string(), expected, "{:?}", g);
            assert!(gen(g).is_reduced());
        }
    }

    #[test]
    fn group_operations() {
        let alpha = gen(Generator::Alpha);
        let delta = gen(Generator::Delta);
        assert!(alpha.compose(&alpha.inverse()).is_identity());
        assert!(delta.compose(&delta).is_identity());
        let lhs = alpha.compose(&alpha);
        let rhs = delta.inverse().compose(&delta.conjugate_by(&alpha));
        assert!(lhs.equal(&rhs));
    }

    #[test]
    fn reduce_undoes_expansion() {
        let id = Element::identity().expand_domain(2).expand_domain(3).expand_domain(0);
        assert_eq!(id.reduce(), Element::identity());
        let b = gen(Generator::Beta);
        assert_eq!(b.expand_domain(5).expand_domain(1).reduce(), b);
    }

    #[test]
    fn evaluation() {
        let alpha = gen(Generator::Alpha);
        assert_eq!(alpha.evaluate(&a("1/2")), a("1/2"));
        assert_eq!(alpha.evaluate(&a("1/3")), a("1/6"));
        assert_eq!(Element::identity().evaluate(&a("5/24")), a("5/24"));
        assert_eq!(gen(Generator::Delta).evaluate(&a("0")), a("1/2"));
    }

    #[test]
    fn arcs_and_gaps() {
        let alpha = gen(Generator::Alpha);
        assert_eq!(alpha.image_of_arc(&Arc::upper_base()).unwrap(), arc("{1/6,5/6}"));
        assert_eq!(
            gen(Generator::Delta).image_of_gap(&GapId::Central).unwrap(),
            GapId::Central
        );
        assert_eq!(
            alpha.image_of_gap(&GapId::Central).unwrap(),
            GapId::Behind(Arc::lower_base())
        );
        assert!(gen(Generator::Beta).is_in_rist_c());
        assert!(!alpha.is_in_stab_c());
        assert!(Element::identity().is_in_rist_c());
        assert!(gen(Generator::Gamma).is_in_rist_c());
        assert!(gen(Generator::Delta).is_in_stab_c());
    }

    #[test]
    fn text_roundtrip() {
        for g in Generator::ALL {
            let e = gen(g);
            assert_eq!(e.to_string().parse::<Element>().unwrap(), e);
        }
        let e: Element = "[.,.,.,. ; .,.,.,. ; -2]".parse().unwrap();
        assert_eq!(e, gen(Generator::Delta));
        assert!("[.,.,.,. ; .,.,.,.]".parse::<Element>().is_err());
    }
}
