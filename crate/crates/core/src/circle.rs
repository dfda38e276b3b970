//! Exact points of the circle `R/Z` on the grid `k / (3 * 2^n)` and
//! piecewise-linear circle maps given by breakpoint lists.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircleError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("unsupported denominator in {0}: only 2^a and 3*2^a are on the grid")]
    UnsupportedDenominator(BigRational),
    #[error("value {0} is off the 3*2^n grid")]
    OffGrid(BigRational),
    #[error("cannot parse {0:?}")]
    Parse(String),
    #[error("a circle map needs at least one breakpoint")]
    EmptyMap,
    #[error("duplicate breakpoint at {0}")]
    DuplicateBreakpoint(Angle),
    #[error("breakpoint images are not in cyclic order")]
    NotOrientationPreserving,
}

/// A point of the circle `R/Z` whose denominator divides `3 * 2^a`.
///
/// Stored as `num / (3 * 2^exp)` with `0 <= num < 3 * 2^exp` and either
/// `exp == 0` or `num` odd, which makes the representation unique.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Angle {
    num: BigUint,
    exp: u32,
}

fn three_pow2(exp: u32) -> BigUint {
    BigUint::from(3u32) << exp
}

impl Angle {
    pub fn zero() -> Angle {
        Angle {
            num: BigUint::zero(),
            exp: 0,
        }
    }

    fn normalized(num: BigUint, exp: u32) -> Angle {
        let mut num = num % three_pow2(exp);
        let mut exp = exp;
        if num.is_zero() {
            return Angle::zero();
        }
        let tz = num.trailing_zeros().unwrap_or(0) as u32;
        let shift = tz.min(exp);
        num >>= shift;
        exp -= shift;
        Angle { num, exp }
    }

    /// Builds the canonical representative of `numerator / denominator`
    /// modulo one.
    pub fn new(numerator: impl Into<BigInt>, denominator: impl Into<BigInt>) -> Result<Angle, CircleError> {
        let den: BigInt = denominator.into();
        if den.is_zero() {
            return Err(CircleError::ZeroDenominator);
        }
        Angle::from_ratio(&BigRational::new(numerator.into(), den))
    }

    /// Shorthand for small literals; panics when off the grid.
    pub fn frac(numerator: i64, denominator: i64) -> Angle {
        Angle::new(numerator, denominator).expect("literal angle must lie on the grid")
    }

    pub fn from_ratio(value: &BigRational) -> Result<Angle, CircleError> {
        let den = value.denom().magnitude().clone();
        let twos = den.trailing_zeros().unwrap_or(0) as u32;
        let odd = &den >> twos;
        let scale = if odd.is_one() {
            BigUint::from(3u32)
        } else if odd == BigUint::from(3u32) {
            BigUint::one()
        } else {
            return Err(CircleError::UnsupportedDenominator(value.clone()));
        };
        // value = numer / (odd * 2^twos) = numer * scale / (3 * 2^twos)
        let modulus = BigInt::from(three_pow2(twos));
        let numer = (value.numer() * BigInt::from(scale)).mod_floor(&modulus);
        Ok(Angle::normalized(numer.magnitude().clone(), twos))
    }

    /// The point `num / (3 * 2^exp)` reduced modulo one.
    pub fn from_grid(num: impl Into<BigInt>, exp: u32) -> Angle {
        let modulus = BigInt::from(three_pow2(exp));
        let num = num.into().mod_floor(&modulus);
        Angle::normalized(num.magnitude().clone(), exp)
    }

    /// Numerator over the denominator `3 * 2^exp`; `exp` must be at least
    /// the angle's own exponent.
    pub fn grid_numer(&self, exp: u32) -> BigUint {
        assert!(exp >= self.exp, "grid exponent too small");
        &self.num << (exp - self.exp)
    }

    pub fn to_ratio(&self) -> BigRational {
        BigRational::new(BigInt::from(self.num.clone()), BigInt::from(three_pow2(self.exp)))
    }

    /// Reduced numerator.
    pub fn numerator(&self) -> BigUint {
        if self.is_dyadic() {
            &self.num / 3u32
        } else {
            self.num.clone()
        }
    }

    /// Reduced denominator: `2^a` or `3 * 2^a`.
    pub fn denominator(&self) -> BigUint {
        if self.is_zero() {
            BigUint::one()
        } else if self.is_dyadic() {
            BigUint::one() << self.exp
        } else {
            three_pow2(self.exp)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True when the denominator is a power of two.
    pub fn is_dyadic(&self) -> bool {
        (&self.num % 3u32).is_zero()
    }

    /// Exponent `a` of the power of two in the reduced denominator.
    pub fn exponent(&self) -> u32 {
        self.exp
    }

    /// True when the point is the endpoint of some leaf of the lamination,
    /// i.e. when its reduced denominator is divisible by three.
    pub fn is_arc_endpoint(&self) -> bool {
        !self.is_dyadic()
    }

    fn aligned(&self, other: &Angle) -> (BigUint, BigUint, u32) {
        let exp = self.exp.max(other.exp);
        (&self.num << (exp - self.exp), &other.num << (exp - other.exp), exp)
    }

    pub fn add(&self, other: &Angle) -> Angle {
        let (a, b, exp) = self.aligned(other);
        Angle::normalized(a + b, exp)
    }

    pub fn sub(&self, other: &Angle) -> Angle {
        let (a, b, exp) = self.aligned(other);
        let modulus = three_pow2(exp);
        Angle::normalized(a + modulus - b, exp)
    }

    pub fn neg(&self) -> Angle {
        Angle::zero().sub(self)
    }

    /// Multiplies the representative in `[0, 1)` by `2^power`, reducing
    /// modulo one.
    pub fn mul_pow2(&self, power: i64) -> Angle {
        if power >= 0 {
            let p = power as u32;
            if p <= self.exp {
                Angle::normalized(self.num.clone(), self.exp - p)
            } else {
                Angle::normalized(&self.num << (p - self.exp), 0)
            }
        } else {
            Angle::normalized(self.num.clone(), self.exp + (-power) as u32)
        }
    }

    pub fn double(&self) -> Angle {
        self.mul_pow2(1)
    }

    pub fn half(&self) -> Angle {
        self.mul_pow2(-1)
    }

    /// Counterclockwise distance from `self` to `other`, in `[0, 1)`.
    pub fn ccw_to(&self, other: &Angle) -> Angle {
        other.sub(self)
    }

    /// Counterclockwise midpoint of the arc from `self` to `other`.
    pub fn ccw_midpoint(&self, other: &Angle) -> Angle {
        self.add(&self.ccw_to(other).half())
    }

    pub fn to_f64(&self) -> f64 {
        let num = self.num.to_f64().unwrap_or(0.0);
        num / (3.0 * 2f64.powi(self.exp as i32))
    }
}

impl Ord for Angle {
    fn cmp(&self, other: &Angle) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl PartialOrd for Angle {
    fn partial_cmp(&self, other: &Angle) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.numerator(), self.denominator())
        }
    }
}

impl fmt::Debug for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub(crate) fn parse_ratio(s: &str) -> Result<BigRational, CircleError> {
    let s = s.trim();
    let err = || CircleError::Parse(s.to_string());
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| err())?;
    let d = BigInt::from_str(d).map_err(|_| err())?;
    if d.is_zero() {
        return Err(CircleError::ZeroDenominator);
    }
    Ok(BigRational::new(n, d))
}

impl FromStr for Angle {
    type Err = CircleError;

    fn from_str(s: &str) -> Result<Angle, CircleError> {
        Angle::from_ratio(&parse_ratio(s)?)
    }
}

/// `angle_make`: canonical representative of `numerator / denominator`.
pub fn angle_make(numerator: i64, denominator: i64) -> Result<Angle, CircleError> {
    Angle::new(numerator, denominator)
}

/// True iff `b` lies in the open counterclockwise interval from `a` to `c`.
pub fn cyclic_between(a: &Angle, b: &Angle, c: &Angle) -> bool {
    if a == c {
        return false;
    }
    let ab = a.ccw_to(b);
    !ab.is_zero() && ab < a.ccw_to(c)
}

/// A counterclockwise interval `[lo, hi]` of the circle; never the full
/// circle.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CyclicInterval {
    pub lo: Angle,
    pub hi: Angle,
}

impl CyclicInterval {
    pub fn new(lo: Angle, hi: Angle) -> CyclicInterval {
        CyclicInterval { lo, hi }
    }

    pub fn length(&self) -> Angle {
        self.lo.ccw_to(&self.hi)
    }

    /// Closed containment of a point.
    pub fn contains(&self, t: &Angle) -> bool {
        t == &self.lo || t == &self.hi || cyclic_between(&self.lo, t, &self.hi)
    }

    pub fn contains_interior(&self, t: &Angle) -> bool {
        cyclic_between(&self.lo, t, &self.hi)
    }

    /// True when `other` lies inside `self` (closed).
    pub fn contains_interval(&self, other: &CyclicInterval) -> bool {
        if !self.contains(&other.lo) || !self.contains(&other.hi) {
            return false;
        }
        self.lo.ccw_to(&other.lo) <= self.lo.ccw_to(&other.hi) || other.hi == self.lo
    }
}

impl fmt::Display for CyclicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

/// If `r` is `2^j` for some integer `j`, returns `j`.
pub fn power_of_two_exponent(r: &BigRational) -> Option<i64> {
    if !r.is_positive() {
        return None;
    }
    let n = r.numer().magnitude();
    let d = r.denom().magnitude();
    let is_pow2 = |x: &BigUint| x.count_ones() == 1;
    if d.is_one() && is_pow2(n) {
        Some(n.trailing_zeros().unwrap_or(0) as i64)
    } else if n.is_one() && is_pow2(d) {
        Some(-(d.trailing_zeros().unwrap_or(0) as i64))
    } else {
        None
    }
}

/// One affine piece of a circle map: starts at `x` with image `y`, spans
/// `dx` of the domain and `dy` of the range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub x: Angle,
    pub y: Angle,
    pub dx: BigRational,
    pub dy: BigRational,
}

impl Segment {
    pub fn slope(&self) -> BigRational {
        &self.dy / &self.dx
    }

    /// `y - slope * x` taken modulo one, as an exact rational in `[0, 1)`.
    pub fn intercept(&self) -> BigRational {
        let c = self.y.to_ratio() - self.slope() * self.x.to_ratio();
        let floor = c.floor();
        c - floor
    }

    fn eval(&self, t: &Angle) -> Result<Angle, CircleError> {
        let dist = self.x.ccw_to(t);
        let slope = self.slope();
        if let Some(j) = power_of_two_exponent(&slope) {
            return Ok(self.y.add(&dist.mul_pow2(j)));
        }
        let value = self.y.to_ratio() + slope * dist.to_ratio();
        Angle::from_ratio(&value).map_err(|_| {
            let floor = value.floor();
            CircleError::OffGrid(value - floor)
        })
    }
}

/// Orientation-preserving piecewise-linear homeomorphism of the circle,
/// stored as its breakpoints `x_i -> y_i` in increasing order of `x`.
///
/// Collinear breakpoints are always pruned. A map with no breakpoints (a
/// rotation) keeps the single synthetic breakpoint `0 -> f(0)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PLCircleMap {
    breakpoints: Vec<(Angle, Angle)>,
}

fn ccw_len(a: &Angle, b: &Angle, single: bool) -> BigRational {
    if single {
        BigRational::one()
    } else {
        a.ccw_to(b).to_ratio()
    }
}

fn segments_of(points: &[(Angle, Angle)]) -> Vec<Segment> {
    let n = points.len();
    let single = n == 1;
    (0..n)
        .map(|i| {
            let (x0, y0) = &points[i];
            let (x1, y1) = &points[(i + 1) % n];
            Segment {
                x: x0.clone(),
                y: y0.clone(),
                dx: ccw_len(x0, x1, single),
                dy: ccw_len(y0, y1, single),
            }
        })
        .collect()
}

impl PLCircleMap {
    /// Validates and canonicalizes a breakpoint list given in any order.
    pub fn new(mut points: Vec<(Angle, Angle)>) -> Result<PLCircleMap, CircleError> {
        if points.is_empty() {
            return Err(CircleError::EmptyMap);
        }
        points.sort_by(|a, b| a.0.cmp(&b.0));
        for w in points.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(CircleError::DuplicateBreakpoint(w[0].0.clone()));
            }
        }
        if points.len() > 1 {
            // images must wind exactly once around the circle
            let n = points.len();
            let mut total = BigRational::zero();
            for i in 0..n {
                let (a, b) = (&points[i].1, &points[(i + 1) % n].1);
                if a == b {
                    return Err(CircleError::NotOrientationPreserving);
                }
                total += a.ccw_to(b).to_ratio();
            }
            if !total.is_one() {
                return Err(CircleError::NotOrientationPreserving);
            }
        }
        Ok(PLCircleMap::canonical(points))
    }

    /// The rotation `t -> t + amount`.
    pub fn rotation(amount: Angle) -> PLCircleMap {
        PLCircleMap {
            breakpoints: vec![(Angle::zero(), amount)],
        }
    }

    pub fn identity() -> PLCircleMap {
        PLCircleMap::rotation(Angle::zero())
    }

    fn canonical(points: Vec<(Angle, Angle)>) -> PLCircleMap {
        let n = points.len();
        if n == 1 {
            let (x, y) = &points[0];
            return PLCircleMap::rotation(y.sub(x));
        }
        let segs = segments_of(&points);
        let slopes: Vec<BigRational> = segs.iter().map(Segment::slope).collect();
        let kept: Vec<(Angle, Angle)> = (0..n)
            .filter(|&i| slopes[(i + n - 1) % n] != slopes[i])
            .map(|i| points[i].clone())
            .collect();
        if kept.is_empty() {
            let (x, y) = &points[0];
            PLCircleMap::rotation(y.sub(x))
        } else {
            PLCircleMap { breakpoints: kept }
        }
    }

    pub fn breakpoints(&self) -> &[(Angle, Angle)] {
        &self.breakpoints
    }

    /// True when the map is a rotation (no genuine breakpoints).
    pub fn is_rotation(&self) -> bool {
        self.breakpoints.len() == 1
    }

    /// Genuine breakpoints; empty for rotations.
    pub fn real_breakpoints(&self) -> &[(Angle, Angle)] {
        if self.is_rotation() {
            &[]
        } else {
            &self.breakpoints
        }
    }

    pub fn segments(&self) -> Vec<Segment> {
        segments_of(&self.breakpoints)
    }

    pub fn slopes(&self) -> Vec<BigRational> {
        self.segments().iter().map(Segment::slope).collect()
    }

    fn segment_index(&self, t: &Angle) -> usize {
        // last breakpoint with x <= t, wrapping to the last one
        match self.breakpoints.binary_search_by(|(x, _)| x.cmp(t)) {
            Ok(i) => i,
            Err(0) => self.breakpoints.len() - 1,
            Err(i) => i - 1,
        }
    }

    /// Exact image of `t`. Fails only for maps whose slopes take grid
    /// points off the grid; the error carries the exact value.
    pub fn eval(&self, t: &Angle) -> Result<Angle, CircleError> {
        let i = self.segment_index(t);
        let n = self.breakpoints.len();
        let (x0, y0) = &self.breakpoints[i];
        let (x1, y1) = &self.breakpoints[(i + 1) % n];
        let seg = Segment {
            x: x0.clone(),
            y: y0.clone(),
            dx: ccw_len(x0, x1, n == 1),
            dy: ccw_len(y0, y1, n == 1),
        };
        seg.eval(t)
    }

    pub fn inverse(&self) -> PLCircleMap {
        let swapped = self.breakpoints.iter().map(|(x, y)| (y.clone(), x.clone())).collect();
        PLCircleMap::new(swapped).expect("inverse of a valid map is valid")
    }

    /// `self ∘ other` (other applied first).
    pub fn compose(&self, other: &PLCircleMap) -> Result<PLCircleMap, CircleError> {
        let other_inv = other.inverse();
        let mut xs: Vec<Angle> = other.breakpoints.iter().map(|(x, _)| x.clone()).collect();
        for (x, _) in &self.breakpoints {
            xs.push(other_inv.eval(x)?);
        }
        xs.sort();
        xs.dedup();
        let mut points = Vec::with_capacity(xs.len());
        for x in xs {
            let y = self.eval(&other.eval(&x)?)?;
            points.push((x, y));
        }
        PLCircleMap::new(points)
    }
}

/// `pl_eval`.
pub fn pl_eval(f: &PLCircleMap, t: &Angle) -> Result<Angle, CircleError> {
    f.eval(t)
}

/// `pl_compose(f, g)` = f ∘ g.
pub fn pl_compose(f: &PLCircleMap, g: &PLCircleMap) -> Result<PLCircleMap, CircleError> {
    f.compose(g)
}

pub fn pl_inverse(f: &PLCircleMap) -> PLCircleMap {
    f.inverse()
}

impl fmt::Display for PLCircleMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (x, y)) in self.breakpoints.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}:{}", x, y)?;
        }
        Ok(())
    }
}

impl FromStr for PLCircleMap {
    type Err = CircleError;

    fn from_str(s: &str) -> Result<PLCircleMap, CircleError> {
        let mut points = Vec::new();
        for item in s.split(',') {
            let item = item.trim();
            if item.is_empty() {
                continue;
            }
            let (x, y) = item
                .split_once(':')
                .ok_or_else(|| CircleError::Parse(item.to_string()))?;
            points.push((x.parse()?, y.parse()?));
        }
        PLCircleMap::new(points)
    }
}

pub(crate) fn ratio_to_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
