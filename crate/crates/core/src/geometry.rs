//! Order geometry of the payoff plane.
//!
//! Points are compared with the component-wise order. Ties are classified
//! with an absolute tolerance ([`DEFAULT_TOL`] unless a `*_tol` variant is
//! used); points closer than the tolerance in both coordinates count as one.

use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-9;

/// A payoff pair: player 1 (Germany in the eurozone model) and player 2.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct PayoffPoint {
    pub p1: f64,
    pub p2: f64,
}

impl From<[f64; 2]> for PayoffPoint {
    fn from([p1, p2]: [f64; 2]) -> Self {
        Self { p1, p2 }
    }
}

impl From<PayoffPoint> for [f64; 2] {
    fn from(p: PayoffPoint) -> Self {
        [p.p1, p.p2]
    }
}

impl PayoffPoint {
    pub const fn new(p1: f64, p2: f64) -> Self {
        Self { p1, p2 }
    }

    pub fn try_new(p1: f64, p2: f64) -> Result<Self> {
        if p1.is_finite() && p2.is_finite() {
            Ok(Self { p1, p2 })
        } else {
            Err(Error::NonFinite(p1, p2))
        }
    }

    pub fn is_finite(&self) -> bool {
        self.p1.is_finite() && self.p2.is_finite()
    }

    /// Collective payoff `p1 + p2`.
    pub fn sum(&self) -> f64 {
        self.p1 + self.p2
    }

    pub fn dot(&self, other: PayoffPoint) -> f64 {
        self.p1 * other.p1 + self.p2 * other.p2
    }

    pub fn cross(&self, other: PayoffPoint) -> f64 {
        self.p1 * other.p2 - self.p2 * other.p1
    }

    pub fn norm(&self) -> f64 {
        self.p1.hypot(self.p2)
    }

    pub fn distance(&self, other: PayoffPoint) -> f64 {
        (*self - other).norm()
    }

    pub fn approx_eq(&self, other: PayoffPoint, tol: f64) -> bool {
        (self.p1 - other.p1).abs() <= tol && (self.p2 - other.p2).abs() <= tol
    }

    /// `self >= other` component-wise, up to `tol`.
    pub fn weakly_dominates(&self, other: PayoffPoint, tol: f64) -> bool {
        self.p1 >= other.p1 - tol && self.p2 >= other.p2 - tol
    }

    /// `self >= other` and `self != other`, both up to `tol`.
    pub fn dominates(&self, other: PayoffPoint, tol: f64) -> bool {
        self.weakly_dominates(other, tol) && !self.approx_eq(other, tol)
    }

    /// Strict order in both coordinates, no tolerance.
    pub fn strictly_greater(&self, other: PayoffPoint) -> bool {
        self.p1 > other.p1 && self.p2 > other.p2
    }

    pub fn sup(&self, other: PayoffPoint) -> PayoffPoint {
        PayoffPoint::new(self.p1.max(other.p1), self.p2.max(other.p2))
    }

    pub fn inf(&self, other: PayoffPoint) -> PayoffPoint {
        PayoffPoint::new(self.p1.min(other.p1), self.p2.min(other.p2))
    }

    pub fn lerp(&self, other: PayoffPoint, t: f64) -> PayoffPoint {
        *self + (other - *self) * t
    }
}

impl Add for PayoffPoint {
    type Output = PayoffPoint;
    fn add(self, rhs: PayoffPoint) -> PayoffPoint {
        PayoffPoint::new(self.p1 + rhs.p1, self.p2 + rhs.p2)
    }
}

impl Sub for PayoffPoint {
    type Output = PayoffPoint;
    fn sub(self, rhs: PayoffPoint) -> PayoffPoint {
        PayoffPoint::new(self.p1 - rhs.p1, self.p2 - rhs.p2)
    }
}

impl Mul<f64> for PayoffPoint {
    type Output = PayoffPoint;
    fn mul(self, rhs: f64) -> PayoffPoint {
        PayoffPoint::new(self.p1 * rhs, self.p2 * rhs)
    }
}

impl Neg for PayoffPoint {
    type Output = PayoffPoint;
    fn neg(self) -> PayoffPoint {
        PayoffPoint::new(-self.p1, -self.p2)
    }
}

fn check_finite(points: &[PayoffPoint]) -> Result<()> {
    match points.iter().find(|p| !p.is_finite()) {
        Some(p) => Err(Error::NonFinite(p.p1, p.p2)),
        None => Ok(()),
    }
}

/// The order interval `[lo, hi]`: the box of points between `lo` and `hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderInterval {
    pub lo: PayoffPoint,
    pub hi: PayoffPoint,
}

impl OrderInterval {
    pub fn new(lo: PayoffPoint, hi: PayoffPoint) -> Result<Self> {
        if !hi.weakly_dominates(lo, 0.0) {
            return Err(Error::InvalidProblem(format!(
                "interval bounds not ordered: lo = ({}, {}), hi = ({}, {})",
                lo.p1, lo.p2, hi.p1, hi.p2
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn contains(&self, p: PayoffPoint, tol: f64) -> bool {
        p.weakly_dominates(self.lo, tol) && self.hi.weakly_dominates(p, tol)
    }
}

/// Component-wise infimum and supremum of a point set.
pub fn extrema(points: &[PayoffPoint]) -> Result<OrderInterval> {
    let first = *points.first().ok_or(Error::EmptyPointSet)?;
    check_finite(points)?;
    let (lo, hi) = points
        .iter()
        .fold((first, first), |(lo, hi), p| (lo.inf(*p), hi.sup(*p)));
    Ok(OrderInterval { lo, hi })
}

/// Straight segment between two payoff points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub a: PayoffPoint,
    pub b: PayoffPoint,
}

impl Segment {
    pub const fn new(a: PayoffPoint, b: PayoffPoint) -> Self {
        Self { a, b }
    }

    pub fn direction(&self) -> PayoffPoint {
        self.b - self.a
    }

    pub fn length(&self) -> f64 {
        self.direction().norm()
    }

    pub fn is_degenerate(&self, tol: f64) -> bool {
        self.a.approx_eq(self.b, tol)
    }

    pub fn at(&self, t: f64) -> PayoffPoint {
        self.a.lerp(self.b, t)
    }

    pub fn sup(&self) -> PayoffPoint {
        self.a.sup(self.b)
    }

    pub fn inf(&self) -> PayoffPoint {
        self.a.inf(self.b)
    }

    /// Euclidean distance from `p` to the closed segment.
    pub fn distance_to(&self, p: PayoffPoint) -> f64 {
        let d = self.direction();
        let len2 = d.dot(d);
        if len2 == 0.0 {
            return self.a.distance(p);
        }
        let t = ((p - self.a).dot(d) / len2).clamp(0.0, 1.0);
        self.at(t).distance(p)
    }

    pub fn contains(&self, p: PayoffPoint, tol: f64) -> bool {
        self.distance_to(p) <= tol
    }
}

/// Intersection of two closed segments with the default tolerance.
pub fn segment_intersection(s1: &Segment, s2: &Segment) -> Result<Option<PayoffPoint>> {
    segment_intersection_tol(s1, s2, DEFAULT_TOL)
}

/// Intersection of two closed segments.
///
/// Returns `Ok(None)` when the segments are disjoint and an error when they
/// overlap along a sub-segment longer than `tol`.
pub fn segment_intersection_tol(
    s1: &Segment,
    s2: &Segment,
    tol: f64,
) -> Result<Option<PayoffPoint>> {
    check_finite(&[s1.a, s1.b, s2.a, s2.b])?;
    if s1.is_degenerate(tol) {
        return Ok(s2.contains(s1.a, tol).then_some(s1.a));
    }
    if s2.is_degenerate(tol) {
        return Ok(s1.contains(s2.a, tol).then_some(s2.a));
    }

    let r = s1.direction();
    let s = s2.direction();
    let qp = s2.a - s1.a;
    let denom = r.cross(s);
    let scale = r.norm() * s.norm();

    if denom.abs() <= tol * scale {
        // parallel: only collinear segments can meet
        if qp.cross(r).abs() > tol * r.norm() {
            return Ok(None);
        }
        let rr = r.dot(r);
        let t0 = qp.dot(r) / rr;
        let t1 = (s2.b - s1.a).dot(r) / rr;
        let lo = t0.min(t1).max(0.0);
        let hi = t0.max(t1).min(1.0);
        let eps = tol / r.norm();
        if hi < lo - eps {
            return Ok(None);
        }
        if (hi - lo) * r.norm() > tol {
            return Err(Error::NonUniqueIntersection);
        }
        return Ok(Some(s1.at(0.5 * (lo + hi))));
    }

    let t = qp.cross(s) / denom;
    let u = qp.cross(r) / denom;
    let eps_t = tol / r.norm();
    let eps_u = tol / s.norm();
    if t < -eps_t || t > 1.0 + eps_t || u < -eps_u || u > 1.0 + eps_u {
        return Ok(None);
    }
    Ok(Some(s1.at(t.clamp(0.0, 1.0))))
}

/// Pareto maximal points of a finite set, ordered by increasing `p1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParetoFront {
    points: Vec<PayoffPoint>,
}

impl ParetoFront {
    /// Builds a front from a polyline, checking that the vertices are
    /// pairwise incomparable. Vertices are sorted by `p1`.
    pub fn from_polyline(mut points: Vec<PayoffPoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        check_finite(&points)?;
        points.sort_by(|a, b| a.p1.total_cmp(&b.p1));
        for w in points.windows(2) {
            if !(w[0].p1 < w[1].p1 && w[0].p2 > w[1].p2) {
                return Err(Error::InvalidProblem(format!(
                    "polyline vertices ({}, {}) and ({}, {}) are comparable",
                    w[0].p1, w[0].p2, w[1].p1, w[1].p2
                )));
            }
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[PayoffPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Consecutive vertex pairs of the polyline; a single-point front yields
    /// one degenerate segment.
    pub fn segments(&self) -> Vec<Segment> {
        if self.points.len() == 1 {
            return vec![Segment::new(self.points[0], self.points[0])];
        }
        self.points
            .windows(2)
            .map(|w| Segment::new(w[0], w[1]))
            .collect()
    }

    pub fn extrema(&self) -> OrderInterval {
        // non-empty by construction
        extrema(&self.points).expect("pareto front is never empty")
    }

    /// Endpoint with the largest `p1`.
    pub fn last(&self) -> PayoffPoint {
        *self.points.last().expect("pareto front is never empty")
    }

    /// Endpoint with the largest `p2`.
    pub fn first(&self) -> PayoffPoint {
        self.points[0]
    }

    /// Distance from `p` to the polyline.
    pub fn distance_to(&self, p: PayoffPoint) -> f64 {
        self.segments()
            .iter()
            .map(|s| s.distance_to(p))
            .fold(f64::INFINITY, f64::min)
    }
}

pub fn pareto_front(points: &[PayoffPoint]) -> Result<ParetoFront> {
    pareto_front_tol(points, DEFAULT_TOL)
}

/// Maximal elements of `points` under the component-wise order.
///
/// Sweep by decreasing `p1`: a point survives only if it beats the best `p2`
/// seen so far by more than `tol`; it then evicts earlier survivors whose `p1`
/// is within `tol` of its own.
pub fn pareto_front_tol(points: &[PayoffPoint], tol: f64) -> Result<ParetoFront> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    check_finite(points)?;

    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| b.p1.total_cmp(&a.p1).then(b.p2.total_cmp(&a.p2)));

    let mut front: Vec<PayoffPoint> = Vec::new();
    let mut best_p2 = f64::NEG_INFINITY;
    for q in sorted {
        if q.p2 <= best_p2 + tol {
            continue;
        }
        while front.last().is_some_and(|w| w.p1 <= q.p1 + tol) {
            front.pop();
        }
        best_p2 = q.p2;
        front.push(q);
    }
    front.reverse();
    Ok(ParetoFront { points: front })
}

/// Convex polygon with counter-clockwise vertices, starting from the vertex
/// with the smallest `(p1, p2)`. One or two vertices encode a point or a
/// segment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Polygon {
    vertices: Vec<PayoffPoint>,
}

fn lex_cmp(a: &PayoffPoint, b: &PayoffPoint) -> Ordering {
    a.p1.total_cmp(&b.p1).then(a.p2.total_cmp(&b.p2))
}

impl Polygon {
    pub fn vertices(&self) -> &[PayoffPoint] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edges(&self) -> Vec<Segment> {
        let n = self.vertices.len();
        match n {
            1 => vec![Segment::new(self.vertices[0], self.vertices[0])],
            2 => vec![Segment::new(self.vertices[0], self.vertices[1])],
            _ => (0..n)
                .map(|i| Segment::new(self.vertices[i], self.vertices[(i + 1) % n]))
                .collect(),
        }
    }

    pub fn area(&self) -> f64 {
        let n = self.vertices.len();
        if n < 3 {
            return 0.0;
        }
        0.5 * (0..n)
            .map(|i| self.vertices[i].cross(self.vertices[(i + 1) % n]))
            .sum::<f64>()
    }

    pub fn contains(&self, p: PayoffPoint, tol: f64) -> bool {
        if self.vertices.len() < 3 {
            return self.boundary_distance(p) <= tol;
        }
        self.edges().iter().all(|e| {
            let d = e.direction();
            d.cross(p - e.a) >= -tol * d.norm()
        })
    }

    fn boundary_distance(&self, p: PayoffPoint) -> f64 {
        self.edges()
            .iter()
            .map(|e| e.distance_to(p))
            .fold(f64::INFINITY, f64::min)
    }

    /// Distance from `p` to the polygon region (zero inside).
    pub fn distance_to(&self, p: PayoffPoint) -> f64 {
        if self.contains(p, 0.0) {
            0.0
        } else {
            self.boundary_distance(p)
        }
    }

    pub fn extrema(&self) -> OrderInterval {
        extrema(&self.vertices).expect("polygon is never empty")
    }

    /// The Pareto maximal chain of the region's boundary: the
    /// counter-clockwise walk from the rightmost (then highest) vertex to the
    /// highest (then rightmost) vertex.
    pub fn pareto_front(&self, tol: f64) -> ParetoFront {
        let n = self.vertices.len();
        if n < 3 {
            return pareto_front_tol(&self.vertices, tol).expect("polygon is never empty");
        }
        let argmax = |key: &dyn Fn(&PayoffPoint) -> (f64, f64)| {
            let mut best = 0;
            for i in 1..n {
                let (k1, k2) = key(&self.vertices[i]);
                let (b1, b2) = key(&self.vertices[best]);
                if k1 > b1 + tol || ((k1 - b1).abs() <= tol && k2 > b2) {
                    best = i;
                }
            }
            best
        };
        let start = argmax(&|p| (p.p1, p.p2));
        let end = argmax(&|p| (p.p2, p.p1));
        let mut chain = vec![self.vertices[start]];
        let mut i = start;
        while i != end {
            i = (i + 1) % n;
            chain.push(self.vertices[i]);
        }
        chain.reverse();
        ParetoFront { points: chain }
    }
}

pub fn convex_hull(points: &[PayoffPoint]) -> Result<Polygon> {
    convex_hull_tol(points, DEFAULT_TOL)
}

/// Convex hull by Andrew's monotone chain. Collinear boundary points are
/// dropped; points within `tol` of each other are merged.
pub fn convex_hull_tol(points: &[PayoffPoint], tol: f64) -> Result<Polygon> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    check_finite(points)?;

    let mut pts = points.to_vec();
    pts.sort_by(lex_cmp);
    pts.dedup_by(|b, a| a.approx_eq(*b, tol));
    if pts.len() < 3 {
        return Ok(Polygon { vertices: pts });
    }

    // left turn strictly beyond the collinearity tolerance
    let turns_left = |o: PayoffPoint, a: PayoffPoint, b: PayoffPoint| {
        let oa = a - o;
        let ob = b - o;
        oa.cross(ob) > tol * oa.norm() * ob.norm()
    };

    let mut lower: Vec<PayoffPoint> = Vec::with_capacity(pts.len());
    for &p in &pts {
        while lower.len() >= 2 && !turns_left(lower[lower.len() - 2], lower[lower.len() - 1], p) {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<PayoffPoint> = Vec::with_capacity(pts.len());
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && !turns_left(upper[upper.len() - 2], upper[upper.len() - 1], p) {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);

    if lower.len() < 3 {
        // all input collinear: keep the two extreme points
        let a = pts[0];
        let b = *pts.last().unwrap();
        return Ok(Polygon { vertices: vec![a, b] });
    }
    Ok(Polygon { vertices: lower })
}

/// Hausdorff distance between two convex polygonal regions. For convex sets
/// the farthest point of one set from the other is a vertex.
pub fn hausdorff_distance(a: &Polygon, b: &Polygon) -> f64 {
    let one_way = |from: &Polygon, to: &Polygon| {
        from.vertices()
            .iter()
            .map(|v| to.distance_to(*v))
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

/// Intersection of a segment with a front polyline.
///
/// Hits at shared vertices are merged; two distinct hits are an error.
pub fn polyline_intersection(
    front: &ParetoFront,
    seg: &Segment,
    tol: f64,
) -> Result<Option<PayoffPoint>> {
    let mut hit: Option<PayoffPoint> = None;
    for edge in front.segments() {
        if let Some(p) = segment_intersection_tol(&edge, seg, tol)? {
            match hit {
                Some(h) if !h.approx_eq(p, 10.0 * tol) => {
                    return Err(Error::NonUniqueIntersection)
                }
                Some(_) => {}
                None => hit = Some(p),
            }
        }
    }
    Ok(hit)
}
