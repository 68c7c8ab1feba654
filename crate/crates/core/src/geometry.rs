//! Planar primitives: points, segments, closed disks, robust crossing tests,
//! circle intersections, Fermat points and the two extremal functions used
//! by the ratio certificates.

use std::cmp::Ordering;
use std::f64::consts::{FRAC_PI_3, PI};
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Angle at which a triangle vertex becomes its own Fermat point.
pub const FERMAT_ANGLE: f64 = 2.0 * FRAC_PI_3;

const FERMAT_ANGLE_SLACK: f64 = 1e-12;
const FERMAT_POLISH_TOL: f64 = 1e-10;

/// A point of the Euclidean plane. Serialized as an `[x, y]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Self {
        Point { x, y }
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    /// Builds a point, rejecting NaN and infinite coordinates.
    pub fn try_new(x: f64, y: f64) -> Result<Self> {
        let p = Point { x, y };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.x.is_finite() && self.y.is_finite() {
            Ok(())
        } else {
            Err(Error::NonFinite { x: self.x, y: self.y })
        }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn midpoint(self, other: Point) -> Point {
        Point::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }

    /// Counter-clockwise rotation by a quarter turn.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    /// Total order on coordinates, x first.
    pub fn lex_cmp(&self, other: &Point) -> Ordering {
        self.x.total_cmp(&other.x).then_with(|| self.y.total_cmp(&other.y))
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

/// Predicate and solver slack.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    /// Slack for geometric predicates and improvement thresholds.
    pub eps_geom: f64,
    /// Acceptance slack for optimisation-based witnesses.
    pub eps_opt: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            eps_geom: 1e-9,
            eps_opt: 1e-7,
        }
    }
}

impl Tolerance {
    pub fn new(eps_geom: f64, eps_opt: f64) -> Result<Self> {
        for (name, value) in [("eps_geom", eps_geom), ("eps_opt", eps_opt)] {
            if !(value > 0.0 && value < 1e-3) {
                return Err(Error::Domain {
                    name,
                    value,
                    domain: "(0, 1e-3)",
                });
            }
        }
        Ok(Tolerance { eps_geom, eps_opt })
    }
}

/// Euclidean distance.
pub fn distance(p: Point, q: Point) -> f64 {
    (p.x - q.x).hypot(p.y - q.y)
}

/// Sign of the turn `a -> b -> c`, evaluated with adaptive-precision
/// arithmetic: positive for counter-clockwise, negative for clockwise and
/// exactly zero for collinear inputs.
pub fn orient2d(a: Point, b: Point, c: Point) -> f64 {
    robust::orient2d(
        robust::Coord { x: a.x, y: a.y },
        robust::Coord { x: b.x, y: b.y },
        robust::Coord { x: c.x, y: c.y },
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    a: Point,
    b: Point,
}

impl Segment {
    /// Builds a segment whose endpoints are more than `eps_geom` apart.
    pub fn new(a: Point, b: Point, tol: &Tolerance) -> Result<Self> {
        a.validate()?;
        b.validate()?;
        if distance(a, b) <= tol.eps_geom {
            return Err(Error::DegenerateSegment(a));
        }
        Ok(Segment { a, b })
    }

    pub fn a(&self) -> Point {
        self.a
    }

    pub fn b(&self) -> Point {
        self.b
    }

    pub fn length(&self) -> f64 {
        distance(self.a, self.b)
    }

    pub fn midpoint(&self) -> Point {
        self.a.midpoint(self.b)
    }
}

/// Proper crossing test: the open segments share exactly one point.
///
/// Touching at an endpoint and collinear overlap both count as not crossing.
pub fn segments_cross(s1: &Segment, s2: &Segment) -> bool {
    let o1 = orient2d(s1.a, s1.b, s2.a);
    let o2 = orient2d(s1.a, s1.b, s2.b);
    let o3 = orient2d(s2.a, s2.b, s1.a);
    let o4 = orient2d(s2.a, s2.b, s1.b);
    o1 * o2 < 0.0 && o3 * o4 < 0.0
}

/// A closed disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: Point,
    pub radius: f64,
}

impl Disk {
    pub fn new(center: Point, radius: f64) -> Result<Self> {
        center.validate()?;
        if !(radius >= 0.0 && radius.is_finite()) {
            return Err(Error::InvalidRadius(radius));
        }
        Ok(Disk { center, radius })
    }

    /// Same center, radius multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Disk {
        Disk {
            center: self.center,
            radius: self.radius * factor,
        }
    }

    /// Signed distance from `p` to the disk boundary (negative inside).
    pub fn excess(&self, p: Point) -> f64 {
        distance(p, self.center) - self.radius
    }

    pub fn contains(&self, p: Point, tol: &Tolerance) -> bool {
        self.excess(p) <= tol.eps_geom
    }
}

/// The disk having `s` as a diameter.
pub fn diametral_disk(s: &Segment) -> Disk {
    Disk {
        center: s.midpoint(),
        radius: 0.5 * s.length(),
    }
}

/// Closed-disk intersection test; tangency counts.
pub fn disks_intersect(d1: &Disk, d2: &Disk, tol: &Tolerance) -> bool {
    distance(d1.center, d2.center) <= d1.radius + d2.radius + tol.eps_geom
}

/// Intersection points of the two boundary circles.
///
/// Returns one point for tangency within `eps_geom`, none for disjoint or
/// strictly nested circles. For a proper lens the point to the left of the
/// directed line between the centers comes first.
pub fn circle_pair_points(d1: &Disk, d2: &Disk, tol: &Tolerance) -> Result<Vec<Point>> {
    let eps = tol.eps_geom;
    let delta = d2.center - d1.center;
    let d = delta.norm();
    if d <= eps {
        if (d1.radius - d2.radius).abs() <= eps {
            return Err(Error::IdenticalCircles);
        }
        return Ok(Vec::new());
    }
    let (r1, r2) = (d1.radius, d2.radius);
    let u = delta * (1.0 / d);
    if d > r1 + r2 + eps || d < (r1 - r2).abs() - eps {
        return Ok(Vec::new());
    }
    if (d - (r1 + r2)).abs() <= eps {
        return Ok(vec![d1.center + u * r1]);
    }
    if (d - (r1 - r2).abs()).abs() <= eps {
        let dir = if r1 >= r2 { 1.0 } else { -1.0 };
        return Ok(vec![d1.center + u * (dir * r1)]);
    }
    let along = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
    let h = (r1 * r1 - along * along).max(0.0).sqrt();
    let base = d1.center + u * along;
    let offset = u.perp() * h;
    Ok(vec![base + offset, base - offset])
}

/// Of the boundary intersection points of `d1` and `d2`, the one closer to
/// the center of `d3`; exact ties go to the lexicographically smaller point.
pub fn innermost_point(d1: &Disk, d2: &Disk, d3: &Disk, tol: &Tolerance) -> Result<Point> {
    for (i, j, da, db) in [(1, 2, d1, d2), (2, 3, d2, d3), (1, 3, d1, d3)] {
        if !disks_intersect(da, db, tol) {
            return Err(Error::Precondition(format!("disks {i} and {j} do not intersect")));
        }
    }
    let pts = circle_pair_points(d1, d2, tol)?;
    pts.into_iter()
        .min_by(|p, q| {
            let dp = distance(*p, d3.center);
            let dq = distance(*q, d3.center);
            if (dp - dq).abs() <= tol.eps_geom {
                p.lex_cmp(q)
            } else {
                dp.total_cmp(&dq)
            }
        })
        .ok_or_else(|| Error::Precondition("boundaries of disks 1 and 2 do not meet".into()))
}

/// Interior angle of triangle `a b c` at vertex `a`, in `[0, π]`.
fn angle_at(a: Point, b: Point, c: Point) -> f64 {
    let u = b - a;
    let v = c - a;
    u.cross(v).abs().atan2(u.dot(v))
}

fn total_distance(x: Point, pts: &[Point; 3]) -> f64 {
    pts.iter().map(|p| distance(x, *p)).sum()
}

/// The point minimising the sum of distances to the three vertices.
///
/// A vertex whose angle is at least `2π/3` is its own Fermat point; otherwise
/// the first isogonic center is built in barycentric form and polished by
/// Weiszfeld steps.
pub fn fermat_point(a: Point, b: Point, c: Point) -> Point {
    let pts = [a, b, c];
    // A repeated vertex carries double weight and wins outright.
    for (p, q) in [(a, b), (b, c), (a, c)] {
        if p == q {
            return p;
        }
    }
    let angles = [angle_at(a, b, c), angle_at(b, c, a), angle_at(c, a, b)];
    if let Some(i) = (0..3).find(|&i| angles[i] >= FERMAT_ANGLE - FERMAT_ANGLE_SLACK) {
        return pts[i];
    }

    let sides = [distance(b, c), distance(c, a), distance(a, b)];
    let weights: Vec<f64> = (0..3).map(|i| sides[i] / (angles[i] + FRAC_PI_3).sin()).collect();
    let total: f64 = weights.iter().sum();
    let mut x = Point::new(
        (0..3).map(|i| weights[i] * pts[i].x).sum::<f64>() / total,
        (0..3).map(|i| weights[i] * pts[i].y).sum::<f64>() / total,
    );

    let mut best = total_distance(x, &pts);
    for _ in 0..100 {
        let mut num = Point::default();
        let mut den = 0.0;
        for p in &pts {
            let d = distance(x, *p);
            if d < f64::EPSILON {
                return x;
            }
            num = num + *p * (1.0 / d);
            den += 1.0 / d;
        }
        let next = num * (1.0 / den);
        let value = total_distance(next, &pts);
        let step = distance(next, x);
        if value <= best {
            best = value;
            x = next;
        }
        if step < FERMAT_POLISH_TOL {
            break;
        }
    }
    x
}

/// `√(r²+1+2x) + √(r²+1−2x)`: the sum of distances from a point on the
/// circle of radius `r` around the midpoint of the segment `(−1,0)-(1,0)`,
/// with abscissa `x`, to the two endpoints.
pub fn endpoint_bound(x: f64, r: f64) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::Domain {
            name: "r",
            value: r,
            domain: "(0, inf)",
        });
    }
    if !(0.0..=r).contains(&x) {
        return Err(Error::Domain {
            name: "x",
            value: x,
            domain: "[0, r]",
        });
    }
    let base = r * r + 1.0;
    Ok((base + 2.0 * x).sqrt() + (base - 2.0 * x).max(0.0).sqrt())
}

/// `2·sin((4π − 3α)/6)/√3`: the distance `|pq|` in the extremal quadrilateral
/// configuration with apex angle `α` at `p` and `|pa| = 1`.
pub fn diameter_bound(alpha: f64) -> Result<f64> {
    if !(0.0..=PI).contains(&alpha) {
        return Err(Error::Domain {
            name: "alpha",
            value: alpha,
            domain: "[0, pi]",
        });
    }
    Ok(2.0 * ((4.0 * PI - 3.0 * alpha) / 6.0).sin() / 3f64.sqrt())
}

/// Strictly convex hull in counter-clockwise order (collinear boundary points
/// are dropped), via the monotone chain.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts = points.to_vec();
    pts.sort_by(|p, q| p.lex_cmp(q));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 && orient2d(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: Tolerance = Tolerance {
        eps_geom: 1e-9,
        eps_opt: 1e-7,
    };

    fn seg(ax: f64, ay: f64, bx: f64, by: f64) -> Segment {
        Segment::new(Point::new(ax, ay), Point::new(bx, by), &TOL).unwrap()
    }

    fn unit(x: f64, y: f64) -> Disk {
        Disk::new(Point::new(x, y), 1.0).unwrap()
    }

    fn close(p: Point, q: Point, eps: f64) -> bool {
        distance(p, q) <= eps
    }

    #[test]
    fn distance_examples() {
        assert_eq!(distance(Point::new(0.0, 0.0), Point::new(0.0, 0.0)), 0.0);
        assert_eq!(distance(Point::new(0.0, 0.0), Point::new(3.0, 4.0)), 5.0);
        assert_eq!(distance(Point::new(-1.0, 0.0), Point::new(1.0, 0.0)), 2.0);
    }

    #[test]
    fn rejects_non_finite() {
        assert!(Point::try_new(f64::NAN, 0.0).is_err());
        assert!(Point::try_new(0.0, f64::INFINITY).is_err());
        assert!(Tolerance::new(0.0, 1e-7).is_err());
        assert!(Tolerance::new(1e-9, 1e-2).is_err());
    }

    #[test]
    fn crossing_examples() {
        assert!(segments_cross(&seg(0.0, 0.0, 2.0, 2.0), &seg(0.0, 2.0, 2.0, 0.0)));
        assert!(!segments_cross(&seg(0.0, 0.0, 1.0, 0.0), &seg(2.0, 0.0, 3.0, 0.0)));
        // T-junction: the endpoint (1,0) lies on the first segment.
        assert!(!segments_cross(&seg(0.0, 0.0, 2.0, 0.0), &seg(1.0, 0.0, 1.0, 5.0)));
        // Shared endpoint and collinear overlap.
        assert!(!segments_cross(&seg(0.0, 0.0, 1.0, 1.0), &seg(1.0, 1.0, 2.0, 0.0)));
        assert!(!segments_cross(&seg(0.0, 0.0, 2.0, 0.0), &seg(1.0, 0.0, 3.0, 0.0)));
    }

    #[test]
    fn degenerate_segment_is_an_error() {
        let p = Point::new(1.0, 1.0);
        assert_eq!(Segment::new(p, p, &TOL), Err(Error::DegenerateSegment(p)));
    }

    #[test]
    fn diametral_disk_examples() {
        let d = diametral_disk(&seg(-1.0, 0.0, 1.0, 0.0));
        assert_eq!((d.center, d.radius), (Point::new(0.0, 0.0), 1.0));
        let d = diametral_disk(&seg(0.0, 0.0, 0.0, 4.0));
        assert_eq!((d.center, d.radius), (Point::new(0.0, 2.0), 2.0));
        let d = diametral_disk(&seg(1.0, 1.0, 4.0, 5.0));
        assert_eq!((d.center, d.radius), (Point::new(2.5, 3.0), 2.5));
    }

    #[test]
    fn disk_intersection_examples() {
        assert!(disks_intersect(&unit(0.0, 0.0), &unit(2.0, 0.0), &TOL));
        assert!(!disks_intersect(&unit(0.0, 0.0), &unit(2.1, 0.0), &TOL));
        let big = Disk::new(Point::new(1.0, 0.0), 3.0).unwrap();
        assert!(disks_intersect(&unit(0.0, 0.0), &big, &TOL));
        assert!(Disk::new(Point::new(0.0, 0.0), -1.0).is_err());
    }

    #[test]
    fn circle_pair_examples() {
        let pts = circle_pair_points(&unit(0.0, 0.0), &unit(2.0, 0.0), &TOL).unwrap();
        assert_eq!(pts, vec![Point::new(1.0, 0.0)]);

        let pts = circle_pair_points(&unit(0.0, 0.0), &unit(1.0, 0.0), &TOL).unwrap();
        let h = 3f64.sqrt() / 2.0;
        assert_eq!(pts.len(), 2);
        assert!(close(pts[0], Point::new(0.5, h), 1e-12));
        assert!(close(pts[1], Point::new(0.5, -h), 1e-12));

        assert!(circle_pair_points(&unit(0.0, 0.0), &unit(3.0, 0.0), &TOL)
            .unwrap()
            .is_empty());
        // Strictly nested.
        let big = Disk::new(Point::new(0.0, 0.0), 5.0).unwrap();
        assert!(circle_pair_points(&unit(1.0, 0.0), &big, &TOL).unwrap().is_empty());
        // Internal tangency.
        let pts = circle_pair_points(&unit(3.0, 0.0), &Disk::new(Point::default(), 4.0).unwrap(), &TOL).unwrap();
        assert_eq!(pts.len(), 1);
        assert!(close(pts[0], Point::new(4.0, 0.0), 1e-12));

        assert_eq!(
            circle_pair_points(&unit(1.0, 1.0), &unit(1.0, 1.0), &TOL),
            Err(Error::IdenticalCircles)
        );
    }

    #[test]
    fn innermost_examples() {
        let s3 = 3f64.sqrt();
        let p = innermost_point(&unit(0.0, 0.0), &unit(2.0, 0.0), &unit(1.0, s3), &TOL).unwrap();
        assert!(close(p, Point::new(1.0, 0.0), 1e-12));

        // A third disk far below selects the lower lens corner; it must still
        // meet the other two for the precondition.
        let third = Disk::new(Point::new(0.5, -5.0), 5.0).unwrap();
        let p = innermost_point(&unit(0.0, 0.0), &unit(1.0, 0.0), &third, &TOL).unwrap();
        assert!(close(p, Point::new(0.5, -s3 / 2.0), 1e-12));

        // Third center on the axis of symmetry: tie goes to the smaller y.
        let third = Disk::new(Point::new(0.5, 0.0), 0.1).unwrap();
        let p = innermost_point(&unit(0.0, 0.0), &unit(1.0, 0.0), &third, &TOL).unwrap();
        assert!(close(p, Point::new(0.5, -s3 / 2.0), 1e-12));

        let far = unit(10.0, 10.0);
        assert!(matches!(
            innermost_point(&unit(0.0, 0.0), &unit(1.0, 0.0), &far, &TOL),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn fermat_examples() {
        let h = 3f64.sqrt() / 2.0;
        let f = fermat_point(Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.5, h));
        assert!(close(f, Point::new(0.5, 3f64.sqrt() / 6.0), 1e-12));

        let apex = Point::new(0.5, 0.01);
        assert_eq!(fermat_point(Point::new(0.0, 0.0), Point::new(1.0, 0.0), apex), apex);

        let f = fermat_point(Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(2.0, 0.0));
        assert_eq!(f, Point::new(1.0, 0.0));

        let f = fermat_point(Point::new(0.0, 0.0), Point::new(0.0, 0.0), Point::new(2.0, 0.0));
        assert_eq!(f, Point::new(0.0, 0.0));
    }

    #[test]
    fn fermat_interior_subtends_equal_angles() {
        let (a, b, c) = (Point::new(0.0, 0.0), Point::new(4.0, 0.0), Point::new(1.0, 3.0));
        let f = fermat_point(a, b, c);
        for (p, q) in [(a, b), (b, c), (c, a)] {
            assert!((angle_at(f, p, q) - FERMAT_ANGLE).abs() < 1e-8);
        }
    }

    #[test]
    fn endpoint_bound_examples() {
        let sq = |v: f64| v.sqrt();
        assert!((endpoint_bound(0.0, 1.0).unwrap() - 2.0 * sq(2.0)).abs() < 1e-15);
        let r = 2.0 / sq(3.0);
        assert!((endpoint_bound(0.0, r).unwrap() - 2.0 * sq(7.0 / 3.0)).abs() < 1e-14);
        assert!((endpoint_bound(0.0, r).unwrap() - 3.055050).abs() < 1e-6);
        assert_eq!(endpoint_bound(1.0, 1.0).unwrap(), 2.0);
        assert!(endpoint_bound(1.5, 1.0).is_err());
        assert!(endpoint_bound(-0.1, 1.0).is_err());
        assert!(endpoint_bound(0.0, 0.0).is_err());
    }

    #[test]
    fn diameter_bound_examples() {
        assert!((diameter_bound(PI / 3.0).unwrap() - 2.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!((diameter_bound(PI / 3.0).unwrap() - 1.154701).abs() < 1e-6);
        // sin(π/6) = 1/2 and sin(2π/3) = √3/2, evaluated independently.
        assert!((diameter_bound(PI).unwrap() - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!((diameter_bound(0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(diameter_bound(-0.01).is_err());
        assert!(diameter_bound(PI + 0.01).is_err());
    }

    #[test]
    fn hull_drops_interior_and_collinear_points() {
        let pts = [
            Point::new(0.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(2.0, 2.0),
            Point::new(0.0, 2.0),
            Point::new(1.0, 1.0),
        ];
        assert_eq!(convex_hull(&pts).len(), 4);
    }
}
