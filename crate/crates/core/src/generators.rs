//! Deterministic instance generators.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::certificates::DiskFamily;
use crate::error::{Error, Result};
use crate::geometry::{convex_hull, distance, orient2d, Disk, Point};
use crate::matching::{Matching, PointSet};

/// Minimum separation between generated points, relative to the box size.
const MIN_SEPARATION: f64 = 1e-6;
/// Minimum |orient2d| of any generated triple, relative to the squared box size.
const MIN_TURN: f64 = 1e-10;

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Whether `p` keeps the points well separated and in general position.
pub fn fits_general_position(points: &[Point], p: Point, bbox: f64) -> bool {
    let sep = MIN_SEPARATION * bbox;
    let turn = MIN_TURN * bbox * bbox;
    for (i, &a) in points.iter().enumerate() {
        if distance(a, p) <= sep {
            return false;
        }
        for &b in &points[i + 1..] {
            if orient2d(a, b, p).abs() <= turn {
                return false;
            }
        }
    }
    true
}

fn check_even(n: usize, min: usize) -> Result<()> {
    if n % 2 == 1 || n < min {
        return Err(Error::Precondition(format!(
            "need an even number of points >= {min}, got {n}"
        )));
    }
    Ok(())
}

/// `n` uniform points in `[0, bbox]²`, resampled until pairwise distinct and
/// free of (near-)collinear triples.
pub fn gen_random(n: usize, seed: u64, bbox: f64) -> Result<PointSet> {
    check_even(n, 2)?;
    if !(bbox > 0.0 && bbox.is_finite()) {
        return Err(Error::Domain {
            name: "bbox",
            value: bbox,
            domain: "(0, inf)",
        });
    }
    let mut rng = rng_for(seed);
    PointSet::new(random_points(&mut rng, n, bbox))
}

pub(crate) fn random_points<R: Rng>(rng: &mut R, n: usize, bbox: f64) -> Vec<Point> {
    let mut points = Vec::with_capacity(n);
    while points.len() < n {
        let p = Point::new(rng.random::<f64>() * bbox, rng.random::<f64>() * bbox);
        if fits_general_position(&points, p, bbox) {
            points.push(p);
        }
    }
    points
}

/// `n` points on the unit circle at jittered, angle-sorted positions.
pub fn gen_convex(n: usize, seed: u64) -> Result<PointSet> {
    check_even(n, 4)?;
    let mut rng = rng_for(seed);
    let step = 2.0 * PI / n as f64;
    let offset = rng.random::<f64>() * 2.0 * PI;
    let points: Vec<Point> = (0..n)
        .map(|i| {
            let jitter = (rng.random::<f64>() - 0.5) * 0.8 * step;
            let t = offset + step * i as f64 + jitter;
            Point::new(t.cos(), t.sin())
        })
        .collect();
    if convex_hull(&points).len() != n {
        return Err(Error::Infeasible("generated points are not in convex position".into()));
    }
    PointSet::new(points)
}

/// Chord length on a circle of radius `radius` subtending angle `theta`.
fn chord(radius: f64, theta: f64) -> f64 {
    2.0 * radius * (0.5 * theta).sin()
}

/// Central angle of a chord of length `len`.
fn chord_angle(radius: f64, len: f64) -> f64 {
    2.0 * (len / (2.0 * radius)).min(1.0).asin()
}

/// `2n` points on a circle whose consecutive distances alternate between 1
/// and `eps`, starting with a unit chord; the matching pairs the unit chords.
pub fn gen_circle_alternating(n: usize, eps: f64) -> Result<(PointSet, Matching)> {
    if n < 3 {
        return Err(Error::Precondition(format!("need at least 3 pairs, got {n}")));
    }
    if !(eps > 0.0 && eps < 0.1) {
        return Err(Error::Domain {
            name: "eps",
            value: eps,
            domain: "(0, 0.1)",
        });
    }
    // Total angle n·(θ₁ + θ₂) decreases in the radius; bisect for 2π.
    let total = |r: f64| n as f64 * (chord_angle(r, 1.0) + chord_angle(r, eps));
    let (mut lo, mut hi) = (0.5, 1.0);
    while total(hi) > 2.0 * PI {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::Infeasible("no circle radius fits".into()));
        }
    }
    if total(lo) < 2.0 * PI {
        return Err(Error::Infeasible("no circle radius fits".into()));
    }
    while hi - lo > 1e-12 * hi {
        let mid = 0.5 * (lo + hi);
        if total(mid) > 2.0 * PI {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let radius = 0.5 * (lo + hi);
    let (t1, t2) = (chord_angle(radius, 1.0), chord_angle(radius, eps));
    // Spread the residual angle evenly so the polygon closes exactly.
    let residual = (2.0 * PI - total(radius)) / (2 * n) as f64;
    let mut points = Vec::with_capacity(2 * n);
    let mut angle: f64 = 0.0;
    for i in 0..2 * n {
        points.push(Point::new(radius * angle.cos(), radius * angle.sin()));
        angle += if i % 2 == 0 { t1 } else { t2 } + residual;
    }
    debug_assert!((chord(radius, t1) - 1.0).abs() < 1e-9);
    let matching = Matching::new((0..n).map(|i| (2 * i, 2 * i + 1)));
    Ok((PointSet::new(points)?, matching))
}

/// Three unit disks that pairwise touch: centers `(0,0)`, `(2,0)`, `(1,√3)`.
pub fn gen_tangent_disks() -> DiskFamily {
    let c = [Point::new(0.0, 0.0), Point::new(2.0, 0.0), Point::new(1.0, 3f64.sqrt())];
    DiskFamily {
        disks: c.iter().map(|&p| Disk { center: p, radius: 1.0 }).collect(),
        scale: 1.0,
    }
}

/// `count` disks with random centers in the unit square and random radii,
/// uniformly rescaled so that they pairwise intersect with at least one
/// tangent pair.
pub fn gen_pairwise_intersecting_disks(count: usize, seed: u64) -> Result<DiskFamily> {
    if count < 2 {
        return Err(Error::Precondition("need at least two disks".into()));
    }
    let mut rng = rng_for(seed);
    let centers = random_points(&mut rng, count, 1.0);
    let radii: Vec<f64> = (0..count).map(|_| 0.05 + rng.random::<f64>()).collect();
    let mut factor: f64 = 0.0;
    for i in 0..count {
        for j in i + 1..count {
            factor = factor.max(distance(centers[i], centers[j]) / (radii[i] + radii[j]));
        }
    }
    let disks = centers
        .into_iter()
        .zip(radii)
        .map(|(c, r)| Disk::new(c, r * factor))
        .collect::<Result<Vec<_>>>()?;
    DiskFamily::new(disks, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{disks_intersect, Tolerance};

    #[test]
    fn random_sets_are_valid_and_deterministic() {
        let a = gen_random(4, 7, 10.0).unwrap();
        let b = gen_random(4, 7, 10.0).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, gen_random(4, 8, 10.0).unwrap());
        assert!(crate::crossing::check_general_position(&a).is_ok());
        assert_eq!(gen_random(2, 1, 1.0).unwrap().len(), 2);
        assert!(gen_random(3, 1, 1.0).is_err());
        assert!(gen_random(4, 1, 0.0).is_err());
    }

    #[test]
    fn convex_sets_have_full_hull() {
        for n in [4, 6, 8, 10] {
            let ps = gen_convex(n, 3).unwrap();
            assert_eq!(convex_hull(ps.points()).len(), n);
            assert_eq!(ps, gen_convex(n, 3).unwrap());
        }
        assert!(gen_convex(2, 0).is_err());
    }

    #[test]
    fn alternating_circle_chords() {
        let (ps, m) = gen_circle_alternating(20, 0.01).unwrap();
        assert_eq!(ps.len(), 40);
        for i in 0..40 {
            let expect = if i % 2 == 0 { 1.0 } else { 0.01 };
            assert!((ps.dist(i, (i + 1) % 40) - expect).abs() < 1e-9, "chord {i}");
        }
        assert!((m.weight(&ps).unwrap() - 20.0).abs() < 1e-6);
        assert!(gen_circle_alternating(2, 0.01).is_err());
        assert!(gen_circle_alternating(5, 0.2).is_err());
    }

    #[test]
    fn tangent_disks_touch() {
        let df = gen_tangent_disks();
        let tol = Tolerance::default();
        for i in 0..3 {
            for j in i + 1..3 {
                assert!(disks_intersect(&df.disks[i], &df.disks[j], &tol));
            }
        }
    }

    #[test]
    fn random_disk_families_pairwise_intersect() {
        let tol = Tolerance::default();
        for seed in 0..20 {
            let df = gen_pairwise_intersecting_disks(5, seed).unwrap();
            for i in 0..5 {
                for j in i + 1..5 {
                    assert!(disks_intersect(&df.disks[i], &df.disks[j], &tol));
                }
            }
        }
    }
}
