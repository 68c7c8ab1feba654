//! Geometric witnesses behind the ratio bounds for local maximum matchings.
//!
//! A certificate for a matching `M` is a point `c` together with the chain
//!
//! ```text
//! w(M*) <= w(S) <= beta * w(M)
//! ```
//!
//! where `S` is the star joining `c` to every endpoint. The right inequality
//! is checked edge by edge (`|ca| + |cb| <= beta * |ab|`), the left one
//! against the exact oracle when the instance is small enough.
//!
//! | kind               | witness                                 | beta      |
//! |--------------------|-----------------------------------------|-----------|
//! | `Local2`           | common point of diametral disks × 2/√3  | √(7/3)    |
//! | `Local3Sqrt2`      | common point of diametral disks         | √2        |
//! | `Local3Fingerhut`  | common point of the 2/√3-ellipses       | 2/√3      |

pub mod minimax;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{diametral_disk, distance, Disk, Point, Segment, Tolerance};
use crate::matching::{is_k_local_max, optimal_value, weight, Matching, Objective, PointSet, DEFAULT_ORACLE_CAP};
use minimax::{minimize_max, MaxOfConvex, MinimaxConfig};

/// Radius factor after which pairwise intersecting disks share a point.
pub fn enlargement_factor() -> f64 {
    2.0 / 3f64.sqrt()
}

/// Diametral disks of a matching, with a common radius multiplier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiskFamily {
    /// Disks at scale 1.
    pub disks: Vec<Disk>,
    pub scale: f64,
}

impl DiskFamily {
    pub fn new(disks: Vec<Disk>, scale: f64) -> Result<Self> {
        check_scale(scale)?;
        Ok(DiskFamily { disks, scale })
    }

    pub fn with_scale(&self, scale: f64) -> Result<Self> {
        Self::new(self.disks.clone(), scale)
    }

    /// Disks with the multiplier applied.
    pub fn scaled_disks(&self) -> impl Iterator<Item = Disk> + '_ {
        self.disks.iter().map(move |d| d.scaled(self.scale))
    }

    pub fn len(&self) -> usize {
        self.disks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.disks.is_empty()
    }
}

fn check_scale(scale: f64) -> Result<()> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::Domain {
            name: "scale",
            value: scale,
            domain: "(0, inf)",
        });
    }
    Ok(())
}

/// One diametral disk per edge of `m`, radii multiplied by `scale`.
pub fn diametral_family(m: &Matching, ps: &PointSet, scale: f64) -> Result<DiskFamily> {
    check_scale(scale)?;
    m.validate(ps.len())?;
    let tol = Tolerance::default();
    let disks = m
        .pairs()
        .iter()
        .map(|&(i, j)| Ok(diametral_disk(&Segment::new(ps.point(i), ps.point(j), &tol)?)))
        .collect::<Result<Vec<_>>>()?;
    DiskFamily::new(disks, scale)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessKind {
    Diametral,
    Enlarged,
    Fingerhut,
}

/// A candidate common point and its worst constraint violation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CenterWitness {
    pub point: Point,
    /// Maximum signed violation; non-positive means the point is feasible.
    pub slack: f64,
    pub kind: WitnessKind,
}

impl CenterWitness {
    pub fn is_valid(&self, tol: &Tolerance) -> bool {
        self.slack <= tol.eps_opt
    }
}

/// `x ↦ max_i |x − c_i| − r_i` over a disk family.
struct DiskExcess {
    centers: Vec<Point>,
    radii: Vec<f64>,
    scale: f64,
}

impl DiskExcess {
    fn new(df: &DiskFamily) -> Self {
        let centers: Vec<Point> = df.disks.iter().map(|d| d.center).collect();
        let radii: Vec<f64> = df.scaled_disks().map(|d| d.radius).collect();
        let mut scale = radii.iter().copied().fold(0.0, f64::max);
        for a in &centers {
            for b in &centers {
                scale = scale.max(distance(*a, *b));
            }
        }
        DiskExcess {
            centers,
            radii,
            scale: if scale > 0.0 { scale } else { 1.0 },
        }
    }
}

impl MaxOfConvex for DiskExcess {
    fn len(&self) -> usize {
        self.centers.len()
    }

    fn term(&self, i: usize, x: Point) -> f64 {
        distance(x, self.centers[i]) - self.radii[i]
    }

    fn term_grad(&self, i: usize, x: Point) -> Point {
        let v = x - self.centers[i];
        let n = v.norm();
        if n == 0.0 {
            Point::default()
        } else {
            v * (1.0 / n)
        }
    }

    fn scale(&self) -> f64 {
        self.scale
    }
}

fn centroid(points: &[Point]) -> Point {
    let sum = points.iter().fold(Point::default(), |acc, p| acc + *p);
    sum * (1.0 / points.len() as f64)
}

fn solver_config(tol: &Tolerance) -> MinimaxConfig {
    MinimaxConfig {
        eps: tol.eps_opt * 1e-3,
        ..MinimaxConfig::default()
    }
}

/// Point minimising the largest excess `|x − c_i| − s·r_i` over the family.
///
/// Slack at most `eps_opt` certifies a common point of all disks.
pub fn common_point(df: &DiskFamily, tol: &Tolerance) -> Result<CenterWitness> {
    if df.is_empty() {
        return Err(Error::Precondition("empty disk family".into()));
    }
    let problem = DiskExcess::new(df);
    let mut starts = problem.centers.clone();
    starts.push(centroid(&problem.centers));
    let sol = minimize_max(&problem, &starts, &solver_config(tol));
    Ok(CenterWitness {
        point: sol.point,
        slack: sol.value,
        kind: if df.scale == 1.0 {
            WitnessKind::Diametral
        } else {
            WitnessKind::Enlarged
        },
    })
}

/// Objective of the Fingerhut center problem.
pub fn fingerhut_value(m: &Matching, ps: &PointSet, x: Point) -> f64 {
    m.pairs()
        .iter()
        .map(|&(i, j)| (distance(x, ps.point(i)) + distance(x, ps.point(j))) / ps.dist(i, j))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `x ↦ max_i (|x − a_i| + |x − b_i|) / |a_i b_i|`.
struct EllipseRatio {
    foci: Vec<(Point, Point, f64)>,
}

impl MaxOfConvex for EllipseRatio {
    fn len(&self) -> usize {
        self.foci.len()
    }

    fn term(&self, i: usize, x: Point) -> f64 {
        let (a, b, len) = self.foci[i];
        (distance(x, a) + distance(x, b)) / len
    }

    fn term_grad(&self, i: usize, x: Point) -> Point {
        let (a, b, len) = self.foci[i];
        let unit = |v: Point| {
            let n = v.norm();
            if n == 0.0 {
                Point::default()
            } else {
                v * (1.0 / n)
            }
        };
        (unit(x - a) + unit(x - b)) * (1.0 / len)
    }

    fn scale(&self) -> f64 {
        1.0
    }
}

/// Point minimising the worst normalised focal-distance sum over the edges.
/// The slack is reported relative to `2/√3`.
pub fn fingerhut_center(m: &Matching, ps: &PointSet, tol: &Tolerance) -> Result<CenterWitness> {
    if m.is_empty() {
        return Err(Error::Precondition("empty matching".into()));
    }
    m.validate(ps.len())?;
    let foci: Vec<(Point, Point, f64)> = m
        .pairs()
        .iter()
        .map(|&(i, j)| (ps.point(i), ps.point(j), ps.dist(i, j)))
        .collect();
    let mids: Vec<Point> = foci.iter().map(|(a, b, _)| a.midpoint(*b)).collect();
    let mut starts = mids.clone();
    starts.push(centroid(&mids));
    let sol = minimize_max(&EllipseRatio { foci }, &starts, &solver_config(tol));
    Ok(CenterWitness {
        point: sol.point,
        slack: sol.value - enlargement_factor(),
        kind: WitnessKind::Fingerhut,
    })
}

/// Total distance from `c` to every point.
pub fn star_weight(c: Point, ps: &PointSet) -> f64 {
    ps.points().iter().map(|p| distance(c, *p)).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    Local2,
    Local3Sqrt2,
    Local3Fingerhut,
}

impl CertificateKind {
    /// Locality the certificate presumes.
    pub fn locality(self) -> usize {
        match self {
            CertificateKind::Local2 => 2,
            _ => 3,
        }
    }

    /// Per-edge stretch bound `beta`.
    pub fn beta(self) -> f64 {
        match self {
            CertificateKind::Local2 => (7.0f64 / 3.0).sqrt(),
            CertificateKind::Local3Sqrt2 => 2f64.sqrt(),
            CertificateKind::Local3Fingerhut => enlargement_factor(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeCheck {
    pub edge: (usize, usize),
    /// `|ca| + |cb|`
    pub star_pair: f64,
    /// `beta · |ab|`
    pub bound: f64,
}

impl EdgeCheck {
    pub fn holds(&self, tol: &Tolerance) -> bool {
        self.star_pair <= self.bound + tol.eps_opt
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub witness: CenterWitness,
    pub star_weight: f64,
    pub matching_weight: f64,
    /// Exact maximum weight, when the instance is within the oracle cap.
    pub global_weight: Option<f64>,
    pub beta: f64,
    pub per_edge_checks: Vec<EdgeCheck>,
    /// All per-edge checks and both chain inequalities hold.
    pub valid: bool,
}

impl Certificate {
    /// Lower bound on `w(M) / w(M*)` implied by the chain.
    pub fn implied_ratio(&self) -> f64 {
        1.0 / self.beta
    }
}

/// Certificate of the given kind for a matching that passes the locality
/// check.
pub fn certify(ps: &PointSet, m: &Matching, kind: CertificateKind, tol: &Tolerance) -> Result<Certificate> {
    m.validate_perfect(ps.len())?;
    if m.is_empty() {
        return Err(Error::Precondition("empty matching".into()));
    }
    let k = kind.locality().min(m.len());
    let check = is_k_local_max(ps, m, k, tol)?;
    if let Some(subset) = check.violating_subset {
        return Err(Error::NotLocal {
            k,
            subset,
            gain: check.gain,
        });
    }

    let witness = match kind {
        CertificateKind::Local2 => common_point(&diametral_family(m, ps, enlargement_factor())?, tol)?,
        CertificateKind::Local3Sqrt2 => common_point(&diametral_family(m, ps, 1.0)?, tol)?,
        CertificateKind::Local3Fingerhut => fingerhut_center(m, ps, tol)?,
    };
    if !witness.is_valid(tol) {
        return Err(Error::WitnessSlack {
            slack: witness.slack,
            tolerance: tol.eps_opt,
        });
    }

    let beta = kind.beta();
    let c = witness.point;
    let per_edge_checks: Vec<EdgeCheck> = m
        .pairs()
        .iter()
        .map(|&(i, j)| EdgeCheck {
            edge: (i, j),
            star_pair: distance(c, ps.point(i)) + distance(c, ps.point(j)),
            bound: beta * ps.dist(i, j),
        })
        .collect();
    let star = star_weight(c, ps);
    let matching_weight = weight(m, ps)?;
    let global_weight = if ps.len() <= DEFAULT_ORACLE_CAP {
        Some(optimal_value(ps, Objective::Maximize)?)
    } else {
        None
    };
    let chain_tol = tol.eps_opt * m.len() as f64;
    let valid = per_edge_checks.iter().all(|e| e.holds(tol))
        && star <= beta * matching_weight + chain_tol
        && global_weight.is_none_or(|g| g <= star + chain_tol);

    Ok(Certificate {
        kind,
        witness,
        star_weight: star,
        matching_weight,
        global_weight,
        beta,
        per_edge_checks,
        valid,
    })
}
