//! Perfect matchings on planar point sets.
//!
//! [`PointSet`] and [`Matching`] are the shared instance types. The
//! submodules hold the exact oracle and the local search machinery, plus
//! the decomposition of two matchings into alternating cycles.

mod cycles;
mod local;
mod oracle;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

pub use cycles::{cycle_decomposition, AlternatingCycle, Component};
pub use local::{
    check_locality, greedy_matching, is_k_local_max, k_local_search, k_local_search_traced, max_local_gain,
    ratio_report, Init, LocalityCheck, RatioReport, SearchTrace,
};
pub use oracle::{
    enumerate_matchings, optimal_matching, optimal_matching_capped, optimal_value, DenseOracle, Matchings, Objective,
    DEFAULT_ORACLE_CAP, ENUMERATION_CAP,
};

use crate::error::{Error, Result};
use crate::geometry::{distance, Point, Tolerance};

/// An ordered list of pairwise distinct, finite points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point>", into = "Vec<Point>")]
pub struct PointSet {
    points: Vec<Point>,
}

impl TryFrom<Vec<Point>> for PointSet {
    type Error = Error;
    fn try_from(points: Vec<Point>) -> Result<Self> {
        PointSet::new(points)
    }
}

impl From<PointSet> for Vec<Point> {
    fn from(ps: PointSet) -> Self {
        ps.points
    }
}

impl PointSet {
    /// Validates finiteness and distinctness at the default tolerance.
    pub fn new(points: Vec<Point>) -> Result<Self> {
        Self::with_tolerance(points, &Tolerance::default())
    }

    pub fn with_tolerance(points: Vec<Point>, tol: &Tolerance) -> Result<Self> {
        for p in &points {
            p.validate()?;
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if distance(points[i], points[j]) <= tol.eps_geom {
                    return Err(Error::DuplicatePoints(i, j));
                }
            }
        }
        Ok(PointSet { points })
    }

    pub fn from_coords(coords: &[(f64, f64)]) -> Result<Self> {
        Self::new(coords.iter().map(|&(x, y)| Point::new(x, y)).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> Point {
        self.points[i]
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        distance(self.points[i], self.points[j])
    }

    pub(crate) fn require_even(&self) -> Result<()> {
        if self.len() % 2 == 1 {
            Err(Error::OddCardinality(self.len()))
        } else {
            Ok(())
        }
    }

    /// Row-major matrix of pairwise distances.
    pub fn distance_matrix(&self) -> Vec<f64> {
        let n = self.len();
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let v = self.dist(i, j);
                d[i * n + j] = v;
                d[j * n + i] = v;
            }
        }
        d
    }
}

/// A set of vertex-disjoint index pairs.
///
/// Pairs are stored normalised (`i < j`) and sorted, so two matchings with
/// the same edges compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(from = "Vec<(usize, usize)>", into = "Vec<(usize, usize)>")]
pub struct Matching {
    pairs: Vec<(usize, usize)>,
}

impl From<Vec<(usize, usize)>> for Matching {
    fn from(pairs: Vec<(usize, usize)>) -> Self {
        Matching::new(pairs)
    }
}

impl From<Matching> for Vec<(usize, usize)> {
    fn from(m: Matching) -> Self {
        m.pairs
    }
}

impl Matching {
    pub fn new(pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut pairs: Vec<(usize, usize)> = pairs
            .into_iter()
            .map(|(i, j)| if i <= j { (i, j) } else { (j, i) })
            .collect();
        pairs.sort_unstable();
        Matching { pairs }
    }

    pub fn empty() -> Self {
        Matching::default()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        let e = if i <= j { (i, j) } else { (j, i) };
        self.pairs.binary_search(&e).is_ok()
    }

    /// Checks that the pairs are in range and vertex-disjoint.
    pub fn validate(&self, n: usize) -> Result<()> {
        let mut seen = vec![false; n];
        for &(i, j) in &self.pairs {
            for v in [i, j] {
                if v >= n {
                    return Err(Error::IndexOutOfRange { index: v, len: n });
                }
            }
            if i == j {
                return Err(Error::InvalidMatching(format!("self-loop at {i}")));
            }
            for v in [i, j] {
                if std::mem::replace(&mut seen[v], true) {
                    return Err(Error::InvalidMatching(format!("vertex {v} matched twice")));
                }
            }
        }
        Ok(())
    }

    /// Checks that the matching covers each of the `n` indices exactly once.
    pub fn validate_perfect(&self, n: usize) -> Result<()> {
        self.validate(n)?;
        if 2 * self.len() != n {
            return Err(Error::InvalidMatching(format!(
                "{} edges do not cover {n} points",
                self.len()
            )));
        }
        Ok(())
    }

    /// `mate[v]` is the partner of `v`; `usize::MAX` marks unmatched vertices.
    pub fn mates(&self, n: usize) -> Vec<usize> {
        let mut mate = vec![usize::MAX; n];
        for &(i, j) in &self.pairs {
            mate[i] = j;
            mate[j] = i;
        }
        mate
    }

    pub fn vertices(&self) -> BTreeSet<usize> {
        self.pairs.iter().flat_map(|&(i, j)| [i, j]).collect()
    }

    /// Total edge length. Fails on out-of-range indices.
    pub fn weight(&self, ps: &PointSet) -> Result<f64> {
        weight(self, ps)
    }
}

/// Sum of edge lengths of `m` over `ps`.
pub fn weight(m: &Matching, ps: &PointSet) -> Result<f64> {
    let n = ps.len();
    let mut total = 0.0;
    for &(i, j) in m.pairs() {
        for v in [i, j] {
            if v >= n {
                return Err(Error::IndexOutOfRange { index: v, len: n });
            }
        }
        total += ps.dist(i, j);
    }
    Ok(total)
}

pub(crate) fn edge_weight(ps: &PointSet, pairs: &[(usize, usize)]) -> f64 {
    pairs.iter().map(|&(i, j)| ps.dist(i, j)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_set_rejects_duplicates_and_nan() {
        assert_eq!(
            PointSet::from_coords(&[(0.0, 0.0), (1.0, 0.0), (0.0, 0.0)]),
            Err(Error::DuplicatePoints(0, 2))
        );
        assert!(PointSet::from_coords(&[(f64::NAN, 0.0)]).is_err());
    }

    #[test]
    fn weight_examples() {
        let ps = PointSet::from_coords(&[(0.0, 0.0), (3.0, 4.0)]).unwrap();
        assert_eq!(weight(&Matching::new([(0, 1)]), &ps).unwrap(), 5.0);

        let ps = PointSet::from_coords(&[(0.0, 0.0), (1.0, 0.0), (0.0, 5.0), (0.0, 6.0)]).unwrap();
        assert_eq!(weight(&Matching::new([(1, 0), (2, 3)]), &ps).unwrap(), 2.0);

        let empty = PointSet::new(vec![]).unwrap();
        assert_eq!(weight(&Matching::empty(), &empty).unwrap(), 0.0);

        assert_eq!(
            weight(&Matching::new([(0, 7)]), &empty),
            Err(Error::IndexOutOfRange { index: 0, len: 0 })
        );
    }

    #[test]
    fn matching_normalises_and_validates() {
        let m = Matching::new([(3, 2), (1, 0)]);
        assert_eq!(m.pairs(), &[(0, 1), (2, 3)]);
        assert!(m.contains(3, 2));
        assert!(m.validate_perfect(4).is_ok());
        assert!(m.validate_perfect(6).is_err());
        assert!(Matching::new([(0, 1), (1, 2)]).validate(3).is_err());
        assert!(Matching::new([(0, 0)]).validate(2).is_err());
        assert!(Matching::new([(0, 4)]).validate(4).is_err());
    }
}
