//! Perfect matchings whose edges pairwise cross. Besides detection, the
//! module checks their balance and uniqueness, and compares them with the
//! oracle optimum.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{orient2d, segments_cross, Segment, Tolerance};
use crate::matching::{enumerate_matchings, is_k_local_max, optimal_value, weight, Matching, Objective, PointSet};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossingReport {
    pub is_pairwise_crossing: bool,
    /// First pair of edges (in edge order) that fails to cross.
    pub non_crossing_pair: Option<EdgePair>,
    pub balance_ok: bool,
    /// Whether no other perfect matching of the set is pairwise crossing.
    pub unique: Option<bool>,
    pub globally_maximum: Option<bool>,
}

/// Rejects point sets with three collinear points (exact predicate).
pub fn check_general_position(ps: &PointSet) -> Result<()> {
    let n = ps.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if orient2d(ps.point(i), ps.point(j), ps.point(k)) == 0.0 {
                    return Err(Error::Collinear(i, j, k));
                }
            }
        }
    }
    Ok(())
}

type EdgePair = ((usize, usize), (usize, usize));

fn first_non_crossing(ps: &PointSet, m: &Matching, tol: &Tolerance) -> Result<Option<EdgePair>> {
    let segs = m
        .pairs()
        .iter()
        .map(|&(i, j)| Segment::new(ps.point(i), ps.point(j), tol))
        .collect::<Result<Vec<_>>>()?;
    let edges = m.pairs();
    for a in 0..segs.len() {
        for b in a + 1..segs.len() {
            if !segments_cross(&segs[a], &segs[b]) {
                return Ok(Some((edges[a], edges[b])));
            }
        }
    }
    Ok(None)
}

/// All-pairs crossing test. Fills the first two report fields; `balance_ok`
/// is set from [`halfplane_balance`] when the matching is crossing.
pub fn is_pairwise_crossing(ps: &PointSet, m: &Matching, tol: &Tolerance) -> Result<CrossingReport> {
    m.validate_perfect(ps.len())?;
    check_general_position(ps)?;
    let non_crossing_pair = first_non_crossing(ps, m, tol)?;
    let is_pairwise_crossing = non_crossing_pair.is_none();
    let balance_ok = is_pairwise_crossing && balance_counts(ps, m)?;
    Ok(CrossingReport {
        is_pairwise_crossing,
        non_crossing_pair,
        balance_ok,
        unique: None,
        globally_maximum: None,
    })
}

fn balance_counts(ps: &PointSet, m: &Matching) -> Result<bool> {
    let half = (ps.len() - 2) / 2;
    for &(i, j) in m.pairs() {
        let (a, b) = (ps.point(i), ps.point(j));
        let (mut left, mut right) = (0, 0);
        for (v, &p) in ps.points().iter().enumerate() {
            if v == i || v == j {
                continue;
            }
            let o = orient2d(a, b, p);
            if o > 0.0 {
                left += 1;
            } else if o < 0.0 {
                right += 1;
            } else {
                return Err(Error::Collinear(i, j, v));
            }
        }
        if left != half || right != half {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Each edge's supporting line leaves exactly `(|P| − 2)/2` points strictly
/// on either side. Requires a pairwise-crossing matching.
pub fn halfplane_balance(ps: &PointSet, m: &Matching) -> Result<bool> {
    m.validate_perfect(ps.len())?;
    let tol = Tolerance::default();
    if let Some((e, f)) = first_non_crossing(ps, m, &tol)? {
        return Err(Error::NotPairwiseCrossing(e, f));
    }
    balance_counts(ps, m)
}

/// Scans all perfect matchings; returns the first pairwise-crossing one and
/// how many there are in total.
pub fn find_pairwise_crossing(ps: &PointSet) -> Result<(Option<Matching>, usize)> {
    check_general_position(ps)?;
    let tol = Tolerance::default();
    let mut found = None;
    let mut count = 0;
    for m in enumerate_matchings(ps)? {
        if first_non_crossing(ps, &m, &tol)?.is_none() {
            count += 1;
            found.get_or_insert(m);
        }
    }
    Ok((found, count))
}

/// Whether a pairwise-crossing matching attains the exact maximum weight to
/// within `eps_geom` relative.
pub fn verify_globally_maximum(ps: &PointSet, m: &Matching, tol: &Tolerance) -> Result<bool> {
    m.validate_perfect(ps.len())?;
    if let Some((e, f)) = first_non_crossing(ps, m, tol)? {
        return Err(Error::NotPairwiseCrossing(e, f));
    }
    let best = optimal_value(ps, Objective::Maximize)?;
    let w = weight(m, ps)?;
    Ok(w >= best - tol.eps_geom * best.max(1.0))
}

/// Crossing and balance, plus uniqueness (when the set is small enough to
/// enumerate) and global maximality for crossing matchings.
pub fn crossing_report(ps: &PointSet, m: &Matching, tol: &Tolerance) -> Result<CrossingReport> {
    let mut report = is_pairwise_crossing(ps, m, tol)?;
    if !report.is_pairwise_crossing {
        return Ok(report);
    }
    if let Ok((_, count)) = find_pairwise_crossing(ps) {
        report.unique = Some(count == 1);
    }
    report.globally_maximum = Some(verify_globally_maximum(ps, m, tol)?);
    Ok(report)
}

/// Whether a pairwise-crossing matching is 2-local maximum; trivially true
/// for a single edge.
pub fn crossing_is_two_local(ps: &PointSet, m: &Matching, tol: &Tolerance) -> Result<bool> {
    if m.len() < 2 {
        return Ok(true);
    }
    Ok(is_k_local_max(ps, m, 2, tol)?.holds)
}
