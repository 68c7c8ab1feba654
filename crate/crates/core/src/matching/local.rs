//! Checking for and searching out k-local optimal matchings.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::oracle::{check_size_default, DenseOracle, Objective};
use super::{edge_weight, weight, Matching, PointSet};
use crate::error::{Error, Result};
use crate::geometry::Tolerance;

/// Outcome of testing every k-subset of a matching against the exact optimum
/// on its endpoints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalityCheck {
    pub k: usize,
    pub objective: Objective,
    pub holds: bool,
    /// First improvable k-subset in lexicographic order of edge positions.
    pub violating_subset: Option<Vec<(usize, usize)>>,
    /// Optimal replacement edges for `violating_subset`.
    pub improvement: Option<Vec<(usize, usize)>>,
    /// Weight gained by the replacement; zero when locality holds.
    pub gain: f64,
}

/// Scratch space for evaluating one k-subset.
struct SubsetEvaluator {
    oracle: DenseOracle,
    verts: Vec<usize>,
    dist: Vec<f64>,
}

impl SubsetEvaluator {
    fn new(k: usize) -> Self {
        SubsetEvaluator {
            oracle: DenseOracle::new(),
            verts: Vec::with_capacity(2 * k),
            dist: vec![0.0; 4 * k * k],
        }
    }

    fn load(&mut self, ps: &PointSet, edges: &[(usize, usize)], subset: &[usize]) -> f64 {
        self.verts.clear();
        let mut current = 0.0;
        for &e in subset {
            let (i, j) = edges[e];
            self.verts.push(i);
            self.verts.push(j);
            current += ps.dist(i, j);
        }
        let n = self.verts.len();
        for a in 0..n {
            self.dist[a * n + a] = 0.0;
            for b in a + 1..n {
                let d = ps.dist(self.verts[a], self.verts[b]);
                self.dist[a * n + b] = d;
                self.dist[b * n + a] = d;
            }
        }
        current
    }

    /// Gain available on the loaded subset.
    fn gain(&mut self, current: f64, objective: Objective) -> f64 {
        let n = self.verts.len();
        let best = self.oracle.value(&self.dist[..n * n], n, objective);
        objective.gain(current, best)
    }

    fn replacement(&mut self, objective: Objective) -> Vec<(usize, usize)> {
        let n = self.verts.len();
        let (_, pairs) = self.oracle.solve(&self.dist[..n * n], n, objective);
        pairs.into_iter().map(|(a, b)| (self.verts[a], self.verts[b])).collect()
    }
}

fn check_k(m: &Matching, k: usize) -> Result<()> {
    if k == 0 || k > m.len() {
        return Err(Error::KOutOfRange { k, max: m.len() });
    }
    Ok(())
}

/// Scans all `C(|m|, k)` subsets in lexicographic order and reports the first
/// one whose optimal re-matching gains more than `eps_geom · w(m)`.
pub fn check_locality(
    ps: &PointSet,
    m: &Matching,
    k: usize,
    objective: Objective,
    tol: &Tolerance,
) -> Result<LocalityCheck> {
    m.validate_perfect(ps.len())?;
    check_k(m, k)?;
    let threshold = tol.eps_geom * weight(m, ps)?;
    let edges = m.pairs();
    let mut eval = SubsetEvaluator::new(k);
    for subset in (0..edges.len()).combinations(k) {
        let current = eval.load(ps, edges, &subset);
        let gain = eval.gain(current, objective);
        if gain > threshold {
            let replacement = eval.replacement(objective);
            return Ok(LocalityCheck {
                k,
                objective,
                holds: false,
                violating_subset: Some(subset.iter().map(|&e| edges[e]).collect()),
                improvement: Some(Matching::new(replacement).pairs().to_vec()),
                gain,
            });
        }
    }
    Ok(LocalityCheck {
        k,
        objective,
        holds: true,
        violating_subset: None,
        improvement: None,
        gain: 0.0,
    })
}

/// Whether every k edges of `m` form a maximum-length matching on their
/// endpoints.
pub fn is_k_local_max(ps: &PointSet, m: &Matching, k: usize, tol: &Tolerance) -> Result<LocalityCheck> {
    check_locality(ps, m, k, Objective::Maximize, tol)
}

/// Largest gain over all k-subsets, with no tolerance applied.
pub fn max_local_gain(ps: &PointSet, m: &Matching, k: usize, objective: Objective) -> Result<f64> {
    m.validate_perfect(ps.len())?;
    check_k(m, k)?;
    let edges = m.pairs();
    let mut eval = SubsetEvaluator::new(k);
    let mut worst = f64::NEG_INFINITY;
    for subset in (0..edges.len()).combinations(k) {
        let current = eval.load(ps, edges, &subset);
        worst = worst.max(eval.gain(current, objective));
    }
    Ok(worst)
}

/// Repeatedly takes the longest edge between two unmatched points.
pub fn greedy_matching(ps: &PointSet) -> Result<Matching> {
    ps.require_even()?;
    let n = ps.len();
    let mut candidates: Vec<(f64, usize, usize)> = (0..n)
        .tuple_combinations()
        .map(|(i, j)| (ps.dist(i, j), i, j))
        .collect();
    candidates.sort_by(|a, b| b.0.total_cmp(&a.0).then((a.1, a.2).cmp(&(b.1, b.2))));
    let mut used = vec![false; n];
    let mut pairs = Vec::with_capacity(n / 2);
    for (_, i, j) in candidates {
        if !used[i] && !used[j] {
            used[i] = true;
            used[j] = true;
            pairs.push((i, j));
        }
    }
    Ok(Matching::new(pairs))
}

/// Starting matching for [`k_local_search`].
#[derive(Debug, Clone, PartialEq)]
pub enum Init {
    Greedy,
    Matching(Matching),
}

/// Final matching plus the weight after every accepted swap (first entry is
/// the initial weight).
#[derive(Debug, Clone, PartialEq)]
pub struct SearchTrace {
    pub matching: Matching,
    pub weights: Vec<f64>,
}

/// First-improvement k-swap local search until the matching is k-local
/// maximum.
pub fn k_local_search(ps: &PointSet, k: usize, init: Init, tol: &Tolerance) -> Result<Matching> {
    Ok(k_local_search_traced(ps, k, init, tol)?.matching)
}

pub fn k_local_search_traced(ps: &PointSet, k: usize, init: Init, tol: &Tolerance) -> Result<SearchTrace> {
    ps.require_even()?;
    let mut m = match init {
        Init::Greedy => greedy_matching(ps)?,
        Init::Matching(m) => m,
    };
    m.validate_perfect(ps.len())?;
    let mut weights = vec![weight(&m, ps)?];
    loop {
        let check = is_k_local_max(ps, &m, k, tol)?;
        let (Some(old), Some(new)) = (check.violating_subset, check.improvement) else {
            return Ok(SearchTrace { matching: m, weights });
        };
        let kept = m.pairs().iter().copied().filter(|e| !old.contains(e));
        m = Matching::new(kept.chain(new));
        weights.push(edge_weight(ps, m.pairs()));
    }
}

/// Weight of a matching against the global optimum, with its locality status.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub weight_local: f64,
    pub weight_global: f64,
    pub ratio: f64,
    pub k_verified: usize,
    pub is_local: bool,
    pub violating_subset: Option<Vec<(usize, usize)>>,
}

/// Compares `m` against the exact maximum and checks k-locality.
pub fn ratio_report(ps: &PointSet, m: &Matching, k: usize, tol: &Tolerance) -> Result<RatioReport> {
    check_size_default(ps)?;
    let check = is_k_local_max(ps, m, k, tol)?;
    let weight_local = weight(m, ps)?;
    let weight_global = DenseOracle::new().value(&ps.distance_matrix(), ps.len(), Objective::Maximize);
    Ok(RatioReport {
        weight_local,
        weight_global,
        ratio: weight_local / weight_global,
        k_verified: k,
        is_local: check.holds,
        violating_subset: check.violating_subset,
    })
}
