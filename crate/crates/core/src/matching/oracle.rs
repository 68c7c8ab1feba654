//! Exact optimal perfect matching by dynamic programming over subsets, and a
//! brute-force enumerator used as an independent oracle.

use serde::{Deserialize, Serialize};

use super::{Matching, PointSet};
use crate::error::{Error, Result};

/// Largest instance accepted by [`optimal_matching`] by default (12 pairs).
pub const DEFAULT_ORACLE_CAP: usize = 24;

/// Largest instance accepted by [`enumerate_matchings`].
pub const ENUMERATION_CAP: usize = 12;

// The subset table holds 2^n entries; beyond this it no longer fits in memory.
const HARD_CAP: usize = 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    #[serde(alias = "max")]
    Maximize,
    #[serde(alias = "min")]
    Minimize,
}

impl Objective {
    #[inline]
    fn better(self, a: f64, b: f64) -> bool {
        match self {
            Objective::Maximize => a > b,
            Objective::Minimize => a < b,
        }
    }

    #[inline]
    fn worst(self) -> f64 {
        match self {
            Objective::Maximize => f64::NEG_INFINITY,
            Objective::Minimize => f64::INFINITY,
        }
    }

    /// How much `candidate` improves on `current` (positive when better).
    pub fn gain(self, current: f64, candidate: f64) -> f64 {
        match self {
            Objective::Maximize => candidate - current,
            Objective::Minimize => current - candidate,
        }
    }
}

/// Subset DP over a dense distance matrix, with a reusable table.
///
/// `table[R]` is the optimal weight of a perfect matching on the index set
/// `R`. The transition pairs the lowest index of `R` with every other member,
/// scanning partners in increasing order and keeping only strict
/// improvements, so among exactly tied optima the lexicographically smallest
/// pair sequence wins.
#[derive(Debug, Default, Clone)]
pub struct DenseOracle {
    table: Vec<f64>,
}

impl DenseOracle {
    pub fn new() -> Self {
        Self::default()
    }

    /// Optimal weight on `n` points with row-major distances `dist`.
    pub fn value(&mut self, dist: &[f64], n: usize, objective: Objective) -> f64 {
        debug_assert!(n.is_multiple_of(2) && n <= HARD_CAP && dist.len() >= n * n);
        if n == 0 {
            return 0.0;
        }
        self.fill(dist, n, objective);
        self.table[(1usize << n) - 1]
    }

    /// Optimal matching on `n` points, as normalised local index pairs.
    pub fn solve(&mut self, dist: &[f64], n: usize, objective: Objective) -> (f64, Vec<(usize, usize)>) {
        let value = self.value(dist, n, objective);
        let mut pairs = Vec::with_capacity(n / 2);
        let mut rest = if n == 0 { 0 } else { (1usize << n) - 1 };
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            let without_i = rest & !(1 << i);
            let mut best_j = usize::MAX;
            let mut best = objective.worst();
            let mut others = without_i;
            while others != 0 {
                let j = others.trailing_zeros() as usize;
                others &= others - 1;
                let cand = dist[i * n + j] + self.table[without_i & !(1 << j)];
                if objective.better(cand, best) {
                    best = cand;
                    best_j = j;
                }
            }
            pairs.push((i, best_j));
            rest = without_i & !(1 << best_j);
        }
        (value, pairs)
    }

    fn fill(&mut self, dist: &[f64], n: usize, objective: Objective) {
        let size = 1usize << n;
        self.table.clear();
        self.table.resize(size, 0.0);
        for mask in 1..size {
            if mask.count_ones() % 2 == 1 {
                continue;
            }
            let i = mask.trailing_zeros() as usize;
            let without_i = mask & !(1 << i);
            let mut best = objective.worst();
            let mut others = without_i;
            while others != 0 {
                let j = others.trailing_zeros() as usize;
                others &= others - 1;
                let cand = dist[i * n + j] + self.table[without_i & !(1 << j)];
                if objective.better(cand, best) {
                    best = cand;
                }
            }
            self.table[mask] = best;
        }
    }
}

fn check_size(ps: &PointSet, cap: usize) -> Result<()> {
    ps.require_even()?;
    let cap = cap.min(HARD_CAP);
    if ps.len() > cap {
        return Err(Error::CapExceeded { points: ps.len(), cap });
    }
    Ok(())
}

pub(crate) fn check_size_default(ps: &PointSet) -> Result<()> {
    check_size(ps, DEFAULT_ORACLE_CAP)
}

/// Exact optimum under the default cap of [`DEFAULT_ORACLE_CAP`] points.
pub fn optimal_matching(ps: &PointSet, objective: Objective) -> Result<Matching> {
    optimal_matching_capped(ps, objective, DEFAULT_ORACLE_CAP)
}

/// Exact optimum for at most `cap` points (never more than 26).
pub fn optimal_matching_capped(ps: &PointSet, objective: Objective, cap: usize) -> Result<Matching> {
    check_size(ps, cap)?;
    let (_, pairs) = DenseOracle::new().solve(&ps.distance_matrix(), ps.len(), objective);
    Ok(Matching::new(pairs))
}

/// Weight of the exact optimum under the default cap.
pub fn optimal_value(ps: &PointSet, objective: Objective) -> Result<f64> {
    check_size(ps, DEFAULT_ORACLE_CAP)?;
    Ok(DenseOracle::new().value(&ps.distance_matrix(), ps.len(), objective))
}

/// Every perfect matching on `0..n`, each exactly once.
///
/// A matching is encoded by a mixed-radix counter: digit `t` chooses the
/// partner of the lowest still-unmatched index among the remaining ones.
/// Counting up yields matchings in lexicographic order of pair sequences.
#[derive(Debug, Clone)]
pub struct Matchings {
    n: usize,
    digits: Vec<usize>,
    done: bool,
}

impl Matchings {
    pub fn new(n: usize) -> Result<Self> {
        if n % 2 == 1 {
            return Err(Error::OddCardinality(n));
        }
        Ok(Matchings {
            n,
            digits: vec![0; n / 2],
            done: false,
        })
    }

    fn decode(&self) -> Matching {
        let mut rest: Vec<usize> = (0..self.n).collect();
        let mut pairs = Vec::with_capacity(self.n / 2);
        for &d in &self.digits {
            let i = rest.remove(0);
            let j = rest.remove(d);
            pairs.push((i, j));
        }
        Matching::new(pairs)
    }

    fn advance(&mut self) {
        let half = self.n / 2;
        for t in (0..half).rev() {
            let radix = self.n - 1 - 2 * t;
            self.digits[t] += 1;
            if self.digits[t] < radix {
                return;
            }
            self.digits[t] = 0;
        }
        self.done = true;
    }
}

impl Iterator for Matchings {
    type Item = Matching;

    fn next(&mut self) -> Option<Matching> {
        if self.done {
            return None;
        }
        let m = self.decode();
        self.advance();
        Some(m)
    }
}

/// All `(|ps| − 1)!!` perfect matchings of `ps`, for at most
/// [`ENUMERATION_CAP`] points.
pub fn enumerate_matchings(ps: &PointSet) -> Result<Matchings> {
    ps.require_even()?;
    if ps.len() > ENUMERATION_CAP {
        return Err(Error::CapExceeded {
            points: ps.len(),
            cap: ENUMERATION_CAP,
        });
    }
    Matchings::new(ps.len())
}
