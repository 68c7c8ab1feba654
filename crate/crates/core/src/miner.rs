//! Hill-climbing search for point sets whose k-local maximum matchings are
//! far from globally maximum.
//!
//! Each restart draws a random point set and picks the perfect matching with
//! the lowest score, where the score of a matching `M` is
//!
//! * `w(M) / w(M*)` if `M` is k-local maximum (no k-subset gains anything), or
//! * `1 + gain / w(M)` otherwise, `gain` being the largest k-subset gain.
//!
//! The score is continuous in the coordinates and drops below 1 exactly on
//! instances where `M` is a k-local maximum that is not global, so strict
//! descent on it walks from the locality boundary into the low-ratio region.
//! Steps move one coordinate by Gaussian noise and are accepted only when
//! the score strictly decreases.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{fits_general_position, random_points, rng_for};
use crate::geometry::{Point, Tolerance};
use crate::matching::{
    is_k_local_max, optimal_matching, ratio_report, DenseOracle, Matching, Matchings, Objective, PointSet,
    DEFAULT_ORACLE_CAP,
};

/// Restarts evaluated together before the early-stop test.
const RESTART_CHUNK: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinerConfig {
    pub k: usize,
    pub num_points: usize,
    /// Perturbation steps per restart.
    pub budget_iterations: usize,
    pub restarts: usize,
    /// Standard deviation of a step, relative to `bbox`.
    pub step_scale: f64,
    pub seed: u64,
    /// Side of the box the initial points are drawn from.
    pub bbox: f64,
    /// Stop after the first chunk of restarts that reaches this ratio.
    pub stop_below: Option<f64>,
}

impl Default for MinerConfig {
    fn default() -> Self {
        MinerConfig {
            k: 2,
            num_points: 6,
            budget_iterations: 10_000,
            restarts: 8,
            step_scale: 0.2,
            seed: 1,
            bbox: 10.0,
            stop_below: None,
        }
    }
}

impl MinerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.num_points % 2 == 1 || self.num_points < 4 {
            return Err(Error::Precondition(format!(
                "num_points must be even and at least 4, got {}",
                self.num_points
            )));
        }
        if self.num_points > DEFAULT_ORACLE_CAP.min(12) {
            return Err(Error::CapExceeded {
                points: self.num_points,
                cap: 12,
            });
        }
        if self.k < 2 || self.k > self.num_points / 2 {
            return Err(Error::KOutOfRange {
                k: self.k,
                max: self.num_points / 2,
            });
        }
        if self.budget_iterations == 0 || self.restarts == 0 {
            return Err(Error::Precondition("budget and restarts must be positive".into()));
        }
        if !(self.step_scale > 0.0 && self.step_scale.is_finite()) || !(self.bbox > 0.0 && self.bbox.is_finite()) {
            return Err(Error::Precondition("step_scale and bbox must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinedInstance {
    pub point_set: PointSet,
    pub local_matching: Matching,
    pub k: usize,
    pub ratio: f64,
    pub rng_seed: u64,
    /// Index of the restart that produced the instance.
    pub restart: usize,
    pub iterations_used: usize,
}

impl MinedInstance {
    /// Recomputes locality and the ratio from scratch.
    pub fn reverify(&self, tol: &Tolerance) -> Result<bool> {
        let report = ratio_report(&self.point_set, &self.local_matching, self.k, tol)?;
        Ok(report.is_local && (report.ratio - self.ratio).abs() <= 1e-9)
    }
}

/// Best score seen so far, reported whenever a restart improves on the
/// overall best.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Progress {
    pub restart: usize,
    pub iteration: usize,
    pub ratio: f64,
}

/// Scores matchings of a fixed size without reallocating.
struct Scorer {
    n: usize,
    k: usize,
    dist: Vec<f64>,
    sub: Vec<f64>,
    global: DenseOracle,
    local: DenseOracle,
    subsets: Vec<Vec<usize>>,
}

impl Scorer {
    fn new(n: usize, k: usize) -> Self {
        use itertools::Itertools;
        Scorer {
            n,
            k,
            dist: vec![0.0; n * n],
            sub: vec![0.0; 4 * k * k],
            global: DenseOracle::new(),
            local: DenseOracle::new(),
            subsets: (0..n / 2).combinations(k).collect(),
        }
    }

    fn load(&mut self, pts: &[Point]) {
        let n = self.n;
        for i in 0..n {
            for j in i + 1..n {
                let d = crate::geometry::distance(pts[i], pts[j]);
                self.dist[i * n + j] = d;
                self.dist[j * n + i] = d;
            }
        }
    }

    /// Score of `edges` on the loaded points (see module docs).
    fn score(&mut self, edges: &[(usize, usize)]) -> f64 {
        let n = self.n;
        let w: f64 = edges.iter().map(|&(i, j)| self.dist[i * n + j]).sum();
        let m = 2 * self.k;
        let mut verts = [0usize; 24];
        let mut worst_gain = f64::NEG_INFINITY;
        for subset in &self.subsets {
            let mut current = 0.0;
            for (t, &e) in subset.iter().enumerate() {
                let (i, j) = edges[e];
                verts[2 * t] = i;
                verts[2 * t + 1] = j;
                current += self.dist[i * n + j];
            }
            for a in 0..m {
                for b in 0..m {
                    self.sub[a * m + b] = self.dist[verts[a] * n + verts[b]];
                }
            }
            let best = self.local.value(&self.sub[..m * m], m, Objective::Maximize);
            worst_gain = worst_gain.max(best - current);
        }
        if worst_gain > 0.0 {
            return 1.0 + worst_gain / w;
        }
        let global = self.global.value(&self.dist, n, Objective::Maximize);
        w / global
    }
}

struct RestartResult {
    points: Vec<Point>,
    edges: Vec<(usize, usize)>,
    score: f64,
    best_iteration: usize,
    trace: Vec<(usize, f64)>,
}

fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = rng_for(seed);
    rng.set_stream(restart as u64);
    rng
}

fn run_restart(cfg: &MinerConfig, restart: usize) -> RestartResult {
    let n = cfg.num_points;
    let mut rng = restart_rng(cfg.seed, restart);
    let mut points = random_points(&mut rng, n, cfg.bbox);
    let mut scorer = Scorer::new(n, cfg.k);
    scorer.load(&points);

    let mut edges = Vec::new();
    let mut score = f64::INFINITY;
    for m in Matchings::new(n).expect("even size") {
        let s = scorer.score(m.pairs());
        if s < score {
            score = s;
            edges = m.pairs().to_vec();
        }
    }

    let mut sigma = cfg.step_scale * cfg.bbox;
    let mut accepted = 0usize;
    let mut best_iteration = 0;
    let mut trace = Vec::new();
    if score < 1.0 {
        trace.push((0, score));
    }
    for it in 1..=cfg.budget_iterations {
        let idx = rng.random_range(0..n);
        let axis = rng.random_range(0..2);
        let noise = Normal::new(0.0, sigma).expect("positive sigma").sample(&mut rng);
        let old = points[idx];
        let mut moved = old;
        if axis == 0 {
            moved.x += noise;
        } else {
            moved.y += noise;
        }
        points.swap_remove(idx);
        let ok = fits_general_position(&points, moved, cfg.bbox);
        points.push(moved);
        let last = points.len() - 1;
        points.swap(idx, last);
        if !ok {
            points[idx] = old;
            continue;
        }
        scorer.load(&points);
        let s = scorer.score(&edges);
        if s < score {
            score = s;
            best_iteration = it;
            accepted += 1;
            if accepted.is_multiple_of(100) {
                sigma *= 0.99;
            }
            if s < 1.0 {
                trace.push((it, s));
            }
        } else {
            points[idx] = old;
        }
    }
    RestartResult {
        points,
        edges,
        score,
        best_iteration,
        trace,
    }
}

/// Runs the search and returns the lowest-ratio k-local maximum instance
/// found. When no restart leaves the ratio-1 plateau, the first restart's
/// points with their global maximum matching are returned.
pub fn mine_low_ratio(cfg: &MinerConfig) -> Result<MinedInstance> {
    mine_with_progress(cfg, |_| {})
}

/// Like [`mine_low_ratio`], calling `progress` each time the overall best
/// ratio improves, in deterministic order.
pub fn mine_with_progress<F: FnMut(Progress)>(cfg: &MinerConfig, mut progress: F) -> Result<MinedInstance> {
    cfg.validate()?;
    let mut best: Option<(usize, RestartResult)> = None;
    let mut fallback: Option<Vec<Point>> = None;
    let mut reported = f64::INFINITY;

    let mut start = 0;
    while start < cfg.restarts {
        let end = (start + RESTART_CHUNK).min(cfg.restarts);
        let results: Vec<RestartResult> = (start..end).into_par_iter().map(|r| run_restart(cfg, r)).collect();
        for (offset, res) in results.into_iter().enumerate() {
            let r = start + offset;
            for &(iteration, ratio) in &res.trace {
                if ratio < reported {
                    reported = ratio;
                    progress(Progress {
                        restart: r,
                        iteration,
                        ratio,
                    });
                }
            }
            if fallback.is_none() {
                fallback = Some(res.points.clone());
            }
            if res.score < 1.0 && best.as_ref().is_none_or(|(_, b)| res.score < b.score) {
                best = Some((r, res));
            }
        }
        start = end;
        if let (Some(target), Some((_, b))) = (cfg.stop_below, &best) {
            if b.score < target {
                break;
            }
        }
    }

    let tol = Tolerance::default();
    let (restart, points, matching, iterations_used) = match best {
        Some((r, res)) => (r, res.points, Matching::new(res.edges), res.best_iteration),
        None => {
            let points = fallback.expect("at least one restart");
            let ps = PointSet::new(points.clone())?;
            let m = optimal_matching(&ps, Objective::Maximize)?;
            (0, points, m, cfg.budget_iterations)
        }
    };
    let point_set = PointSet::new(points)?;
    debug_assert!(is_k_local_max(&point_set, &matching, cfg.k, &tol)?.holds);
    let report = ratio_report(&point_set, &matching, cfg.k, &tol)?;
    Ok(MinedInstance {
        point_set,
        local_matching: matching,
        k: cfg.k,
        ratio: report.ratio,
        rng_seed: cfg.seed,
        restart,
        iterations_used,
    })
}
