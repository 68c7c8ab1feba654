//! Minimisation of a pointwise maximum of convex planar functions.
//!
//! Multi-start subgradient descent with Polyak steps toward a moving target
//! level, followed by an active-set Newton polish on the (at most three)
//! terms that are active at the optimum.

use crate::geometry::Point;

/// A family of convex terms `f_i : R² → R`; the objective is their maximum.
pub trait MaxOfConvex {
    fn len(&self) -> usize;

    fn term(&self, i: usize, x: Point) -> f64;

    /// A subgradient of term `i` at `x`.
    fn term_grad(&self, i: usize, x: Point) -> Point;

    /// Characteristic length of the instance, used to size the first steps.
    fn scale(&self) -> f64;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn value(&self, x: Point) -> f64 {
        self.argmax(x).0
    }

    /// Maximum term value and its lowest index.
    fn argmax(&self, x: Point) -> (f64, usize) {
        let mut best = (f64::NEG_INFINITY, 0);
        for i in 0..self.len() {
            let v = self.term(i, x);
            if v > best.0 {
                best = (v, i);
            }
        }
        best
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimaxConfig {
    /// Required improvement of the best value over a window.
    pub eps: f64,
    /// Window length for the stalling test.
    pub patience: usize,
    pub max_iters: usize,
}

impl Default for MinimaxConfig {
    fn default() -> Self {
        MinimaxConfig {
            eps: 1e-7,
            patience: 100,
            max_iters: 100_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimaxSolution {
    pub point: Point,
    pub value: f64,
    pub iterations: usize,
}

/// Subgradient descent from one start.
pub fn descend<P: MaxOfConvex + ?Sized>(problem: &P, start: Point, cfg: &MinimaxConfig) -> MinimaxSolution {
    let mut x = start;
    let mut best_x = start;
    let mut best = problem.value(start);
    let mut delta = 0.25 * problem.scale().max(f64::MIN_POSITIVE);
    let mut since_progress = 0;
    let mut window_start = best;
    let mut iterations = 0;

    while iterations < cfg.max_iters {
        iterations += 1;
        let (fx, i) = problem.argmax(x);
        let g = problem.term_grad(i, x);
        let gg = g.dot(g);
        if gg < 1e-30 {
            // Zero is a subgradient of the active term: x is optimal for it.
            if fx < best {
                best = fx;
                best_x = x;
            }
            break;
        }
        let level = best - delta;
        let step = (fx - level) / gg;
        x = x - g * step;

        let fnew = problem.value(x);
        if fnew < best {
            if fnew <= best - 0.5 * delta {
                since_progress = 0;
            } else {
                since_progress += 1;
            }
            best = fnew;
            best_x = x;
        } else {
            since_progress += 1;
        }
        if since_progress >= 20 {
            delta *= 0.5;
            x = best_x;
            since_progress = 0;
        }
        if iterations % cfg.patience == 0 {
            if window_start - best < cfg.eps && delta < cfg.eps {
                break;
            }
            window_start = best;
        }
    }
    MinimaxSolution {
        point: best_x,
        value: best,
        iterations,
    }
}

/// Indices of the terms sorted by decreasing value at `x`.
fn ranked_terms<P: MaxOfConvex + ?Sized>(problem: &P, x: Point) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..problem.len()).collect();
    idx.sort_by(|&a, &b| problem.term(b, x).total_cmp(&problem.term(a, x)).then(a.cmp(&b)));
    idx
}

/// Solves the 2×2 system `J d = -r`.
fn solve2(j: [[f64; 2]; 2], r: [f64; 2]) -> Option<Point> {
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    if det.abs() < 1e-300 || !det.is_finite() {
        return None;
    }
    let dx = (-r[0] * j[1][1] + r[1] * j[0][1]) / det;
    let dy = (-j[0][0] * r[1] + j[1][0] * r[0]) / det;
    Some(Point::new(dx, dy))
}

/// Newton iteration on a 2×2 residual with a forward-difference Jacobian.
fn newton<F: Fn(Point) -> [f64; 2]>(residual: F, start: Point, scale: f64) -> Option<Point> {
    let mut x = start;
    for _ in 0..30 {
        let r = residual(x);
        if !(r[0].is_finite() && r[1].is_finite()) {
            return None;
        }
        if r[0].abs().max(r[1].abs()) < 1e-15 * scale.max(1.0) {
            return Some(x);
        }
        let h = 1e-7 * scale.max(x.norm()).max(1e-12);
        let rx = residual(x + Point::new(h, 0.0));
        let ry = residual(x + Point::new(0.0, h));
        let j = [
            [(rx[0] - r[0]) / h, (ry[0] - r[0]) / h],
            [(rx[1] - r[1]) / h, (ry[1] - r[1]) / h],
        ];
        let d = solve2(j, r)?;
        x = x + d;
        if d.norm() < 1e-15 * scale.max(x.norm()) {
            return Some(x);
        }
    }
    Some(x)
}

/// Tries to land exactly on the optimum of the two or three terms that are
/// largest at `x`. Returns the improved point if any candidate beats `x`.
pub fn polish<P: MaxOfConvex + ?Sized>(problem: &P, x: Point) -> MinimaxSolution {
    let mut best = MinimaxSolution {
        point: x,
        value: problem.value(x),
        iterations: 0,
    };
    if problem.len() < 2 {
        return best;
    }
    let top = ranked_terms(problem, x);
    let scale = problem.scale();
    let mut consider = |p: Option<Point>| {
        if let Some(p) = p {
            let v = problem.value(p);
            if v < best.value {
                best.value = v;
                best.point = p;
            }
        }
    };

    // Two active terms: equal values, opposite gradients.
    let (a, b) = (top[0], top[1]);
    consider(newton(
        |p| {
            let ga = problem.term_grad(a, p);
            let gb = problem.term_grad(b, p);
            [problem.term(a, p) - problem.term(b, p), ga.cross(gb) * scale]
        },
        x,
        scale,
    ));
    // Three active terms: all values equal.
    if top.len() >= 3 {
        let (a, b, c) = (top[0], top[1], top[2]);
        consider(newton(
            |p| {
                let fa = problem.term(a, p);
                [fa - problem.term(b, p), fa - problem.term(c, p)]
            },
            x,
            scale,
        ));
    }
    best
}

/// Best of subgradient descent from every start, each followed by a polish.
/// Ties on value keep the lexicographically smaller point.
pub fn minimize_max<P: MaxOfConvex + ?Sized>(problem: &P, starts: &[Point], cfg: &MinimaxConfig) -> MinimaxSolution {
    let mut best: Option<MinimaxSolution> = None;
    for &s in starts {
        let mut sol = descend(problem, s, cfg);
        for _ in 0..3 {
            let p = polish(problem, sol.point);
            if p.value < sol.value {
                sol.point = p.point;
                sol.value = p.value;
            } else {
                break;
            }
        }
        best = match best {
            None => Some(sol),
            Some(b) => {
                let better = sol.value < b.value || (sol.value == b.value && sol.point.lex_cmp(&b.point).is_lt());
                Some(if better { sol } else { b })
            }
        };
    }
    best.expect("at least one start")
}
