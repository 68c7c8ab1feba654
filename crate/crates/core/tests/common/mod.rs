//! Brute-force reference implementations shared by the integration tests.
//! They use plain floating point and exhaustive search only.

#![allow(dead_code)]

use localmatch::Point;

pub type Edges = Vec<(usize, usize)>;

pub fn dist(a: Point, b: Point) -> f64 {
    ((a.x - b.x).powi(2) + (a.y - b.y).powi(2)).sqrt()
}

pub fn edges_weight(points: &[Point], edges: &[(usize, usize)]) -> f64 {
    edges.iter().map(|&(i, j)| dist(points[i], points[j])).sum()
}

/// Every perfect matching of `vertices`, pairing the first remaining vertex
/// with each other one in turn.
pub fn all_matchings(vertices: &[usize]) -> Vec<Edges> {
    if vertices.is_empty() {
        return vec![Vec::new()];
    }
    let first = vertices[0];
    let mut out = Vec::new();
    for t in 1..vertices.len() {
        let rest: Vec<usize> = vertices[1..]
            .iter()
            .enumerate()
            .filter(|&(s, _)| s + 1 != t)
            .map(|(_, &v)| v)
            .collect();
        for mut m in all_matchings(&rest) {
            m.push((first.min(vertices[t]), first.max(vertices[t])));
            out.push(m);
        }
    }
    out
}

/// Best perfect-matching weight on `vertices`; `maximize` picks the sense.
pub fn brute_optimum(points: &[Point], vertices: &[usize], maximize: bool) -> f64 {
    let weights = all_matchings(vertices).into_iter().map(|m| edges_weight(points, &m));
    if maximize {
        weights.fold(f64::NEG_INFINITY, f64::max)
    } else {
        weights.fold(f64::INFINITY, f64::min)
    }
}

pub fn brute_max(points: &[Point]) -> f64 {
    let all: Vec<usize> = (0..points.len()).collect();
    brute_optimum(points, &all, true)
}

/// All `k`-element index subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Largest improvement any `k` edges of `edges` admit by re-matching their
/// endpoints (positive means the matching is not k-local optimal).
pub fn best_local_gain(points: &[Point], edges: &[(usize, usize)], k: usize, maximize: bool) -> f64 {
    let mut best = 0.0f64;
    for sub in subsets(edges.len(), k.min(edges.len())) {
        let chosen: Vec<(usize, usize)> = sub.iter().map(|&s| edges[s]).collect();
        let verts: Vec<usize> = chosen.iter().flat_map(|&(i, j)| [i, j]).collect();
        let current = edges_weight(points, &chosen);
        let opt = brute_optimum(points, &verts, maximize);
        let gain = if maximize { opt - current } else { current - opt };
        best = best.max(gain);
    }
    best
}

/// Weights `(w(C ∩ m1), w(C ∩ m2))` of each alternating cycle of length at
/// least four in `m1 ∪ m2`.
pub fn cycle_weights(points: &[Point], m1: &[(usize, usize)], m2: &[(usize, usize)]) -> Vec<(f64, f64)> {
    let n = points.len();
    let mut mate1 = vec![usize::MAX; n];
    let mut mate2 = vec![usize::MAX; n];
    for &(i, j) in m1 {
        mate1[i] = j;
        mate1[j] = i;
    }
    for &(i, j) in m2 {
        mate2[i] = j;
        mate2[j] = i;
    }
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] || mate1[s] == mate2[s] {
            continue;
        }
        let (mut w1, mut w2) = (0.0, 0.0);
        let mut v = s;
        loop {
            seen[v] = true;
            let u = mate1[v];
            seen[u] = true;
            w1 += dist(points[v], points[u]);
            let next = mate2[u];
            w2 += dist(points[u], points[next]);
            v = next;
            if v == s {
                break;
            }
        }
        out.push((w1, w2));
    }
    out
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

/// Proper crossing of two segments with four distinct endpoints.
pub fn properly_cross(a: Point, b: Point, c: Point, d: Point) -> bool {
    orient(a, b, c) * orient(a, b, d) < 0.0 && orient(c, d, a) * orient(c, d, b) < 0.0
}

pub fn pairwise_crossing(points: &[Point], edges: &[(usize, usize)]) -> bool {
    for s in 0..edges.len() {
        for t in s + 1..edges.len() {
            let (a, b) = edges[s];
            let (c, d) = edges[t];
            if !properly_cross(points[a], points[b], points[c], points[d]) {
                return false;
            }
        }
    }
    true
}

/// Points strictly left and right of the line through points `a` and `b`.
pub fn side_counts(points: &[Point], a: usize, b: usize) -> (usize, usize) {
    let (mut left, mut right) = (0, 0);
    for (v, &p) in points.iter().enumerate() {
        if v == a || v == b {
            continue;
        }
        let o = orient(points[a], points[b], p);
        if o > 0.0 {
            left += 1;
        } else if o < 0.0 {
            right += 1;
        }
    }
    (left, right)
}
