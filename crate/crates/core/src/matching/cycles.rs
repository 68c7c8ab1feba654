use serde::{Deserialize, Serialize};

use super::{Matching, PointSet};
use crate::error::{Error, Result};

/// A cycle of the union of two perfect matchings.
///
/// `vertices[0]` is the smallest vertex; the edge `vertices[0]-vertices[1]`
/// belongs to the first matching and edges alternate from there, closing with
/// `vertices[len-1]-vertices[0]` from the second matching.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlternatingCycle {
    pub vertices: Vec<usize>,
}

impl AlternatingCycle {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    fn edges(&self, offset: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.vertices.len();
        (offset..n)
            .step_by(2)
            .map(move |t| (self.vertices[t], self.vertices[(t + 1) % n]))
    }

    /// Edges contributed by the first matching.
    pub fn first_edges(&self) -> Vec<(usize, usize)> {
        self.edges(0).collect()
    }

    /// Edges contributed by the second matching.
    pub fn second_edges(&self) -> Vec<(usize, usize)> {
        self.edges(1).collect()
    }

    pub fn first_weight(&self, ps: &PointSet) -> f64 {
        self.edges(0).map(|(i, j)| ps.dist(i, j)).sum()
    }

    pub fn second_weight(&self, ps: &PointSet) -> f64 {
        self.edges(1).map(|(i, j)| ps.dist(i, j)).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Component {
    Shared(usize, usize),
    Cycle(AlternatingCycle),
}

/// Splits the union of two perfect matchings on the same vertex set into
/// shared edges and alternating cycles of even length at least four.
pub fn cycle_decomposition(m1: &Matching, m2: &Matching) -> Result<Vec<Component>> {
    let verts = m1.vertices();
    if verts != m2.vertices() || 2 * m1.len() != verts.len() || 2 * m2.len() != verts.len() {
        return Err(Error::InvalidMatching(
            "matchings are not perfect on the same point set".into(),
        ));
    }
    let n = verts.last().map_or(0, |v| v + 1);
    let mate1 = m1.mates(n);
    let mate2 = m2.mates(n);
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for &start in &verts {
        if seen[start] {
            continue;
        }
        if mate1[start] == mate2[start] {
            seen[start] = true;
            seen[mate1[start]] = true;
            out.push(Component::Shared(start, mate1[start]));
            continue;
        }
        let mut vertices = Vec::new();
        let mut v = start;
        loop {
            vertices.push(v);
            seen[v] = true;
            let u = mate1[v];
            vertices.push(u);
            seen[u] = true;
            v = mate2[u];
            if v == start {
                break;
            }
        }
        out.push(Component::Cycle(AlternatingCycle { vertices }));
    }
    Ok(out)
}
