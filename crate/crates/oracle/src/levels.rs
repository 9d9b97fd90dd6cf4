//! Two- and three-level graphs by exhaustive search over levels and twists.

use std::collections::BTreeSet;

use crate::graphs::{permutations, stable_graphs};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    /// Vertex degree equality everywhere.
    Canonical,
    /// Vertex degree equality below level 0 only.
    Hodge,
}

/// A level graph with explicit edges `(u, v, μ at u, μ at v)`; leg `i` has label `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LevelGraph {
    pub genera: Vec<u32>,
    pub levels: Vec<i32>,
    pub leg_vertex: Vec<usize>,
    pub edges: Vec<(usize, usize, i64, i64)>,
}

impl LevelGraph {
    fn permuted(&self, p: &[usize]) -> LevelGraph {
        let n = self.genera.len();
        let mut genera = vec![0; n];
        let mut levels = vec![0; n];
        for v in 0..n {
            genera[p[v]] = self.genera[v];
            levels[p[v]] = self.levels[v];
        }
        let mut edges: Vec<_> = self
            .edges
            .iter()
            .map(|&(u, v, a, b)| if p[u] <= p[v] { (p[u], p[v], a, b) } else { (p[v], p[u], b, a) })
            .collect();
        edges.sort_unstable();
        LevelGraph { genera, levels, leg_vertex: self.leg_vertex.iter().map(|&v| p[v]).collect(), edges }
    }

    /// Smallest relabelling over vertex permutations (edges sorted).
    pub fn canonical(&self) -> LevelGraph {
        permutations(self.genera.len()).iter().map(|p| self.permuted(p)).min().expect("at least one vertex")
    }

    pub fn multiplicity(&self) -> u64 {
        self.edges.iter().map(|&(_, _, a, _)| (a + 1).unsigned_abs()).product()
    }
}

/// All level graphs of depth `depth` for genus `g` and zero profile `zeros`, with marking
/// `label` forced onto level `level` for each `(label, level)` in `pinned`. Canonical
/// forms, sorted.
pub fn level_graphs(g: u32, zeros: &[i64], depth: u32, rule: Rule, pinned: &[(u32, i32)]) -> Vec<LevelGraph> {
    let n = zeros.len();
    let total: i64 = zeros.iter().sum();
    let mut found = BTreeSet::new();
    for base in stable_graphs(g, n) {
        let nv = base.genera.len();
        if (0..nv).any(|v| base.mult[v][v] > 0) || nv < 2 {
            continue;
        }
        let mut edges = Vec::new();
        for u in 0..nv {
            for v in u + 1..nv {
                for _ in 0..base.mult[u][v] {
                    edges.push((u, v));
                }
            }
        }
        let low = -2 - total * (1 + edges.len() as i64);
        for levels in crate::graphs::assignments(nv, depth as usize + 1) {
            let levels: Vec<i32> = levels.into_iter().map(|l| -(l as i32)).collect();
            if !(0..=depth as i32).all(|l| levels.contains(&-l)) {
                continue;
            }
            if edges.iter().any(|&(u, v)| levels[u] == levels[v]) {
                continue;
            }
            if pinned.iter().any(|&(label, l)| levels[base.leg_vertex[label as usize - 1]] != l) {
                continue;
            }
            let ranges = edges.len();
            let width = (-2 - low + 1) as usize;
            let mut counter = vec![0usize; ranges];
            loop {
                let mut sums: Vec<i64> = vec![0; nv];
                for (i, &z) in zeros.iter().enumerate() {
                    sums[base.leg_vertex[i]] += z;
                }
                let mut list = Vec::with_capacity(ranges);
                for (e, &(u, v)) in edges.iter().enumerate() {
                    let t = -2 - counter[e] as i64;
                    let (tu, tv) = if levels[u] < levels[v] { (t, -t - 2) } else { (-t - 2, t) };
                    sums[u] += tu;
                    sums[v] += tv;
                    list.push((u, v, tu, tv));
                }
                let ok = (0..nv).all(|v| {
                    let constrained = rule == Rule::Canonical || levels[v] < 0;
                    !constrained || sums[v] == 2 * base.genera[v] as i64 - 2
                });
                if ok {
                    let graph = LevelGraph {
                        genera: base.genera.clone(),
                        levels: levels.clone(),
                        leg_vertex: base.leg_vertex.clone(),
                        edges: list,
                    };
                    found.insert(graph.canonical());
                }
                // next twist vector
                let mut i = 0;
                while i < ranges {
                    counter[i] += 1;
                    if counter[i] < width {
                        break;
                    }
                    counter[i] = 0;
                    i += 1;
                }
                if i == ranges {
                    break;
                }
            }
        }
    }
    found.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_one_single_zero_is_empty() {
        assert!(level_graphs(1, &[2], 1, Rule::Canonical, &[(1, -1)]).is_empty());
    }

    #[test]
    fn genus_two_double_zero() {
        let list = level_graphs(2, &[2], 1, Rule::Canonical, &[(1, -1)]);
        // two elliptic vertices joined by one edge (twist 0 / −2), and a genus-0 bottom
        // vertex with the leg under one elliptic vertex by two edges
        assert!(list.iter().any(|l| l.genera == vec![1, 1] || l.genera == vec![1, 1]));
        for l in &list {
            assert!(l.multiplicity() >= 1);
        }
    }
}
