//! Stable graphs as multiplicity matrices, enumerated by brute force.

use std::collections::BTreeSet;

/// A stable graph up to the order of parallel edges: vertex genera, the vertex of each
/// leg (leg `i` has label `i + 1`) and a symmetric edge-multiplicity matrix whose
/// diagonal counts loops.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlainGraph {
    pub genera: Vec<u32>,
    pub leg_vertex: Vec<usize>,
    pub mult: Vec<Vec<u32>>,
}

/// Every permutation of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    fn go(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == cur.len() {
            out.push(cur.clone());
            return;
        }
        for i in k..cur.len() {
            cur.swap(k, i);
            go(k + 1, cur, out);
            cur.swap(k, i);
        }
    }
    go(0, &mut cur, &mut out);
    out
}

fn factorial(n: u32) -> u64 {
    (1..=n as u64).product()
}

impl PlainGraph {
    pub fn num_vertices(&self) -> usize {
        self.genera.len()
    }

    pub fn num_edges(&self) -> u32 {
        let n = self.num_vertices();
        (0..n).map(|i| (i..n).map(|j| self.mult[i][j]).sum::<u32>()).sum()
    }

    pub fn genus(&self) -> u32 {
        let h1 = self.num_edges() as i64 - self.num_vertices() as i64 + 1;
        (h1 + self.genera.iter().map(|&g| g as i64).sum::<i64>()) as u32
    }

    pub fn valence(&self, v: usize) -> u32 {
        let legs = self.leg_vertex.iter().filter(|&&w| w == v).count() as u32;
        let edges: u32 = (0..self.num_vertices()).map(|w| self.mult[v][w]).sum();
        legs + edges + self.mult[v][v]
    }

    pub fn is_connected(&self) -> bool {
        let n = self.num_vertices();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for w in 0..n {
                if self.mult[v][w] > 0 && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_stable(&self) -> bool {
        (0..self.num_vertices()).all(|v| 2 * self.genera[v] as i64 - 2 + self.valence(v) as i64 > 0)
    }

    pub fn permuted(&self, p: &[usize]) -> PlainGraph {
        // vertex v goes to position p[v]
        let n = self.num_vertices();
        let mut genera = vec![0; n];
        let mut mult = vec![vec![0; n]; n];
        for v in 0..n {
            genera[p[v]] = self.genera[v];
            for w in 0..n {
                mult[p[v]][p[w]] = self.mult[v][w];
            }
        }
        PlainGraph { genera, leg_vertex: self.leg_vertex.iter().map(|&v| p[v]).collect(), mult }
    }

    /// Lexicographically smallest relabelling over all vertex permutations.
    pub fn canonical(&self) -> PlainGraph {
        permutations(self.num_vertices()).iter().map(|p| self.permuted(p)).min().expect("at least one vertex")
    }

    /// `|Aut|` on half-edges: vertex permutations fixing the graph, times `m!` for each
    /// bundle of `m` parallel edges and `m! 2^m` for `m` loops at a vertex.
    pub fn automorphisms(&self) -> u64 {
        let vertex = permutations(self.num_vertices()).iter().filter(|p| self.permuted(p) == *self).count() as u64;
        let n = self.num_vertices();
        let mut edge_part = 1u64;
        for i in 0..n {
            edge_part *= factorial(self.mult[i][i]) << self.mult[i][i];
            for j in i + 1..n {
                edge_part *= factorial(self.mult[i][j]);
            }
        }
        vertex * edge_part
    }

    pub fn loops(&self) -> u32 {
        let h1 = self.num_edges() as i64 - self.num_vertices() as i64 + 1;
        h1 as u32
    }
}

/// All connected stable graphs of genus `g` with `n` legs, one per isomorphism class,
/// in canonical form and sorted.
pub fn stable_graphs(g: u32, n: usize) -> Vec<PlainGraph> {
    let max_vertices = (2 * g as i64 - 2 + n as i64).max(1) as usize;
    let mut found = BTreeSet::new();
    for nv in 1..=max_vertices {
        // every graph is isomorphic to one with genera in non-increasing order
        for genera in tuples(nv, g) {
            let gsum: u32 = genera.iter().sum();
            if gsum > g || genera.windows(2).any(|w| w[0] < w[1]) {
                continue;
            }
            let edges = (g - gsum) as usize + nv - 1;
            let slots: Vec<(usize, usize)> = (0..nv).flat_map(|i| (i..nv).map(move |j| (i, j))).collect();
            for counts in compositions(edges, slots.len()) {
                let mut mult = vec![vec![0u32; nv]; nv];
                for (&(i, j), &c) in slots.iter().zip(&counts) {
                    mult[i][j] = c as u32;
                    mult[j][i] = c as u32;
                }
                for legs in assignments(n, nv) {
                    let graph = PlainGraph { genera: genera.clone(), leg_vertex: legs, mult: mult.clone() };
                    if graph.is_connected() && graph.is_stable() {
                        found.insert(graph.canonical());
                    }
                }
            }
        }
    }
    found.into_iter().collect()
}

/// All vectors of length `len` with entries in `0..=max`.
fn tuples(len: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..=max).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

/// Ways to write `total` as an ordered sum of `parts` non-negative integers.
pub(crate) fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Every map from `n` items to `0..k`.
pub(crate) fn assignments(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|a| {
                (0..k).map(move |v| {
                    let mut a = a.clone();
                    a.push(v);
                    a
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_counts() {
        assert_eq!(stable_graphs(0, 3).len(), 1);
        assert_eq!(stable_graphs(0, 4).len(), 4);
        assert_eq!(stable_graphs(1, 1).len(), 2);
        assert_eq!(stable_graphs(2, 0).len(), 7);
    }

    #[test]
    fn automorphisms() {
        let theta = PlainGraph { genera: vec![0, 0], leg_vertex: vec![], mult: vec![vec![0, 3], vec![3, 0]] };
        assert_eq!(theta.automorphisms(), 12);
        let nodal = PlainGraph { genera: vec![1], leg_vertex: vec![], mult: vec![vec![1]] };
        assert_eq!(nodal.automorphisms(), 2);
        assert_eq!(nodal.genus(), 2);
    }
}
