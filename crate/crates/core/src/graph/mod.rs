//! Stable graphs `Γ = (V, H, g, ι, φ, legs)`.
//!
//! Half-edges are positional: only the genus of each vertex, the incidence map, the
//! involution and the leg labels carry meaning, so two graphs that differ by a
//! renumbering of vertices or half-edges are the same isomorphism class.

pub(crate) mod canon;
mod enumerate;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use enumerate::enumerate_stable_graphs;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("malformed graph: {0}")]
    Malformed(String),
    #[error("invalid stable graph: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("unstable type (g={g}, n={n}): need 2g-2+n > 0")]
    UnstableType { g: u32, n: usize },
}

/// One failed stable-graph invariant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    NonInvolutive { half_edge: usize },
    LegLabels(String),
    UnstableVertex { vertex: usize, genus: u32, valence: usize },
    Disconnected,
    GenusMismatch { expected: u32, actual: u32 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonInvolutive { half_edge } => {
                write!(f, "involution is not an involution at half-edge {half_edge}")
            }
            Violation::LegLabels(msg) => write!(f, "leg labels: {msg}"),
            Violation::UnstableVertex { vertex, genus, valence } => write!(
                f,
                "unstable vertex {vertex} (2*{genus}-2+{valence} <= 0)"
            ),
            Violation::Disconnected => write!(f, "graph is disconnected"),
            Violation::GenusMismatch { expected, actual } => {
                write!(f, "genus mismatch: expected {expected}, got {actual}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StableGraph {
    genera: Vec<u32>,
    incidence: Vec<usize>,
    involution: Vec<usize>,
    labels: Vec<Option<u32>>,
}

/// JSON wire form: `{"genus_list", "legs": [[h, label]], "edges": [[h, h']], "incidence"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub genus_list: Vec<u32>,
    pub legs: Vec<(usize, u32)>,
    pub edges: Vec<(usize, usize)>,
    pub incidence: Vec<usize>,
}

impl StableGraph {
    /// Assembles a graph from its raw maps, checking only that they are total and in range.
    pub fn from_parts(
        genera: Vec<u32>,
        incidence: Vec<usize>,
        involution: Vec<usize>,
        labels: Vec<Option<u32>>,
    ) -> Result<Self, GraphError> {
        let h = incidence.len();
        if involution.len() != h || labels.len() != h {
            return Err(GraphError::Malformed(format!(
                "incidence, involution and labels must all have length {h}"
            )));
        }
        if let Some(&v) = incidence.iter().find(|&&v| v >= genera.len()) {
            return Err(GraphError::Malformed(format!("incidence points at missing vertex {v}")));
        }
        if let Some(&j) = involution.iter().find(|&&j| j >= h) {
            return Err(GraphError::Malformed(format!("involution points at missing half-edge {j}")));
        }
        Ok(Self { genera, incidence, involution, labels })
    }

    /// Builds a graph from vertex genera, legs `(vertex, label)` and edges `(vertex, vertex)`.
    /// Half-edges are numbered legs first, then both ends of each edge in order.
    pub fn build(genera: &[u32], legs: &[(usize, u32)], edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut incidence = Vec::with_capacity(legs.len() + 2 * edges.len());
        let mut involution = Vec::with_capacity(incidence.capacity());
        let mut labels = Vec::with_capacity(incidence.capacity());
        for &(v, label) in legs {
            involution.push(incidence.len());
            incidence.push(v);
            labels.push(Some(label));
        }
        for &(a, b) in edges {
            let h = incidence.len();
            incidence.extend([a, b]);
            involution.extend([h + 1, h]);
            labels.extend([None, None]);
        }
        Self::from_parts(genera.to_vec(), incidence, involution, labels)
    }

    /// Single vertex of genus `g` carrying legs `1..=n`.
    pub fn smooth(g: u32, n: usize) -> Self {
        let legs: Vec<(usize, u32)> = (1..=n as u32).map(|l| (0, l)).collect();
        Self::build(&[g], &legs, &[]).expect("smooth graph is well-formed")
    }

    pub fn num_vertices(&self) -> usize {
        self.genera.len()
    }

    pub fn num_half_edges(&self) -> usize {
        self.incidence.len()
    }

    pub fn vertex_genus(&self, v: usize) -> u32 {
        self.genera[v]
    }

    pub fn genera(&self) -> &[u32] {
        &self.genera
    }

    pub fn vertex_of(&self, h: usize) -> usize {
        self.incidence[h]
    }

    pub fn partner(&self, h: usize) -> usize {
        self.involution[h]
    }

    pub fn label(&self, h: usize) -> Option<u32> {
        self.labels[h]
    }

    pub fn is_leg(&self, h: usize) -> bool {
        self.involution[h] == h
    }

    pub fn num_legs(&self) -> usize {
        (0..self.num_half_edges()).filter(|&h| self.is_leg(h)).count()
    }

    /// Edges as half-edge pairs `(h, ι(h))` with `h < ι(h)`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.num_half_edges())
            .filter(|&h| self.involution[h] > h)
            .map(|h| (h, self.involution[h]))
            .collect()
    }

    pub fn num_edges(&self) -> usize {
        self.edges().len()
    }

    /// Legs as `(half_edge, label)`.
    pub fn legs(&self) -> Vec<(usize, u32)> {
        (0..self.num_half_edges())
            .filter(|&h| self.is_leg(h))
            .map(|h| (h, self.labels[h].unwrap_or(0)))
            .collect()
    }

    pub fn half_edges_at(&self, v: usize) -> Vec<usize> {
        (0..self.num_half_edges()).filter(|&h| self.incidence[h] == v).collect()
    }

    pub fn valence(&self, v: usize) -> usize {
        self.incidence.iter().filter(|&&w| w == v).count()
    }

    /// `h¹(Γ) = |E| − |V| + 1`, assuming connectivity.
    pub fn loops(&self) -> u32 {
        (self.num_edges() + 1 - self.num_vertices()) as u32
    }

    /// `g(Γ) = h¹(Γ) + Σ_v g(v)`.
    pub fn genus(&self) -> u32 {
        self.loops() + self.genera.iter().sum::<u32>()
    }

    fn is_connected(&self) -> bool {
        let nv = self.num_vertices();
        if nv == 0 {
            return false;
        }
        let mut seen = vec![false; nv];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for h in self.half_edges_at(v) {
                let w = self.incidence[self.involution[h]];
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Checks every stable-graph invariant, reporting all failures.
    pub fn validate(&self, expected_genus: Option<u32>) -> Result<(), Vec<Violation>> {
        let mut out = Vec::new();
        for h in 0..self.num_half_edges() {
            if self.involution[self.involution[h]] != h {
                out.push(Violation::NonInvolutive { half_edge: h });
            }
        }
        let mut seen = BTreeSet::new();
        for h in 0..self.num_half_edges() {
            match (self.involution[h] == h, self.labels[h]) {
                (true, Some(l)) => {
                    if !seen.insert(l) {
                        out.push(Violation::LegLabels(format!("label {l} used twice")));
                    }
                }
                (true, None) => out.push(Violation::LegLabels(format!("leg {h} has no label"))),
                (false, Some(l)) => {
                    out.push(Violation::LegLabels(format!("half-edge {h} is on an edge but has label {l}")))
                }
                (false, None) => {}
            }
        }
        let n = seen.len() as u32;
        if !seen.iter().copied().eq(1..=n) {
            out.push(Violation::LegLabels(format!("labels {seen:?} are not 1..={n}")));
        }
        for v in 0..self.num_vertices() {
            let valence = self.valence(v);
            let genus = self.genera[v];
            if 2 * genus as i64 - 2 + valence as i64 <= 0 {
                out.push(Violation::UnstableVertex { vertex: v, genus, valence });
            }
        }
        let structural_ok = out.iter().all(|v| !matches!(v, Violation::NonInvolutive { .. }));
        if structural_ok && !self.is_connected() {
            out.push(Violation::Disconnected);
        }
        if let (Some(expected), true) = (expected_genus, structural_ok) {
            if self.num_edges() + 1 >= self.num_vertices() {
                let actual = self.genus();
                if actual != expected {
                    out.push(Violation::GenusMismatch { expected, actual });
                }
            }
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    pub fn is_valid(&self) -> bool {
        self.validate(None).is_ok()
    }

    /// Canonical form and automorphism count.
    pub fn canonical_form(&self) -> Result<CanonicalForm, GraphError> {
        self.validate(None).map_err(GraphError::Invalid)?;
        Ok(canon::canonicalize_graph(self))
    }

    pub fn to_json(&self) -> GraphJson {
        let mut legs = self.legs();
        legs.sort_unstable();
        let mut edges = self.edges();
        edges.sort_unstable();
        GraphJson {
            genus_list: self.genera.clone(),
            legs,
            edges,
            incidence: self.incidence.clone(),
        }
    }

    pub fn from_json(json: &GraphJson) -> Result<Self, GraphError> {
        let h = json.incidence.len();
        let mut involution: Vec<Option<usize>> = vec![None; h];
        let mut labels = vec![None; h];
        let claim = |a: usize, b: usize, inv: &mut Vec<Option<usize>>| -> Result<(), GraphError> {
            if a >= h || b >= h {
                return Err(GraphError::Malformed(format!("half-edge index out of range in ({a}, {b})")));
            }
            if inv[a].is_some() {
                return Err(GraphError::Malformed(format!("half-edge {a} listed twice")));
            }
            inv[a] = Some(b);
            Ok(())
        };
        for &(hh, label) in &json.legs {
            claim(hh, hh, &mut involution)?;
            labels[hh] = Some(label);
        }
        for &(a, b) in &json.edges {
            if a == b {
                return Err(GraphError::Malformed(format!("edge ({a}, {a}) joins a half-edge to itself")));
            }
            claim(a, b, &mut involution)?;
            claim(b, a, &mut involution)?;
        }
        let involution = involution
            .into_iter()
            .enumerate()
            .map(|(i, x)| x.ok_or_else(|| GraphError::Malformed(format!("half-edge {i} is neither leg nor edge end"))))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_parts(json.genus_list.clone(), json.incidence.clone(), involution, labels)
    }

    /// Returns the graph with vertices renamed by `vperm` (old → new) and half-edges by `hperm`.
    pub fn relabeled(&self, vperm: &[usize], hperm: &[usize]) -> Self {
        let nv = self.num_vertices();
        let nh = self.num_half_edges();
        let mut genera = vec![0; nv];
        for v in 0..nv {
            genera[vperm[v]] = self.genera[v];
        }
        let mut incidence = vec![0; nh];
        let mut involution = vec![0; nh];
        let mut labels = vec![None; nh];
        for h in 0..nh {
            incidence[hperm[h]] = vperm[self.incidence[h]];
            involution[hperm[h]] = hperm[self.involution[h]];
            labels[hperm[h]] = self.labels[h];
        }
        Self { genera, incidence, involution, labels }
    }
}

/// Deterministic encoding of an isomorphism class plus `|Aut(Γ)|`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub canonical_bytes: Vec<u8>,
    pub automorphism_count: u64,
    /// The canonical representative (legs first in label order, then edges).
    pub representative: StableGraph,
}

impl PartialOrd for StableGraph {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for StableGraph {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.genera, &self.incidence, &self.involution, &self.labels).cmp(&(
            &other.genera,
            &other.incidence,
            &other.involution,
            &other.labels,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theta() -> StableGraph {
        StableGraph::build(&[0, 0], &[], &[(0, 1), (0, 1), (0, 1)]).unwrap()
    }

    #[test]
    fn validation_examples() {
        assert!(StableGraph::smooth(2, 1).validate(Some(2)).is_ok());
        let bad = StableGraph::smooth(0, 2);
        assert_eq!(
            bad.validate(None),
            Err(vec![Violation::UnstableVertex { vertex: 0, genus: 0, valence: 2 }])
        );
        let looped = StableGraph::build(&[0], &[(0, 1)], &[(0, 0)]).unwrap();
        assert!(looped.validate(Some(1)).is_ok());
        assert_eq!(looped.genus(), 1);
    }

    #[test]
    fn genus_examples() {
        assert_eq!(StableGraph::smooth(3, 0).genus(), 3);
        assert_eq!(theta().genus(), 2);
        assert_eq!(StableGraph::build(&[1], &[], &[(0, 0)]).unwrap().genus(), 2);
    }

    #[test]
    fn reports_each_failure() {
        let disc = StableGraph::build(&[1, 1], &[(0, 1), (1, 2)], &[]).unwrap();
        assert_eq!(disc.validate(None), Err(vec![Violation::Disconnected]));
        let g = StableGraph::smooth(2, 1);
        assert_eq!(
            g.validate(Some(3)),
            Err(vec![Violation::GenusMismatch { expected: 3, actual: 2 }])
        );
        let broken = StableGraph::from_parts(vec![1], vec![0, 0, 0], vec![1, 2, 0], vec![None; 3]).unwrap();
        assert!(matches!(broken.validate(None).unwrap_err()[0], Violation::NonInvolutive { .. }));
        let dup = StableGraph::build(&[1], &[(0, 1), (0, 1)], &[]).unwrap();
        assert!(matches!(dup.validate(None).unwrap_err()[0], Violation::LegLabels(_)));
        assert!(StableGraph::build(&[1], &[(3, 1)], &[]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let g = StableGraph::build(&[1, 0], &[(1, 2), (1, 1)], &[(0, 1), (0, 0)]).unwrap();
        let text = serde_json::to_string(&g.to_json()).unwrap();
        let back = StableGraph::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, g);
        let bad = GraphJson { genus_list: vec![1], legs: vec![(0, 1)], edges: vec![(0, 1)], incidence: vec![0, 0] };
        assert!(StableGraph::from_json(&bad).is_err());
    }
}
