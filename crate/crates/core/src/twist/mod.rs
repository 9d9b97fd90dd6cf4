//! Twists, level functions and level graphs.
//!
//! A twist assigns an integer `μ(h)` to every half-edge with `μ(h) = −μ(h′) − 2` across
//! each edge. The half-edge with `μ(h) + 1 > 0` sits on the upper end of its edge;
//! `μ(h) = μ(h′) = −1` is a horizontal edge. A level function maps vertices onto
//! `{0, −1, …, −d}` and strictly decreases along every oriented edge.

mod enumerate;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::canon::{self, code_bytes};
use crate::graph::{GraphError, GraphJson, StableGraph, Violation};

pub use enumerate::{enumerate_bicolored, enumerate_level_graphs, enumerate_tricolored, LevelGraphQuery};

/// Which vertices must satisfy `Σ_{h↦v} μ(h) = 2g(v) − 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum DegreeRule {
    /// Every vertex (twisted canonical divisors; forces `Σ z_i = 2g − 2`).
    #[default]
    Canonical,
    /// Only vertices below level 0 (for bare twisted graphs: vertices that are not
    /// maximal). Level-0 vertices are unconstrained, as in the formal stratum recursion
    /// where the top level carries the Hodge-bundle differential.
    Hodge,
}

/// How to read the marking that is placed at level 0 in `Bic_{i,j}^{i′,j′}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SplitReading {
    /// `x_{i,j}` at level −1 and `x_{i′,j′}` at level 0.
    SuperscriptUp,
    /// `x_{i,j}` at level 0 as well as −1: contradictory, always empty.
    Literal,
}

/// Marking constraints for bi-colored enumeration (labels are 1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Anchor {
    Down(u32),
    Both(u32, u32),
    Split { down: u32, up: u32, reading: SplitReading },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TwistError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("malformed twisted graph: {0}")]
    Malformed(String),
    #[error("invalid twisted graph: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<TwistViolation>),
    #[error("horizontal edge ({0}, {1}) has multiplicity 0")]
    Horizontal(usize, usize),
    #[error("anchors must be distinct")]
    SameAnchor,
    #[error("marking {0} is out of range")]
    BadMarking(u32),
    #[error("zero profile entries must be non-negative, got {0}")]
    NegativeZero(i64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum TwistViolation {
    Base(Vec<Violation>),
    ProfileLength { legs: usize, zeros: usize },
    LegTwist { label: u32, twist: i64, expected: i64 },
    EdgeCondition { half_edge: usize, partner: usize },
    VertexDegree { vertex: usize, sum: i64, expected: i64 },
    HorizontalEdge { half_edge: usize, partner: usize },
    OrderCycle,
    LevelRange { vertex: usize, level: i32 },
    LevelOrder { upper: usize, lower: usize },
    LevelSurjectivity { missing: i32 },
}

impl fmt::Display for TwistViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TwistViolation::Base(v) => {
                write!(f, "base graph: {}", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
            }
            TwistViolation::ProfileLength { legs, zeros } => {
                write!(f, "zero profile has {zeros} entries for {legs} legs")
            }
            TwistViolation::LegTwist { label, twist, expected } => {
                write!(f, "leg {label} has twist {twist}, profile asks for {expected}")
            }
            TwistViolation::EdgeCondition { half_edge, partner } => {
                write!(f, "edge condition fails on ({half_edge}, {partner})")
            }
            TwistViolation::VertexDegree { vertex, sum, expected } => {
                write!(f, "vertex degree condition fails at vertex {vertex}: sum {sum} != {expected}")
            }
            TwistViolation::HorizontalEdge { half_edge, partner } => {
                write!(f, "horizontal edge ({half_edge}, {partner})")
            }
            TwistViolation::OrderCycle => write!(f, "twist orientation has a directed cycle"),
            TwistViolation::LevelRange { vertex, level } => {
                write!(f, "vertex {vertex} has positive level {level}")
            }
            TwistViolation::LevelOrder { upper, lower } => {
                write!(f, "level does not decrease from vertex {upper} to vertex {lower}")
            }
            TwistViolation::LevelSurjectivity { missing } => write!(f, "level {missing} is not attained"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TwistedLevelGraph {
    base: StableGraph,
    twist: Vec<i64>,
    level: Option<Vec<i32>>,
}

/// JSON form: the graph encoding plus `"twists": [[h, μ]]` and optional `"levels": [[v, ℓ]]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistedJson {
    #[serde(flatten)]
    pub graph: GraphJson,
    pub twists: Vec<(usize, i64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<Vec<(usize, i32)>>,
}

/// Canonical bytes and `|Aut|` for automorphisms commuting with twist and level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedCanonicalForm {
    pub canonical_bytes: Vec<u8>,
    pub automorphism_count: u64,
    pub representative: TwistedLevelGraph,
}

impl TwistedLevelGraph {
    pub fn new(base: StableGraph, twist: Vec<i64>, level: Option<Vec<i32>>) -> Result<Self, TwistError> {
        if twist.len() != base.num_half_edges() {
            return Err(TwistError::Malformed(format!(
                "{} twists for {} half-edges",
                twist.len(),
                base.num_half_edges()
            )));
        }
        if let Some(l) = &level {
            if l.len() != base.num_vertices() {
                return Err(TwistError::Malformed(format!(
                    "{} levels for {} vertices",
                    l.len(),
                    base.num_vertices()
                )));
            }
        }
        Ok(Self { base, twist, level })
    }

    pub fn base(&self) -> &StableGraph {
        &self.base
    }

    pub fn twist(&self, h: usize) -> i64 {
        self.twist[h]
    }

    pub fn twists(&self) -> &[i64] {
        &self.twist
    }

    pub fn levels(&self) -> Option<&[i32]> {
        self.level.as_deref()
    }

    pub fn level(&self, v: usize) -> Option<i32> {
        self.level.as_ref().map(|l| l[v])
    }

    /// Depth `d` of the level function (0 for bare twisted graphs).
    pub fn depth(&self) -> u32 {
        self.level.as_ref().map_or(0, |l| l.iter().map(|x| (-x).max(0) as u32).max().unwrap_or(0))
    }

    pub fn vertex_twist_sum(&self, v: usize) -> i64 {
        self.base.half_edges_at(v).into_iter().map(|h| self.twist[h]).sum()
    }

    pub fn is_horizontal(&self, h: usize) -> bool {
        !self.base.is_leg(h) && self.twist[h] == -1
    }

    /// For a non-horizontal edge through `h`, the (upper, lower) vertices.
    pub fn orientation(&self, h: usize) -> Option<(usize, usize)> {
        let p = self.base.partner(h);
        if p == h || self.twist[h] == -1 {
            return None;
        }
        let (up, down) = if self.twist[h] + 1 > 0 { (h, p) } else { (p, h) };
        Some((self.base.vertex_of(up), self.base.vertex_of(down)))
    }

    /// Vertices that must satisfy the degree equality under `rule`.
    fn constrained(&self, rule: DegreeRule, v: usize) -> bool {
        match rule {
            DegreeRule::Canonical => true,
            DegreeRule::Hodge => match &self.level {
                Some(l) => l[v] < 0,
                None => self
                    .base
                    .half_edges_at(v)
                    .into_iter()
                    .any(|h| !self.base.is_leg(h) && self.twist[h] + 1 < 0),
            },
        }
    }

    /// Checks the twisted-graph invariants and compatibility with the zero profile `zeros`
    /// (entry `i` is the twist required at the leg labelled `i + 1`) under the canonical
    /// degree rule.
    pub fn validate(&self, zeros: &[i64]) -> Result<(), Vec<TwistViolation>> {
        self.validate_with(zeros, DegreeRule::Canonical)
    }

    pub fn validate_with(&self, zeros: &[i64], rule: DegreeRule) -> Result<(), Vec<TwistViolation>> {
        let g = &self.base;
        if let Err(v) = g.validate(None) {
            return Err(vec![TwistViolation::Base(v)]);
        }
        let mut out = Vec::new();
        let legs = g.legs();
        if legs.len() != zeros.len() {
            out.push(TwistViolation::ProfileLength { legs: legs.len(), zeros: zeros.len() });
        } else {
            for &(h, label) in &legs {
                let expected = zeros[label as usize - 1];
                if self.twist[h] != expected {
                    out.push(TwistViolation::LegTwist { label, twist: self.twist[h], expected });
                }
            }
        }
        for (a, b) in g.edges() {
            if self.twist[a] != -self.twist[b] - 2 {
                out.push(TwistViolation::EdgeCondition { half_edge: a, partner: b });
            }
        }
        for v in 0..g.num_vertices() {
            if self.constrained(rule, v) {
                let sum = self.vertex_twist_sum(v);
                let expected = 2 * g.vertex_genus(v) as i64 - 2;
                if sum != expected {
                    out.push(TwistViolation::VertexDegree { vertex: v, sum, expected });
                }
            }
        }
        if out.iter().any(|v| matches!(v, TwistViolation::EdgeCondition { .. })) {
            return Err(out);
        }
        match &self.level {
            None => {
                if !self.order_is_acyclic() {
                    out.push(TwistViolation::OrderCycle);
                }
            }
            Some(level) => {
                for (v, &l) in level.iter().enumerate() {
                    if l > 0 {
                        out.push(TwistViolation::LevelRange { vertex: v, level: l });
                    }
                }
                for (a, b) in g.edges() {
                    match self.orientation(a) {
                        None => out.push(TwistViolation::HorizontalEdge { half_edge: a, partner: b }),
                        Some((up, down)) => {
                            if level[up] <= level[down] {
                                out.push(TwistViolation::LevelOrder { upper: up, lower: down });
                            }
                        }
                    }
                }
                let attained: BTreeSet<i32> = level.iter().copied().collect();
                let bottom = level.iter().copied().min().unwrap_or(0).min(0);
                for l in bottom..=0 {
                    if !attained.contains(&l) {
                        out.push(TwistViolation::LevelSurjectivity { missing: l });
                    }
                }
            }
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    /// Horizontal edges collapse their endpoints; the remaining strict edges must not
    /// close a directed cycle.
    fn order_is_acyclic(&self) -> bool {
        let g = &self.base;
        let n = g.num_vertices();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for (a, b) in g.edges() {
            if self.twist[a] == -1 {
                let (x, y) = (find(&mut parent, g.vertex_of(a)), find(&mut parent, g.vertex_of(b)));
                parent[x] = y;
            }
        }
        let mut succ = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for (a, _) in g.edges() {
            if let Some((up, down)) = self.orientation(a) {
                let (u, d) = (find(&mut parent, up), find(&mut parent, down));
                if u == d {
                    return false;
                }
                succ[u].push(d);
                indeg[d] += 1;
            }
        }
        let classes: BTreeSet<usize> = (0..n).map(|v| find(&mut parent, v)).collect();
        let mut ready: Vec<usize> = classes.iter().copied().filter(|&c| indeg[c] == 0).collect();
        let mut seen = 0;
        while let Some(c) = ready.pop() {
            seen += 1;
            for &d in &succ[c] {
                indeg[d] -= 1;
                if indeg[d] == 0 {
                    ready.push(d);
                }
            }
        }
        seen == classes.len()
    }

    /// `m(Γ̄) = Π_e |μ(h) + 1|`.
    pub fn multiplicity(&self) -> Result<u64, TwistError> {
        let mut m = 1u64;
        for (a, b) in self.base.edges() {
            let mu = (self.twist[a] + 1).unsigned_abs();
            if mu == 0 {
                return Err(TwistError::Horizontal(a, b));
            }
            m = m
                .checked_mul(mu)
                .ok_or_else(|| TwistError::Malformed("multiplicity overflows u64".into()))?;
        }
        Ok(m)
    }

    pub fn canonical_form(&self) -> TwistedCanonicalForm {
        let p = self.presentation();
        let lab = canon::canonical_labelling(&p);
        let twist = &self.twist;
        let (base, hperm) = canon::rebuild(&self.base, &lab.order, |h| twist[h]);
        let mut new_twist = vec![0; twist.len()];
        for (h, &t) in twist.iter().enumerate() {
            new_twist[hperm[h]] = t;
        }
        let level = self.level.as_ref().map(|l| lab.order.iter().map(|&v| l[v]).collect());
        TwistedCanonicalForm {
            canonical_bytes: code_bytes(&lab.code),
            automorphism_count: lab.automorphisms,
            representative: TwistedLevelGraph { base, twist: new_twist, level },
        }
    }

    fn presentation(&self) -> canon::Presentation {
        let level = self.level.clone();
        canon::graph_presentation(&self.base, |h| self.twist[h], move |v| {
            level.as_ref().map(|l| vec![l[v] as i64]).unwrap_or_default()
        })
    }

    /// Contracts every edge between levels `top` and `top − 1` and closes the gap in the
    /// level function. Merged vertex genus is `Σ g(v) + h¹` of the contracted piece.
    pub fn merge_levels(&self, top: i32) -> Result<TwistedLevelGraph, TwistError> {
        let level = self
            .level
            .as_ref()
            .ok_or_else(|| TwistError::Malformed("merge_levels needs a level function".into()))?;
        let g = &self.base;
        let n = g.num_vertices();
        let in_band = |v: usize| level[v] == top || level[v] == top - 1;
        let mut comp: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        let contracted: Vec<(usize, usize)> = g
            .edges()
            .into_iter()
            .filter(|&(a, b)| in_band(g.vertex_of(a)) && in_band(g.vertex_of(b)))
            .collect();
        for &(a, b) in &contracted {
            let (x, y) = (find(&mut comp, g.vertex_of(a)), find(&mut comp, g.vertex_of(b)));
            comp[x] = y;
        }
        let roots: Vec<usize> = (0..n).map(|v| find(&mut comp, v)).collect();
        let reps: Vec<usize> = roots.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        let index = |r: usize| reps.binary_search(&r).expect("root is a representative");
        let mut genera = vec![0i64; reps.len()];
        let mut vcount = vec![0i64; reps.len()];
        let mut ecount = vec![0i64; reps.len()];
        let mut new_level = vec![0i32; reps.len()];
        for v in 0..n {
            let i = index(roots[v]);
            genera[i] += g.vertex_genus(v) as i64;
            vcount[i] += 1;
            new_level[i] = match level[v] {
                l if l > top => l,
                l if l < top - 1 => l + 1,
                _ => top,
            };
        }
        for &(a, _) in &contracted {
            ecount[index(roots[g.vertex_of(a)])] += 1;
        }
        let genera: Vec<u32> = (0..reps.len()).map(|i| (genera[i] + ecount[i] - vcount[i] + 1) as u32).collect();
        let dropped: BTreeSet<usize> = contracted.iter().flat_map(|&(a, b)| [a, b]).collect();
        let kept: Vec<usize> = (0..g.num_half_edges()).filter(|h| !dropped.contains(h)).collect();
        let new_index = |h: usize| kept.binary_search(&h).expect("kept half-edge");
        let incidence = kept.iter().map(|&h| index(roots[g.vertex_of(h)])).collect();
        let involution = kept.iter().map(|&h| new_index(g.partner(h))).collect();
        let labels = kept.iter().map(|&h| g.label(h)).collect();
        let twist = kept.iter().map(|&h| self.twist[h]).collect();
        let base = StableGraph::from_parts(genera, incidence, involution, labels)?;
        TwistedLevelGraph::new(base, twist, Some(new_level))
    }

    pub fn to_json(&self) -> TwistedJson {
        let mut twists: Vec<(usize, i64)> = self.twist.iter().copied().enumerate().collect();
        twists.sort_unstable();
        TwistedJson {
            graph: self.base.to_json(),
            twists,
            levels: self.level.as_ref().map(|l| l.iter().copied().enumerate().collect()),
        }
    }

    pub fn from_json(json: &TwistedJson) -> Result<Self, TwistError> {
        let base = StableGraph::from_json(&json.graph)?;
        let mut twist = vec![None; base.num_half_edges()];
        for &(h, t) in &json.twists {
            let slot = twist
                .get_mut(h)
                .ok_or_else(|| TwistError::Malformed(format!("twist for missing half-edge {h}")))?;
            *slot = Some(t);
        }
        let twist = twist
            .into_iter()
            .enumerate()
            .map(|(h, t)| t.ok_or_else(|| TwistError::Malformed(format!("half-edge {h} has no twist"))))
            .collect::<Result<Vec<_>, _>>()?;
        let level = match &json.levels {
            None => None,
            Some(pairs) => {
                let mut level = vec![None; base.num_vertices()];
                for &(v, l) in pairs {
                    *level
                        .get_mut(v)
                        .ok_or_else(|| TwistError::Malformed(format!("level for missing vertex {v}")))? = Some(l);
                }
                Some(
                    level
                        .into_iter()
                        .enumerate()
                        .map(|(v, l)| l.ok_or_else(|| TwistError::Malformed(format!("vertex {v} has no level"))))
                        .collect::<Result<Vec<_>, _>>()?,
                )
            }
        };
        Self::new(base, twist, level)
    }
}
