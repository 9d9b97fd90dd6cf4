use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use super::{Anchor, DegreeRule, SplitReading, TwistError, TwistedLevelGraph};
use crate::exec;
use crate::graph::{enumerate_stable_graphs, GraphError, StableGraph};

/// A level-graph search: genus, zero profile, depth `d` (levels `0..=−d`), degree rule,
/// and markings pinned to given levels.
#[derive(Debug, Clone)]
pub struct LevelGraphQuery<'a> {
    pub genus: u32,
    pub zeros: &'a [i64],
    pub depth: u32,
    pub rule: DegreeRule,
    pub pinned: Vec<(u32, i32)>,
}

/// Loop-free stable graphs of type `(g, n)`. Level graphs have no horizontal edges, so
/// self-loops never occur.
fn loop_free_bases(g: u32, n: usize) -> Result<Arc<Vec<StableGraph>>, GraphError> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, usize), Arc<Vec<StableGraph>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("cache lock").get(&(g, n)) {
        return Ok(hit.clone());
    }
    let bases: Vec<StableGraph> = enumerate_stable_graphs(g, n, g)?
        .into_iter()
        .filter(|b| b.num_vertices() > 1 && b.edges().iter().all(|&(a, c)| b.vertex_of(a) != b.vertex_of(c)))
        .collect();
    let bases = Arc::new(bases);
    cache.lock().expect("cache lock").insert((g, n), bases.clone());
    Ok(bases)
}

fn check_profile(zeros: &[i64]) -> Result<(), TwistError> {
    match zeros.iter().find(|&&z| z < 0) {
        Some(&z) => Err(TwistError::NegativeZero(z)),
        None => Ok(()),
    }
}

fn check_marking(zeros: &[i64], i: u32) -> Result<(), TwistError> {
    if i == 0 || i as usize > zeros.len() {
        Err(TwistError::BadMarking(i))
    } else {
        Ok(())
    }
}

/// Two-level graphs with the given anchors, one per isomorphism class, sorted by
/// canonical bytes.
pub fn enumerate_bicolored(
    g: u32,
    zeros: &[i64],
    anchor: Anchor,
    rule: DegreeRule,
) -> Result<Vec<TwistedLevelGraph>, TwistError> {
    check_profile(zeros)?;
    let pinned = match anchor {
        Anchor::Down(i) => {
            check_marking(zeros, i)?;
            vec![(i, -1)]
        }
        Anchor::Both(i, j) => {
            if i == j {
                return Err(TwistError::SameAnchor);
            }
            check_marking(zeros, i)?;
            check_marking(zeros, j)?;
            vec![(i, -1), (j, -1)]
        }
        Anchor::Split { down, up, reading } => {
            check_marking(zeros, down)?;
            check_marking(zeros, up)?;
            match reading {
                SplitReading::SuperscriptUp => {
                    if down == up {
                        return Err(TwistError::SameAnchor);
                    }
                    vec![(down, -1), (up, 0)]
                }
                SplitReading::Literal => vec![(down, -1), (down, 0)],
            }
        }
    };
    enumerate_level_graphs(&LevelGraphQuery { genus: g, zeros, depth: 1, rule, pinned })
}

/// Three-level graphs with marking `lower` on level −2 and `middle` on level −1. Profiles
/// with fewer than two entries give the empty list.
pub fn enumerate_tricolored(
    g: u32,
    zeros: &[i64],
    lower: u32,
    middle: u32,
    rule: DegreeRule,
) -> Result<Vec<TwistedLevelGraph>, TwistError> {
    check_profile(zeros)?;
    if zeros.len() < 2 {
        return Ok(Vec::new());
    }
    if lower == middle {
        return Err(TwistError::SameAnchor);
    }
    check_marking(zeros, lower)?;
    check_marking(zeros, middle)?;
    enumerate_level_graphs(&LevelGraphQuery {
        genus: g,
        zeros,
        depth: 2,
        rule,
        pinned: vec![(lower, -2), (middle, -1)],
    })
}

pub fn enumerate_level_graphs(q: &LevelGraphQuery<'_>) -> Result<Vec<TwistedLevelGraph>, TwistError> {
    check_profile(q.zeros)?;
    if 2 * q.genus as i64 - 2 + q.zeros.len() as i64 <= 0 {
        return Err(GraphError::UnstableType { g: q.genus, n: q.zeros.len() }.into());
    }
    if q.depth == 0 {
        return Ok(Vec::new());
    }
    let bases = loop_free_bases(q.genus, q.zeros.len())?;
    let found = exec::flat_map(&bases[..], |base| {
        let mut out = Vec::new();
        for level in level_assignments(base, q) {
            for twist in twist_solutions(base, &level, q) {
                let t = TwistedLevelGraph::new(base.clone(), twist, Some(level.clone())).expect("sizes match");
                let c = t.canonical_form();
                out.push((c.canonical_bytes, c.representative));
            }
        }
        out
    });
    let unique: BTreeMap<Vec<u8>, TwistedLevelGraph> = found.into_iter().collect();
    Ok(unique.into_values().collect())
}

/// Surjective maps onto `{0, …, −d}` separating the ends of every edge and honouring the
/// pinned markings.
fn level_assignments(base: &StableGraph, q: &LevelGraphQuery<'_>) -> Vec<Vec<i32>> {
    let nv = base.num_vertices();
    let mut fixed: Vec<Option<i32>> = vec![None; nv];
    for (h, label) in base.legs() {
        for &(l, lev) in &q.pinned {
            if l == label {
                let v = base.vertex_of(h);
                match fixed[v] {
                    Some(existing) if existing != lev => return Vec::new(),
                    _ => fixed[v] = Some(lev),
                }
            }
        }
    }
    let edges = base.edges();
    let mut out = Vec::new();
    let mut level = vec![0i32; nv];
    fn go(
        v: usize,
        base: &StableGraph,
        edges: &[(usize, usize)],
        fixed: &[Option<i32>],
        depth: i32,
        level: &mut Vec<i32>,
        out: &mut Vec<Vec<i32>>,
    ) {
        if v == level.len() {
            if (-depth..=0).all(|l| level.contains(&l)) {
                out.push(level.clone());
            }
            return;
        }
        let choices: Vec<i32> = match fixed[v] {
            Some(l) => vec![l],
            None => (-depth..=0).rev().collect(),
        };
        for l in choices {
            let clash = edges.iter().any(|&(a, b)| {
                let (x, y) = (base.vertex_of(a), base.vertex_of(b));
                (x == v && y < v && level[y] == l) || (y == v && x < v && level[x] == l)
            });
            if !clash {
                level[v] = l;
                go(v + 1, base, edges, fixed, depth, level, out);
            }
        }
    }
    go(0, base, &edges, &fixed, q.depth as i32, &mut level, &mut out);
    out
}

/// All twists compatible with `level`. Each edge has one free value, the twist `t ≤ −2`
/// on its lower half-edge. Vertices are solved from the bottom level up: when vertex `v`
/// is reached, edges going down from `v` are already fixed and the edges going up from
/// `v` share the remaining degree.
fn twist_solutions(base: &StableGraph, level: &[i32], q: &LevelGraphQuery<'_>) -> Vec<Vec<i64>> {
    let nv = base.num_vertices();
    let mut order: Vec<usize> = (0..nv).collect();
    order.sort_by_key(|&v| (level[v], v));
    let mut twist = vec![0i64; base.num_half_edges()];
    for (h, label) in base.legs() {
        twist[h] = q.zeros[label as usize - 1];
    }
    let mut out = Vec::new();
    solve(base, level, q.rule, &order, 0, &mut twist, &mut out);
    out
}

fn solve(
    base: &StableGraph,
    level: &[i32],
    rule: DegreeRule,
    order: &[usize],
    idx: usize,
    twist: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
) {
    let Some(&v) = order.get(idx) else {
        out.push(twist.clone());
        return;
    };
    let mut known = 0i64;
    let mut upward = Vec::new();
    for h in base.half_edges_at(v) {
        if base.is_leg(h) {
            known += twist[h];
            continue;
        }
        let w = base.vertex_of(base.partner(h));
        if level[w] > level[v] {
            upward.push(h);
        } else {
            known += twist[h];
        }
    }
    let constrained = match rule {
        DegreeRule::Canonical => true,
        DegreeRule::Hodge => level[v] < 0,
    };
    let target = 2 * base.vertex_genus(v) as i64 - 2 - known;
    if !constrained {
        // only level-0 vertices are free, and nothing sits above them
        debug_assert!(upward.is_empty());
        solve(base, level, rule, order, idx + 1, twist, out);
        return;
    }
    for parts in compositions(target, upward.len()) {
        for (&h, &t) in upward.iter().zip(&parts) {
            twist[h] = t;
            twist[base.partner(h)] = -t - 2;
        }
        solve(base, level, rule, order, idx + 1, twist, out);
    }
}

/// Ordered ways to write `sum` as `k` integers, each at most −2.
fn compositions(sum: i64, k: usize) -> Vec<Vec<i64>> {
    if k == 0 {
        return if sum == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let slack = -sum - 2 * k as i64;
    if slack < 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(left: i64, k: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if k == 1 {
            cur.push(-2 - left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for x in 0..=left {
            cur.push(-2 - x);
            go(left - x, k - 1, cur, out);
            cur.pop();
        }
    }
    go(slack, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compositions_small() {
        assert_eq!(compositions(-4, 2), vec![vec![-2, -2]]);
        assert_eq!(compositions(-5, 2).len(), 2);
        assert!(compositions(-3, 2).is_empty());
        assert_eq!(compositions(0, 0), vec![Vec::<i64>::new()]);
    }

    #[test]
    fn genus_two_double_zero() {
        let list = enumerate_bicolored(2, &[2], Anchor::Down(1), DegreeRule::Canonical).unwrap();
        assert!(!list.is_empty());
        for t in &list {
            assert_eq!(t.validate(&[2]), Ok(()));
            assert_eq!(t.level(t.base().vertex_of(t.base().legs()[0].0)), Some(-1));
        }
    }

    #[test]
    fn anchor_errors() {
        assert_eq!(
            enumerate_bicolored(2, &[1, 1], Anchor::Both(1, 1), DegreeRule::Canonical),
            Err(TwistError::SameAnchor)
        );
        assert_eq!(enumerate_tricolored(2, &[1, 1], 2, 2, DegreeRule::Canonical), Err(TwistError::SameAnchor));
        assert_eq!(enumerate_tricolored(2, &[2], 1, 1, DegreeRule::Canonical), Ok(Vec::new()));
        assert_eq!(
            enumerate_bicolored(2, &[2], Anchor::Down(3), DegreeRule::Canonical),
            Err(TwistError::BadMarking(3))
        );
        let literal = Anchor::Split { down: 1, up: 2, reading: SplitReading::Literal };
        assert_eq!(enumerate_bicolored(2, &[1, 1], literal, DegreeRule::Canonical), Ok(Vec::new()));
    }

    #[test]
    fn hodge_rule_allows_large_profiles() {
        // |Z| = 4 > 2g − 2 = 2: nothing under the canonical rule, bubbles under Hodge
        assert!(enumerate_bicolored(2, &[4], Anchor::Down(1), DegreeRule::Canonical).unwrap().is_empty());
        let zeros = [3, 1];
        let hodge = enumerate_bicolored(2, &zeros, Anchor::Down(1), DegreeRule::Hodge).unwrap();
        for t in &hodge {
            assert_eq!(t.validate_with(&zeros, DegreeRule::Hodge), Ok(()));
        }
        assert!(hodge.iter().any(|t| t.base().num_vertices() == 2 && t.base().vertex_genus(1) == 0
            || t.base().vertex_genus(0) == 0));
    }
}
