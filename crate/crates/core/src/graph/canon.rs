//! Canonical labelling by colour refinement plus individualisation.
//!
//! A graph is presented as vertex keys and a list of edges `(a, b, key_a, key_b)` where
//! the keys decorate the two half-edges. Legs are folded into the vertex keys. The code
//! of a vertex ordering lists the keys in order followed by the sorted, normalised
//! edges; the canonical code is the minimum over all leaves of the search tree.
//! Leaves that attain the minimum are exactly one orbit of the vertex automorphism
//! group, so counting them gives `|Aut_V|`. Half-edge automorphisms that fix every
//! vertex come from permuting parallel equal edges and flipping symmetric loops.

use super::{CanonicalForm, StableGraph};

pub(crate) struct Presentation {
    pub vertex_keys: Vec<Vec<i64>>,
    pub edges: Vec<(usize, usize, i64, i64)>,
}

pub(crate) struct Labelling {
    /// `order[p]` is the original vertex placed at position `p`.
    pub order: Vec<usize>,
    pub code: Vec<i64>,
    pub automorphisms: u64,
}

type Partition = Vec<Vec<usize>>;

fn refine(p: &Presentation, adj: &[Vec<(usize, i64, i64)>], mut cells: Partition) -> Partition {
    let n = p.vertex_keys.len();
    loop {
        let mut cell_of = vec![0usize; n];
        for (c, cell) in cells.iter().enumerate() {
            for &v in cell {
                cell_of[v] = c;
            }
        }
        let mut next: Partition = Vec::with_capacity(cells.len());
        for cell in &cells {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut sigs: Vec<(Vec<(usize, i64, i64)>, usize)> = cell
                .iter()
                .map(|&v| {
                    let mut s: Vec<(usize, i64, i64)> =
                        adj[v].iter().map(|&(w, kv, kw)| (cell_of[w], kv, kw)).collect();
                    s.sort_unstable();
                    (s, v)
                })
                .collect();
            sigs.sort();
            let mut start = 0;
            for i in 1..=sigs.len() {
                if i == sigs.len() || sigs[i].0 != sigs[start].0 {
                    next.push(sigs[start..i].iter().map(|(_, v)| *v).collect());
                    start = i;
                }
            }
        }
        if next.len() == cells.len() {
            return next;
        }
        cells = next;
    }
}

fn code_for(p: &Presentation, order: &[usize]) -> Vec<i64> {
    let n = order.len();
    let mut pos = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut code = vec![n as i64];
    for &v in order {
        code.push(p.vertex_keys[v].len() as i64);
        code.extend_from_slice(&p.vertex_keys[v]);
    }
    code.push(p.edges.len() as i64);
    code.extend(normalized_edges(p, &pos).into_iter().flat_map(|(a, ka, b, kb)| [a as i64, ka, b as i64, kb]));
    code
}

fn normalized_edges(p: &Presentation, pos: &[usize]) -> Vec<(usize, i64, usize, i64)> {
    let mut out: Vec<(usize, i64, usize, i64)> = p
        .edges
        .iter()
        .map(|&(a, b, ka, kb)| {
            let x = (pos[a], ka);
            let y = (pos[b], kb);
            if x <= y {
                (x.0, x.1, y.0, y.1)
            } else {
                (y.0, y.1, x.0, x.1)
            }
        })
        .collect();
    out.sort_unstable();
    out
}

fn fixed_vertex_automorphisms(edges: &[(usize, i64, usize, i64)]) -> u64 {
    let mut total = 1u64;
    let mut i = 0;
    while i < edges.len() {
        let mut j = i;
        while j < edges.len() && edges[j] == edges[i] {
            j += 1;
        }
        let m = (j - i) as u64;
        total *= (1..=m).product::<u64>();
        let (a, ka, b, kb) = edges[i];
        if a == b && ka == kb {
            total <<= m;
        }
        i = j;
    }
    total
}

struct Search<'a> {
    p: &'a Presentation,
    adj: Vec<Vec<(usize, i64, i64)>>,
    best: Option<(Vec<i64>, Vec<usize>)>,
    hits: u64,
}

impl Search<'_> {
    fn visit(&mut self, cells: Partition) {
        let Some(target) = cells.iter().position(|c| c.len() > 1) else {
            let order: Vec<usize> = cells.into_iter().map(|c| c[0]).collect();
            let code = code_for(self.p, &order);
            match &self.best {
                Some((best, _)) if code > *best => {}
                Some((best, _)) if code == *best => self.hits += 1,
                _ => {
                    self.best = Some((code, order));
                    self.hits = 1;
                }
            }
            return;
        };
        for &v in &cells[target] {
            let mut next = cells.clone();
            let rest: Vec<usize> = next[target].iter().copied().filter(|&w| w != v).collect();
            next.splice(target..=target, [vec![v], rest]);
            let refined = refine(self.p, &self.adj, next);
            self.visit(refined);
        }
    }
}

pub(crate) fn canonical_labelling(p: &Presentation) -> Labelling {
    let n = p.vertex_keys.len();
    let mut adj = vec![Vec::new(); n];
    for &(a, b, ka, kb) in &p.edges {
        adj[a].push((b, ka, kb));
        adj[b].push((a, kb, ka));
    }
    let mut by_key: Vec<usize> = (0..n).collect();
    by_key.sort_by(|&x, &y| p.vertex_keys[x].cmp(&p.vertex_keys[y]));
    let mut cells: Partition = Vec::new();
    for v in by_key {
        match cells.last_mut() {
            Some(cell) if p.vertex_keys[cell[0]] == p.vertex_keys[v] => cell.push(v),
            _ => cells.push(vec![v]),
        }
    }
    let cells = refine(p, &adj, cells);
    let mut search = Search { p, adj, best: None, hits: 0 };
    search.visit(cells);
    let (code, order) = search.best.expect("search visits at least one leaf");
    let mut pos = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let automorphisms = search.hits * fixed_vertex_automorphisms(&normalized_edges(p, &pos));
    Labelling { order, code, automorphisms }
}

pub(crate) fn code_bytes(code: &[i64]) -> Vec<u8> {
    // Sign-flipped big-endian keeps byte order equal to numeric order.
    code.iter().flat_map(|&x| ((x as u64) ^ (1 << 63)).to_be_bytes()).collect()
}

pub(crate) fn graph_presentation(g: &StableGraph, half_edge_key: impl Fn(usize) -> i64, vertex_extra: impl Fn(usize) -> Vec<i64>) -> Presentation {
    let nv = g.num_vertices();
    let mut vertex_keys: Vec<Vec<i64>> = (0..nv)
        .map(|v| {
            let mut k = vec![g.vertex_genus(v) as i64];
            k.extend(vertex_extra(v));
            k
        })
        .collect();
    let mut legs_at: Vec<Vec<(i64, i64)>> = vec![Vec::new(); nv];
    for (h, label) in g.legs() {
        legs_at[g.vertex_of(h)].push((label as i64, half_edge_key(h)));
    }
    for (v, mut legs) in legs_at.into_iter().enumerate() {
        legs.sort_unstable();
        vertex_keys[v].push(legs.len() as i64);
        vertex_keys[v].extend(legs.into_iter().flat_map(|(l, k)| [l, k]));
    }
    let edges = g
        .edges()
        .into_iter()
        .map(|(a, b)| (g.vertex_of(a), g.vertex_of(b), half_edge_key(a), half_edge_key(b)))
        .collect();
    Presentation { vertex_keys, edges }
}

/// Rebuilds `g` with vertices in `order` and half-edges numbered legs-by-label then
/// edges in normalised order. Returns the graph and the half-edge map old → new.
pub(crate) fn rebuild(g: &StableGraph, order: &[usize], half_edge_key: impl Fn(usize) -> i64) -> (StableGraph, Vec<usize>) {
    let nv = g.num_vertices();
    let mut pos = vec![0usize; nv];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut legs = g.legs();
    legs.sort_by_key(|&(_, l)| l);
    let mut hperm = vec![0usize; g.num_half_edges()];
    let mut next = 0;
    for (h, _) in legs {
        hperm[h] = next;
        next += 1;
    }
    let mut edges: Vec<((usize, i64, usize, i64), usize, usize)> = g
        .edges()
        .into_iter()
        .map(|(a, b)| {
            let x = (pos[g.vertex_of(a)], half_edge_key(a), a);
            let y = (pos[g.vertex_of(b)], half_edge_key(b), b);
            let (x, y) = if (x.0, x.1) <= (y.0, y.1) { (x, y) } else { (y, x) };
            ((x.0, x.1, y.0, y.1), x.2, y.2)
        })
        .collect();
    edges.sort_by_key(|e| e.0);
    for (_, a, b) in edges {
        hperm[a] = next;
        hperm[b] = next + 1;
        next += 2;
    }
    (g.relabeled(&pos, &hperm), hperm)
}

pub(crate) fn canonicalize_graph(g: &StableGraph) -> CanonicalForm {
    let p = graph_presentation(g, |_| 0, |_| Vec::new());
    let lab = canonical_labelling(&p);
    let (representative, _) = rebuild(g, &lab.order, |_| 0);
    CanonicalForm {
        canonical_bytes: code_bytes(&lab.code),
        automorphism_count: lab.automorphisms,
        representative,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn automorphism_examples() {
        for g in 0..4 {
            for n in 0..3usize {
                if 2 * g as i64 - 2 + n as i64 > 0 {
                    assert_eq!(StableGraph::smooth(g, n).canonical_form().unwrap().automorphism_count, 1);
                }
            }
        }
        let loop_graph = StableGraph::build(&[1], &[], &[(0, 0)]).unwrap();
        assert_eq!(loop_graph.canonical_form().unwrap().automorphism_count, 2);
        let theta = StableGraph::build(&[0, 0], &[], &[(0, 1), (0, 1), (0, 1)]).unwrap();
        assert_eq!(theta.canonical_form().unwrap().automorphism_count, 12);
        // two loops on one genus-0 vertex with a leg: 2! * 2^2
        let two_loops = StableGraph::build(&[0], &[(0, 1)], &[(0, 0), (0, 0)]).unwrap();
        assert_eq!(two_loops.canonical_form().unwrap().automorphism_count, 8);
    }

    #[test]
    fn isomorphic_inputs_agree() {
        let a = StableGraph::build(&[1, 0], &[(1, 1), (1, 2)], &[(0, 1)]).unwrap();
        let b = StableGraph::build(&[0, 1], &[(0, 2), (0, 1)], &[(1, 0)]).unwrap();
        let c = StableGraph::build(&[1, 1], &[(0, 1), (1, 2)], &[(1, 0)]).unwrap();
        let fa = a.canonical_form().unwrap();
        assert_eq!(fa.canonical_bytes, b.canonical_form().unwrap().canonical_bytes);
        assert_ne!(fa.canonical_bytes, c.canonical_form().unwrap().canonical_bytes);
        assert_eq!(fa.representative.canonical_form().unwrap(), fa);
    }

    #[test]
    fn byte_order_matches_code_order() {
        let codes = [vec![-3i64, 5], vec![-1, 0], vec![0, 0], vec![2, -7]];
        for w in codes.windows(2) {
            assert!(code_bytes(&w[0]) < code_bytes(&w[1]));
        }
    }
}
