use std::collections::BTreeMap;

use super::{GraphError, StableGraph};
use crate::exec;

/// All stable graphs of genus `g` with legs `1..=n` and at most `max_loops` loops, one
/// per isomorphism class, sorted by canonical bytes.
///
/// Every stable graph with an edge is a one-edge degeneration (vertex split or added
/// self-loop) of a graph with one edge fewer, and contracting a non-loop edge keeps
/// `h¹`, so expanding layer by layer from the smooth graph reaches every class.
pub fn enumerate_stable_graphs(g: u32, n: usize, max_loops: u32) -> Result<Vec<StableGraph>, GraphError> {
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(GraphError::UnstableType { g, n });
    }
    let smooth = StableGraph::smooth(g, n).canonical_form()?;
    let mut all: BTreeMap<Vec<u8>, StableGraph> = BTreeMap::new();
    all.insert(smooth.canonical_bytes, smooth.representative.clone());
    let mut layer = vec![smooth.representative];
    while !layer.is_empty() {
        let found = exec::flat_map(&layer, |graph| {
            degenerations(graph)
                .into_iter()
                .filter(|d| d.loops() <= max_loops)
                .map(|d| {
                    let c = super::canon::canonicalize_graph(&d);
                    (c.canonical_bytes, c.representative)
                })
                .collect()
        });
        let mut next = BTreeMap::new();
        for (key, rep) in found {
            if !all.contains_key(&key) {
                next.entry(key).or_insert(rep);
            }
        }
        layer = next.values().cloned().collect();
        all.extend(next);
    }
    Ok(all.into_values().collect())
}

/// All graphs obtained from `graph` by one degeneration.
pub(crate) fn degenerations(graph: &StableGraph) -> Vec<StableGraph> {
    let mut out = Vec::new();
    let nh = graph.num_half_edges();
    for v in 0..graph.num_vertices() {
        let gv = graph.vertex_genus(v);
        if gv > 0 {
            let mut genera = graph.genera().to_vec();
            genera[v] -= 1;
            out.push(with_new_edge(graph, genera, v, v, &[]));
        }
        let at_v = graph.half_edges_at(v);
        let k = at_v.len();
        for mask in 0u64..(1u64 << k) {
            let moved: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| at_v[i]).collect();
            let stay = k - moved.len();
            for moved_genus in 0..=gv {
                let stay_genus = gv - moved_genus;
                let stable_stay = 2 * stay_genus as i64 - 2 + stay as i64 + 1 > 0;
                let stable_moved = 2 * moved_genus as i64 - 2 + moved.len() as i64 + 1 > 0;
                if !(stable_stay && stable_moved) {
                    continue;
                }
                let mut genera = graph.genera().to_vec();
                genera[v] = stay_genus;
                genera.push(moved_genus);
                let w = graph.num_vertices();
                out.push(with_new_edge(graph, genera, v, w, &moved));
            }
        }
    }
    debug_assert!(out.iter().all(|d| d.num_half_edges() == nh + 2));
    out
}

fn with_new_edge(graph: &StableGraph, genera: Vec<u32>, a: usize, b: usize, moved: &[usize]) -> StableGraph {
    let nh = graph.num_half_edges();
    let mut incidence: Vec<usize> = (0..nh).map(|h| graph.vertex_of(h)).collect();
    for &h in moved {
        incidence[h] = b;
    }
    incidence.extend([a, b]);
    let mut involution: Vec<usize> = (0..nh).map(|h| graph.partner(h)).collect();
    involution.extend([nh + 1, nh]);
    let mut labels: Vec<Option<u32>> = (0..nh).map(|h| graph.label(h)).collect();
    labels.extend([None, None]);
    StableGraph::from_parts(genera, incidence, involution, labels).expect("degeneration is well-formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_stable_graphs(0, 3, 0).unwrap().len(), 1);
        assert_eq!(enumerate_stable_graphs(1, 1, 1).unwrap().len(), 2);
        assert_eq!(enumerate_stable_graphs(2, 0, 2).unwrap().len(), 7);
        assert_eq!(enumerate_stable_graphs(0, 4, 0).unwrap().len(), 4);
        assert!(matches!(enumerate_stable_graphs(0, 2, 0), Err(GraphError::UnstableType { .. })));
    }

    #[test]
    fn loop_bound_and_genus() {
        for graph in enumerate_stable_graphs(2, 1, 1).unwrap() {
            assert!(graph.loops() <= 1);
            assert!(graph.validate(Some(2)).is_ok());
        }
        // compact type only
        assert_eq!(enumerate_stable_graphs(2, 0, 0).unwrap().len(), 2);
    }

    #[test]
    fn sorted_and_deterministic() {
        let a = enumerate_stable_graphs(1, 3, 1).unwrap();
        let b = enumerate_stable_graphs(1, 3, 1).unwrap();
        assert_eq!(a, b);
        let keys: Vec<Vec<u8>> = a.iter().map(|g| g.canonical_form().unwrap().canonical_bytes).collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }
}
