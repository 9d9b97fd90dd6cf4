#![allow(dead_code)]

use strata_core::{StableGraph, TwistedLevelGraph};
use strata_oracle::{LevelGraph, PlainGraph};

pub fn to_plain(g: &StableGraph) -> PlainGraph {
    let nv = g.num_vertices();
    let mut leg_vertex = vec![0; g.num_legs()];
    for (h, label) in g.legs() {
        leg_vertex[label as usize - 1] = g.vertex_of(h);
    }
    let mut mult = vec![vec![0u32; nv]; nv];
    for (a, b) in g.edges() {
        let (u, v) = (g.vertex_of(a), g.vertex_of(b));
        mult[u][v] += 1;
        if u != v {
            mult[v][u] += 1;
        }
    }
    PlainGraph { genera: g.genera().to_vec(), leg_vertex, mult }.canonical()
}

pub fn to_level(t: &TwistedLevelGraph) -> LevelGraph {
    let g = t.base();
    let mut leg_vertex = vec![0; g.num_legs()];
    for (h, label) in g.legs() {
        leg_vertex[label as usize - 1] = g.vertex_of(h);
    }
    let edges = g.edges().into_iter().map(|(a, b)| (g.vertex_of(a), g.vertex_of(b), t.twist(a), t.twist(b))).collect();
    LevelGraph {
        genera: g.genera().to_vec(),
        levels: t.levels().expect("level graph").to_vec(),
        leg_vertex,
        edges,
    }
    .canonical()
}

/// Profiles of length `n` with entries summing to at most `max`.
pub fn profiles(n: usize, max: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (0..=max).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out.into_iter().filter(|p| p.iter().sum::<i64>() <= max).collect()
}
