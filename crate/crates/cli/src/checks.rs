//! Each check returns `Ok(summary)` or `Err(first failing assertion)`.

use std::collections::BTreeSet;

use strata_core::rational::{int, Rational};
use strata_core::rt::{alpha_rt_with_order, increment_orders, pushforward_numbers, DeltaUse};
use strata_core::twist::SplitReading;
use strata_core::{
    a_g, a_symbolic, alpha_rt, enumerate_bicolored, enumerate_stable_graphs, odd_spin_count, u_closed, u_seq,
    w_seq, Anchor, CoeffError, CoeffTable, DegreeRule, RtClass, Site, StableGraph, TwistedLevelGraph,
};
use strata_oracle::{level_graphs, stable_graphs, LevelGraph, PlainGraph, Rule};

pub type CheckResult = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn pow2(k: u32) -> Rational {
    Rational::from_integer(num_bigint::BigInt::from(1) << k)
}

/// `a_g = 2^{g−1} g` and `a_g = 2 a_{g−1} + 2^{g−1}` for `1 ≤ g ≤ g_max`.
pub fn headline_constant(g_max: u32) -> CheckResult {
    for g in 1..=g_max {
        let a = a_g(g).map_err(|e| e.to_string())?;
        ensure(a == pow2(g - 1) * int(g as i64), || format!("a_{g} = {a}, expected 2^{}*{g}", g - 1))?;
        if g > 1 {
            let prev = a_g(g - 1).map_err(|e| e.to_string())?;
            ensure(a == prev * int(2) + pow2(g - 1), || format!("a_{g} breaks a_g = 2a_(g-1) + 2^(g-1)"))?;
        }
    }
    Ok(format!("g = 1..={g_max}"))
}

/// `a(g, 0, g − 1) = 2^{g−1}(2^g − 1)`, the odd spin count.
pub fn odd_spin_anchor(g_max: u32) -> CheckResult {
    let table = CoeffTable::new();
    for g in 1..=g_max {
        let a = table.a_rec(g, 0, g - 1).map_err(|e| e.to_string())?;
        let closed = pow2(g - 1) * (pow2(g) - int(1));
        ensure(a == closed, || format!("a({g},0,{}) = {a}, expected {closed}", g - 1))?;
        ensure(a == Rational::from_integer(odd_spin_count(g)), || format!("odd spin count differs at g={g}"))?;
    }
    Ok(format!("g = 1..={g_max}"))
}

/// `u_{g,n}` from its recursion equals the alternating sum of `w`.
pub fn u_closed_form(g_max: u32) -> CheckResult {
    let mut cells = 0;
    for g in 1..=g_max {
        for n in 0..g {
            let (a, b) = (u_seq(g, n).map_err(|e| e.to_string())?, u_closed(g, n).map_err(|e| e.to_string())?);
            ensure(a == b, || format!("u({g},{n}) = {a} but closed form gives {b}"))?;
            cells += 1;
        }
    }
    Ok(format!("{cells} cells"))
}

/// All three coefficient checks, for `verify coeffs`.
pub fn coeffs(g_max: u32) -> CheckResult {
    if g_max == 0 {
        return Err("genus bound must be at least 1".into());
    }
    let parts = [headline_constant(g_max)?, odd_spin_anchor(g_max)?, u_closed_form(g_max)?];
    let table = CoeffTable::new();
    for g in 1..=g_max {
        for n in 0..g {
            let w = table.a_rec(g, g as i64 - 1 - n as i64, n).map_err(|e| e.to_string())?;
            let expected = w_seq(g, n).map_err(|e| e.to_string())?;
            ensure(w == expected, || format!("a({g},{},{n}) = {w} but w = {expected}", g - 1 - n))?;
        }
    }
    Ok(parts.join("; "))
}

/// `a_symbolic = a_rec` on every reachable cell with `g ≤ g_max`, `z + 2n ≤ weight`.
pub fn two_routes(g_max: u32, weight: i64) -> CheckResult {
    let table = CoeffTable::new();
    let mut cells = Vec::new();
    for g in 1..=g_max {
        for n in 0..=(weight / 2) as u32 {
            for z in 0..=weight - 2 * n as i64 {
                cells.push((g, z, n));
            }
        }
    }
    let mut compared = 0;
    let mut skipped = 0;
    let results = strata_core::exec::map(&cells, |&(g, z, n)| match table.a_rec(g, z, n) {
        Ok(v) => Some(a_symbolic(g, z, n as usize).map(|s| (v, s)).map_err(|e| e.to_string())),
        Err(CoeffError::Unreachable { .. }) => None,
        Err(e) => Some(Err(e.to_string())),
    });
    for (&(g, z, n), r) in cells.iter().zip(results) {
        match r {
            None => skipped += 1,
            Some(r) => {
                let (rec, sym) = r?;
                ensure(rec == sym, || format!("a({g},{z},{n}): recursion {rec}, symbolic {sym}"))?;
                compared += 1;
            }
        }
    }
    Ok(format!("{compared} cells agree, {skipped} unreachable"))
}

fn elementary(z: i64, k: usize) -> Rational {
    // e_k(1, …, z)
    let mut e = vec![int(0); k + 1];
    e[0] = int(1);
    for j in 1..=z {
        for i in (1..=k).rev() {
            let prev = e[i - 1].clone();
            e[i] += prev * int(j);
        }
    }
    e[k].clone()
}

/// `α(g, (z)) = ∏_{j=1}^{z} (ξ + j ψ_1)`, truncated where `ψ_1^k` vanishes.
pub fn product_formula(g_max: u32, z_max: i64) -> CheckResult {
    for g in 1..=g_max {
        for z in 0..=z_max {
            let alpha = alpha_rt(g, &[z]).map_err(|e| e.to_string())?;
            ensure(alpha.xi_degree() as i64 == z, || format!("g={g} z={z}: xi-degree {}", alpha.xi_degree()))?;
            for k in 0..=z as usize {
                let mut expected = RtClass::one(g, 1).map_err(|e| e.to_string())?;
                for _ in 0..k {
                    expected = expected.mul_psi(&Site::Marking(1)).map_err(|e| e.to_string())?;
                }
                let expected = expected.scale(&elementary(z, k));
                let got = alpha.coefficient(z as usize - k).expect("degree checked");
                ensure(*got == expected, || format!("g={g} z={z} xi^{}: got {got}, expected {expected}", z as usize - k))?;
            }
        }
    }
    Ok(format!("g = 1..={g_max}, z = 0..={z_max}"))
}

/// Profiles of length `n` whose entries sum to at most `max`.
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
            .filter(|p| p.iter().sum::<i64>() <= max)
            .collect();
    }
    out
}

fn sweep_cases(g_max: u32, n_max: usize, size: i64) -> Vec<(u32, Vec<i64>)> {
    let mut cases = Vec::new();
    for g in 1..=g_max {
        for n in 1..=n_max {
            for zeros in profiles(n, size) {
                cases.push((g, zeros));
            }
        }
    }
    cases
}

/// Every increment order gives the same pushed-forward numbers.
pub fn order_independence(g_max: u32, n_max: usize, size: i64) -> CheckResult {
    let cases = sweep_cases(g_max, n_max, size);
    let outcomes = strata_core::exec::map(&cases, |(g, zeros)| -> Result<usize, String> {
        let orders = increment_orders(zeros);
        let mut reference = None;
        for order in &orders {
            let (alpha, _) = alpha_rt_with_order(*g, zeros, order).map_err(|e| e.to_string())?;
            let numbers = pushforward_numbers(&alpha).map_err(|e| e.to_string())?;
            match &reference {
                None => reference = Some(numbers),
                Some(r) => ensure(*r == numbers, || format!("g={g} Z={zeros:?}: order {order:?} disagrees"))?,
            }
        }
        Ok(orders.len())
    });
    let mut total = 0;
    for o in outcomes {
        total += o?;
    }
    Ok(format!("{} profiles, {total} orders", cases.len()))
}

/// `α` is homogeneous of total degree `|Z|` with top coefficient 1.
pub fn homogeneity(g_max: u32, n_max: usize, size: i64) -> CheckResult {
    let cases = sweep_cases(g_max, n_max, size);
    for (g, zeros) in &cases {
        let alpha = alpha_rt(*g, zeros).map_err(|e| e.to_string())?;
        let d: i64 = zeros.iter().sum();
        ensure(alpha.xi_degree() as i64 == d, || format!("g={g} Z={zeros:?}: xi-degree {}", alpha.xi_degree()))?;
        let one = RtClass::one(*g, zeros.len()).map_err(|e| e.to_string())?;
        ensure(alpha.coefficient(d as usize) == Some(&one), || format!("g={g} Z={zeros:?}: not monic"))?;
        for (k, c) in alpha.coefficients().iter().enumerate() {
            ensure(c.is_homogeneous_of((d - k as i64) as u32), || format!("g={g} Z={zeros:?}: xi^{k} inhomogeneous"))?;
        }
    }
    Ok(format!("{} profiles", cases.len()))
}

/// The graph in `list` with two vertices, one edge, and a genus-0 lower vertex carrying
/// exactly the legs `subset`.
fn find_bubble_graph<'a>(list: &'a [TwistedLevelGraph], subset: &[u32]) -> Option<&'a TwistedLevelGraph> {
    list.iter().find(|t| {
        let b = t.base();
        if b.num_vertices() != 2 || b.num_edges() != 1 {
            return false;
        }
        let lower = (0..2).find(|&v| t.level(v) == Some(-1));
        let Some(lower) = lower else { return false };
        let mut legs: Vec<u32> =
            b.legs().into_iter().filter(|&(h, _)| b.vertex_of(h) == lower).map(|(_, l)| l).collect();
        legs.sort();
        b.vertex_genus(lower) == 0 && legs == subset
    })
}

/// Every boundary coefficient used by the recursion is the multiplicity of the matching
/// two-level graph found by the level-graph enumeration.
pub fn coefficient_provenance(g_max: u32, n_max: usize, size: i64) -> CheckResult {
    let cases = sweep_cases(g_max, n_max, size);
    let outcomes = strata_core::exec::map(&cases, |(g, zeros)| -> Result<usize, String> {
        let mut checked = 0;
        for order in increment_orders(zeros) {
            let (_, uses) = alpha_rt_with_order(*g, zeros, &order).map_err(|e| e.to_string())?;
            for DeltaUse { pre, marking, subset, coefficient } in uses {
                let list = enumerate_bicolored(*g, &pre, Anchor::Down(marking), DegreeRule::Hodge)
                    .map_err(|e| e.to_string())?;
                let graph = find_bubble_graph(&list, &subset)
                    .ok_or_else(|| format!("g={g} pre={pre:?} k={marking}: no graph for bubble {subset:?}"))?;
                let m = graph.multiplicity().map_err(|e| e.to_string())?;
                ensure(coefficient == int(m as i64), || {
                    format!("g={g} pre={pre:?} k={marking} I={subset:?}: coefficient {coefficient}, multiplicity {m}")
                })?;
                checked += 1;
            }
        }
        Ok(checked)
    });
    let mut total = 0;
    for o in outcomes {
        total += o?;
    }
    Ok(format!("{total} boundary terms over {} profiles", cases.len()))
}

fn to_plain(g: &StableGraph) -> PlainGraph {
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

fn to_level(t: &TwistedLevelGraph) -> LevelGraph {
    let g = t.base();
    let mut leg_vertex = vec![0; g.num_legs()];
    for (h, label) in g.legs() {
        leg_vertex[label as usize - 1] = g.vertex_of(h);
    }
    let edges = g.edges().into_iter().map(|(a, b)| (g.vertex_of(a), g.vertex_of(b), t.twist(a), t.twist(b))).collect();
    LevelGraph { genera: g.genera().to_vec(), levels: t.levels().unwrap_or(&[]).to_vec(), leg_vertex, edges }
        .canonical()
}

/// Stable types `(g, n)` with `3g − 3 + n ≤ dim`.
pub fn stable_types(dim: u32) -> Vec<(u32, usize)> {
    let mut out = Vec::new();
    for g in 0..=(dim + 3) / 3 {
        for n in 0..=(dim + 3) as usize {
            if 2 * g as i64 - 2 + n as i64 > 0 && 3 * g as i64 - 3 + n as i64 <= dim as i64 {
                out.push((g, n));
            }
        }
    }
    out
}

/// Enumeration agrees with the brute-force oracle in count, classes and `|Aut|`.
pub fn graphs(dim: u32) -> CheckResult {
    let types = stable_types(dim);
    let mut total = 0;
    for &(g, n) in &types {
        let ours = enumerate_stable_graphs(g, n, u32::MAX).map_err(|e| e.to_string())?;
        let theirs = stable_graphs(g, n);
        ensure(ours.len() == theirs.len(), || format!("({g},{n}): {} graphs, oracle {}", ours.len(), theirs.len()))?;
        let mut seen = BTreeSet::new();
        for graph in &ours {
            let plain = to_plain(graph);
            let form = graph.canonical_form().map_err(|e| e.to_string())?;
            ensure(form.automorphism_count == plain.automorphisms(), || {
                format!("({g},{n}): |Aut| {} vs oracle {}", form.automorphism_count, plain.automorphisms())
            })?;
            seen.insert(plain);
        }
        ensure(seen == theirs.into_iter().collect(), || format!("({g},{n}): classes differ from oracle"))?;
        total += ours.len();
    }
    Ok(format!("{} types, {total} graphs", types.len()))
}

/// Bi-colored enumeration agrees with the oracle; merging the levels of tri-colored graphs
/// lands in the bi-colored lists.
pub fn twists(g_max: u32, size: i64) -> CheckResult {
    let mut compared = 0;
    for g in 1..=g_max {
        for n in 1..=2 {
            for zeros in profiles(n, size) {
                for (rule, oracle_rule) in [(DegreeRule::Canonical, Rule::Canonical), (DegreeRule::Hodge, Rule::Hodge)] {
                    for k in 1..=n as u32 {
                        let ours = enumerate_bicolored(g, &zeros, Anchor::Down(k), rule).map_err(|e| e.to_string())?;
                        let ours: BTreeSet<LevelGraph> = ours.iter().map(to_level).collect();
                        let theirs: BTreeSet<LevelGraph> =
                            level_graphs(g, &zeros, 1, oracle_rule, &[(k, -1)]).into_iter().collect();
                        ensure(ours == theirs, || format!("g={g} Z={zeros:?} k={k} {rule:?}: differs from oracle"))?;
                        compared += 1;
                    }
                    if n == 2 {
                        let tri = strata_core::enumerate_tricolored(g, &zeros, 1, 2, rule).map_err(|e| e.to_string())?;
                        let split = Anchor::Split { down: 1, up: 2, reading: SplitReading::SuperscriptUp };
                        let up: BTreeSet<Vec<u8>> = enumerate_bicolored(g, &zeros, split, rule)
                            .map_err(|e| e.to_string())?
                            .iter()
                            .map(|t| t.canonical_form().canonical_bytes)
                            .collect();
                        for t in &tri {
                            let merged = t.merge_levels(0).map_err(|e| e.to_string())?;
                            ensure(up.contains(&merged.canonical_form().canonical_bytes), || {
                                format!("g={g} Z={zeros:?}: merged tri-colored graph missing")
                            })?;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{compared} bi-colored lists"))
}
