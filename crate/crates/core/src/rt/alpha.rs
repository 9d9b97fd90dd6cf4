//! The inductive class `α(g, Z)` on the rational-tails locus.
//!
//! Starting from `α(g, 0, …, 0) = 1`, raising entry `k` of the profile `P` to get `Q`
//! multiplies by `ξ + Q_k ψ_k` and subtracts `m · δ_{0,I} · α(g, P)` for every marking set
//! `I ∋ k` with `|I| ≥ 2`. Here `m` is the multiplicity of the two-level graph whose
//! genus-0 lower vertex carries the legs `I` with the twists of `P`.

use std::fmt;

use num_traits::Zero;

use super::{labels_of, render_sum, render_term, RtClass, RtError, Site};
use crate::exec;
use crate::graph::StableGraph;
use crate::rational::{factorial, int, Rational};
use crate::twist::TwistedLevelGraph;

/// Polynomial in ξ with class coefficients; `coeffs[k]` multiplies `ξ^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XiPoly {
    coeffs: Vec<RtClass>,
}

impl XiPoly {
    pub fn one(genus: u32, n: usize) -> Result<Self, RtError> {
        Ok(XiPoly { coeffs: vec![RtClass::one(genus, n)?] })
    }

    pub fn genus(&self) -> u32 {
        self.coeffs[0].genus()
    }

    pub fn num_markings(&self) -> usize {
        self.coeffs[0].num_markings()
    }

    /// Highest power of ξ that is stored.
    pub fn xi_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficient(&self, k: usize) -> Option<&RtClass> {
        self.coeffs.get(k)
    }

    pub fn coefficients(&self) -> &[RtClass] {
        &self.coeffs
    }

    pub fn render(&self) -> String {
        let mut items = Vec::new();
        for (k, class) in self.coeffs.iter().enumerate().rev() {
            let xi = match k {
                0 => String::new(),
                1 => "xi".to_string(),
                k => format!("xi^{k}"),
            };
            for (t, c) in &class.terms {
                let mono = render_term(t);
                let joined = match (xi.is_empty(), mono.is_empty()) {
                    (true, _) => mono,
                    (false, true) => xi.clone(),
                    (false, false) => format!("{xi}*{mono}"),
                };
                items.push((joined, c.clone()));
            }
        }
        render_sum(items.into_iter())
    }
}

impl fmt::Display for XiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// One boundary term of an increment step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaUse {
    /// Profile before the increment.
    pub pre: Vec<i64>,
    /// Marking being raised (1-based).
    pub marking: u32,
    /// The set `I` of markings on the bubble.
    pub subset: Vec<u32>,
    pub coefficient: Rational,
}

fn check_profile(zeros: &[i64]) -> Result<(), RtError> {
    match zeros.iter().find(|&&z| z < 0) {
        Some(&z) => Err(RtError::NegativeEntry(z)),
        None => Ok(()),
    }
}

/// Multiplicity of the two-level graph: genus-`g` top vertex, genus-0 bottom vertex with
/// the legs in `mask`, one edge.
fn bubble_multiplicity(g: u32, pre: &[i64], mask: u64) -> Rational {
    let n = pre.len();
    let legs: Vec<(usize, u32)> =
        (0..n).map(|i| (usize::from(mask >> i & 1 == 1), i as u32 + 1)).collect();
    let base = StableGraph::build(&[g, 0], &legs, &[(0, 1)]).expect("bubble graph is stable");
    let lower: i64 = -2 - (0..n).filter(|i| mask >> i & 1 == 1).map(|i| pre[i]).sum::<i64>();
    let mut twist: Vec<i64> = pre.to_vec();
    twist.extend([-lower - 2, lower]);
    let graph = TwistedLevelGraph::new(base, twist, Some(vec![0, -1])).expect("sizes match");
    int(graph.multiplicity().expect("bubble edge is not horizontal") as i64)
}

/// One increment: returns `α(g, pre + e_k)` from `α(g, pre)` and the boundary terms used.
pub fn increment_step(alpha: &XiPoly, pre: &[i64], k: u32) -> Result<(XiPoly, Vec<DeltaUse>), RtError> {
    check_profile(pre)?;
    let g = alpha.genus();
    let n = alpha.num_markings();
    if pre.len() != n {
        return Err(RtError::BadOrder);
    }
    if k == 0 || k as usize > n {
        return Err(RtError::UnknownMarking(k));
    }
    let kbit = 1u64 << (k - 1);
    let raised = pre[k as usize - 1] + 1;
    let uses: Vec<DeltaUse> = (0u64..(1 << n))
        .filter(|&m| m & kbit != 0 && m.count_ones() >= 2)
        .map(|m| DeltaUse {
            pre: pre.to_vec(),
            marking: k,
            subset: labels_of(m),
            coefficient: bubble_multiplicity(g, pre, m),
        })
        .collect();
    let masks: Vec<(u64, Rational)> = uses
        .iter()
        .map(|u| (u.subset.iter().fold(0u64, |a, &l| a | 1 << (l - 1)), u.coefficient.clone()))
        .collect();
    let lowered: Vec<RtClass> = exec::map(&alpha.coeffs, |c| {
        let mut out = c.mul_psi(&Site::Marking(k)).expect("marking exists").scale(&int(raised));
        for (mask, m) in &masks {
            out.add_assign(&c.mul_delta_mask(*mask).scale(&-m));
        }
        out
    });
    let mut coeffs = vec![RtClass::zero(g, n)?; alpha.coeffs.len() + 1];
    for (j, c) in alpha.coeffs.iter().enumerate() {
        coeffs[j + 1].add_assign(c);
        coeffs[j].add_assign(&lowered[j]);
    }
    Ok((XiPoly { coeffs }, uses))
}

/// The order that always raises the first positive entry last: `α(Z)` is computed from
/// `α(Z − e_k)` with `k` the first positive entry of `Z`.
pub fn default_order(zeros: &[i64]) -> Vec<u32> {
    let mut z = zeros.to_vec();
    let mut order = Vec::new();
    while let Some(k) = z.iter().position(|&x| x > 0) {
        z[k] -= 1;
        order.push(k as u32 + 1);
    }
    order.reverse();
    order
}

/// Every distinct increment order for `zeros`, lexicographically.
pub fn increment_orders(zeros: &[i64]) -> Vec<Vec<u32>> {
    fn go(left: &mut [i64], cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left.iter().all(|&x| x == 0) {
            out.push(cur.clone());
            return;
        }
        for i in 0..left.len() {
            if left[i] > 0 {
                left[i] -= 1;
                cur.push(i as u32 + 1);
                go(left, cur, out);
                cur.pop();
                left[i] += 1;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut zeros.iter().map(|&z| z.max(0)).collect::<Vec<_>>(), &mut Vec::new(), &mut out);
    out
}

pub fn alpha_rt(g: u32, zeros: &[i64]) -> Result<XiPoly, RtError> {
    check_profile(zeros)?;
    alpha_rt_with_order(g, zeros, &default_order(zeros)).map(|(a, _)| a)
}

/// `α(g, Z)` built by raising the markings in `order` one at a time, with every boundary
/// term used along the way.
pub fn alpha_rt_with_order(g: u32, zeros: &[i64], order: &[u32]) -> Result<(XiPoly, Vec<DeltaUse>), RtError> {
    check_profile(zeros)?;
    let n = zeros.len();
    let mut count = vec![0i64; n];
    for &k in order {
        if k == 0 || k as usize > n {
            return Err(RtError::BadOrder);
        }
        count[k as usize - 1] += 1;
    }
    if count != zeros {
        return Err(RtError::BadOrder);
    }
    let mut alpha = XiPoly::one(g, n)?;
    let mut pre = vec![0i64; n];
    let mut uses = Vec::new();
    for &k in order {
        let (next, used) = increment_step(&alpha, &pre, k)?;
        alpha = next;
        uses.extend(used);
        pre[k as usize - 1] += 1;
    }
    Ok((alpha, uses))
}

/// For each `m` such that forgetting `m` markings stays stable, the number obtained by
/// pushing the `ξ^{d − m}` coefficient (`d` the ξ-degree) forward along the last `m`
/// markings. Returned as `(m, value)`.
pub fn pushforward_numbers(alpha: &XiPoly) -> Result<Vec<(usize, Rational)>, RtError> {
    let g = alpha.genus() as i64;
    let n = alpha.num_markings();
    let d = alpha.xi_degree();
    let mut out = Vec::new();
    for m in 0..=n.min(d) {
        if 2 * g - 2 + (n - m) as i64 <= 0 {
            break;
        }
        let mut c = alpha.coeffs[d - m].clone();
        for _ in 0..m {
            c = c.forget_last()?;
        }
        out.push((m, c.constant()));
    }
    Ok(out)
}

/// `a(g, z, n)`: the `ξ^{z+n}` coefficient of `α(g, (z, 2, …, 2))` pushed forward along
/// the `n` twos, divided by `n!`.
pub fn a_symbolic(g: u32, z: i64, n: usize) -> Result<Rational, RtError> {
    let mut zeros = vec![z];
    zeros.extend(std::iter::repeat(2).take(n));
    a_symbolic_from(&alpha_rt(g, &zeros)?, z, n)
}

pub(crate) fn a_symbolic_from(alpha: &XiPoly, z: i64, n: usize) -> Result<Rational, RtError> {
    let top = (z as usize) + n;
    let mut c = match alpha.coefficient(top) {
        Some(c) => c.clone(),
        None => return Ok(Rational::zero()),
    };
    for _ in 0..n {
        c = c.forget_last()?;
    }
    Ok(c.constant() / factorial(n as u32))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_entry_product() {
        assert_eq!(alpha_rt(3, &[2]).unwrap().render(), "xi^2 + 3*xi*psi_1 + 2*psi_1^2");
        assert_eq!(alpha_rt(2, &[0, 0]).unwrap().render(), "1");
        assert!(matches!(alpha_rt(1, &[-1]), Err(RtError::NegativeEntry(-1))));
    }

    #[test]
    fn orders() {
        assert_eq!(default_order(&[1, 2]), vec![2, 2, 1]);
        assert_eq!(increment_orders(&[1, 2]), vec![vec![1, 2, 2], vec![2, 1, 2], vec![2, 2, 1]]);
        assert!(matches!(alpha_rt_with_order(2, &[1, 1], &[1, 1]), Err(RtError::BadOrder)));
    }

    #[test]
    fn small_coefficients() {
        for g in 1..=3 {
            for z in 1..=3 {
                assert_eq!(a_symbolic(g, z, 0).unwrap(), int(1));
            }
        }
        assert_eq!(a_symbolic(2, 1, 1).unwrap(), int(4));
        assert_eq!(a_symbolic(2, 0, 1).unwrap(), int(6));
    }

    #[test]
    fn boundary_coefficients_follow_pre_profile() {
        let (_, uses) = alpha_rt_with_order(2, &[1, 1], &[1, 2]).unwrap();
        // raising marking 2 from (1, 0): bubble {1, 2} has multiplicity 1 + 1 + 0 = 2
        let last = uses.last().unwrap();
        assert_eq!((last.marking, last.subset.clone(), last.coefficient.clone()), (2, vec![1, 2], int(2)));
    }
}
