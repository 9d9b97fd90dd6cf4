//! Decorated rational-tails classes.
//!
//! A basis term is a tree: a genus-`g` root with genus-0 bubbles hanging off it, given by
//! a laminar family of marking sets (each bubble's set is the markings below it). Every
//! vertex carries its own ψ-classes (on markings and on both sides of every node) and its
//! own κ monomial. A term stands for the pushforward of the product of these vertex
//! classes along the gluing map. No relations are imposed beyond the vanishing of
//! vertex classes above the vertex dimension.

mod alpha;

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::{self, int, Rational};

pub use alpha::{
    a_symbolic, alpha_rt, alpha_rt_with_order, default_order, increment_orders, increment_step,
    pushforward_numbers, DeltaUse, XiPoly,
};

/// Largest supported number of markings.
pub const MAX_MARKINGS: usize = 63;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RtError {
    #[error("genus must be at least 1, got {0}")]
    Genus(u32),
    #[error("at most {MAX_MARKINGS} markings are supported, got {0}")]
    TooManyMarkings(usize),
    #[error("marking {0} does not exist")]
    UnknownMarking(u32),
    #[error("boundary divisor needs at least two markings, got {0:?}")]
    SmallSubset(Vec<u32>),
    #[error("no bubble with markings {0:?} in some term")]
    UnknownSite(Vec<u32>),
    #[error("cannot forget a marking from genus {g} with {n} markings")]
    Unstable { g: u32, n: usize },
    #[error("zero profile entries must be non-negative, got {0}")]
    NegativeEntry(i64),
    #[error("increment order does not match the zero profile")]
    BadOrder,
    #[error("classes live on different spaces: (g, n) = {0:?} and {1:?}")]
    Mismatch((u32, usize), (u32, usize)),
}

/// A place where a ψ-class can sit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Site {
    /// Marking `i` (1-based).
    Marking(u32),
    /// The parent side `h` of the node attaching the bubble with these markings.
    NodeParent(Vec<u32>),
    /// The bubble side `h′` of that node.
    NodeBubble(Vec<u32>),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct Bubble {
    pub set: u64,
    pub psi_parent: u32,
    pub psi_bubble: u32,
    /// κ indices (≥ 1), sorted; a monomial.
    pub kappa: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) struct Term {
    /// Sorted by `set`.
    pub bubbles: Vec<Bubble>,
    /// ψ exponent per marking, stored on whichever vertex holds the marking.
    pub psi: Vec<u32>,
    /// Root κ monomial, sorted.
    pub kappa: Vec<u32>,
}

impl Ord for Term {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.bubbles
            .len()
            .cmp(&other.bubbles.len())
            .then_with(|| self.bubbles.cmp(&other.bubbles))
            .then_with(|| other.psi.cmp(&self.psi))
            .then_with(|| self.kappa.cmp(&other.kappa))
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

fn mask_of(labels: &[u32], n: usize) -> Result<u64, RtError> {
    let mut m = 0u64;
    for &l in labels {
        if l == 0 || l as usize > n {
            return Err(RtError::UnknownMarking(l));
        }
        m |= 1 << (l - 1);
    }
    Ok(m)
}

pub(crate) fn labels_of(mask: u64) -> Vec<u32> {
    (0..64).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect()
}

fn is_subset(a: u64, b: u64) -> bool {
    a & !b == 0
}

impl Term {
    fn trivial(n: usize) -> Self {
        Term { bubbles: Vec::new(), psi: vec![0; n], kappa: Vec::new() }
    }

    pub fn degree(&self) -> u32 {
        let b: u32 = self
            .bubbles
            .iter()
            .map(|b| 1 + b.psi_parent + b.psi_bubble + b.kappa.iter().sum::<u32>())
            .sum();
        b + self.psi.iter().sum::<u32>() + self.kappa.iter().sum::<u32>()
    }

    /// Index of the smallest bubble strictly containing `set`.
    fn parent(&self, set: u64) -> Option<usize> {
        self.bubbles
            .iter()
            .enumerate()
            .filter(|(_, b)| b.set != set && is_subset(set, b.set))
            .min_by_key(|(_, b)| b.set.count_ones())
            .map(|(i, _)| i)
    }

    /// Vertex holding marking bit `bit`: `None` is the root.
    fn home(&self, bit: u64) -> Option<usize> {
        self.parent(bit)
    }

    /// Markings and child bubbles attached directly to vertex `v` (`None` is the root).
    fn children(&self, v: Option<usize>, n: usize) -> (Vec<usize>, Vec<usize>) {
        let marks = (0..n).filter(|&i| self.home(1 << i) == v).collect();
        let kids = (0..self.bubbles.len()).filter(|&j| self.parent(self.bubbles[j].set) == v).collect();
        (marks, kids)
    }

    /// Every vertex class fits in its vertex dimension.
    fn fits(&self, g: u32, n: usize) -> bool {
        let vertices = std::iter::once(None).chain((0..self.bubbles.len()).map(Some));
        for v in vertices {
            let (marks, kids) = self.children(v, n);
            let mut deg: u32 = marks.iter().map(|&i| self.psi[i]).sum::<u32>()
                + kids.iter().map(|&j| self.bubbles[j].psi_parent).sum::<u32>();
            let (valence, genus) = match v {
                None => {
                    deg += self.kappa.iter().sum::<u32>();
                    (marks.len() + kids.len(), g)
                }
                Some(b) => {
                    deg += self.bubbles[b].psi_bubble + self.bubbles[b].kappa.iter().sum::<u32>();
                    (marks.len() + kids.len() + 1, 0)
                }
            };
            let dim = 3 * genus as i64 - 3 + valence as i64;
            if deg as i64 > dim {
                return false;
            }
        }
        true
    }
}

/// Element of the span of decorated rational-tails strata on `M̄_{g,n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RtClass {
    genus: u32,
    n: usize,
    terms: BTreeMap<Term, Rational>,
}

impl RtClass {
    pub fn zero(genus: u32, n: usize) -> Result<Self, RtError> {
        if genus == 0 {
            return Err(RtError::Genus(genus));
        }
        if n > MAX_MARKINGS {
            return Err(RtError::TooManyMarkings(n));
        }
        Ok(RtClass { genus, n, terms: BTreeMap::new() })
    }

    pub fn one(genus: u32, n: usize) -> Result<Self, RtError> {
        let mut c = Self::zero(genus, n)?;
        c.terms.insert(Term::trivial(n), Rational::one());
        Ok(c)
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn num_markings(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of the fundamental class.
    pub fn constant(&self) -> Rational {
        self.terms.get(&Term::trivial(self.n)).cloned().unwrap_or_else(Rational::zero)
    }

    /// Degree of every term, or `None` if the class is zero or inhomogeneous.
    pub fn degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Term::degree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.terms.keys().all(|t| t.degree() == d)
    }

    fn same_space(&self, other: &Self) -> Result<(), RtError> {
        if (self.genus, self.n) == (other.genus, other.n) {
            Ok(())
        } else {
            Err(RtError::Mismatch((self.genus, self.n), (other.genus, other.n)))
        }
    }

    pub(crate) fn push(&mut self, term: Term, coeff: Rational) {
        if coeff.is_zero() || !term.fits(self.genus, self.n) {
            return;
        }
        let slot = self.terms.entry(term);
        match slot {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, RtError> {
        self.same_space(other)?;
        let mut out = self.clone();
        out.add_assign(other);
        Ok(out)
    }

    pub(crate) fn add_assign(&mut self, other: &Self) {
        for (t, c) in &other.terms {
            self.push(t.clone(), c.clone());
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        let mut out = RtClass { genus: self.genus, n: self.n, terms: BTreeMap::new() };
        if !q.is_zero() {
            for (t, c) in &self.terms {
                out.terms.insert(t.clone(), c * q);
            }
        }
        out
    }

    pub fn mul_psi(&self, site: &Site) -> Result<Self, RtError> {
        let mut out = RtClass { genus: self.genus, n: self.n, terms: BTreeMap::new() };
        match site {
            Site::Marking(i) => {
                let idx = *i as usize;
                if idx == 0 || idx > self.n {
                    return Err(RtError::UnknownMarking(*i));
                }
                for (t, c) in &self.terms {
                    let mut t = t.clone();
                    t.psi[idx - 1] += 1;
                    out.push(t, c.clone());
                }
            }
            Site::NodeParent(set) | Site::NodeBubble(set) => {
                let mask = mask_of(set, self.n)?;
                let parent_side = matches!(site, Site::NodeParent(_));
                for (t, c) in &self.terms {
                    let mut t = t.clone();
                    let b = t
                        .bubbles
                        .iter_mut()
                        .find(|b| b.set == mask)
                        .ok_or_else(|| RtError::UnknownSite(set.clone()))?;
                    if parent_side {
                        b.psi_parent += 1;
                    } else {
                        b.psi_bubble += 1;
                    }
                    out.push(t, c.clone());
                }
            }
        }
        Ok(out)
    }

    /// Product with the boundary divisor `δ_{0,I}`.
    pub fn mul_delta(&self, subset: &[u32]) -> Result<Self, RtError> {
        let mask = mask_of(subset, self.n)?;
        if mask.count_ones() < 2 {
            return Err(RtError::SmallSubset(subset.to_vec()));
        }
        Ok(self.mul_delta_mask(mask))
    }

    pub(crate) fn mul_delta_mask(&self, mask: u64) -> Self {
        let mut out = RtClass { genus: self.genus, n: self.n, terms: BTreeMap::new() };
        for (t, c) in &self.terms {
            for (term, k) in delta_times_term(t, mask) {
                out.push(term, c * k);
            }
        }
        out
    }

    /// Pushforward along the map forgetting the last marking.
    pub fn forget_last(&self) -> Result<Self, RtError> {
        let (g, n) = (self.genus, self.n);
        if n == 0 || 2 * g as i64 - 2 + n as i64 - 1 <= 0 {
            return Err(RtError::Unstable { g, n });
        }
        let mut out = RtClass { genus: g, n: n - 1, terms: BTreeMap::new() };
        for (t, c) in &self.terms {
            for (term, k) in forget_term(t, g, n) {
                out.push(term, c * k);
            }
        }
        Ok(out)
    }

    /// Terms as `(rendered monomial, coefficient)` in display order.
    pub fn monomials(&self) -> Vec<(String, Rational)> {
        self.terms.iter().map(|(t, c)| (render_term(t), c.clone())).collect()
    }

    pub fn render(&self) -> String {
        render_sum(self.terms.iter().map(|(t, c)| (render_term(t), c.clone())))
    }
}

impl fmt::Display for RtClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

fn delta_times_term(t: &Term, mask: u64) -> Vec<(Term, Rational)> {
    for (i, b) in t.bubbles.iter().enumerate() {
        if b.set == mask {
            let mut up = t.clone();
            up.bubbles[i].psi_parent += 1;
            let mut down = t.clone();
            down.bubbles[i].psi_bubble += 1;
            return vec![(up, -Rational::one()), (down, -Rational::one())];
        }
        let meet = b.set & mask;
        if meet != 0 && meet != b.set && meet != mask {
            return Vec::new();
        }
    }
    // new bubble under the smallest vertex containing the subset; κ of that vertex splits
    let parent = t.parent(mask);
    let kappa = match parent {
        None => t.kappa.clone(),
        Some(p) => t.bubbles[p].kappa.clone(),
    };
    let mut out = Vec::with_capacity(1 << kappa.len());
    for choice in 0u64..(1 << kappa.len()) {
        let (mut stay, mut moved) = (Vec::new(), Vec::new());
        for (j, &m) in kappa.iter().enumerate() {
            if choice >> j & 1 == 1 {
                moved.push(m);
            } else {
                stay.push(m);
            }
        }
        let mut term = t.clone();
        match parent {
            None => term.kappa = stay,
            Some(p) => term.bubbles[p].kappa = stay,
        }
        let pos = term.bubbles.partition_point(|b| b.set < mask);
        term.bubbles.insert(pos, Bubble { set: mask, psi_parent: 0, psi_bubble: 0, kappa: moved });
        out.push((term, Rational::one()));
    }
    out
}

fn forget_term(t: &Term, g: u32, n: usize) -> Vec<(Term, Rational)> {
    let last = n - 1;
    let bit = 1u64 << last;
    let home = t.home(bit);
    let (marks, kids) = t.children(home, n);
    let valence = marks.len() + kids.len() + usize::from(home.is_some());
    let strip = |mut term: Term| {
        term.psi.pop();
        for b in &mut term.bubbles {
            b.set &= !bit;
        }
        term
    };

    if let Some(b) = home {
        if valence == 3 {
            // the bubble becomes unstable and is contracted; its own classes live on a point
            let bubble = &t.bubbles[b];
            let other_mark = marks.iter().copied().find(|&i| i != last);
            let other_kid = kids.first().copied();
            let other_psi = match (other_mark, other_kid) {
                (Some(i), _) => t.psi[i],
                (None, Some(j)) => t.bubbles[j].psi_parent,
                (None, None) => unreachable!("three-valent bubble has two children"),
            };
            if t.psi[last] != 0 || bubble.psi_bubble != 0 || !bubble.kappa.is_empty() || other_psi != 0 {
                return Vec::new();
            }
            let mut term = t.clone();
            match (other_mark, other_kid) {
                (Some(i), _) => term.psi[i] = bubble.psi_parent,
                (None, Some(j)) => term.bubbles[j].psi_parent = bubble.psi_parent,
                _ => unreachable!(),
            }
            term.bubbles.remove(b);
            return vec![(strip(term), Rational::one())];
        }
    }

    let genus = if home.is_some() { 0 } else { g };
    let kappa = match home {
        None => t.kappa.clone(),
        Some(b) => t.bubbles[b].kappa.clone(),
    };
    let a_last = t.psi[last];
    let mut out = Vec::new();
    // κ_m = π*κ_m + ψ_last^m on the vertex holding the forgotten marking
    for choice in 0u64..(1 << kappa.len()) {
        let mut stay = Vec::new();
        let mut power = a_last;
        for (j, &m) in kappa.iter().enumerate() {
            if choice >> j & 1 == 1 {
                power += m;
            } else {
                stay.push(m);
            }
        }
        let mut term = t.clone();
        term.psi[last] = 0;
        let set_kappa = |term: &mut Term, k: Vec<u32>| match home {
            None => term.kappa = k,
            Some(b) => term.bubbles[b].kappa = k,
        };
        match power {
            0 => {
                // string equation over the other half-edges at the vertex
                set_kappa(&mut term, stay);
                for &i in &marks {
                    if i != last && term.psi[i] > 0 {
                        let mut s = term.clone();
                        s.psi[i] -= 1;
                        out.push((strip(s), Rational::one()));
                    }
                }
                for &j in &kids {
                    if term.bubbles[j].psi_parent > 0 {
                        let mut s = term.clone();
                        s.bubbles[j].psi_parent -= 1;
                        out.push((strip(s), Rational::one()));
                    }
                }
                if let Some(b) = home {
                    if term.bubbles[b].psi_bubble > 0 {
                        let mut s = term.clone();
                        s.bubbles[b].psi_bubble -= 1;
                        out.push((strip(s), Rational::one()));
                    }
                }
            }
            1 => {
                set_kappa(&mut term, stay);
                let kappa0 = 2 * genus as i64 - 2 + valence as i64 - 1;
                out.push((strip(term), int(kappa0)));
            }
            p => {
                stay.push(p - 1);
                stay.sort_unstable();
                set_kappa(&mut term, stay);
                out.push((strip(term), Rational::one()));
            }
        }
    }
    out
}

fn set_name(mask: u64) -> String {
    labels_of(mask).iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",")
}

fn power(out: &mut Vec<String>, base: String, e: u32) {
    match e {
        0 => {}
        1 => out.push(base),
        e => out.push(format!("{base}^{e}")),
    }
}

fn kappa_factors(out: &mut Vec<String>, kappa: &[u32], suffix: &str) {
    let mut i = 0;
    while i < kappa.len() {
        let mut j = i;
        while j < kappa.len() && kappa[j] == kappa[i] {
            j += 1;
        }
        power(out, format!("kappa_{}{suffix}", kappa[i]), (j - i) as u32);
        i = j;
    }
}

pub(crate) fn render_term(t: &Term) -> String {
    let mut f = Vec::new();
    for b in &t.bubbles {
        f.push(format!("delta_{{{}}}", set_name(b.set)));
    }
    for (i, &e) in t.psi.iter().enumerate() {
        power(&mut f, format!("psi_{}", i + 1), e);
    }
    for b in &t.bubbles {
        let s = set_name(b.set);
        power(&mut f, format!("psi_h{{{s}}}"), b.psi_parent);
        power(&mut f, format!("psi_h'{{{s}}}"), b.psi_bubble);
    }
    kappa_factors(&mut f, &t.kappa, "");
    for b in &t.bubbles {
        kappa_factors(&mut f, &b.kappa, &format!("{{{}}}", set_name(b.set)));
    }
    f.join("*")
}

/// Joins `coeff*monomial` pairs as `a + b - c`; an empty monomial is the unit.
pub(crate) fn render_sum(items: impl Iterator<Item = (String, Rational)>) -> String {
    let mut s = String::new();
    for (mono, c) in items {
        let negative = c.is_negative();
        if s.is_empty() {
            if negative {
                s.push('-');
            }
        } else {
            s.push_str(if negative { " - " } else { " + " });
        }
        let mag = c.abs();
        if mono.is_empty() {
            s.push_str(&rational::render(&mag));
        } else if rational::is_unit_magnitude(&mag) {
            s.push_str(&mono);
        } else {
            let _ = write!(s, "{}*{}", rational::render(&mag), mono);
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}
