//! Coefficients `a(g, z, n)` from the recursion identities
//!
//! 1. `a(g, z, 0) = 1`
//! 2. `a(g, z, n) = a(g, z − 1, n) − 2 a(g, z + 1, n − 1)` for `z ≥ 1`
//! 3. `a(g, 0, g − 1) = 2^{g−1} (2^g − 1)`
//! 4. `a(g, g − 1 − n, n) = a(g − 1, g − 2 − n, n) + 4 a(g − 1, g − 1 − n, n − 1)`
//!
//! Row `n ≤ g − 1` is anchored on the diagonal cell `w_{g,n} = a(g, g − 1 − n, n)`
//! (identity 3 or 4); identity 2 then walks along the row in either direction. Rows with
//! `n ≥ g` have no anchor and are reported as unreachable.

mod cache;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::{One, Pow};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{int, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoeffError {
    #[error("genus must be at least 1, got {0}")]
    Genus(u32),
    #[error("z must be non-negative, got {0}")]
    NegativeZ(i64),
    #[error("unreachable cell (g, z, n) = ({g}, {z}, {n}): no identity determines it")]
    Unreachable { g: u32, z: i64, n: u32 },
    #[error("n = {n} is outside 0..={max} for genus {g}")]
    OutOfRange { g: u32, n: u32, max: u32 },
    #[error("cache I/O: {0}")]
    Io(String),
    #[error("cache line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Which identity produced a stored value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Provenance {
    Base,
    Identity2,
    Identity3,
    Identity4,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Base => "base",
            Provenance::Identity2 => "identity2",
            Provenance::Identity3 => "identity3",
            Provenance::Identity4 => "identity4",
        })
    }
}

impl FromStr for Provenance {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "base" => Ok(Provenance::Base),
            "identity2" => Ok(Provenance::Identity2),
            "identity3" => Ok(Provenance::Identity3),
            "identity4" => Ok(Provenance::Identity4),
            other => Err(format!("unknown provenance {other:?}")),
        }
    }
}

pub type Cell = (u32, i64, u32);

/// How a cell is derived: the identity and the cells it reads, with their weights.
fn rule(g: u32, z: i64, n: u32) -> Result<(Provenance, Vec<(Cell, i64)>), CoeffError> {
    if g == 0 {
        return Err(CoeffError::Genus(g));
    }
    if z < 0 {
        return Err(CoeffError::NegativeZ(z));
    }
    if n == 0 {
        return Ok((Provenance::Base, Vec::new()));
    }
    if n >= g {
        return Err(CoeffError::Unreachable { g, z, n });
    }
    let anchor = g as i64 - 1 - n as i64;
    Ok(if z == anchor {
        if n == g - 1 {
            (Provenance::Identity3, Vec::new())
        } else {
            (Provenance::Identity4, vec![((g - 1, z - 1, n), 1), ((g - 1, z, n - 1), 4)])
        }
    } else if z > anchor {
        (Provenance::Identity2, vec![((g, z - 1, n), 1), ((g, z + 1, n - 1), -2)])
    } else {
        // identity 2 at (g, z + 1, n), solved for a(g, z, n)
        (Provenance::Identity2, vec![((g, z + 1, n), 1), ((g, z + 2, n - 1), 2)])
    })
}

/// Memo of `a(g, z, n)` with provenance. Reads are concurrent; inserts take the write lock.
#[derive(Debug, Default)]
pub struct CoeffTable {
    entries: RwLock<BTreeMap<Cell, (Rational, Provenance)>>,
    computed: AtomicU64,
    persisted: RwLock<std::collections::BTreeSet<Cell>>,
}

impl CoeffTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of cells computed (not read from the memo or a cache file) so far.
    pub fn computed(&self) -> u64 {
        self.computed.load(Ordering::Relaxed)
    }

    pub fn len(&self) -> usize {
        self.entries.read().expect("table lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn clear(&self) {
        self.entries.write().expect("table lock").clear();
        self.persisted.write().expect("table lock").clear();
        self.computed.store(0, Ordering::Relaxed);
    }

    pub fn get(&self, g: u32, z: i64, n: u32) -> Option<(Rational, Provenance)> {
        self.entries.read().expect("table lock").get(&(g, z, n)).cloned()
    }

    /// All entries in `(g, z, n)` order.
    pub fn entries(&self) -> Vec<(Cell, Rational, Provenance)> {
        self.entries
            .read()
            .expect("table lock")
            .iter()
            .map(|(&k, (v, p))| (k, v.clone(), *p))
            .collect()
    }

    pub fn a_rec(&self, g: u32, z: i64, n: u32) -> Result<Rational, CoeffError> {
        if let Some((v, _)) = self.get(g, z, n) {
            return Ok(v);
        }
        let (prov, deps) = rule(g, z, n)?;
        let value = match prov {
            Provenance::Base => Rational::one(),
            Provenance::Identity3 => odd_spin_value(g),
            _ => {
                let mut acc = int(0);
                for ((dg, dz, dn), w) in deps {
                    acc += self.a_rec(dg, dz, dn)? * int(w);
                }
                acc
            }
        };
        self.computed.fetch_add(1, Ordering::Relaxed);
        self.entries.write().expect("table lock").entry((g, z, n)).or_insert((value.clone(), prov));
        Ok(value)
    }

    /// Recomputes a stored cell from the stored values it depends on.
    pub fn replay(&self, g: u32, z: i64, n: u32) -> Result<bool, CoeffError> {
        let Some((value, prov)) = self.get(g, z, n) else {
            return Ok(false);
        };
        let (expected, deps) = rule(g, z, n)?;
        if expected != prov {
            return Ok(false);
        }
        let again = match prov {
            Provenance::Base => Rational::one(),
            Provenance::Identity3 => odd_spin_value(g),
            _ => {
                let mut acc = int(0);
                for ((dg, dz, dn), w) in deps {
                    match self.get(dg, dz, dn) {
                        Some((v, _)) => acc += v * int(w),
                        None => return Ok(false),
                    }
                }
                acc
            }
        };
        Ok(again == value)
    }
}

fn odd_spin_value(g: u32) -> Rational {
    Rational::from_integer(odd_spin_count(g))
}

fn two_pow(k: u32) -> BigInt {
    Pow::pow(BigInt::from(2), k)
}

/// `2^{g−1}(2^g − 1)`, the number of odd spin structures in genus `g`.
pub fn odd_spin_count(g: u32) -> BigInt {
    if g == 0 {
        return BigInt::from(0);
    }
    two_pow(g - 1) * (two_pow(g) - 1)
}

/// `(z′)²`, the number of points in the genus-1 count with zero orders `(z, z′, −z − z′)`.
pub fn elliptic_count(_z: u64, z_prime: u64) -> BigInt {
    BigInt::from(z_prime) * BigInt::from(z_prime)
}

fn check_row(g: u32, n: u32) -> Result<(), CoeffError> {
    if g == 0 {
        return Err(CoeffError::Genus(g));
    }
    if n > g - 1 {
        return Err(CoeffError::OutOfRange { g, n, max: g - 1 });
    }
    Ok(())
}

/// `w_{g,n} = a(g, g − n − 1, n)` from `w_{g,n} = w_{g−1,n} + 4 w_{g−1,n−1}` with
/// `w_{g,0} = 1` and `w_{g,g−1} = 2^{g−1}(2^g − 1)`.
pub fn w_seq(g: u32, n: u32) -> Result<Rational, CoeffError> {
    check_row(g, n)?;
    // row by row over genus
    let mut row: Vec<Rational> = vec![int(1)];
    for h in 2..=g {
        let mut next = vec![int(1)];
        for m in 1..h - 1 {
            next.push(&row[m as usize] + &row[m as usize - 1] * int(4));
        }
        next.push(odd_spin_value(h));
        row = next;
    }
    Ok(row[n as usize].clone())
}

/// `u_{g,n} = a(g, g − n, n)` from `u_{g,n} = w_{g,n} − 2 u_{g,n−1}`, `u_{g,0} = 1`.
pub fn u_seq(g: u32, n: u32) -> Result<Rational, CoeffError> {
    check_row(g, n)?;
    let mut u = int(1);
    for m in 1..=n {
        u = w_seq(g, m)? - u * int(2);
    }
    Ok(u)
}

/// `Σ_{i=0}^{n} (−2)^i w_{g,n−i}`.
pub fn u_closed(g: u32, n: u32) -> Result<Rational, CoeffError> {
    check_row(g, n)?;
    let mut acc = int(0);
    let mut sign = int(1);
    for i in 0..=n {
        acc += &sign * w_seq(g, n - i)?;
        sign *= int(-2);
    }
    Ok(acc)
}

/// `a_g = u_{g,g−1}`.
pub fn a_g(g: u32) -> Result<Rational, CoeffError> {
    if g == 0 {
        return Err(CoeffError::Genus(g));
    }
    u_seq(g, g - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        let t = CoeffTable::new();
        assert_eq!(t.a_rec(3, 0, 2).unwrap(), int(28));
        assert_eq!(t.a_rec(2, 1, 1).unwrap(), int(4));
        assert_eq!(t.a_rec(5, 7, 0).unwrap(), int(1));
        assert_eq!(t.get(2, 1, 1).unwrap().1, Provenance::Identity2);
        assert_eq!(t.get(3, 0, 2).unwrap().1, Provenance::Identity3);
        assert!(matches!(t.a_rec(2, 0, 2), Err(CoeffError::Unreachable { .. })));
        assert_eq!(w_seq(2, 1).unwrap(), int(6));
        assert_eq!(u_seq(2, 1).unwrap(), int(4));
        assert_eq!(a_g(10).unwrap(), int(5120));
        assert_eq!(odd_spin_count(3), BigInt::from(28));
        assert_eq!(elliptic_count(0, 3), BigInt::from(9));
        assert!(matches!(w_seq(2, 2), Err(CoeffError::OutOfRange { .. })));
    }

    #[test]
    fn backward_cells_and_replay() {
        let t = CoeffTable::new();
        // z below the anchor of row 1 in genus 4 (anchor z = 2)
        let v = t.a_rec(4, 0, 1).unwrap();
        assert_eq!(v, t.a_rec(4, 1, 1).unwrap() + int(2) * t.a_rec(4, 2, 0).unwrap());
        for ((g, z, n), _, _) in t.entries() {
            assert!(t.replay(g, z, n).unwrap());
        }
    }

    #[test]
    fn row_anchor_matches_w() {
        let t = CoeffTable::new();
        for g in 1..=8u32 {
            for n in 0..g {
                assert_eq!(t.a_rec(g, g as i64 - 1 - n as i64, n).unwrap(), w_seq(g, n).unwrap());
                assert_eq!(t.a_rec(g, (g - n) as i64, n).unwrap(), u_seq(g, n).unwrap());
            }
        }
    }
}
