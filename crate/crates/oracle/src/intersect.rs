//! ψ-class integrals in genus 0 and 1 from the string and dilaton equations.

use std::fmt;
use std::ops::{Add, Mul};

/// Reduced fraction with `i128` parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Frac {
    pub num: i128,
    pub den: i128,
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl Frac {
    pub fn new(num: i128, den: i128) -> Frac {
        assert!(den != 0, "zero denominator");
        let g = gcd(num, den).max(1);
        let s = if den < 0 { -1 } else { 1 };
        Frac { num: s * num / g, den: s * den / g }
    }

    pub fn int(v: i128) -> Frac {
        Frac { num: v, den: 1 }
    }
}

impl Add for Frac {
    type Output = Frac;
    fn add(self, o: Frac) -> Frac {
        Frac::new(self.num * o.den + o.num * self.den, self.den * o.den)
    }
}

impl Mul for Frac {
    type Output = Frac;
    fn mul(self, o: Frac) -> Frac {
        Frac::new(self.num * o.num, self.den * o.den)
    }
}

impl fmt::Display for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// `∫_{M̄_{0,n}} Π ψ_i^{a_i} = (n − 3)! / Π a_i!` when the degrees match.
pub fn genus0(a: &[u32]) -> Frac {
    let n = a.len() as i64;
    if n < 3 || a.iter().map(|&x| x as i64).sum::<i64>() != n - 3 {
        return Frac::int(0);
    }
    let fact = |k: i64| (1..=k as i128).product::<i128>();
    Frac::new(fact(n - 3), a.iter().map(|&x| fact(x as i64)).product())
}

/// `∫_{M̄_{1,n}} Π ψ_i^{a_i}`, reduced to `∫_{M̄_{1,1}} ψ_1 = 1/24`.
pub fn genus1(a: &[u32]) -> Frac {
    let n = a.len();
    if n == 0 || a.iter().map(|&x| x as usize).sum::<usize>() != n {
        return Frac::int(0);
    }
    if n == 1 {
        return Frac::new(1, 24);
    }
    if let Some(i) = a.iter().position(|&x| x == 0) {
        let rest: Vec<u32> = a.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect();
        let mut acc = Frac::int(0);
        for j in 0..rest.len() {
            if rest[j] > 0 {
                let mut b = rest.clone();
                b[j] -= 1;
                acc = acc + genus1(&b);
            }
        }
        return acc;
    }
    // all exponents are 1: dilaton
    Frac::int(n as i128 - 1) * genus1(&a[1..])
}
