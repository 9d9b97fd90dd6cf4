//! Exact rational helpers shared by the symbolic and recursive routes.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn factorial(n: u32) -> Rational {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    Rational::from_integer(acc)
}

/// Renders as `p` or `p/q` (reduced, sign on the numerator).
pub fn render(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p` or `p/q`.
pub fn parse(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rational::new(p, q))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

pub(crate) fn is_unit_magnitude(q: &Rational) -> bool {
    q.abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_parse() {
        let q = Rational::new(BigInt::from(-6), BigInt::from(4));
        assert_eq!(render(&q), "-3/2");
        assert_eq!(parse("-3/2"), Some(q));
        assert_eq!(render(&int(28)), "28");
        assert_eq!(parse("7"), Some(int(7)));
        assert_eq!(parse("1/0"), None);
        assert_eq!(factorial(5), int(120));
    }
}
