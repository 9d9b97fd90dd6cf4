mod common;

use num_traits::Zero;
use proptest::prelude::*;
use strata_core::rational::{int, Rational};
use strata_core::rt::{self, alpha_rt, pushforward_numbers};
use strata_core::{RtClass, Site};
use strata_oracle::{genus0, genus1, Frac};

fn frac(q: Frac) -> Rational {
    Rational::new(q.num.into(), q.den.into())
}

fn one(g: u32, n: usize) -> RtClass {
    RtClass::one(g, n).unwrap()
}

fn psi(c: &RtClass, i: u32, e: u32) -> RtClass {
    (0..e).fold(c.clone(), |c, _| c.mul_psi(&Site::Marking(i)).unwrap())
}

/// `∫_{M̄_{1,n}} c` for a top-degree class: push down to `M̄_{1,1}`, where `∫ψ_1 = ∫κ_1 = 1/24`.
fn integrate_genus_one(c: &RtClass) -> Rational {
    let mut c = c.clone();
    while c.num_markings() > 1 {
        c = c.forget_last().unwrap();
    }
    let mut total = Rational::zero();
    for (mono, coeff) in c.monomials() {
        assert!(mono == "psi_1" || mono == "kappa_1", "unexpected {mono}");
        total += coeff;
    }
    total / int(24)
}

#[test]
fn psi_integrals_in_genus_one() {
    for a in [[4u32, 0, 0, 0], [1, 1, 1, 1], [2, 1, 1, 0], [3, 1, 0, 0], [2, 2, 0, 0], [0, 0, 2, 2]] {
        let mut c = one(1, 4);
        for (i, &e) in a.iter().enumerate() {
            c = psi(&c, i as u32 + 1, e);
        }
        assert_eq!(integrate_genus_one(&c), frac(genus1(&a)), "{a:?}");
    }
}

#[test]
fn boundary_integrals_in_genus_one() {
    // δ_{0,{1,2}} ψ_3^a ψ_4^b on M̄_{1,4}: the bubble carries nothing
    for (a, b) in [(3u32, 0u32), (2, 1), (1, 2)] {
        let c = psi(&psi(&one(1, 4).mul_delta(&[1, 2]).unwrap(), 3, a), 4, b);
        let expected = genus0(&[0, 0, 0]) * genus1(&[a, b, 0]);
        assert_eq!(integrate_genus_one(&c), frac(expected));
    }
    // δ_{0,{1,2}}² ψ_3^a ψ_4^b = −ψ_h part (the three-valent bubble has no ψ_h′)
    for (a, b) in [(2u32, 0u32), (1, 1)] {
        let d = one(1, 4).mul_delta(&[1, 2]).unwrap();
        let c = psi(&psi(&d.mul_delta(&[1, 2]).unwrap(), 3, a), 4, b);
        let expected = Frac::int(-1) * genus1(&[a, b, 1]);
        assert_eq!(integrate_genus_one(&c), frac(expected));
    }
    // nested bubbles: δ_{0,{1,2}} δ_{0,{1,2,3}} ψ_4² has all weight on the root
    let chain = one(1, 4).mul_delta(&[1, 2]).unwrap().mul_delta(&[1, 2, 3]).unwrap();
    assert_eq!(chain.render(), "delta_{1,2}*delta_{1,2,3}");
    assert_eq!(integrate_genus_one(&psi(&chain, 4, 2)), frac(genus1(&[2, 0])));
    // a four-valent bubble: δ_{0,{1,2,3}} ψ_1 ψ_4²
    let big = psi(&psi(&one(1, 4).mul_delta(&[1, 2, 3]).unwrap(), 1, 1), 4, 2);
    assert_eq!(integrate_genus_one(&big), frac(genus0(&[1, 0, 0, 0]) * genus1(&[2, 0])));
}

#[test]
fn kappa_integrals_in_genus_one() {
    // κ_1 on M̄_{1,2} is the pushforward of ψ_3²; ∫κ_1 ψ_1 ψ_2 = ∫ψ_1ψ_2ψ_3²
    let k = psi(&one(1, 3), 3, 2).forget_last().unwrap();
    assert_eq!(k.render(), "kappa_1");
    let c = psi(&psi(&k, 1, 1), 2, 1);
    assert_eq!(integrate_genus_one(&c), frac(genus1(&[1, 1, 2])));
    // κ_1² on M̄_{1,2}
    let kk = psi(&one(1, 4), 4, 2).forget_last().unwrap();
    let kk = psi(&kk, 3, 2).forget_last().unwrap();
    // two pushforwards of ψ_3²ψ_4² integrate to ∫_{M̄_{1,4}} ψ_3²ψ_4²
    assert_eq!(kk.monomials().len(), 2);
    assert_eq!(integrate_genus_one(&kk), frac(genus1(&[0, 0, 2, 2])));
}

proptest! {
    #[test]
    fn psi_monomials_in_genus_one(cuts in prop::collection::vec(0u32..=5, 4)) {
        // a composition of 5 into 5 parts from sorted cut points
        let mut cuts = cuts;
        cuts.sort();
        let mut a = Vec::new();
        let mut prev = 0;
        for &c in cuts.iter().chain(std::iter::once(&5)) {
            a.push(c - prev);
            prev = c;
        }
        let mut c = one(1, 5);
        for (i, &e) in a.iter().enumerate() {
            c = psi(&c, i as u32 + 1, e);
        }
        prop_assert_eq!(integrate_genus_one(&c), frac(genus1(&a)));
    }

    #[test]
    fn boundary_products_commute(i in 1u64..32, j in 1u64..32) {
        let set = |m: u64| (0..5).filter(|b| m >> b & 1 == 1).map(|b| b + 1).collect::<Vec<u32>>();
        let (a, b) = (set(i), set(j));
        prop_assume!(a.len() >= 2 && b.len() >= 2);
        let x = one(2, 5).mul_delta(&a).unwrap().mul_delta(&b).unwrap();
        let y = one(2, 5).mul_delta(&b).unwrap().mul_delta(&a).unwrap();
        prop_assert_eq!(x, y);
    }

    #[test]
    fn operations_are_linear(c1 in -5i64..5, c2 in -5i64..5, c3 in -5i64..5, m in 1u32..5) {
        let base = [
            psi(&one(2, 4), 1, 1),
            one(2, 4).mul_delta(&[1, 2]).unwrap(),
            psi(&one(2, 4).mul_delta(&[2, 3, 4]).unwrap(), 4, 1),
        ];
        let coeffs = [int(c1), int(c2), int(c3)];
        let combo = |n: usize, f: &dyn Fn(&RtClass) -> RtClass| {
            let mut acc = RtClass::zero(2, n).unwrap();
            for (c, k) in base.iter().zip(&coeffs) {
                acc = acc.add(&f(c).scale(k)).unwrap();
            }
            acc
        };
        let mut sum = RtClass::zero(2, 4).unwrap();
        for (c, k) in base.iter().zip(&coeffs) {
            sum = sum.add(&c.scale(k)).unwrap();
        }
        let site = Site::Marking(m);
        prop_assert_eq!(sum.mul_psi(&site).unwrap(), combo(4, &|c| c.mul_psi(&site).unwrap()));
        prop_assert_eq!(sum.mul_delta(&[1, 2, 3]).unwrap(), combo(4, &|c| c.mul_delta(&[1, 2, 3]).unwrap()));
        let pushed = combo(3, &|c| c.forget_last().unwrap());
        prop_assert_eq!(sum.forget_last().unwrap(), pushed);
    }
}

#[test]
fn alpha_is_homogeneous_and_monic() {
    for g in 1..=3u32 {
        for n in 1..=3 {
            for zeros in common::profiles(n, 5) {
                let a = alpha_rt(g, &zeros).unwrap();
                let d: i64 = zeros.iter().sum();
                assert_eq!(a.xi_degree() as i64, d);
                assert_eq!(a.coefficient(d as usize).unwrap(), &one(g, n));
                for (k, c) in a.coefficients().iter().enumerate() {
                    assert!(c.is_homogeneous_of((d - k as i64) as u32), "g={g} Z={zeros:?} xi^{k}");
                }
            }
        }
    }
}

#[test]
fn two_increment_orders_agree_after_pushforward() {
    let (a, _) = rt::alpha_rt_with_order(2, &[1, 1], &[1, 2]).unwrap();
    let (b, _) = rt::alpha_rt_with_order(2, &[1, 1], &[2, 1]).unwrap();
    assert_eq!(pushforward_numbers(&a).unwrap(), pushforward_numbers(&b).unwrap());
}

#[test]
fn forgetting_a_section_gives_one() {
    for n in 2..=4usize {
        let d = one(2, n).mul_delta(&[1, n as u32]).unwrap();
        assert_eq!(d.forget_last().unwrap(), one(2, n - 1));
    }
}
