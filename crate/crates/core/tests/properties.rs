mod common;

use common::*;
use modunits::basis::basis;
use modunits::classgroup::{p_primary, structure, GroupStructure};
use modunits::numtheory::{b2_frac, divisors, euler_phi};
use modunits::qexpansion::{expand_product, expand_unit, QSeries};
use modunits::siegel::{divisor, UnitProduct};
use modunits::zlinalg::{det, hnf, hnf_modular, smith, Matrix};
use modunits::{Int, Rational};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn matrix(max: usize) -> impl Strategy<Value = Matrix<Int>> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        proptest::collection::vec(-12i64..=12, r * c).prop_map(move |v| Matrix::from_fn(r, c, |i, j| Int::from(v[i * c + j])))
    })
}

fn square(max: usize) -> impl Strategy<Value = Matrix<Int>> {
    (1..=max).prop_flat_map(|n| {
        proptest::collection::vec(-12i64..=12, n * n).prop_map(move |v| Matrix::from_fn(n, n, |i, j| Int::from(v[i * n + j])))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_matches_determinantal_divisors(m in matrix(4)) {
        let s = smith(&m);
        prop_assert_eq!(s.diagonal.clone(), minor_gcd_invariants(&m));
        for w in s.diagonal.windows(2) {
            prop_assert!(w[1].is_multiple_of(&w[0]));
        }
    }

    #[test]
    fn hnf_is_canonical_and_unimodular(m in matrix(5)) {
        let h = hnf(&m);
        let u = h.u.clone().unwrap();
        prop_assert_eq!(u.mul(&m), h.h.clone());
        prop_assert!(det(&u).abs().is_one());
        prop_assert_eq!(hnf(&h.h).h, h.h.clone());
        for (r, &c) in h.pivot_cols.iter().enumerate() {
            let p = &h.h[(r, c)];
            prop_assert!(p.is_positive());
            for above in 0..r {
                let x = &h.h[(above, c)];
                prop_assert!(!x.is_negative() && x < p);
            }
        }
    }

    #[test]
    fn modular_hnf_agrees(m in square(5)) {
        let d = det(&m).abs();
        prop_assume!(!d.is_zero());
        let full = hnf(&m);
        prop_assert_eq!(hnf_modular(&m, &d).h, full.h.clone());
        prop_assert_eq!(full.pivots().iter().product::<Int>(), d);
    }

    #[test]
    fn distribution_relation(n in 2u64..200, a in 1i64..200) {
        for m in divisors(n) {
            let lhs: Rational = (0..(n / m) as i64).map(|j| b2_frac(j * m as i64 + a, n)).sum();
            prop_assert_eq!(lhs * Rational::from(Int::from(n)), b2_frac(a, m) * Rational::from(Int::from(m)));
        }
    }

    #[test]
    fn series_group_laws(n in 5u64..40, g in 1i64..40, h in 1i64..40, t in 2usize..10) {
        prop_assume!(g % n as i64 != 0 && h % n as i64 != 0);
        let x = expand_unit(n, g, t).unwrap();
        let y = expand_unit(n, h, t).unwrap();
        prop_assert_eq!(x.mul(&x.inverse()).unwrap(), QSeries::one(n, t));
        prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
        prop_assert_eq!(x.pow(3), x.mul(&x).unwrap().mul(&x).unwrap());
        prop_assert_eq!(x.pow(-2), x.inverse().pow(2));
    }

    #[test]
    fn product_expansion_is_multiplicative(n in 5u64..30, pairs in proptest::collection::vec((1i64..30, -3i64..=3), 1..4)) {
        let pairs: Vec<(i64, i64)> = pairs.into_iter().filter(|(g, _)| g % n as i64 != 0).collect();
        prop_assume!(!pairs.is_empty());
        let u = UnitProduct::from_pairs(n, &pairs).unwrap();
        let v = UnitProduct::from_pairs(n, &pairs[..1]).unwrap();
        let lhs = expand_product(&u.mul(&v), 6).unwrap();
        let rhs = expand_product(&u, 6).unwrap().mul(&expand_product(&v, 6).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert!(divisor(&u.mul(&u.inverse())).orders.iter().all(Zero::is_zero));
    }

    #[test]
    fn basis_divisors_are_integral(n in 5u64..90) {
        let b = basis(n, None).unwrap();
        prop_assert_eq!(b.len() as u64, euler_phi(n) / 2 - 1);
        for e in &b {
            let d = divisor(&e.unit);
            prop_assert!(d.is_integral());
            prop_assert!(d.degree().is_zero());
        }
    }

    #[test]
    fn primary_parts_recover_order(invs in proptest::collection::vec(1u64..100, 0..5)) {
        let mut chain: Vec<Int> = Vec::new();
        let mut acc = Int::one();
        for x in invs {
            acc *= Int::from(x);
            chain.push(acc.clone());
        }
        let s = GroupStructure::from_invariants(chain).unwrap();
        let mut total = Int::one();
        for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97] {
            for e in p_primary(&s, p).exponents {
                total *= num_traits::pow(Int::from(p), e as usize);
            }
        }
        prop_assert_eq!(total, s.order());
    }
}

#[test]
fn structure_is_stable_under_generator_choice() {
    // 3 and 5 both generate (Z/7)^x, 2 and 5 both generate (Z/27)^x
    for (n, a, b) in [(7u64, 3u64, 5u64), (13, 2, 7), (27, 2, 5), (25, 2, 3)] {
        let x = modunits::classgroup::ClassGroup::new(n, Some(a)).unwrap();
        let y = modunits::classgroup::ClassGroup::new(n, Some(b)).unwrap();
        assert_eq!(x.structure, y.structure, "N={n}");
    }
    assert_eq!(structure(13).unwrap().to_string(), "[19]");
}
