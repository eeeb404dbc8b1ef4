//! Explicit congruence criteria for principal cuspidal divisors, checked
//! against the generic lattice test. Divisors are written on the cusps
//! `a^(i-1)/N` in generator order.

mod common;

use common::*;
use modunits::basis::basis;
use modunits::classgroup::{divisor_matrix_at, ClassGroup};
use modunits::numtheory::factorize;
use modunits::Int;
use num_integer::Integer;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn dot(w: &[i64], d: &[Int]) -> Int {
    w.iter().zip(d).map(|(&a, b)| Int::from(a) * b).sum()
}

fn divides(m: i64, x: &Int) -> bool {
    x.mod_floor(&Int::from(m)).is_zero()
}

/// Random divisor in generator order: half the time a random element of the
/// principal lattice, otherwise that plus an arbitrary degree-zero divisor.
fn sample(rng: &mut ChaCha8Rng, rows: &[Vec<Int>], len: usize) -> (Vec<Int>, bool) {
    let mut d = vec![Int::zero(); len];
    for r in rows {
        let c = Int::from(rng.gen_range(-20..=20));
        for (x, y) in d.iter_mut().zip(r) {
            *x += &c * y;
        }
    }
    let forced = rng.gen_bool(0.5);
    if !forced {
        for (x, y) in d.iter_mut().zip(random_degree_zero(rng, len, 50)) {
            *x += y;
        }
    }
    (d, forced)
}

fn check(n: u64, a: u64, criterion: impl Fn(&[Int]) -> bool) {
    let group = ClassGroup::new(n, Some(a)).unwrap();
    let order = generator_order(n, a);
    let rows = divisor_matrix_at(n, &basis(n, Some(a)).unwrap(), &order).unwrap().into_rows();
    let mut rng = ChaCha8Rng::seed_from_u64(n);
    let (mut yes, mut no) = (0, 0);
    for _ in 0..400 {
        let (d, forced) = sample(&mut rng, &rows, order.len());
        let principal = group.is_principal(&to_ascending(n, &order, &d)).unwrap();
        assert_eq!(principal, criterion(&d), "N={n} divisor {d:?}");
        if forced {
            assert!(principal, "N={n}: lattice element rejected");
        }
        if principal {
            yes += 1;
        } else {
            no += 1;
        }
    }
    assert!(yes > 0 && no > 0);
}

#[test]
fn level_13() {
    check(13, 7, |d| divides(19, &dot(&[7, 6, 17, 10, 11], d)));
}

#[test]
fn level_27() {
    check(27, 2, |d| {
        divides(52497, &dot(&[-6427, 19882, -2511, 24452, -11942, -7047, 7415, 1], d))
            && divides(3, &dot(&[1, 0, 0, 1, 0, 0, 1], d))
    });
}

#[test]
fn level_32() {
    check(32, 3, |d| {
        divides(11640, &dot(&[4623, 5474, 3681, -2720, 223, -46, 1], d))
            && divides(12, &dot(&[-1, -3, 4, 4, -1, 1], d))
            && divides(2, &dot(&[-1, 0, 0, 0, 1], d))
    });
}

#[test]
fn generator_orders_divide_exponent() {
    for n in [28u64, 32, 36, 42, 45, 72] {
        let g = ClassGroup::new(n, None).unwrap();
        let exponent = g.structure.invariants.last().unwrap().clone();
        for gen in &g.generators {
            assert_eq!(g.order_of(&gen.divisor).unwrap(), gen.order, "N={n}");
            assert!(exponent.is_multiple_of(&gen.order));
            let d = u64::try_from(&gen.order).unwrap();
            let times = |k: u64| gen.divisor.iter().map(|x| x * k).collect::<Vec<Int>>();
            assert!(g.is_principal(&times(d)).unwrap());
            for (e, _) in factorize(d) {
                assert!(!g.is_principal(&times(d / e)).unwrap(), "N={n}: order {d} not exact at {e}");
            }
        }
    }
}

#[test]
fn rejects_malformed_divisors() {
    let g = ClassGroup::new(13, None).unwrap();
    assert!(g.is_principal(&ints(&[1, -1])).is_err());
    assert!(g.is_principal(&ints(&[1, 0, 0, 0, 0, 0])).unwrap_err().is_user_error());
}
