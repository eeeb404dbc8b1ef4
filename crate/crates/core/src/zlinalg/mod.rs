//! Exact linear algebra over the integers and the rationals.
//!
//! Everything is generic over [`Scalar`], which any signed `num-integer`
//! type satisfies (`i64`, `i128`, `BigInt`). Rational matrices use
//! `Matrix<Ratio<T>>`. Fixed-width types overflow silently on large input,
//! so the pipeline itself always instantiates with `BigInt`.

mod det;
mod hnf;
mod matrix;
mod snf;
mod solve;

pub use det::{bordered_det, det, det_rational, lattice_index, rank};
pub use hnf::{hnf, hnf_modular, reduce_by_hnf, Hnf};
pub use matrix::Matrix;
pub use snf::{smith, smith_modular, smith_plain, ModularSmith, SmithForm};
pub use solve::{solve_left, solve_left_integral};

use num_integer::Integer;
use num_traits::Signed;
use std::fmt::Debug;

/// Integer-like scalar usable by every routine in this module.
pub trait Scalar: Clone + Integer + Signed + Debug {}

impl<T: Clone + Integer + Signed + Debug> Scalar for T {}

/// Extended gcd: `(g, s, t)` with `s*a + t*b = g` and `g >= 0`.
///
/// When `a` divides `b` the coefficients are `(+-1, 0)`, which keeps Euclidean
/// elimination from disturbing a pivot that already divides its row.
pub fn xgcd<T: Scalar>(a: &T, b: &T) -> (T, T, T) {
    if b.is_zero() || (!a.is_zero() && (b.clone() % a.clone()).is_zero()) {
        return if a.is_negative() {
            (-a.clone(), -T::one(), T::zero())
        } else {
            (a.clone(), T::one(), T::zero())
        };
    }
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (T::one(), T::zero());
    let (mut t0, mut t1) = (T::zero(), T::one());
    while !r1.is_zero() {
        let q = r0.clone() / r1.clone();
        let r2 = r0 - q.clone() * r1.clone();
        let s2 = s0 - q.clone() * s1.clone();
        let t2 = t0 - q * t1.clone();
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if r0.is_negative() {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Symmetric residue of `x` modulo `m > 0`, in `(-m/2, m/2]`.
pub(crate) fn sym_mod<T: Scalar>(x: &T, m: &T) -> T {
    let r = x.mod_floor(m);
    let two = T::one() + T::one();
    if r.clone() * two > *m {
        r - m.clone()
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xgcd_identity() {
        for a in -30i64..30 {
            for b in -30i64..30 {
                let (g, s, t) = xgcd(&a, &b);
                assert_eq!(s * a + t * b, g);
                assert_eq!(g, a.gcd(&b));
            }
        }
        assert_eq!(xgcd(&3i64, &12), (3, 1, 0));
        assert_eq!(xgcd(&-3i64, &12), (3, -1, 0));
    }

    #[test]
    fn sym_mod_range() {
        for x in -50i64..50 {
            let r = sym_mod(&x, &7);
            assert!((-3..=3).contains(&r));
            assert_eq!((x - r) % 7, 0);
        }
        assert_eq!(sym_mod(&3i64, &6), 3);
    }
}
