//! Elementary number theory on machine-sized integers.
//!
//! Levels in this crate are small (a few thousand at most), so everything here
//! works on `u64` with trial division. The one exception is [`b2`], which is
//! generic over the integer type backing a [`Ratio`].

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::FromPrimitive;

use crate::{Error, Result};

/// Prime factorization as `(p, e)` pairs with `p` ascending. `factorize(1)` is empty.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0, "factorize(0)");
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn primes_dividing(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

/// `Some((p, k))` when `n = p^k` with `k >= 1`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    match factorize(n).as_slice() {
        [(p, k)] => Some((*p, *k)),
        _ => None,
    }
}

pub fn is_squarefree(n: u64) -> bool {
    factorize(n).iter().all(|&(_, e)| e == 1)
}

/// Product of the distinct primes dividing `n`.
pub fn radical(n: u64) -> u64 {
    primes_dividing(n).into_iter().product()
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .map(|(p, e)| (p - 1) * p.pow(e - 1))
        .product()
}

pub fn moebius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// All positive divisors, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factorize(n) {
        let base = out.clone();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            out.extend(base.iter().map(|d| d * pk));
        }
    }
    out.sort_unstable();
    out
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m128 = m as u128;
    let mut b = (base % m) as u128;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Inverse of `a` modulo `m` in `[0, m)`.
pub fn inv_mod(a: i64, m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::InvalidInput("modulus 0".into()));
    }
    let mi = m as i128;
    let ar = (a as i128).rem_euclid(mi);
    let eg = ar.extended_gcd(&mi);
    if eg.gcd != 1 {
        return Err(Error::NotInvertible { a, m });
    }
    Ok(eg.x.rem_euclid(mi) as u64)
}

/// Solve `x = r1 (mod m1)`, `x = r2 (mod m2)` for coprime moduli; result in `[0, m1*m2)`.
pub fn crt(r1: u64, m1: u64, r2: u64, m2: u64) -> u64 {
    debug_assert_eq!(gcd(m1, m2), 1);
    let m = m1 as u128 * m2 as u128;
    if m1 == 1 {
        return r2 % m2;
    }
    if m2 == 1 {
        return r1 % m1;
    }
    let inv = inv_mod(m1 as i64, m2).expect("coprime moduli") as u128;
    let r1 = r1 as u128 % m1 as u128;
    let diff = (r2 as u128 + m2 as u128 - r1 % m2 as u128) % m2 as u128;
    ((r1 + m1 as u128 * (diff * inv % m2 as u128)) % m) as u64
}

/// Representative of `g` modulo `n` up to sign, in `[0, n/2]`.
pub fn reduce_pm(g: i64, n: u64) -> u64 {
    let r = g.rem_euclid(n as i64) as u64;
    r.min(n - r)
}

/// Representatives of `(Z/n)^x / {+-1}` in `[1, n/2]`, ascending.
pub fn units_mod_pm1(n: u64) -> Vec<u64> {
    (1..=n / 2).filter(|&g| gcd(g, n) == 1).collect()
}

/// Order of `a` in `(Z/m)^x / {+-1}`. The group is trivial for `m <= 2`.
pub fn order_in_units_mod_pm1(a: i64, m: u64) -> Result<u64> {
    if m <= 2 {
        return Ok(1);
    }
    let a = a.rem_euclid(m as i64) as u64;
    if gcd(a, m) != 1 {
        return Err(Error::NotInvertible { a: a as i64, m });
    }
    let mut x = a;
    let mut k = 1;
    while x != 1 && x != m - 1 {
        x = (x as u128 * a as u128 % m as u128) as u64;
        k += 1;
    }
    Ok(k)
}

/// Generator of the cyclic group `(Z/q)^x / {+-1}` for `q = p^k` (odd `p`) or
/// `q = 2^k` with `k >= 3`.
///
/// Without an override the smallest generator is returned. An override is
/// checked and returned unchanged (reduced into `[1, q)`).
pub fn generator_mod_pm1(q: u64, override_gen: Option<u64>) -> Result<u64> {
    if matches!(q, 0 | 1 | 2 | 4) {
        return Err(Error::InvalidInput(format!("no generator needed or defined for q = {q}")));
    }
    if prime_power(q).is_none() {
        return Err(Error::InvalidInput(format!("{q} is not a prime power")));
    }
    let target = euler_phi(q) / 2;
    let is_gen = |a: u64| gcd(a, q) == 1 && order_in_units_mod_pm1(a as i64, q).ok() == Some(target);
    match override_gen {
        Some(a) => {
            let a = a % q;
            if is_gen(a) {
                Ok(a)
            } else {
                Err(Error::InvalidInput(format!(
                    "{a} does not generate (Z/{q})^x/{{+-1}}"
                )))
            }
        }
        None => Ok((1..q).find(|&a| is_gen(a)).expect("cyclic group has a generator")),
    }
}

/// Second periodic Bernoulli function `B(x) = {x}^2 - {x} + 1/6`.
pub fn b2<T>(x: &Ratio<T>) -> Ratio<T>
where
    T: Clone + Integer + FromPrimitive,
{
    let f = x.fract();
    let f = if f < Ratio::from_integer(T::zero()) {
        f + Ratio::from_integer(T::one())
    } else {
        f
    };
    let sixth = Ratio::new(T::one(), T::from_u8(6).unwrap());
    f.clone() * f.clone() - f + sixth
}

/// `B(a/n)` as a [`crate::Rational`].
pub fn b2_frac(a: i64, n: u64) -> crate::Rational {
    b2(&crate::Rational::new(a.into(), n.into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_roundtrip() {
        for n in 1..2000u64 {
            let f = factorize(n);
            assert_eq!(f.iter().map(|&(p, e)| p.pow(e)).product::<u64>(), n);
            assert!(f.iter().all(|&(p, _)| is_prime(p)));
        }
    }

    #[test]
    fn phi_and_mu_match_brute_force() {
        for n in 1..300u64 {
            let phi = (1..=n).filter(|&k| gcd(k, n) == 1).count() as u64;
            assert_eq!(euler_phi(n), phi, "phi({n})");
            // sum of mu over divisors vanishes for n > 1
            let s: i64 = divisors(n).into_iter().map(moebius).sum();
            assert_eq!(s, (n == 1) as i64);
        }
    }

    #[test]
    fn inverses() {
        assert_eq!(inv_mod(7, 13).unwrap(), 2);
        assert_eq!(inv_mod(-1, 13).unwrap(), 12);
        assert!(matches!(inv_mod(6, 9), Err(Error::NotInvertible { .. })));
        for m in 2..60u64 {
            for a in 1..m {
                if let Ok(b) = inv_mod(a as i64, m) {
                    assert_eq!(a * b % m, 1);
                }
            }
        }
    }

    #[test]
    fn crt_small() {
        for m1 in 1..12u64 {
            for m2 in 1..12u64 {
                if gcd(m1, m2) != 1 {
                    continue;
                }
                for r1 in 0..m1 {
                    for r2 in 0..m2 {
                        let x = crt(r1, m1, r2, m2);
                        assert!(x < m1 * m2);
                        assert_eq!((x % m1, x % m2), (r1, r2));
                    }
                }
            }
        }
    }

    #[test]
    fn generators() {
        assert_eq!(generator_mod_pm1(27, None).unwrap(), 2);
        assert_eq!(generator_mod_pm1(32, None).unwrap(), 3);
        assert_eq!(generator_mod_pm1(13, None).unwrap(), 2);
        assert_eq!(generator_mod_pm1(13, Some(7)).unwrap(), 7);
        assert!(generator_mod_pm1(13, Some(3)).is_err());
        for q in [1, 2, 4] {
            assert!(generator_mod_pm1(q, None).is_err());
        }
        assert!(generator_mod_pm1(12, None).is_err());
    }

    #[test]
    fn orders_mod_pm1() {
        assert_eq!(order_in_units_mod_pm1(5, 2).unwrap(), 1);
        assert_eq!(order_in_units_mod_pm1(3, 7).unwrap(), 3);
        assert_eq!(order_in_units_mod_pm1(12, 13).unwrap(), 1);
        // orders divide the group order
        for m in 3..80u64 {
            let h = euler_phi(m) / 2;
            for a in units_mod_pm1(m) {
                assert_eq!(h % order_in_units_mod_pm1(a as i64, m).unwrap(), 0);
            }
        }
    }

    #[test]
    fn b2_values() {
        use num_rational::Rational64;
        assert_eq!(b2(&Rational64::new(0, 1)), Rational64::new(1, 6));
        assert_eq!(b2(&Rational64::new(1, 2)), Rational64::new(-1, 12));
        // periodic and even
        for k in -20i64..20 {
            let x = Rational64::new(k, 7);
            assert_eq!(b2(&x), b2(&(x + 3)));
            assert_eq!(b2(&x), b2(&-x));
        }
        assert_eq!(b2_frac(1, 13), b2(&Rational64::new(1, 13)).into_bigrational());
    }

    trait IntoBig {
        fn into_bigrational(self) -> crate::Rational;
    }
    impl IntoBig for num_rational::Rational64 {
        fn into_bigrational(self) -> crate::Rational {
            crate::Rational::new((*self.numer()).into(), (*self.denom()).into())
        }
    }

    #[test]
    fn reduce_pm_range() {
        assert_eq!(reduce_pm(19, 13), 6);
        assert_eq!(reduce_pm(-1, 13), 1);
        assert_eq!(reduce_pm(26, 13), 0);
        assert_eq!(units_mod_pm1(13), vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(units_mod_pm1(36), vec![1, 5, 7, 11, 13, 17]);
    }
}
