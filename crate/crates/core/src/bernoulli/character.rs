//! Dirichlet characters modulo `N`, built from CRT generators of `(Z/N)^x`.
//!
//! A character is stored as integer exponents on a fixed set of generators,
//! so its values are exact roots of unity `exp(2 pi i t / E)`. Floating point
//! only enters when a value is turned into a complex number.

use std::sync::Arc;

use num_complex::Complex64;

use crate::numtheory::{crt, divisors, factorize, gcd, pow_mod};
use crate::{Error, Result};

/// One cyclic factor of `(Z/N)^x`: a generator lifted to modulus `N` and its order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicFactor {
    /// The prime power `q || N` this factor comes from.
    pub prime_power: u64,
    /// Generator modulo `q`, lifted to `N` by being `1` modulo `N/q`.
    pub generator: u64,
    pub order: u64,
}

/// `(Z/N)^x` as a product of cyclic factors, with a discrete-log table.
#[derive(Debug)]
pub struct UnitGroup {
    pub modulus: u64,
    pub factors: Vec<CyclicFactor>,
    /// Exponent of the group: every character value is an `exponent`-th root of unity.
    pub exponent: u64,
    logs: Vec<Option<Vec<u64>>>,
}

fn primitive_root(q: u64, p: u64) -> u64 {
    let phi = q / p * (p - 1);
    let primes: Vec<u64> = factorize(phi).into_iter().map(|(r, _)| r).collect();
    (2..q)
        .find(|&g| g % p != 0 && primes.iter().all(|&r| pow_mod(g, phi / r, q) != 1))
        .expect("odd prime powers have primitive roots")
}

impl UnitGroup {
    pub fn new(n: u64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidInput("modulus must be positive".into()));
        }
        let mut local: Vec<(u64, u64, u64)> = Vec::new();
        for (p, e) in factorize(n) {
            let q = p.pow(e);
            if p == 2 {
                match e {
                    1 => {}
                    2 => local.push((q, 3, 2)),
                    _ => {
                        local.push((q, q - 1, 2));
                        local.push((q, 5, q / 4));
                    }
                }
            } else {
                local.push((q, primitive_root(q, p), q / p * (p - 1)));
            }
        }
        let factors: Vec<CyclicFactor> = local
            .into_iter()
            .map(|(q, g, order)| CyclicFactor { prime_power: q, generator: crt(g, q, 1, n / q), order })
            .collect();
        let exponent = factors.iter().fold(1u64, |acc, f| acc / gcd(acc, f.order) * f.order);
        let mut logs = vec![None; n as usize];
        // Walk every exponent vector once; the generators are independent, so
        // each unit is reached exactly once.
        let mut coords = vec![0u64; factors.len()];
        loop {
            let x = factors
                .iter()
                .zip(&coords)
                .fold(1 % n, |acc, (f, &c)| (acc as u128 * pow_mod(f.generator, c, n) as u128 % n as u128) as u64);
            debug_assert!(logs[x as usize].is_none());
            logs[x as usize] = Some(coords.clone());
            let mut i = 0;
            while i < coords.len() {
                coords[i] += 1;
                if coords[i] < factors[i].order {
                    break;
                }
                coords[i] = 0;
                i += 1;
            }
            if i == coords.len() {
                break;
            }
        }
        Ok(UnitGroup { modulus: n, factors, exponent, logs })
    }

    /// Coordinates of `a` with respect to the generators, or `None` if `a` is not a unit.
    pub fn log(&self, a: i64) -> Option<&[u64]> {
        let r = a.rem_euclid(self.modulus as i64) as usize;
        self.logs[r].as_deref()
    }
}

/// A Dirichlet character modulo `N`.
#[derive(Clone, Debug)]
pub struct DirichletCharacter {
    group: Arc<UnitGroup>,
    /// Value exponents: `chi(g_j) = exp(2 pi i x_j / ord_j)`.
    pub exponents: Vec<u64>,
    pub even: bool,
    pub principal: bool,
}

impl DirichletCharacter {
    pub fn modulus(&self) -> u64 {
        self.group.modulus
    }

    /// `chi(a) = exp(2 pi i t / E)` with `E` the group exponent; `None` when `gcd(a, N) > 1`.
    pub fn phase(&self, a: i64) -> Option<u64> {
        let g = &self.group;
        let coords = g.log(a)?;
        let t = coords
            .iter()
            .zip(&self.exponents)
            .zip(&g.factors)
            .map(|((&c, &x), f)| (c * x % f.order) * (g.exponent / f.order))
            .sum::<u64>();
        Some(t % g.exponent)
    }

    pub fn value(&self, a: i64) -> Complex64 {
        match self.phase(a) {
            None => Complex64::new(0.0, 0.0),
            Some(t) => Complex64::from_polar(1.0, std::f64::consts::TAU * t as f64 / self.group.exponent as f64),
        }
    }

    /// Least `f | N` such that `chi` is trivial on units congruent to 1 mod `f`.
    pub fn conductor(&self) -> u64 {
        let n = self.modulus();
        divisors(n)
            .into_iter()
            .find(|&f| {
                (1..n)
                    .step_by(f as usize)
                    .filter(|&a| gcd(a, n) == 1)
                    .all(|a| self.phase(a as i64) == Some(0))
            })
            .unwrap_or(n)
    }

    /// Value of the primitive character `chi_f` inducing `chi`, at `x`.
    pub fn primitive_value(&self, x: i64) -> Complex64 {
        let f = self.conductor();
        if gcd(x.rem_euclid(f as i64) as u64, f) != 1 {
            return Complex64::new(0.0, 0.0);
        }
        let n = self.modulus() as i64;
        let lift = (0..n)
            .map(|k| x.rem_euclid(f as i64) + k * f as i64)
            .find(|&a| gcd(a as u64, n as u64) == 1)
            .expect("a unit lift exists by CRT");
        self.value(lift)
    }

    /// `B_{2,chi} = N * sum_{a=1}^N chi(a) B(a/N)` in floating point.
    pub fn b2_numeric(&self) -> Complex64 {
        let n = self.modulus();
        b2_sum(n, |a| self.value(a))
    }

    /// `B_{2,chi_f}` for the primitive character inducing `chi`.
    pub fn b2_primitive_numeric(&self) -> Complex64 {
        b2_sum(self.conductor(), |a| self.primitive_value(a))
    }
}

fn b2_sum(n: u64, chi: impl Fn(i64) -> Complex64) -> Complex64 {
    let nf = n as f64;
    let s: Complex64 = (1..=n)
        .map(|a| {
            let x = (a % n) as f64 / nf;
            chi(a as i64) * (x * x - x + 1.0 / 6.0)
        })
        .sum();
    s * nf
}

/// All `phi(N)/2` even characters modulo `N`; the principal one comes first.
pub fn enumerate_even_characters(n: u64) -> Result<Vec<DirichletCharacter>> {
    if n < 3 {
        return Err(Error::InvalidInput(format!("modulus must be at least 3, got {n}")));
    }
    let group = Arc::new(UnitGroup::new(n)?);
    let mut out = Vec::new();
    let mut xs = vec![0u64; group.factors.len()];
    loop {
        let chi = DirichletCharacter {
            group: group.clone(),
            exponents: xs.clone(),
            even: false,
            principal: xs.iter().all(|&x| x == 0),
        };
        if chi.phase(-1) == Some(0) {
            out.push(DirichletCharacter { even: true, ..chi });
        }
        let mut i = 0;
        while i < xs.len() {
            xs[i] += 1;
            if xs[i] < group.factors[i].order {
                break;
            }
            xs[i] = 0;
            i += 1;
        }
        if i == xs.len() {
            break;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::euler_phi;

    #[test]
    fn counts() {
        assert_eq!(enumerate_even_characters(13).unwrap().len(), 6);
        assert_eq!(enumerate_even_characters(21).unwrap().len(), 6);
        assert_eq!(enumerate_even_characters(8).unwrap().len(), 2);
        for n in 3..120u64 {
            let chars = enumerate_even_characters(n).unwrap();
            assert_eq!(chars.len() as u64, euler_phi(n) / 2, "N={n}");
            assert_eq!(chars.iter().filter(|c| c.principal).count(), 1);
            assert!(chars[0].principal);
        }
    }

    #[test]
    fn multiplicative() {
        for n in [15u64, 16, 21, 40, 63] {
            for chi in enumerate_even_characters(n).unwrap() {
                for a in 1..n as i64 {
                    for b in 1..n as i64 {
                        let lhs = chi.value(a * b);
                        let rhs = chi.value(a) * chi.value(b);
                        assert!((lhs - rhs).norm() < 1e-12);
                    }
                }
                assert!((chi.value(-1) - 1.0).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn principal_value_and_conductor() {
        let chars = enumerate_even_characters(13).unwrap();
        let b = chars[0].b2_numeric();
        assert!((b - Complex64::new(-2.0, 0.0)).norm() < 1e-12);
        assert_eq!(chars[0].conductor(), 1);
        assert!(chars[1..].iter().all(|c| c.conductor() == 13));
    }

    #[test]
    fn induced_from_seven() {
        let chars = enumerate_even_characters(21).unwrap();
        let from7: Vec<_> = chars.iter().filter(|c| c.conductor() == 7).collect();
        assert_eq!(from7.len(), 2);
        for chi in from7 {
            let lhs = chi.b2_numeric();
            let rhs = chi.b2_primitive_numeric() * (1.0 - chi.primitive_value(3) * 3.0);
            assert!((lhs - rhs).norm() < 1e-9 * lhs.norm().max(1.0));
        }
    }
}
