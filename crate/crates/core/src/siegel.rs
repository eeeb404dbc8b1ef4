//! Products of Siegel functions `E_g^(N)` and their divisors on the cusps over infinity.
//!
//! Since `E_{g+N} = E_{-g} = -E_g`, a product is determined up to a constant
//! by exponents on representatives `1 <= h <= N/2`. Constants are ignored
//! everywhere: units are studied modulo `C^x`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;
use num_traits::Zero;

use crate::numtheory::{b2_frac, factorize, gcd, primes_dividing, reduce_pm, units_mod_pm1};
use crate::{Error, Int, Rational, Result};

/// Level data shared by the unit and divisor computations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelContext {
    pub n: u64,
    pub factorization: Vec<(u64, u32)>,
    /// Cusps `a/N` over infinity, `1 <= a <= N/2`, `gcd(a, N) = 1`, ascending.
    pub cusps: Vec<u64>,
    /// Siegel unit representatives `1..=N/2`.
    pub indices: Vec<u64>,
}

impl LevelContext {
    pub fn new(n: u64) -> Result<Self> {
        if n < 5 {
            return Err(Error::InvalidInput(format!("level must be at least 5, got {n}")));
        }
        Ok(LevelContext {
            n,
            factorization: factorize(n),
            cusps: units_mod_pm1(n),
            indices: (1..=n / 2).collect(),
        })
    }

    /// Cusps in the order `a^0, a^1, ...` (normalized), for a generator `a` of `(Z/N)^x/{+-1}`.
    pub fn generator_cusp_order(&self, a: u64) -> Vec<u64> {
        let mut x = 1u64;
        (0..self.cusps.len())
            .map(|_| {
                let c = reduce_pm(x as i64, self.n);
                x = x * a % self.n;
                c
            })
            .collect()
    }
}

/// Representative `h` of `+-g mod N` with `1 <= h <= N/2`.
pub fn normalize_index(n: u64, g: i64) -> Result<u64> {
    match reduce_pm(g, n) {
        0 => Err(Error::InvalidInput(format!("E_{g} is undefined at level {n}: index is 0 mod {n}"))),
        h => Ok(h),
    }
}

/// Level-`dM` index of `E_g^(M)(d tau)`, which equals `E_{gd}^(dM)(tau)`.
pub fn lower_level_embed(m: u64, g: i64, d: u64) -> Result<u64> {
    normalize_index(m, g)?;
    normalize_index(m * d, g * d as i64)
}

/// Order of `E_g^(N)` at the cusp `a/c`: `(c,N) B(a g / (c,N)) / 2`.
pub fn order_at_cusp(n: u64, g: i64, a: i64, c: u64) -> Result<Rational> {
    normalize_index(n, g)?;
    if c == 0 || gcd(a.unsigned_abs(), c) != 1 {
        return Err(Error::InvalidInput(format!("{a}/{c} is not a reduced cusp")));
    }
    let w = gcd(c, n);
    let ag = (a as i128 * g as i128).rem_euclid(w as i128) as i64;
    Ok(b2_frac(ag, w) * Rational::new(Int::from(w), Int::from(2)))
}

/// `prod_h E_h^(e_h)` at a fixed level, with `1 <= h <= N/2` and no zero exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct UnitProduct {
    level: u64,
    exps: BTreeMap<u64, i64>,
}

impl UnitProduct {
    pub fn one(level: u64) -> Self {
        UnitProduct { level, exps: BTreeMap::new() }
    }

    /// Build from `(g, e)` pairs; indices are normalized and repeated ones merged.
    pub fn from_pairs(level: u64, pairs: &[(i64, i64)]) -> Result<Self> {
        let mut u = Self::one(level);
        for &(g, e) in pairs {
            u.add(normalize_index(level, g)?, e);
        }
        Ok(u)
    }

    fn add(&mut self, h: u64, e: i64) {
        let slot = self.exps.entry(h).or_insert(0);
        *slot += e;
        if *slot == 0 {
            self.exps.remove(&h);
        }
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn exponent(&self, h: u64) -> i64 {
        self.exps.get(&h).copied().unwrap_or(0)
    }

    /// Nonzero `(h, e_h)` in ascending `h`.
    pub fn iter(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.exps.iter().map(|(&h, &e)| (h, e))
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.level, other.level, "levels differ");
        let mut out = self.clone();
        for (h, e) in other.iter() {
            out.add(h, e);
        }
        out
    }

    pub fn pow(&self, k: i64) -> Self {
        let mut out = Self::one(self.level);
        if k != 0 {
            for (h, e) in self.iter() {
                out.add(h, e * k);
            }
        }
        out
    }

    pub fn inverse(&self) -> Self {
        self.pow(-1)
    }

    /// `u(d tau)` as a product at level `dN`.
    pub fn rescale(&self, d: u64) -> Self {
        let mut out = Self::one(self.level * d);
        for (h, e) in self.iter() {
            out.add(h * d, e);
        }
        out
    }
}

impl fmt::Display for UnitProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factors: Vec<(u64, i64)> = self.iter().collect();
        f.write_str(&render_product(&factors, self.level, 1))
    }
}

/// Render factors `E_h^(M)(d tau)^e` in the usual fraction notation, e.g.
/// `E1*E11/(E2*E8)` or `E1^(12)(3t)/E5^(12)(3t)`. The level tag is omitted
/// when `scale` is 1. Factor order is preserved.
pub fn render_product(factors: &[(u64, i64)], level: u64, scale: u64) -> String {
    let one = |h: u64, e: i64| {
        let base = if scale == 1 { format!("E{h}") } else { format!("E{h}^({level})({scale}t)") };
        match e.abs() {
            1 => base,
            k => format!("{base}^{k}"),
        }
    };
    let num: Vec<String> = factors.iter().filter(|f| f.1 > 0).map(|&(h, e)| one(h, e)).collect();
    let den: Vec<String> = factors.iter().filter(|f| f.1 < 0).map(|&(h, e)| one(h, e)).collect();
    let top = if num.is_empty() { "1".to_string() } else { num.join("*") };
    match den.len() {
        0 => top,
        1 => format!("{top}/{}", den[0]),
        _ => format!("{top}/({})", den.join("*")),
    }
}

/// Orders of a unit at the cusps over infinity, in a stated cusp order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CuspDivisor {
    pub level: u64,
    pub cusps: Vec<u64>,
    pub orders: Vec<Rational>,
}

impl CuspDivisor {
    pub fn degree(&self) -> Rational {
        self.orders.iter().fold(Rational::zero(), |a, x| a + x)
    }

    pub fn is_integral(&self) -> bool {
        self.orders.iter().all(|x| x.is_integer())
    }

    /// Integer coefficients, or [`Error::NonIntegral`].
    pub fn to_integers(&self) -> Result<Vec<Int>> {
        self.orders
            .iter()
            .zip(&self.cusps)
            .map(|(x, a)| {
                if x.is_integer() {
                    Ok(x.to_integer())
                } else {
                    Err(Error::NonIntegral { level: self.level, detail: format!("order {x} at cusp {a}/{}", self.level) })
                }
            })
            .collect()
    }
}

/// Divisor of `u` in ascending cusp order.
pub fn divisor(u: &UnitProduct) -> CuspDivisor {
    divisor_at(u, &units_mod_pm1(u.level))
}

/// Divisor of `u` at the given cusps `a/N`: `sum_h e_h (N/2) B(a h / N)`.
pub fn divisor_at(u: &UnitProduct, cusps: &[u64]) -> CuspDivisor {
    let n = u.level;
    let half = Rational::new(Int::from(n), Int::from(2));
    let orders = cusps
        .iter()
        .map(|&a| {
            let s = u.iter().fold(Rational::zero(), |acc, (h, e)| {
                let x = (a as u128 * h as u128 % n as u128) as i64;
                acc + b2_frac(x, n) * Rational::from_integer(Int::from(e))
            });
            s * half.clone()
        })
        .collect();
    CuspDivisor { level: n, cusps: cusps.to_vec(), orders }
}

/// The congruences `sum e = 0 (12)`, `sum g e = 0 (2)`, `sum g^2 e = 0 (2N)`;
/// for odd `N` only `sum e = 0 (12)` and `sum g^2 e = 0 (N)`.
pub fn is_gamma1_modular(u: &UnitProduct) -> bool {
    let n = u.level as i128;
    let (mut s0, mut s1, mut s2) = (0i128, 0i128, 0i128);
    for (h, e) in u.iter() {
        let (h, e) = (h as i128, e as i128);
        s0 += e;
        s1 += h * e;
        s2 += h * h * e;
    }
    if n.is_odd() {
        s0 % 12 == 0 && s2 % n == 0
    } else {
        s0 % 12 == 0 && s1 % 2 == 0 && s2 % (2 * n) == 0
    }
}

/// `O_{a,K}`: classes `+-b` with `b = a (mod N/K)`, excluding the zero class.
pub fn orbit(n: u64, a: i64, k: u64) -> Result<BTreeSet<u64>> {
    if k == 0 || n % k != 0 {
        return Err(Error::InvalidInput(format!("{k} does not divide {n}")));
    }
    let step = (n / k) as i64;
    Ok((0..k as i64).map(|j| reduce_pm(a + j * step, n)).filter(|&h| h != 0).collect())
}

/// Whether every orbit sum `sum_{g in O_{a,p}} e_g` vanishes, over all primes
/// `p | N` and all `a`. Undefined for prime `N`.
pub fn orbit_condition_holds(u: &UnitProduct) -> Result<bool> {
    let n = u.level;
    if crate::numtheory::is_prime(n) {
        return Err(Error::InvalidInput(format!("orbit condition is not defined for prime level {n}")));
    }
    for p in primes_dividing(n) {
        let step = n / p;
        // orbits depend only on a mod N/p
        for a in 0..step as i64 {
            let s: i64 = orbit(n, a, p)?.into_iter().map(|h| u.exponent(h)).sum();
            if s != 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
