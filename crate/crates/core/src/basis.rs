//! Explicit bases of the unit group `F_1^inf(N)` modulo constants.
//!
//! Every level `N >= 5` gets `phi(N)/2 - 1` products of Siegel functions whose
//! divisors are supported on the cusps over infinity. Four shapes of `N` are
//! handled separately: primes, prime powers (odd and even), squarefree
//! composites, and the rest. Elements coming from a lower level `M | N` are
//! kept in their native form `f(d tau)` with `d = N/M` for display, and as a
//! level-`N` exponent vector for computation.

use num_traits::{One, Zero};

use crate::bernoulli::bernoulli_matrix_generator_order;
use crate::numtheory::{
    crt, divisors, euler_phi, factorize, gcd, generator_mod_pm1, inv_mod, is_prime, is_squarefree,
    moebius, pow_mod, prime_power, radical, units_mod_pm1,
};
use crate::siegel::{normalize_index, render_product, UnitProduct};
use crate::zlinalg::Matrix;
use crate::{Error, Int, RatMatrix, Rational, Result};

/// Which construction produced an element, with its parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// `i`-th element for a prime level, generator `a`, `b = a^{-1} mod p`.
    Prime { a: u64, b: u64, i: usize },
    /// `i`-th element for `p^k`; `band` is the level exponent the element lives at.
    PrimePower { p: u64, k: u32, a: u64, band: u32, i: usize },
    /// `F_g / F_next` at a squarefree level.
    Squarefree { g: u64, next: u64 },
    /// `G_{g, m_1, ..., m_l}` at a non-squarefree sublevel.
    Orbit { g: u64, ms: Vec<u64> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    /// Exponent vector at the ambient level `N`.
    pub unit: UnitProduct,
    /// Native level `M` of the displayed factors.
    pub level: u64,
    /// `d = N/M`; the element is `f(d tau)`.
    pub scale: u64,
    /// Factors `(h, e)` at level `M` in construction order.
    pub factors: Vec<(u64, i64)>,
    pub provenance: Provenance,
}

impl BasisElement {
    pub fn display(&self) -> String {
        render_product(&self.factors, self.level, self.scale)
    }
}

/// Collects factors at level `m` for an element of level `m * d`.
struct Builder {
    m: u64,
    d: u64,
    factors: Vec<(u64, i64)>,
}

impl Builder {
    fn new(m: u64, d: u64) -> Self {
        Builder { m, d, factors: Vec::new() }
    }

    fn push(&mut self, g: i64, e: i64) -> Result<()> {
        if e == 0 {
            return Ok(());
        }
        let h = normalize_index(self.m, g)?;
        match self.factors.iter().position(|f| f.0 == h) {
            Some(i) => {
                self.factors[i].1 += e;
                if self.factors[i].1 == 0 {
                    self.factors.remove(i);
                }
            }
            None => self.factors.push((h, e)),
        }
        Ok(())
    }

    fn push_unit(&mut self, u: &UnitProduct, sign: i64) -> Result<()> {
        for (h, e) in u.iter() {
            self.push(h as i64, sign * e)?;
        }
        Ok(())
    }

    fn finish(self, provenance: Provenance) -> Result<BasisElement> {
        let n = self.m * self.d;
        let pairs: Vec<(i64, i64)> = self.factors.iter().map(|&(h, e)| ((h * self.d) as i64, e)).collect();
        Ok(BasisElement {
            unit: UnitProduct::from_pairs(n, &pairs)?,
            level: self.m,
            scale: self.d,
            factors: self.factors,
            provenance,
        })
    }
}

/// Powers `a^j mod q` for `0 <= j < len`.
fn powers(a: u64, q: u64, len: usize) -> Vec<i64> {
    (0..len as u64).map(|j| pow_mod(a, j, q) as i64).collect()
}

fn expected_rank(n: u64) -> usize {
    (euler_phi(n) / 2) as usize - 1
}

/// Basis for an odd prime `p >= 5`.
pub fn basis_prime(p: u64, generator: Option<u64>) -> Result<Vec<BasisElement>> {
    if p < 5 || !is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not a prime >= 5")));
    }
    let a = generator_mod_pm1(p, generator)?;
    let b = inv_mod(a as i64, p)?;
    let b2 = (b * b % p) as i64;
    let n = ((p - 1) / 2) as usize;
    let ap = powers(a, p, n + 1);
    let mut out = Vec::with_capacity(n - 1);
    for i in 1..=n - 2 {
        let mut f = Builder::new(p, 1);
        f.push(ap[i - 1], 1)?;
        f.push(ap[i + 1], b2)?;
        f.push(ap[i], -(1 + b2))?;
        out.push(f.finish(Provenance::Prime { a, b, i })?);
    }
    let mut f = Builder::new(p, 1);
    f.push(b2, p as i64)?;
    f.push(b as i64, -(p as i64))?;
    out.push(f.finish(Provenance::Prime { a, b, i: n - 1 })?);
    Ok(out)
}

/// `phi(p^l)/2` for odd `p` (with `phi_0 = 1`), or `2^{l-2}` for `p = 2`, `l >= 2`.
fn half_phi(p: u64, l: u32) -> usize {
    match (p, l) {
        (_, 0) => 1,
        (2, l) => 1usize << (l - 2),
        (p, l) => (euler_phi(p.pow(l)) / 2) as usize,
    }
}

/// Basis for `p^k`, `k >= 2` for odd `p` or `k >= 3` for `p = 2`.
fn basis_prime_power(p: u64, k: u32, generator: Option<u64>) -> Result<Vec<BasisElement>> {
    let n = p.pow(k);
    let a = generator_mod_pm1(n, generator)?;
    let c = if p == 2 { 1 } else { (pow_mod(inv_mod(a as i64, p)?, 2, p)) as i64 };
    let phik = half_phi(p, k);
    let phik1 = half_phi(p, k - 1);
    let an = powers(a, n, 2 * phik + 1);
    let mut out = Vec::with_capacity(phik - 1);
    let prov = |band, i| Provenance::PrimePower { p, k, a, band, i };
    for i in 1..phik - phik1 {
        let mut f = Builder::new(n, 1);
        f.push(an[i - 1], 1)?;
        f.push(an[i + phik1], c)?;
        f.push(an[i], -c)?;
        f.push(an[i + phik1 - 1], -1)?;
        out.push(f.finish(prov(k, i))?);
    }
    let i = phik - phik1;
    let mut f = Builder::new(n, 1);
    f.push(an[i - 1], p as i64)?;
    f.push(an[i + phik1 - 1], -(p as i64))?;
    out.push(f.finish(prov(k, i))?);
    let lowest = if p == 2 { 3 } else { 1 };
    for l in (lowest..k).rev() {
        let m = p.pow(l);
        let d = p.pow(k - l);
        let prev = half_phi(p, l - 1);
        for i in phik - half_phi(p, l) + 1..=phik - prev {
            let mut f = Builder::new(m, d);
            f.push(pow_mod(a, (i - 1) as u64, m) as i64, 1)?;
            f.push(pow_mod(a, (i + prev - 1) as u64, m) as i64, -1)?;
            out.push(f.finish(prov(l, i))?);
        }
    }
    Ok(out)
}

/// Basis for `p^k` with `p` odd and `k >= 2`.
pub fn basis_odd_prime_power(p: u64, k: u32, generator: Option<u64>) -> Result<Vec<BasisElement>> {
    if p == 2 || !is_prime(p) || k < 2 {
        return Err(Error::InvalidInput(format!("{p}^{k} is not an odd prime power with exponent >= 2")));
    }
    basis_prime_power(p, k, generator)
}

/// Basis for `2^k` with `k >= 3`.
pub fn basis_two_power(k: u32, generator: Option<u64>) -> Result<Vec<BasisElement>> {
    if k < 3 {
        return Err(Error::InvalidInput(format!("2^{k}: exponent must be at least 3")));
    }
    basis_prime_power(2, k, generator)
}

/// The unique `x` in `[1, m/2]` with `x = 0 (mod k)` and `x = +-g (mod m/k)`; `gcd(k, m/k) = 1`.
fn crt_index(g: u64, k: u64, m: u64) -> u64 {
    let x = crt(0, k, g % (m / k), m / k);
    x.min(m - x)
}

/// `F_g = prod_{k | K} E_{g(k)}^{mu(k)}` at level `m`, where `K` is `m`
/// itself (proper divisors only) for squarefree `m`, else the product of
/// primes dividing `m` exactly once.
fn f_function(g: u64, m: u64) -> Result<UnitProduct> {
    let sqf = is_squarefree(m);
    let kk: u64 = if sqf {
        m
    } else {
        factorize(m).into_iter().filter(|&(_, e)| e == 1).map(|(p, _)| p).product()
    };
    let mut u = UnitProduct::one(m);
    for k in divisors(kk) {
        if k == m {
            continue;
        }
        let h = crt_index(g % m, k, m);
        u = u.mul(&UnitProduct::from_pairs(m, &[(h as i64, moebius(k))])?);
    }
    Ok(u)
}

fn squarefree_elements(m: u64, d: u64) -> Result<Vec<BasisElement>> {
    let s = units_mod_pm1(m);
    s.windows(2)
        .map(|w| {
            let mut f = Builder::new(m, d);
            f.push_unit(&f_function(w[0], m)?, 1)?;
            f.push_unit(&f_function(w[1], m)?, -1)?;
            f.finish(Provenance::Squarefree { g: w[0], next: w[1] })
        })
        .collect()
}

/// Basis for a composite squarefree `N`: consecutive quotients `F_{g_i}/F_{g_{i+1}}`.
pub fn basis_squarefree(n: u64) -> Result<Vec<BasisElement>> {
    if !is_squarefree(n) || is_prime(n) || n < 6 {
        return Err(Error::InvalidInput(format!("{n} is not a composite squarefree level")));
    }
    squarefree_elements(n, 1)
}

/// `G^(M)` for non-squarefree `M`, rescaled by `d`.
fn orbit_elements(m: u64, d: u64, l: u64) -> Result<Vec<BasisElement>> {
    let sq: Vec<u64> = factorize(m).into_iter().filter(|&(_, e)| e >= 2).map(|(p, _)| p).collect();
    let pprod: u64 = sq.iter().product();
    let mut out = Vec::new();
    // m-tuples in lexicographic order, first coordinate slowest
    let mut tuples: Vec<Vec<u64>> = vec![vec![]];
    for &p in &sq {
        tuples = tuples.into_iter().flat_map(|t| (1..p).map(move |x| [t.clone(), vec![x]].concat())).collect();
    }
    for g in (1..).take_while(|&g| 2 * g * pprod <= m).filter(|&g| gcd(g, l) == 1) {
        for ms in &tuples {
            let mut f = Builder::new(m, d);
            // subsets with the first prime toggling fastest
            for mask in 0..1u32 << sq.len() {
                let shift: u64 = (0..sq.len())
                    .filter(|&i| mask >> i & 1 == 1)
                    .map(|i| ms[i] * (m / sq[i]))
                    .sum();
                let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
                f.push_unit(&f_function((g + shift) % m, m)?, sign)?;
            }
            out.push(f.finish(Provenance::Orbit { g, ms: ms.clone() })?);
        }
    }
    Ok(out)
}

/// Basis for `N` with at least two prime factors and some square factor:
/// the union over `M | N` with `rad(N) | M` of `G^(M)(N/M)`, ascending in `M`.
pub fn basis_general(n: u64) -> Result<Vec<BasisElement>> {
    if is_squarefree(n) || prime_power(n).is_some() {
        return Err(Error::InvalidInput(format!("{n} is squarefree or a prime power")));
    }
    let l = radical(n);
    let mut out = Vec::new();
    for m in divisors(n).into_iter().filter(|m| m % l == 0) {
        let d = n / m;
        if m == l {
            out.extend(squarefree_elements(m, d)?);
        } else {
            out.extend(orbit_elements(m, d, l)?);
        }
    }
    if out.len() != expected_rank(n) {
        return Err(Error::Inconsistent(format!(
            "level {n}: built {} elements, expected {}",
            out.len(),
            expected_rank(n)
        )));
    }
    Ok(out)
}

/// Basis of `F_1^inf(N)` for any `N >= 5`. A generator override is only
/// meaningful, and only accepted, for prime powers.
pub fn basis(n: u64, generator: Option<u64>) -> Result<Vec<BasisElement>> {
    if n < 5 {
        return Err(Error::InvalidInput(format!("level must be at least 5, got {n}")));
    }
    let pp = prime_power(n);
    if generator.is_some() && pp.is_none() {
        return Err(Error::InvalidInput(format!("a generator override needs a prime power level, got {n}")));
    }
    let out = match pp {
        Some((p, 1)) => basis_prime(p, generator)?,
        Some((2, k)) => basis_two_power(k, generator)?,
        Some((p, k)) => basis_odd_prime_power(p, k, generator)?,
        None if is_squarefree(n) => basis_squarefree(n)?,
        None => basis_general(n)?,
    };
    debug_assert_eq!(out.len(), expected_rank(n));
    Ok(out)
}

fn rat(x: i64) -> Rational {
    Rational::from_integer(Int::from(x))
}

/// `V_l`: `p x p` blocks of size `s`, differences in the first `p-1` block rows, `pI` across the last.
fn v_block(p: u64, s: usize) -> RatMatrix {
    let size = p as usize * s;
    Matrix::from_fn(size, size, |r, c| {
        let (br, bc) = (r / s, c / s);
        if r % s != c % s {
            Rational::zero()
        } else if br == p as usize - 1 {
            rat(p as i64)
        } else if bc == br {
            Rational::one()
        } else if bc == br + 1 {
            -Rational::one()
        } else {
            Rational::zero()
        }
    })
}

/// Identity of size `n` with its lower right block replaced by `b`.
fn embed_lower_right(n: usize, b: &RatMatrix) -> RatMatrix {
    let off = n - b.rows();
    Matrix::from_fn(n, n, |r, c| {
        if r >= off && c >= off {
            b[(r - off, c - off)].clone()
        } else if r == c {
            Rational::one()
        } else {
            Rational::zero()
        }
    })
}

/// The row-operation certificate `Q = U ... M` for a prime power level, where
/// `M` is the Bernoulli matrix in generator order. The first `phi(N)/2 - 1`
/// rows of `Q` are the divisors of the basis elements at the cusps
/// `a^{j-1}/N`, and `|det Q|` divided by the absolute sum of the last row
/// is the lattice index.
pub fn certificate_matrix(n: u64, generator: Option<u64>) -> Result<RatMatrix> {
    let (p, k) = prime_power(n).ok_or_else(|| Error::InvalidInput(format!("{n} is not a prime power")))?;
    let a = generator_mod_pm1(n, generator)?;
    let m = bernoulli_matrix_generator_order(n, a)?.entries;
    let size = m.rows();
    let c = if p == 2 { 1 } else { pow_mod(inv_mod(a as i64, p)?, 2, p) as i64 };
    if k == 1 {
        let b2 = c;
        let u1 = Matrix::from_fn(size, size, |r, col| match (r, col) {
            _ if r == size - 1 && col == r => rat(1 - b2),
            _ if col == r => Rational::one(),
            _ if col == r + 1 => rat(-b2),
            _ => Rational::zero(),
        });
        let u2 = Matrix::from_fn(size, size, |r, col| {
            let w = if r == size - 2 { p as i64 } else { 1 };
            match col {
                _ if col == r => rat(w),
                _ if col == r + 1 && r + 1 < size => rat(-w),
                _ => Rational::zero(),
            }
        });
        return Ok(u2.mul(&u1).mul(&m));
    }
    let phik = half_phi(p, k);
    let phik1 = half_phi(p, k - 1);
    let top = phik - phik1;
    let uk_prime = Matrix::from_fn(size, size, |r, col| match (r, col) {
        _ if r + 1 == top && col == r => rat(p as i64),
        _ if col == r => Rational::one(),
        _ if col == r + 1 && r + 1 < top => rat(-c),
        _ => Rational::zero(),
    });
    let lowest = if p == 2 { 3 } else { 2 };
    let mut q = uk_prime.mul(&v_block(p, phik1)).mul(&m);
    for l in (lowest..k).rev() {
        q = embed_lower_right(size, &v_block(p, half_phi(p, l - 1))).mul(&q);
    }
    if p != 2 {
        let s = half_phi(p, 1);
        let u1 = Matrix::from_fn(s, s, |r, col| match col {
            _ if col == r => Rational::one(),
            _ if col == r + 1 => -Rational::one(),
            _ => Rational::zero(),
        });
        q = embed_lower_right(size, &u1).mul(&q);
    }
    Ok(q)
}
