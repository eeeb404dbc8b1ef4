//! Generalized Bernoulli numbers `B_{2,chi}` and the Bernoulli matrix.
//!
//! The product of `B_{2,chi}/4` over all even characters modulo `N` equals
//! (up to sign) the determinant of the matrix `((N/2) B(a_i a_j^{-1} / N))`.
//! That determinant is computed exactly over the rationals, which sidesteps
//! cyclotomic arithmetic completely. Characters live in [`character`] and
//! are only used as a floating-point cross-check.

pub mod character;

use num_traits::{One, Signed, Zero};

pub use character::{enumerate_even_characters, DirichletCharacter};

use crate::numtheory::{b2_frac, euler_phi, factorize, inv_mod, order_in_units_mod_pm1, pow_mod, reduce_pm, units_mod_pm1};
use crate::zlinalg::{det_rational, Matrix};
use crate::{Error, Int, RatMatrix, Rational, Result};

/// The matrix `((N/2) B(a_i a_j^{-1} / N))_{i,j}` over representatives `a_i`
/// of `(Z/N)^x / {+-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BernoulliMatrix {
    pub level: u64,
    /// Row labels `a_i`, in `[1, N/2]`.
    pub indices: Vec<u64>,
    pub entries: RatMatrix,
}

fn check_level(n: u64) -> Result<()> {
    if n < 5 {
        return Err(Error::InvalidInput(format!("level must be at least 5, got {n}")));
    }
    Ok(())
}

/// `(N/2) B(x/N)` for integer `x`.
pub fn half_level_b2(n: u64, x: i64) -> Rational {
    b2_frac(x, n) * Rational::new(Int::from(n), Int::from(2))
}

/// Bernoulli matrix with rows and columns labelled by the ascending units in `[1, N/2]`.
pub fn bernoulli_matrix(n: u64) -> Result<BernoulliMatrix> {
    check_level(n)?;
    let indices = units_mod_pm1(n);
    let inv: Vec<u64> = indices.iter().map(|&a| inv_mod(a as i64, n).unwrap()).collect();
    let entries = Matrix::from_fn(indices.len(), indices.len(), |i, j| {
        let x = (indices[i] as u128 * inv[j] as u128 % n as u128) as i64;
        half_level_b2(n, x)
    });
    Ok(BernoulliMatrix { level: n, indices, entries })
}

/// Bernoulli matrix in generator order: entry `(i, j)` is
/// `(N/2) B(a^(i+j-2) / N)`, rows labelled by `a^(i-1)`. Needs `N` to be a
/// prime power so that `a` generates `(Z/N)^x / {+-1}`.
pub fn bernoulli_matrix_generator_order(n: u64, a: u64) -> Result<BernoulliMatrix> {
    check_level(n)?;
    let a = crate::numtheory::generator_mod_pm1(n, Some(a))?;
    let h = (euler_phi(n) / 2) as usize;
    let powers: Vec<u64> = (0..2 * h).map(|e| pow_mod(a, e as u64, n)).collect();
    let entries = Matrix::from_fn(h, h, |i, j| half_level_b2(n, powers[i + j] as i64));
    let indices = powers[..h].iter().map(|&x| reduce_pm(x as i64, n)).collect();
    Ok(BernoulliMatrix { level: n, indices, entries })
}

/// Exact determinant of [`bernoulli_matrix`]. The sign carries no meaning.
pub fn bernoulli_matrix_det(n: u64) -> Result<Rational> {
    Ok(det_rational(&bernoulli_matrix(n)?.entries))
}

/// `B_{2,chi_0} = N * sum_{(a,N)=1, 1<=a<=N} B(a/N)` for the principal character.
pub fn b2_chi0(n: u64) -> Result<Rational> {
    if n < 3 {
        return Err(Error::InvalidInput(format!("modulus must be at least 3, got {n}")));
    }
    let s = (1..=n)
        .filter(|&a| crate::numtheory::gcd(a, n) == 1)
        .fold(Rational::zero(), |acc, a| acc + b2_frac(a as i64, n));
    Ok(s * Rational::from_integer(Int::from(n)))
}

/// The exponent `L(p)` of `p` in the class number formula.
pub fn yu_exponent(n: u64, p: u64) -> Result<i64> {
    check_level(n)?;
    let f = factorize(n);
    let Some(&(_, k)) = f.iter().find(|&&(q, _)| q == p) else {
        return Err(Error::InvalidInput(format!("{p} does not divide {n}")));
    };
    let k = k as i64;
    let pk1 = p.pow(k as u32 - 1) as i64;
    Ok(if f.len() >= 2 {
        let m = n / p.pow(k as u32);
        euler_phi(m) as i64 * (pk1 - 1) - 2 * k + 2
    } else if p == 2 {
        if k < 3 {
            return Err(Error::InvalidInput("2-power levels need N >= 8".into()));
        }
        pk1 - 2 * k + 3
    } else {
        pk1 - 2 * k + 2
    })
}

/// `prod_{p | N} p^L(p) (1 + p^f_p)^e_p / (1 + p)`, where `f_p` is the order
/// of `p` in `(Z/m)^x/{+-1}` for `m` the prime-to-`p` part of `N`, and `e_p`
/// is the index of the subgroup it generates.
pub fn yu_prefactor(n: u64) -> Result<Rational> {
    check_level(n)?;
    let mut acc = Rational::one();
    for (p, k) in factorize(n) {
        let l = yu_exponent(n, p)?;
        let m = n / p.pow(k);
        let group = if m <= 2 { 1 } else { euler_phi(m) / 2 };
        let f = order_in_units_mod_pm1(p as i64, m)?;
        let e = group / f;
        let pi = Int::from(p);
        let pl = Rational::from_integer(pi.clone()).pow(l as i32);
        let num = (Int::one() + pi.pow(f as u32)).pow(e as u32);
        acc = acc * pl * Rational::new(num, Int::one() + pi);
    }
    Ok(acc)
}

/// `|prod_{chi != chi_0 even} B_{2,chi}/4|`, from the determinant divided by the principal factor.
pub fn nonprincipal_product(n: u64) -> Result<Rational> {
    let det = bernoulli_matrix_det(n)?;
    let principal = b2_chi0(n)? / Rational::from_integer(Int::from(4));
    Ok((det / principal).abs())
}
