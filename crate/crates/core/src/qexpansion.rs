//! Truncated q-expansions of Siegel unit products at the cusp at infinity.
//!
//! `E_g^(N)(tau) = q^{N B(g/N)/2} prod_{n>=1} (1 - q^{(n-1)N+g})(1 - q^{nN-g})`
//! up to a constant. A series is stored as its leading exponent `key/(12N)`
//! (always an integer key, `6g^2 - 6gN + N^2` for a single `E_g`) times a
//! power series in integral powers of `q` with constant term 1, known to
//! `T` terms. Normalizing the constant to 1 keeps every coefficient an integer.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::siegel::{normalize_index, UnitProduct};
use crate::{Error, Int, Rational, Result};

pub const DEFAULT_TRUNCATION: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    level: u64,
    /// Leading exponent times `12 * level`.
    lead_key: i64,
    /// `coeffs[j]` multiplies `q^{lead + j}`; `coeffs[0] == 1`.
    coeffs: Vec<Int>,
}

impl QSeries {
    /// The series `1 + O(q^T)` at level `N`.
    pub fn one(level: u64, t: usize) -> Self {
        assert!(t >= 1, "truncation must be positive");
        let mut coeffs = vec![Int::zero(); t];
        coeffs[0] = Int::one();
        QSeries { level, lead_key: 0, coeffs }
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len()
    }

    pub fn lead_key(&self) -> i64 {
        self.lead_key
    }

    /// `12N`, the grid denominator of the leading exponent.
    pub fn grid(&self) -> i64 {
        12 * self.level as i64
    }

    pub fn leading_exponent(&self) -> Rational {
        Rational::new(self.lead_key.into(), self.grid().into())
    }

    pub fn coeffs(&self) -> &[Int] {
        &self.coeffs
    }

    /// All exponents are integers exactly when the leading one is.
    pub fn has_integral_exponents(&self) -> bool {
        self.lead_key % self.grid() == 0
    }

    /// Multiply by `1 - q^m` in place (`m >= 1`).
    fn mul_one_minus(&mut self, m: usize) {
        for j in (m..self.coeffs.len()).rev() {
            let t = self.coeffs[j - m].clone();
            self.coeffs[j] -= t;
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.level != other.level || self.truncation() != other.truncation() {
            return Err(Error::InvalidInput(format!(
                "series at level {} (T={}) and level {} (T={}) cannot be combined",
                self.level,
                self.truncation(),
                other.level,
                other.truncation()
            )));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let t = self.truncation();
        let mut coeffs = vec![Int::zero(); t];
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in other.coeffs[..t - i].iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Ok(QSeries { level: self.level, lead_key: self.lead_key + other.lead_key, coeffs })
    }

    /// Multiplicative inverse; exists since the constant term is 1.
    pub fn inverse(&self) -> Self {
        let t = self.truncation();
        let mut inv = vec![Int::zero(); t];
        inv[0] = Int::one();
        for j in 1..t {
            let mut s = Int::zero();
            for i in 1..=j {
                s += &self.coeffs[i] * &inv[j - i];
            }
            inv[j] = -s;
        }
        QSeries { level: self.level, lead_key: -self.lead_key, coeffs: inv }
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = QSeries::one(self.level, self.truncation());
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&sq).expect("same level");
            }
            k >>= 1;
            if k > 0 {
                sq = sq.mul(&sq).expect("same level");
            }
        }
        acc
    }

    /// `f(tau) -> f(d tau)`, as a series at level `dN`.
    pub fn rescale(&self, d: u64) -> Self {
        assert!(d >= 1, "rescale by 0");
        let t = self.truncation();
        let mut coeffs = vec![Int::zero(); t];
        for (j, c) in self.coeffs.iter().enumerate() {
            let k = j * d as usize;
            if k >= t {
                break;
            }
            coeffs[k] = c.clone();
        }
        let d = d as i64;
        QSeries { level: self.level * d as u64, lead_key: self.lead_key * d * d, coeffs }
    }

    /// The same function viewed at a level `L` divisible by `N`.
    pub fn regrid(&self, level: u64) -> Result<Self> {
        if level % self.level != 0 {
            return Err(Error::InvalidInput(format!("{} does not divide {level}", self.level)));
        }
        Ok(QSeries { level, lead_key: self.lead_key * (level / self.level) as i64, coeffs: self.coeffs.clone() })
    }
}

/// `E_g^(N)` to `T` terms; `E_g` and `E_{N-g}` give the same series.
pub fn expand_unit(n: u64, g: i64, t: usize) -> Result<QSeries> {
    let h = normalize_index(n, g)?;
    if t == 0 {
        return Err(Error::InvalidInput("truncation must be positive".into()));
    }
    let (ni, hi) = (n as i64, h as i64);
    let mut s = QSeries::one(n, t);
    s.lead_key = 6 * hi * hi - 6 * hi * ni + ni * ni;
    let (n, h) = (n as usize, h as usize);
    let mut base = 0usize;
    while base + h < t {
        s.mul_one_minus(base + h);
        if base + n - h < t {
            s.mul_one_minus(base + n - h);
        }
        base += n;
    }
    Ok(s)
}

/// `prod_h E_h^{e_h}` to `T` terms.
pub fn expand_product(u: &UnitProduct, t: usize) -> Result<QSeries> {
    if t == 0 {
        return Err(Error::InvalidInput("truncation must be positive".into()));
    }
    let mut acc = QSeries::one(u.level(), t);
    for (h, e) in u.iter() {
        acc = acc.mul(&expand_unit(u.level(), h as i64, t)?.pow(e))?;
    }
    Ok(acc)
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lead = self.leading_exponent();
        if !lead.is_zero() {
            if lead.is_integer() {
                write!(f, "q^{}*", lead.to_integer())?;
            } else {
                write!(f, "q^({})*", lead)?;
            }
        }
        f.write_str("(1")?;
        for (j, c) in self.coeffs.iter().enumerate().skip(1) {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { '-' } else { '+' };
            let mag = c.abs();
            let coef = if mag.is_one() { String::new() } else { mag.to_string() };
            let power = if j == 1 { "q".to_string() } else { format!("q^{j}") };
            write!(f, " {sign} {coef}{power}")?;
        }
        write!(f, " + O(q^{}))", self.truncation())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &QSeries) -> Vec<i64> {
        s.coeffs().iter().map(|c| i64::try_from(c).unwrap()).collect()
    }

    #[test]
    fn single_unit() {
        let s = expand_unit(5, 1, 8).unwrap();
        assert_eq!(s.lead_key(), 1);
        assert_eq!(s.leading_exponent(), Rational::new(1.into(), 60.into()));
        // (1-q)(1-q^4)(1-q^6)(1-q^9)... to q^7
        assert_eq!(ints(&s), vec![1, -1, 0, 0, -1, 1, -1, 1]);
        assert_eq!(expand_unit(5, 4, 8).unwrap(), s);
        assert!(expand_unit(5, 10, 8).is_err());
    }

    #[test]
    fn arithmetic() {
        let a = expand_unit(13, 1, 8).unwrap();
        let one = QSeries::one(13, 8);
        assert_eq!(a.mul(&one).unwrap(), a);
        assert_eq!(a.mul(&a.pow(-1)).unwrap(), one);
        assert_eq!(a.pow(3), a.mul(&a).unwrap().mul(&a).unwrap());
        assert!(a.mul(&QSeries::one(12, 8)).is_err());
    }

    #[test]
    fn non_integral_quotient() {
        let u = UnitProduct::from_pairs(13, &[(1, 1), (2, -1)]).unwrap();
        let s = expand_product(&u, 8).unwrap();
        assert_eq!(s.leading_exponent(), Rational::new(5.into(), 13.into()));
        assert!(!s.has_integral_exponents());
        assert_eq!(expand_product(&UnitProduct::one(13), 8).unwrap(), QSeries::one(13, 8));
    }

    #[test]
    fn rescale_matches_higher_level() {
        let s = expand_unit(12, 1, 10).unwrap().rescale(3);
        assert_eq!(s, expand_unit(36, 3, 10).unwrap());
        let base = expand_unit(7, 2, 10).unwrap();
        assert_eq!(base.rescale(2).rescale(3), base.rescale(6));
        assert_eq!(base.rescale(1), base);
    }

    #[test]
    fn distribution_examples() {
        for (n, m, a) in [(6u64, 3u64, 1i64), (12, 4, 1), (27, 9, 2)] {
            let mut prod = QSeries::one(n, 8);
            for k in 0..(n / m) as i64 {
                prod = prod.mul(&expand_unit(n, k * m as i64 + a, 8).unwrap()).unwrap();
            }
            let rhs = expand_unit(m, a, 8).unwrap().regrid(n).unwrap();
            assert_eq!(prod, rhs, "N={n} M={m} a={a}");
        }
    }

    #[test]
    fn display() {
        let u = UnitProduct::from_pairs(13, &[(1, 1), (2, -1)]).unwrap();
        let s = expand_product(&u, 4).unwrap();
        assert_eq!(s.to_string(), "q^(5/13)*(1 - q + q^2 - q^3 + O(q^4))");
    }
}
