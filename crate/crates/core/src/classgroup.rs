//! The cuspidal divisor class group on the cusps over infinity.
//!
//! Degree-0 divisors on the `n = phi(N)/2` cusps form a lattice of rank
//! `n - 1`; dropping the last coordinate identifies it with `Z^{n-1}`. The
//! divisors of a basis of units span a full-rank sublattice whose rows form
//! the square matrix `A`. The class group is `Z^{n-1} / rowspan(A)`, of order
//! `|det A|`, and its invariants come from the Smith form of `A`.

use std::fmt;
use std::time::{Duration, Instant};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::basis::{basis, BasisElement};
use crate::bernoulli::{nonprincipal_product, yu_prefactor};
use crate::numtheory::{is_prime, units_mod_pm1};
use crate::siegel::divisor_at;
use crate::zlinalg::{det, hnf_modular, reduce_by_hnf, smith_modular, solve_left, Hnf, Matrix};
use crate::{Error, Int, IntMatrix, Result};

/// A finite abelian group as an ascending divisibility chain `d_1 | d_2 | ...`, each `d_i >= 2`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GroupStructure {
    pub invariants: Vec<Int>,
}

impl GroupStructure {
    pub fn from_invariants(mut invariants: Vec<Int>) -> Result<Self> {
        invariants.retain(|d| !d.is_one());
        invariants.sort();
        if invariants.iter().any(|d| !d.is_positive()) {
            return Err(Error::InvalidInput("invariants must be positive".into()));
        }
        if invariants.windows(2).any(|w| !w[1].is_multiple_of(&w[0])) {
            return Err(Error::InvalidInput(format!("{invariants:?} is not a divisibility chain")));
        }
        Ok(GroupStructure { invariants })
    }

    pub fn order(&self) -> Int {
        self.invariants.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariants.is_empty()
    }

    pub fn is_cyclic(&self) -> bool {
        self.invariants.len() <= 1
    }
}

impl fmt::Display for GroupStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.invariants.iter().map(Int::to_string).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Divisor matrix of `basis` at the given cusps, one row per element.
pub fn divisor_matrix_at(n: u64, basis: &[BasisElement], cusps: &[u64]) -> Result<IntMatrix> {
    let rows = basis
        .iter()
        .map(|e| divisor_at(&e.unit, cusps).to_integers())
        .collect::<Result<Vec<_>>>()?;
    debug_assert!(basis.iter().all(|e| e.unit.level() == n));
    Ok(Matrix::from_rows_with_cols(rows, cusps.len()))
}

/// `(phi(N)/2 - 1) x phi(N)/2` divisor matrix of the default basis, cusps ascending.
pub fn divisor_matrix(n: u64) -> Result<IntMatrix> {
    let b = basis(n, None)?;
    divisor_matrix_at(n, &b, &units_mod_pm1(n))
}

/// Drop the last column, so rows become coordinates on the degree-0 lattice.
fn reduced(b: &IntMatrix) -> IntMatrix {
    if b.cols() == 0 {
        return b.clone();
    }
    b.without_col(b.cols() - 1)
}

fn index_of(a: &IntMatrix) -> Result<Int> {
    if a.rows() == 0 {
        return Ok(Int::one());
    }
    let d = det(a).abs();
    if d.is_zero() {
        let rank = crate::zlinalg::rank(a);
        return Err(Error::RankDeficient { rank, expected: a.rows() });
    }
    Ok(d)
}

/// Index of the divisor lattice of the basis in the degree-0 divisors.
pub fn class_number_lattice(n: u64) -> Result<Int> {
    index_of(&reduced(&divisor_matrix(n)?))
}

/// The class number from the product formula over even nonprincipal characters.
pub fn class_number_yu(n: u64) -> Result<Int> {
    if n < 5 {
        return Err(Error::InvalidInput(format!("level must be at least 5, got {n}")));
    }
    let h = yu_prefactor(n)? * nonprincipal_product(n)?;
    if !h.is_integer() {
        return Err(Error::Inconsistent(format!("class number formula gives non-integer {h} at level {n}")));
    }
    Ok(h.to_integer())
}

/// Hermite form of a divisor matrix (`(n-1) x n`, full rank), last column included.
pub fn divisor_hnf(b: &IntMatrix) -> Result<IntMatrix> {
    let a = reduced(b);
    let d = index_of(&a)?;
    let h = hnf_modular(&a, &d).h;
    let rows = h
        .iter_rows()
        .map(|r| {
            let s: Int = r.iter().sum();
            r.iter().cloned().chain(std::iter::once(-s)).collect()
        })
        .collect();
    Ok(Matrix::from_rows_with_cols(rows, b.cols()))
}

/// A class-group generator: a degree-0 divisor in ascending cusp order and its order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub divisor: Vec<Int>,
    pub order: Int,
}

/// Render `sum d_i (a_i/N)` as in `(11/36) - 397(13/36) + 396(17/36)`.
pub fn render_divisor(n: u64, cusps: &[u64], d: &[Int]) -> String {
    let mut out = String::new();
    for (c, x) in cusps.iter().zip(d).filter(|(_, x)| !x.is_zero()) {
        let mag = x.abs();
        let coef = if mag.is_one() { String::new() } else { mag.to_string() };
        match (out.is_empty(), x.is_negative()) {
            (true, false) => {}
            (true, true) => out.push('-'),
            (false, false) => out.push_str(" + "),
            (false, true) => out.push_str(" - "),
        }
        out.push_str(&format!("{coef}({c}/{n})"));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// The class group at level `N` with everything needed to answer membership queries.
#[derive(Clone, Debug)]
pub struct ClassGroup {
    pub n: u64,
    pub cusps: Vec<u64>,
    pub basis: Vec<BasisElement>,
    /// Divisor matrix in ascending cusp order.
    pub divisors: IntMatrix,
    pub order: Int,
    pub structure: GroupStructure,
    /// Generators in descending order of their orders.
    pub generators: Vec<Generator>,
    reduced: IntMatrix,
    hnf: Option<Hnf<Int>>,
}

impl ClassGroup {
    pub fn new(n: u64, generator: Option<u64>) -> Result<Self> {
        let b = basis(n, generator)?;
        let cusps = units_mod_pm1(n);
        let divisors = divisor_matrix_at(n, &b, &cusps)?;
        let a = reduced(&divisors);
        let order = index_of(&a)?;
        let (structure, generators, hnf) = if a.rows() == 0 {
            (GroupStructure::default(), Vec::new(), None)
        } else {
            let hnf = hnf_modular(&a, &order);
            let sm = smith_modular(&a, &order);
            let structure = GroupStructure::from_invariants(sm.diagonal.clone())?;
            let mut generators: Vec<Generator> = sm
                .diagonal
                .iter()
                .enumerate()
                .filter(|(_, d)| !d.is_one())
                .map(|(i, d)| {
                    let v = reduce_by_hnf(&hnf, sm.vinv.row(i));
                    let s: Int = v.iter().sum();
                    Generator { divisor: v.into_iter().chain(std::iter::once(-s)).collect(), order: d.clone() }
                })
                .collect();
            generators.sort_by(|x, y| y.order.cmp(&x.order));
            (structure, generators, Some(hnf))
        };
        if structure.order() != order {
            return Err(Error::Inconsistent(format!(
                "level {n}: Smith form order {} differs from index {order}",
                structure.order()
            )));
        }
        Ok(ClassGroup { n, cusps, basis: b, divisors, order, structure, generators, reduced: a, hnf })
    }

    fn check_divisor(&self, d: &[Int]) -> Result<()> {
        if d.len() != self.cusps.len() {
            return Err(Error::InvalidInput(format!(
                "divisor has {} coefficients, level {} has {} cusps",
                d.len(),
                self.n,
                self.cusps.len()
            )));
        }
        if !d.iter().sum::<Int>().is_zero() {
            return Err(Error::InvalidInput("divisor does not have degree 0".into()));
        }
        Ok(())
    }

    /// Whether a degree-0 divisor (ascending cusp order) is the divisor of a unit.
    pub fn is_principal(&self, d: &[Int]) -> Result<bool> {
        self.check_divisor(d)?;
        Ok(match &self.hnf {
            None => true,
            Some(h) => reduce_by_hnf(h, &d[..d.len() - 1]).iter().all(Zero::is_zero),
        })
    }

    /// Order of the class of a degree-0 divisor.
    pub fn order_of(&self, d: &[Int]) -> Result<Int> {
        self.check_divisor(d)?;
        if self.reduced.rows() == 0 {
            return Ok(Int::one());
        }
        let y = solve_left(&self.reduced, &d[..d.len() - 1])
            .ok_or_else(|| Error::Inconsistent("divisor matrix is singular".into()))?;
        Ok(y.iter().fold(Int::one(), |acc, x| acc.lcm(x.denom())))
    }

    /// Row pivots of the Hermite form of the divisor matrix with columns in the given cusp order.
    pub fn hnf_pivots_in_order(&self, cusps: &[u64]) -> Result<Vec<Int>> {
        let b = divisor_matrix_at(self.n, &self.basis, cusps)?;
        let h = divisor_hnf(&b)?;
        Ok((0..h.rows()).map(|i| h[(i, i)].clone()).collect())
    }

    pub fn render_generator(&self, g: &Generator) -> String {
        render_divisor(self.n, &self.cusps, &g.divisor)
    }
}

/// Group structure of the cuspidal class group at level `N`.
pub fn structure(n: u64) -> Result<GroupStructure> {
    Ok(ClassGroup::new(n, None)?.structure)
}

/// The `p`-primary part as a sorted list of exponents `e` (one per factor `Z/p^e`).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PrimaryPart {
    pub p: u64,
    pub exponents: Vec<u32>,
}

impl PrimaryPart {
    pub fn rank(&self) -> usize {
        self.exponents.len()
    }

    pub fn multiplicity(&self, e: u32) -> usize {
        self.exponents.iter().filter(|&&x| x == e).count()
    }
}

/// Written as `(p)(p^2)^5(p^3)`; the trivial group is `(1)`.
impl fmt::Display for PrimaryPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponents.is_empty() {
            return f.write_str("(1)");
        }
        let mut i = 0;
        while i < self.exponents.len() {
            let e = self.exponents[i];
            let k = self.multiplicity(e);
            match e {
                1 => write!(f, "({})", self.p)?,
                _ => write!(f, "({}^{e})", self.p)?,
            }
            if k > 1 {
                write!(f, "^{k}")?;
            }
            i += k;
        }
        Ok(())
    }
}

pub fn p_primary(s: &GroupStructure, p: u64) -> PrimaryPart {
    let pi = Int::from(p);
    let mut exponents: Vec<u32> = s
        .invariants
        .iter()
        .map(|d| {
            let mut d = d.clone();
            let mut e = 0;
            while d.is_multiple_of(&pi) {
                d /= &pi;
                e += 1;
            }
            e
        })
        .filter(|&e| e > 0)
        .collect();
    exponents.sort_unstable();
    PrimaryPart { p, exponents }
}

/// Irregular primes below 800.
pub const IRREGULAR_PRIMES: [u64; 53] = [
    37, 59, 67, 101, 103, 131, 149, 157, 233, 257, 263, 271, 283, 293, 307, 311, 347, 353, 379, 389, 401, 409, 421,
    433, 461, 463, 467, 491, 523, 541, 547, 557, 577, 587, 593, 607, 613, 617, 619, 631, 647, 653, 659, 673, 677,
    683, 691, 727, 751, 757, 761, 773, 797,
];

/// Regularity of a prime, known for `p < 800`.
pub fn is_regular(p: u64) -> Option<bool> {
    match p {
        _ if !is_prime(p) => None,
        _ if p < 800 => Some(IRREGULAR_PRIMES.binary_search(&p).is_err()),
        _ => None,
    }
}

/// Predicted number of factors `Z/p^e` in the `p`-primary part at `p^n`.
pub fn predicted_multiplicity(p: u64, n: u32, e: u32) -> i64 {
    if e == 0 {
        return 0;
    }
    let k = e.div_ceil(2);
    let (p, n, k) = (p as i64, n as i64, k as i64);
    if e % 2 == 0 {
        let big = |k: i64| (p - 1) * (p - 1) * p.pow((n - k - 2) as u32) / 2 - 1;
        match p {
            2 if k <= n - 3 => big(k),
            3.. if k <= n - 2 => big(k),
            5.. if k == n - 1 => (p - 5) / 2,
            _ => 0,
        }
    } else {
        let bound = match p {
            2 => n - 3,
            3 => n - 2,
            _ => n - 1,
        };
        (k <= bound) as i64
    }
}

/// Predicted `p`-rank `(p-1) p^{n-2} / 2 - 1`.
pub fn predicted_rank(p: u64, n: u32) -> i64 {
    ((p - 1) * p.pow(n - 2) / 2) as i64 - 1
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityRow {
    pub exponent: u32,
    pub predicted: i64,
    pub computed: usize,
}

/// Side-by-side comparison of the predicted and computed `p`-primary part at `p^n`.
#[derive(Clone, Debug)]
pub struct ConjectureReport {
    pub p: u64,
    pub n: u32,
    pub regular: Option<bool>,
    pub predicted_rank: i64,
    pub computed: PrimaryPart,
    pub rows: Vec<MultiplicityRow>,
}

impl ConjectureReport {
    pub fn rank_agrees(&self) -> bool {
        self.predicted_rank == self.computed.rank() as i64
    }

    pub fn agrees(&self) -> bool {
        self.rank_agrees() && self.rows.iter().all(|r| r.predicted == r.computed as i64)
    }
}

/// Compare against a known primary part (for example a stored table row).
pub fn conjecture_report_for(p: u64, n: u32, computed: PrimaryPart) -> Result<ConjectureReport> {
    if !is_prime(p) || n < 2 || p.checked_pow(n).map_or(true, |q| q < 8) {
        return Err(Error::InvalidInput(format!("need a prime power p^n >= 8 with n >= 2, got {p}^{n}")));
    }
    let top = (2 * n).max(computed.exponents.last().copied().unwrap_or(0));
    let rows = (1..=top)
        .map(|e| MultiplicityRow { exponent: e, predicted: predicted_multiplicity(p, n, e), computed: computed.multiplicity(e) })
        .filter(|r| r.predicted != 0 || r.computed != 0)
        .collect();
    Ok(ConjectureReport { p, n, regular: is_regular(p), predicted_rank: predicted_rank(p, n), computed, rows })
}

/// Compute the class group at `p^n` and compare its `p`-part with the prediction.
pub fn conjecture_report(p: u64, n: u32) -> Result<ConjectureReport> {
    let q = p
        .checked_pow(n)
        .filter(|_| is_prime(p))
        .ok_or_else(|| Error::InvalidInput(format!("{p}^{n} is not a valid prime power")))?;
    if n < 2 || q < 8 {
        return Err(Error::InvalidInput(format!("need p^n >= 8 with n >= 2, got {p}^{n}")));
    }
    conjecture_report_for(p, n, p_primary(&structure(q)?, p))
}

/// Time spent in each stage of [`report`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Timings {
    pub lattice: Duration,
    pub formula: Duration,
}

/// Both class numbers, the structure, and the basis used.
#[derive(Clone, Debug)]
pub struct ClassGroupReport {
    pub group: ClassGroup,
    pub h_lattice: Int,
    pub h_yu: Int,
    pub timings: Timings,
}

impl ClassGroupReport {
    pub fn consistent(&self) -> bool {
        self.h_lattice == self.h_yu && self.group.structure.order() == self.h_yu
    }
}

pub fn report(n: u64, generator: Option<u64>) -> Result<ClassGroupReport> {
    let t0 = Instant::now();
    let group = ClassGroup::new(n, generator)?;
    let t1 = Instant::now();
    let h_yu = class_number_yu(n)?;
    let t2 = Instant::now();
    Ok(ClassGroupReport {
        h_lattice: group.order.clone(),
        h_yu,
        group,
        timings: Timings { lattice: t1 - t0, formula: t2 - t1 },
    })
}
