#![allow(dead_code)]

use modunits::zlinalg::{det, Matrix};
use modunits::Int;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::Rng;

/// Invariant factors from determinantal divisors: `d_k = D_k / D_{k-1}`, where
/// `D_k` is the gcd of all `k x k` minors. Stops at the rank.
pub fn minor_gcd_invariants(m: &Matrix<Int>) -> Vec<Int> {
    let (r, c) = (m.rows(), m.cols());
    let mut out = Vec::new();
    let mut prev = Int::from(1);
    for k in 1..=r.min(c) {
        let mut g = Int::zero();
        for rows in subsets(r, k) {
            for cols in subsets(c, k) {
                g = g.gcd(&det(&m.select_rows(&rows).select_cols(&cols)));
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, bound: i64) -> Matrix<Int> {
    Matrix::from_fn(rows, cols, |_, _| Int::from(rng.gen_range(-bound..=bound)))
}

pub fn ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

/// Map a divisor given on cusps `P_i` (in some listed order) to ascending cusp order.
pub fn to_ascending(n: u64, order: &[u64], d: &[Int]) -> Vec<Int> {
    let asc = modunits::numtheory::units_mod_pm1(n);
    asc.iter().map(|c| d[order.iter().position(|x| x == c).unwrap()].clone()).collect()
}

/// Cusps `a^{i-1}/N`, normalized.
pub fn generator_order(n: u64, a: u64) -> Vec<u64> {
    modunits::siegel::LevelContext::new(n).unwrap().generator_cusp_order(a)
}

pub fn random_degree_zero(rng: &mut impl Rng, len: usize, bound: i64) -> Vec<Int> {
    let mut d: Vec<Int> = (0..len - 1).map(|_| Int::from(rng.gen_range(-bound..=bound))).collect();
    let s: Int = d.iter().sum();
    d.push(-s);
    d
}

pub fn abs_all(v: &[Int]) -> Vec<Int> {
    v.iter().map(|x| x.abs()).collect()
}
