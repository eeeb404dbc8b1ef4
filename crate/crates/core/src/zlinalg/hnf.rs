use super::{xgcd, Matrix, Scalar};

/// Row-style Hermite normal form.
///
/// `h` is upper echelon: each nonzero row has a positive pivot strictly to
/// the right of the pivot above it, and the entries above a pivot lie in
/// `[0, pivot)`. Zero rows sit at the bottom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hnf<T> {
    pub h: Matrix<T>,
    /// Unimodular transform with `u * input = h`, when it was tracked.
    pub u: Option<Matrix<T>>,
    /// Column of the pivot in each nonzero row.
    pub pivot_cols: Vec<usize>,
}

impl<T: Scalar> Hnf<T> {
    /// Pivot values in row order.
    pub fn pivots(&self) -> Vec<T> {
        self.pivot_cols.iter().enumerate().map(|(r, &c)| self.h[(r, c)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }
}

/// Hermite normal form with its transform, by Euclidean row elimination.
///
/// Intermediate entries are not bounded, so this is meant for small or
/// moderately sized input. Use [`hnf_modular`] for large square lattices.
pub fn hnf<T: Scalar>(m: &Matrix<T>) -> Hnf<T> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut h = m.clone();
    let mut u = Matrix::identity(rows);
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        for i in r + 1..rows {
            if h[(i, c)].is_zero() {
                continue;
            }
            let (a, b) = (h[(r, c)].clone(), h[(i, c)].clone());
            let (g, s, t) = xgcd(&a, &b);
            let (p, q) = (-(b / g.clone()), a / g);
            h.combine_rows(r, i, [&s, &t, &p, &q]);
            u.combine_rows(r, i, [&s, &t, &p, &q]);
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        let piv = h[(r, c)].clone();
        for i in 0..r {
            let q = h[(i, c)].div_floor(&piv);
            if !q.is_zero() {
                h.sub_row_multiple(i, r, &q);
                u.sub_row_multiple(i, r, &q);
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    Hnf { h, u: Some(u), pivot_cols }
}

/// Hermite normal form of a full-rank square lattice, working modulo `d`.
///
/// `d` must be a positive multiple of `|det m|`. Then `d * Z^n` lies in the
/// lattice, so every entry can be kept below `d`. After each pivot `p` is
/// fixed the remaining sublattice contains `(d/p) * Z^(n-k)` and the modulus
/// shrinks accordingly. No transform is produced.
pub fn hnf_modular<T: Scalar>(m: &Matrix<T>, d: &T) -> Hnf<T> {
    assert!(m.is_square());
    assert!(d.is_positive(), "modulus must be positive");
    let n = m.rows();
    let mut a = m.map(|x| x.mod_floor(d));
    let mut h = Matrix::zeros(n, n);
    let mut modulus = d.clone();
    for k in 0..n {
        for i in k + 1..n {
            if a[(i, k)].is_zero() {
                continue;
            }
            let (x, y) = (a[(k, k)].clone(), a[(i, k)].clone());
            let (g, s, t) = xgcd(&x, &y);
            let (p, q) = (-(y / g.clone()), x / g);
            a.combine_rows(k, i, [&s, &t, &p, &q]);
            for c in k..n {
                a[(k, c)] = a[(k, c)].mod_floor(&modulus);
                a[(i, c)] = a[(i, c)].mod_floor(&modulus);
            }
        }
        // Combine with modulus * e_k, which lies in the current sublattice.
        let (p, s, _) = xgcd(&a[(k, k)], &modulus);
        h[(k, k)] = p.clone();
        for c in k + 1..n {
            h[(k, c)] = (s.clone() * a[(k, c)].clone()).mod_floor(&modulus);
        }
        modulus = modulus / p;
        for i in k + 1..n {
            for c in k + 1..n {
                a[(i, c)] = a[(i, c)].mod_floor(&modulus);
            }
        }
    }
    for k in 0..n {
        let piv = h[(k, k)].clone();
        for i in 0..k {
            let q = h[(i, k)].div_floor(&piv);
            if !q.is_zero() {
                h.sub_row_multiple(i, k, &q);
            }
        }
    }
    Hnf { h, u: None, pivot_cols: (0..n).collect() }
}

/// Canonical representative of `v` modulo the row lattice of an HNF: each
/// pivot coordinate ends up in `[0, pivot)`. The result is zero exactly when
/// `v` lies in the lattice, provided `v` is in the lattice's real span.
pub fn reduce_by_hnf<T: Scalar>(hnf: &Hnf<T>, v: &[T]) -> Vec<T> {
    assert_eq!(v.len(), hnf.h.cols());
    let mut v = v.to_vec();
    for (r, &c) in hnf.pivot_cols.iter().enumerate() {
        let q = v[c].div_floor(&hnf.h[(r, c)]);
        if !q.is_zero() {
            for (j, x) in v.iter_mut().enumerate() {
                *x = x.clone() - q.clone() * hnf.h[(r, j)].clone();
            }
        }
    }
    v
}
