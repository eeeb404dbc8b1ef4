use super::{det, sym_mod, xgcd, Matrix, Scalar};

/// Nonzero diagonal of the Smith normal form, `d_1 | d_2 | ... | d_r`, all positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm<T> {
    pub diagonal: Vec<T>,
}

impl<T: Scalar> SmithForm<T> {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    /// Diagonal entries different from one: the invariant factors of the
    /// torsion part of the cokernel.
    pub fn invariants(&self) -> Vec<T> {
        self.diagonal.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

/// Smith form of any integer matrix. Square nonsingular input goes through
/// [`smith_modular`] so that entries stay below the determinant.
pub fn smith<T: Scalar>(m: &Matrix<T>) -> SmithForm<T> {
    if m.is_square() && m.rows() > 0 {
        let d = det(m).abs();
        if !d.is_zero() {
            return SmithForm { diagonal: smith_modular(m, &d).diagonal };
        }
    }
    smith_plain(m)
}

fn smallest_nonzero<T: Scalar>(a: &Matrix<T>, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            if best.map_or(true, |(bi, bj)| x.abs() < a[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
    }
    // Prefer the current corner on ties so a settled pivot is not moved.
    match best {
        Some((i, j)) if !a[(t, t)].is_zero() && a[(t, t)].abs() == a[(i, j)].abs() => Some((t, t)),
        b => b,
    }
}

/// Smith form by direct Euclidean elimination over the integers.
pub fn smith_plain<T: Scalar>(m: &Matrix<T>) -> SmithForm<T> {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut diagonal = Vec::new();
    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = smallest_nonzero(&a, t) else { break };
        a.swap_rows(t, pi);
        a.swap_cols(t, pj);
        loop {
            for i in t + 1..rows {
                if !a[(i, t)].is_zero() {
                    let (x, y) = (a[(t, t)].clone(), a[(i, t)].clone());
                    let (g, s, u) = xgcd(&x, &y);
                    a.combine_rows(t, i, [&s, &u, &-(y / g.clone()), &(x / g)]);
                }
            }
            for j in t + 1..cols {
                if !a[(t, j)].is_zero() {
                    let (x, y) = (a[(t, t)].clone(), a[(t, j)].clone());
                    let (g, s, u) = xgcd(&x, &y);
                    a.combine_cols(t, j, [&s, &u, &-(y / g.clone()), &(x / g)]);
                }
            }
            if (t + 1..rows).any(|i| !a[(i, t)].is_zero()) {
                continue;
            }
            // The pivot must divide the rest of the block; if not, fold the
            // offending row in and go again with a strictly smaller pivot.
            let piv = a[(t, t)].clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(a[(i, j)].clone() % piv.clone()).is_zero()));
            match bad {
                Some(i) => {
                    let one = T::one();
                    let zero = T::zero();
                    a.combine_rows(t, i, [&one, &one, &zero, &one]);
                }
                None => break,
            }
        }
        diagonal.push(a[(t, t)].abs());
    }
    SmithForm { diagonal }
}

/// Smith form of a square nonsingular matrix, computed modulo `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularSmith<T> {
    /// All `n` diagonal entries, ones included, forming a divisibility chain
    /// whose product is `|det|`.
    pub diagonal: Vec<T>,
    /// Inverse of the accumulated column transform, reduced modulo `d`.
    /// Row `i` represents a generator of order `diagonal[i]` in the cokernel
    /// `Z^n / (row lattice)`.
    pub vinv: Matrix<T>,
}

/// Smith form of a square matrix whose row lattice contains `d * Z^n`
/// (for example `d = |det m|`), with entries reduced modulo `d` throughout.
///
/// Column operations are tracked so the cokernel generators come out as rows
/// of `vinv`. Row operations only change the generating set of the lattice
/// and are not recorded.
pub fn smith_modular<T: Scalar>(m: &Matrix<T>, d: &T) -> ModularSmith<T> {
    assert!(m.is_square());
    assert!(d.is_positive());
    let n = m.rows();
    let mut a = m.map(|x| sym_mod(x, d));
    let mut vinv: Matrix<T> = Matrix::identity(n);
    let mut corner = Vec::with_capacity(n);
    for t in 0..n {
        while let Some((pi, pj)) = smallest_nonzero(&a, t) {
            a.swap_rows(t, pi);
            a.swap_cols(t, pj);
            vinv.swap_rows(t, pj);
            for i in t + 1..n {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let (x, y) = (a[(t, t)].clone(), a[(i, t)].clone());
                let (g, s, u) = xgcd(&x, &y);
                a.combine_rows(t, i, [&s, &u, &-(y / g.clone()), &(x / g)]);
                for c in t..n {
                    a[(t, c)] = sym_mod(&a[(t, c)], d);
                    a[(i, c)] = sym_mod(&a[(i, c)], d);
                }
            }
            for j in t + 1..n {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let (x, y) = (a[(t, t)].clone(), a[(t, j)].clone());
                let (g, s, u) = xgcd(&x, &y);
                let (p, q) = (-(y / g.clone()), x / g);
                a.combine_cols(t, j, [&s, &u, &p, &q]);
                vinv.combine_rows(t, j, [&q, &-p.clone(), &-u.clone(), &s]);
                for r in t..n {
                    a[(r, t)] = sym_mod(&a[(r, t)], d);
                    a[(r, j)] = sym_mod(&a[(r, j)], d);
                }
                for c in 0..n {
                    vinv[(t, c)] = sym_mod(&vinv[(t, c)], d);
                    vinv[(j, c)] = sym_mod(&vinv[(j, c)], d);
                }
            }
            if (t + 1..n).all(|i| a[(i, t)].is_zero()) {
                break;
            }
        }
        corner.push(a[(t, t)].clone());
    }
    let mut diagonal: Vec<T> = corner.iter().map(|c| c.gcd(d)).collect();
    // Turn the diagonal into a divisibility chain: (x, y) -> (gcd, lcm).
    for i in 0..n {
        for j in i + 1..n {
            let (x, y) = (diagonal[i].clone(), diagonal[j].clone());
            if (y.clone() % x.clone()).is_zero() {
                continue;
            }
            let (g, s, u) = xgcd(&x, &y);
            let (p, q) = (-(y.clone() / g.clone()), x.clone() / g.clone());
            vinv.combine_rows(i, j, [&q, &-p, &-u, &s]);
            for c in 0..n {
                vinv[(i, c)] = sym_mod(&vinv[(i, c)], d);
                vinv[(j, c)] = sym_mod(&vinv[(j, c)], d);
            }
            diagonal[j] = x.lcm(&y);
            diagonal[i] = g;
        }
    }
    ModularSmith { diagonal, vinv }
}
