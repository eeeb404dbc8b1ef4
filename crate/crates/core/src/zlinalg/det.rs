use num_rational::Ratio;

use super::{Matrix, Scalar};

/// Determinant by fraction-free (Bareiss) elimination.
///
/// Every intermediate value is itself a minor of the input, so entries stay
/// bounded by Hadamard's inequality and all divisions are exact.
pub fn det<T: Scalar>(m: &Matrix<T>) -> T {
    assert!(m.is_square(), "determinant of a {}x{} matrix", m.rows(), m.cols());
    let n = m.rows();
    if n == 0 {
        return T::one();
    }
    let mut a = m.clone();
    let mut negate = false;
    let mut prev = T::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(i, k);
                    negate = !negate;
                }
                None => return T::zero(),
            }
        }
        let piv = a[(k, k)].clone();
        for i in k + 1..n {
            let lead = a[(i, k)].clone();
            for j in k + 1..n {
                let v = (a[(i, j)].clone() * piv.clone() - lead.clone() * a[(k, j)].clone()) / prev.clone();
                a[(i, j)] = v;
            }
            a[(i, k)] = T::zero();
        }
        prev = piv;
    }
    let d = a[(n - 1, n - 1)].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Rank by fraction-free elimination; works for any shape.
pub fn rank<T: Scalar>(m: &Matrix<T>) -> usize {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut r = 0;
    let mut prev = T::one();
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        a.swap_rows(p, r);
        let piv = a[(r, c)].clone();
        for i in r + 1..rows {
            let lead = a[(i, c)].clone();
            for j in c + 1..cols {
                let v = (a[(i, j)].clone() * piv.clone() - lead.clone() * a[(r, j)].clone()) / prev.clone();
                a[(i, j)] = v;
            }
            a[(i, c)] = T::zero();
        }
        prev = piv;
        r += 1;
    }
    r
}

/// Determinant of a rational matrix: clear denominators row by row, then
/// run [`det`] on the integer matrix.
pub fn det_rational<T: Scalar>(m: &Matrix<Ratio<T>>) -> Ratio<T> {
    assert!(m.is_square());
    let mut scale = T::one();
    let rows: Vec<Vec<T>> = m
        .iter_rows()
        .map(|row| {
            let l = row.iter().fold(T::one(), |acc, x| acc.lcm(x.denom()));
            scale = scale.clone() * l.clone();
            row.iter()
                .map(|x| x.numer().clone() * (l.clone() / x.denom().clone()))
                .collect()
        })
        .collect();
    let d = det(&Matrix::from_rows_with_cols(rows, m.cols()));
    Ratio::new(d, scale)
}

/// Determinant of `m` with `extra` appended as a final row.
pub fn bordered_det<T: Scalar>(m: &Matrix<T>, extra: &[T]) -> T {
    det(&m.with_row(extra))
}

/// Index in `{x in Z^n : sum x = 0}` of the lattice spanned by the `n-1`
/// rows of `m`, each of which must sum to zero.
///
/// Bordering with `(1, 0, ..., 0)` gives a matrix whose determinant equals
/// the index up to sign. A zero result means the rows are dependent.
pub fn lattice_index<T: Scalar>(m: &Matrix<T>) -> T {
    let n = m.cols();
    assert_eq!(m.rows() + 1, n, "lattice_index expects n-1 rows of length n");
    for row in m.iter_rows() {
        let s = row.iter().fold(T::zero(), |a, x| a + x.clone());
        assert!(s.is_zero(), "row does not have degree zero");
    }
    let mut e = vec![T::zero(); n];
    e[0] = T::one();
    bordered_det(m, &e).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    // Laplace expansion along the first row, as an oracle for tiny matrices.
    fn perm_det(m: &Matrix<i64>) -> i64 {
        let n = m.rows();
        if n == 0 {
            return 1;
        }
        (0..n)
            .map(|c| {
                let minor = Matrix::from_fn(n - 1, n - 1, |i, j| m[(i + 1, if j < c { j } else { j + 1 })]);
                let sign = if c % 2 == 0 { 1 } else { -1 };
                sign * m[(0, c)] * perm_det(&minor)
            })
            .sum()
    }

    #[test]
    fn bareiss_matches_leibniz() {
        let mut seed = 12345u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 33) % 11) as i64 - 5
        };
        for n in 0..6 {
            for _ in 0..40 {
                let m = Matrix::from_fn(n, n, |_, _| next());
                assert_eq!(det(&m), perm_det(&m), "{m:?}");
                let big = m.map(|&x| BigInt::from(x));
                assert_eq!(det(&big), BigInt::from(perm_det(&m)));
                let r = rank(&m);
                assert_eq!(r == n, det(&m) != 0);
            }
        }
    }

    #[test]
    fn rank_rectangular() {
        let m = Matrix::from_rows(vec![vec![1i64, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]);
        assert_eq!(rank(&m), 2);
        assert_eq!(rank(&m.transpose()), 2);
        assert_eq!(rank(&Matrix::<i64>::zeros(2, 3)), 0);
    }

    #[test]
    fn rational_det() {
        use num_rational::Rational64;
        let m = Matrix::from_rows(vec![
            vec![Rational64::new(1, 2), Rational64::new(1, 3)],
            vec![Rational64::new(1, 5), Rational64::new(2, 7)],
        ]);
        assert_eq!(det_rational(&m), Rational64::new(1, 7) - Rational64::new(1, 15));
    }

    #[test]
    fn index_of_simple_lattice() {
        let m = Matrix::from_rows(vec![vec![2i64, -2, 0], vec![0, 3, -3]]);
        assert_eq!(lattice_index(&m), 6);
        let m = Matrix::from_rows(vec![vec![1i64, -1]]);
        assert_eq!(lattice_index(&m), 1);
    }
}
