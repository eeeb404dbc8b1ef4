use num_rational::Ratio;
use num_traits::{One, Zero};

use super::{Matrix, Scalar};

/// Solve `y * a = v` over the rationals for square nonsingular `a`.
/// Returns `None` when `a` is singular.
pub fn solve_left<T: Scalar>(a: &Matrix<T>, v: &[T]) -> Option<Vec<Ratio<T>>> {
    assert!(a.is_square());
    assert_eq!(v.len(), a.cols());
    let n = a.rows();
    // Gauss-Jordan on the transposed system a^T y^T = v^T.
    let mut m: Matrix<Ratio<T>> = Matrix::from_fn(n, n + 1, |i, j| {
        if j < n {
            Ratio::from_integer(a[(j, i)].clone())
        } else {
            Ratio::from_integer(v[i].clone())
        }
    });
    for c in 0..n {
        let p = (c..n).find(|&i| !m[(i, c)].is_zero())?;
        m.swap_rows(p, c);
        let inv = Ratio::one() / m[(c, c)].clone();
        for j in c..=n {
            m[(c, j)] = m[(c, j)].clone() * inv.clone();
        }
        for i in 0..n {
            if i == c || m[(i, c)].is_zero() {
                continue;
            }
            let f = m[(i, c)].clone();
            for j in c..=n {
                let d = f.clone() * m[(c, j)].clone();
                m[(i, j)] = m[(i, j)].clone() - d;
            }
        }
    }
    Some((0..n).map(|i| m[(i, n)].clone()).collect())
}

/// Integral solution of `y * a = v` if one exists.
pub fn solve_left_integral<T: Scalar>(a: &Matrix<T>, v: &[T]) -> Option<Vec<T>> {
    let y = solve_left(a, v)?;
    y.iter().all(|q| q.is_integer()).then(|| y.into_iter().map(|q| q.to_integer()).collect())
}
