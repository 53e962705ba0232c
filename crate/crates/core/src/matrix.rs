//! Dense exact linear algebra over the rationals. Matrices are row-major
//! `Vec<Vec<BigRational>>`; only the small sizes met in this crate are
//! expected (n <= a few dozen).

#![allow(clippy::needless_range_loop)]

use num::{BigRational, One, Signed, Zero};

pub type Matrix = Vec<Vec<BigRational>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect()
}

pub fn is_square(m: &Matrix) -> bool {
    m.iter().all(|row| row.len() == m.len())
}

/// Forward elimination in place; returns (rank, determinant sign/scale factor
/// accumulated from row swaps and pivots when the matrix is square).
fn eliminate(rows: &mut Matrix) -> (usize, BigRational) {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut det = BigRational::one();
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            det = BigRational::zero();
            continue;
        };
        if pivot != rank {
            rows.swap(pivot, rank);
            det = -det;
        }
        let p = rows[rank][col].clone();
        det *= &p;
        for r in rank + 1..rows.len() {
            if rows[r][col].is_zero() {
                continue;
            }
            let f = &rows[r][col] / &p;
            for c in col..ncols {
                let delta = &f * &rows[rank][c];
                rows[r][c] -= delta;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    (rank, det)
}

pub fn rank(m: &Matrix) -> usize {
    eliminate(&mut m.clone()).0
}

/// Determinant of a square matrix (1 for the empty matrix).
pub fn determinant(m: &Matrix) -> BigRational {
    debug_assert!(is_square(m));
    if m.is_empty() {
        return BigRational::one();
    }
    let mut rows = m.clone();
    let (rank, det) = eliminate(&mut rows);
    if rank < m.len() {
        BigRational::zero()
    } else {
        det
    }
}

/// Gauss-Jordan inverse; `None` when singular.
pub fn inverse(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let mut a: Matrix = m
        .iter()
        .zip(identity(n))
        .map(|(row, id)| row.iter().cloned().chain(id).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(pivot, col);
        let p = a[col][col].clone();
        for c in 0..2 * n {
            a[col][c] /= &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in 0..2 * n {
                let delta = &f * &a[col][c];
                a[r][c] -= delta;
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn mat_vec(m: &Matrix, v: &[BigRational]) -> Vec<BigRational> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().zip(b).map(|(x, brow)| x * &brow[j]).sum())
                .collect()
        })
        .collect()
}

/// Largest absolute entry of each row.
pub fn row_max_norms(m: &Matrix) -> Vec<BigRational> {
    m.iter()
        .map(|row| row.iter().map(|x| x.abs()).max().unwrap_or_else(BigRational::zero))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::int;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn determinant_small() {
        assert_eq!(determinant(&m(&[&[2, 1], &[3, 1]])), int(-1));
        assert_eq!(determinant(&m(&[&[1, 2], &[2, 4]])), int(0));
        assert_eq!(determinant(&m(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 5]])), int(-5));
        assert_eq!(determinant(&Vec::new()), int(1));
    }

    #[test]
    fn rank_of_collinear_points() {
        assert_eq!(rank(&m(&[&[1, 0], &[2, 0]])), 1);
        assert_eq!(rank(&m(&[&[2, 1], &[2, 0], &[1, 1]])), 2);
        assert_eq!(rank(&m(&[&[0, 0]])), 0);
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[1, 0, 2], &[1, 1, 0], &[0, 3, 1]]);
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_mul(&a, &inv), identity(3));
        assert!(inverse(&m(&[&[1, 2], &[2, 4]])).is_none());
    }
}
