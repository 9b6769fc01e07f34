//! Dense matrices over an exact field, plus determinants of polynomial
//! matrices.
//!
//! Determinants of scalar matrices use ordinary Gaussian elimination (exact
//! over a field). Determinants of `MultiPoly` matrices must never divide by a
//! polynomial that may vanish, so they use cofactor expansion for small sizes
//! and fraction-free Bareiss elimination (whose divisions are exact) beyond
//! that.

use std::ops::{Index, IndexMut};



use super::multipoly::MultiPoly;
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix<T: Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        Matrix { rows: nrows, cols: ncols, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matmul");
        Self::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = T::zero();
            for k in 0..self.cols {
                acc = acc + &(self[(i, k)].clone() * &rhs[(k, j)]);
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in mul_vec");
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for k in 0..self.cols {
                    acc = acc + &(self[(i, k)].clone() * &v[k]);
                }
                acc
            })
            .collect()
    }

    /// Submatrix of the given (0-based) row and column selections.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    /// Exact determinant by Gaussian elimination with division.
    pub fn det(&self) -> T {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = T::one();
        for col in 0..n {
            let pivot_row = (col..n).find(|&r| !m[(r, col)].is_zero());
            let Some(pivot_row) = pivot_row else {
                return T::zero();
            };
            if pivot_row != col {
                for j in 0..n {
                    let a = m[(col, j)].clone();
                    let b = m[(pivot_row, j)].clone();
                    m[(col, j)] = b;
                    m[(pivot_row, j)] = a;
                }
                det = -det;
            }
            let pivot = m[(col, col)].clone();
            det = det * &pivot;
            for r in col + 1..n {
                let factor = m[(r, col)].clone() / &pivot;
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    let delta = factor.clone() * &m[(col, j)];
                    m[(r, j)] = m[(r, j)].clone() - &delta;
                }
            }
        }
        det
    }
}

impl<T: Scalar> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T: Scalar> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// Determinant of a square matrix of polynomials.
pub fn poly_det<T: Scalar>(m: &[Vec<MultiPoly<T>>]) -> MultiPoly<T> {
    let n = m.len();
    assert!(m.iter().all(|row| row.len() == n), "determinant of a non-square matrix");
    if n == 0 {
        // Empty determinant is 1 by convention (matches the pivot minor of a
        // codimension-one system).
        return MultiPoly::one(0);
    }
    let nvars = m[0][0].nvars();
    if n <= 4 {
        cofactor_det(m, &(0..n).collect::<Vec<_>>(), &(0..n).collect::<Vec<_>>(), nvars)
    } else {
        bareiss_det(m, nvars)
    }
}

fn cofactor_det<T: Scalar>(
    m: &[Vec<MultiPoly<T>>],
    rows: &[usize],
    cols: &[usize],
    nvars: usize,
) -> MultiPoly<T> {
    if rows.is_empty() {
        return MultiPoly::one(nvars);
    }
    if rows.len() == 1 {
        return m[rows[0]][cols[0]].clone();
    }
    let mut acc = MultiPoly::zero(nvars);
    let sub_rows = &rows[1..];
    for (k, &col) in cols.iter().enumerate() {
        let entry = &m[rows[0]][col];
        if entry.is_zero() {
            continue;
        }
        let sub_cols: Vec<usize> =
            cols.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, &c)| c).collect();
        let minor = cofactor_det(m, sub_rows, &sub_cols, nvars);
        let signed = if k % 2 == 0 { entry * &minor } else { -&(entry * &minor) };
        acc = &acc + &signed;
    }
    acc
}

/// Fraction-free Bareiss elimination; every division is exact in the
/// polynomial ring, so no denominator that could vanish is ever introduced.
fn bareiss_det<T: Scalar>(m: &[Vec<MultiPoly<T>>], nvars: usize) -> MultiPoly<T> {
    let n = m.len();
    let mut a: Vec<Vec<MultiPoly<T>>> = m.to_vec();
    let mut sign_flip = false;
    let mut prev_pivot = MultiPoly::one(nvars);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return MultiPoly::zero(nvars);
            };
            a.swap(k, swap);
            sign_flip = !sign_flip;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num
                    .exact_div(&prev_pivot)
                    .expect("Bareiss division is exact by construction");
            }
            a[i][k] = MultiPoly::zero(nvars);
        }
        prev_pivot = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign_flip {
        -&det
    } else {
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use crate::{Mat, Poly, Rat};

    fn pvar(n: usize, i: usize) -> Poly {
        Poly::variable(n, i)
    }

    #[test]
    fn identity_poly_det_is_one() {
        let n = 3;
        let m: Vec<Vec<Poly>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Poly::one(2) } else { Poly::zero(2) })
                    .collect()
            })
            .collect();
        assert_eq!(poly_det(&m), Poly::one(2));
    }

    #[test]
    fn triangular_poly_det() {
        // det [[2X1, 2X2], [0, 1]] = 2X1
        let m = vec![
            vec![pvar(2, 0).scaled(&rat(2, 1)), pvar(2, 1).scaled(&rat(2, 1))],
            vec![Poly::zero(2), Poly::one(2)],
        ];
        assert_eq!(poly_det(&m), pvar(2, 0).scaled(&rat(2, 1)));
    }

    #[test]
    fn equal_rows_give_zero() {
        let row = vec![pvar(2, 0), &pvar(2, 1) + &Poly::one(2), pvar(2, 1)];
        let other = vec![&pvar(2, 0) * &pvar(2, 1), Poly::one(2), pvar(2, 0)];
        let m = vec![row.clone(), other, row];
        assert!(poly_det(&m).is_zero());
    }

    /// Fully independent oracle: naive recursive expansion along the first
    /// row, written without the production helpers.
    fn naive_det(m: &[Vec<Poly>]) -> Poly {
        let n = m.len();
        let nvars = m[0][0].nvars();
        if n == 1 {
            return m[0][0].clone();
        }
        let mut acc = Poly::zero(nvars);
        for k in 0..n {
            let rest: Vec<Vec<Poly>> = (1..n)
                .map(|i| (0..n).filter(|&j| j != k).map(|j| m[i][j].clone()).collect())
                .collect();
            let term = &m[0][k] * &naive_det(&rest);
            acc = if k % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    fn pseudo_random_poly(seed: &mut u64, nvars: usize) -> Poly {
        let mut next = || {
            *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (*seed >> 33) as i64
        };
        let mut p = Poly::zero(nvars);
        for _ in 0..3 {
            let exps: Vec<u32> = (0..nvars).map(|_| (next() % 3) as u32).collect();
            p.add_term(
                super::super::multipoly::Monomial::from_exponents(&exps),
                rat(next() % 9 - 4, 1),
            );
        }
        p
    }

    #[test]
    fn random_matrices_match_cofactor_oracle() {
        let mut seed = 1;
        for _ in 0..10 {
            let m: Vec<Vec<Poly>> = (0..3)
                .map(|_| (0..3).map(|_| pseudo_random_poly(&mut seed, 2)).collect())
                .collect();
            assert_eq!(poly_det(&m), naive_det(&m));
        }
    }

    #[test]
    fn bareiss_matches_oracle_on_larger_matrices() {
        let mut seed = 33;
        for _ in 0..3 {
            let m: Vec<Vec<Poly>> = (0..5)
                .map(|_| (0..5).map(|_| pseudo_random_poly(&mut seed, 2)).collect())
                .collect();
            assert_eq!(poly_det(&m), naive_det(&m));
        }
    }

    #[test]
    #[should_panic(expected = "non-square")]
    fn non_square_panics() {
        let m = vec![vec![Poly::one(1), Poly::zero(1)]];
        poly_det(&m);
    }

    #[test]
    fn scalar_det_and_matmul() {
        let a = Mat::from_rows(vec![
            vec![rat(1, 1), rat(2, 1)],
            vec![rat(3, 1), rat(4, 1)],
        ]);
        assert_eq!(a.det(), rat(-2, 1));
        let b = a.matmul(&Mat::identity(2));
        assert_eq!(a, b);
        let v: Vec<Rat> = a.mul_vec(&[rat(1, 1), rat(1, 1)]);
        assert_eq!(v, vec![rat(3, 1), rat(7, 1)]);
        let zero_col = Mat::from_rows(vec![
            vec![rat(0, 1), rat(2, 1)],
            vec![rat(0, 1), rat(4, 1)],
        ]);
        assert_eq!(zero_col.det(), rat(0, 1));
    }
}
