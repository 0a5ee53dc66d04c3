//! Dense integer matrices, exact determinants and the Smith normal form.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::Rational;

/// Row-major dense matrix of `i64`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &d) in entries.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Builds a matrix from rows; returns `None` for ragged input.
    pub fn from_rows(rows: &[Vec<i64>]) -> Option<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return None;
        }
        Some(IntMatrix {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> i128 {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return 1;
        }
        let mut a: Vec<Vec<i128>> = (0..n)
            .map(|i| self.row(i).iter().map(|&x| x as i128).collect())
            .collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&i| a[i][k] != 0) {
                    Some(p) => {
                        a.swap(k, p);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
                a[i][k] = 0;
            }
            prev = a[k][k];
        }
        sign * a[n - 1][n - 1]
    }

    /// Leading principal minors `det(M[..k, ..k])` for `k = 1..=n`.
    pub fn leading_minors(&self) -> Vec<i128> {
        (1..=self.rows)
            .map(|k| {
                let mut sub = IntMatrix::zeros(k, k);
                for i in 0..k {
                    for j in 0..k {
                        sub[(i, j)] = self[(i, j)];
                    }
                }
                sub.determinant()
            })
            .collect()
    }

    /// Exact inverse over `Q`; `None` when singular.
    pub fn rational_inverse(&self) -> Option<Vec<Vec<Rational>>> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                let mut row: Vec<Rational> =
                    self.row(i).iter().map(|&x| Rational::from_integer(x)).collect();
                row.extend((0..n).map(|j| Rational::from_integer((i == j) as i64)));
                row
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| a[r][col] != Rational::from_integer(0))?;
            a.swap(col, pivot);
            let p = a[col][col];
            for x in a[col].iter_mut() {
                *x /= p;
            }
            for r in 0..n {
                if r != col && a[r][col] != Rational::from_integer(0) {
                    let f = a[r][col];
                    let pivot_row = a[col].clone();
                    for (x, y) in a[r].iter_mut().zip(pivot_row) {
                        *x -= f * y;
                    }
                }
            }
        }
        Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

/// Exact integer matrix with arbitrary-precision entries, used for the
/// Smith transforms whose entries can outgrow `i64`.
#[derive(Clone, PartialEq, Eq)]
pub struct BigMatrix {
    rows: Vec<Vec<BigInt>>,
    cols: usize,
}

impl BigMatrix {
    pub fn identity(n: usize) -> Self {
        BigMatrix {
            rows: (0..n)
                .map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect())
                .collect(),
            cols: n,
        }
    }

    pub fn from_int(m: &IntMatrix) -> Self {
        BigMatrix {
            rows: (0..m.rows())
                .map(|i| m.row(i).iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
            cols: m.cols(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i][j]
    }

    /// Entrywise conversion, `None` if any entry exceeds `i64`.
    pub fn to_i64(&self) -> Option<IntMatrix> {
        let mut m = IntMatrix::zeros(self.rows(), self.cols);
        for (i, row) in self.rows.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                m[(i, j)] = x.to_i64()?;
            }
        }
        Some(m)
    }

    /// Largest number of bits in any entry.
    pub fn max_bits(&self) -> u64 {
        self.rows.iter().flatten().map(BigInt::bits).max().unwrap_or(0)
    }
}

impl Mul for &BigMatrix {
    type Output = BigMatrix;
    fn mul(self, rhs: &BigMatrix) -> BigMatrix {
        assert_eq!(self.cols, rhs.rows(), "dimension mismatch");
        let rows = self
            .rows
            .iter()
            .map(|row| {
                (0..rhs.cols)
                    .map(|j| {
                        row.iter()
                            .zip(&rhs.rows)
                            .filter(|(a, _)| !a.is_zero())
                            .map(|(a, r)| a * &r[j])
                            .sum()
                    })
                    .collect()
            })
            .collect();
        BigMatrix { rows, cols: rhs.cols }
    }
}

impl fmt::Debug for BigMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.rows).finish()
    }
}

/// `U·M·V = D` with `U`, `V` unimodular and `D` diagonal,
/// `d_1 | d_2 | …` (nonnegative, zeros last).
#[derive(Clone, Debug)]
pub struct SmithNormalForm {
    pub u: BigMatrix,
    pub u_inv: BigMatrix,
    pub d: IntMatrix,
    pub v: BigMatrix,
    pub v_inv: BigMatrix,
}

impl SmithNormalForm {
    /// Diagonal entries `d_i`, length `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)])
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|&&x| x != 0).count()
    }
}

struct Work {
    a: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    u_inv: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
    v_inv: Vec<Vec<BigInt>>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
        for row in self.u_inv.iter_mut() {
            row.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in self.a.iter_mut() {
            row.swap(i, j);
        }
        for row in self.v.iter_mut() {
            row.swap(i, j);
        }
        self.v_inv.swap(i, j);
    }

    /// row_i += q·row_t
    fn add_row(&mut self, i: usize, t: usize, q: &BigInt) {
        for k in 0..self.a[0].len() {
            let x = q * &self.a[t][k];
            self.a[i][k] += x;
        }
        for k in 0..self.u[0].len() {
            let x = q * &self.u[t][k];
            self.u[i][k] += x;
        }
        for row in self.u_inv.iter_mut() {
            let x = q * &row[i];
            row[t] -= x;
        }
    }

    /// col_j += q·col_t
    fn add_col(&mut self, j: usize, t: usize, q: &BigInt) {
        for row in self.a.iter_mut() {
            let x = q * &row[t];
            row[j] += x;
        }
        for row in self.v.iter_mut() {
            let x = q * &row[t];
            row[j] += x;
        }
        for k in 0..self.v_inv[0].len() {
            let x = q * &self.v_inv[j][k];
            self.v_inv[t][k] -= x;
        }
    }

    fn negate_row(&mut self, t: usize) {
        for x in self.a[t].iter_mut() {
            *x = -&*x;
        }
        for x in self.u[t].iter_mut() {
            *x = -&*x;
        }
        for row in self.u_inv.iter_mut() {
            row[t] = -&row[t];
        }
    }
}

/// Smith normal form by pivoting on the smallest entry and Euclidean
/// reduction of the pivot row and column.
///
/// Panics if a diagonal entry of `D` does not fit in `i64`.
pub fn smith_normal_form(m: &IntMatrix) -> SmithNormalForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = Work {
        a: BigMatrix::from_int(m).rows,
        u: BigMatrix::identity(rows).rows,
        u_inv: BigMatrix::identity(rows).rows,
        v: BigMatrix::identity(cols).rows,
        v_inv: BigMatrix::identity(cols).rows,
    };
    for t in 0..rows.min(cols) {
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = &w.a[i][j];
                    if !x.is_zero()
                        && pivot.is_none_or(|(pi, pj)| x.magnitude() < w.a[pi][pj].magnitude())
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else { break };
            if pi != t {
                w.swap_rows(t, pi);
            }
            if pj != t {
                w.swap_cols(t, pj);
            }
            let p = w.a[t][t].clone();
            for i in t + 1..rows {
                let q = w.a[i][t].div_floor(&p);
                if !q.is_zero() {
                    w.add_row(i, t, &-q);
                }
            }
            for j in t + 1..cols {
                let q = w.a[t][j].div_floor(&p);
                if !q.is_zero() {
                    w.add_col(j, t, &-q);
                }
            }
            let dirty = (t + 1..rows).any(|i| !w.a[i][t].is_zero())
                || (t + 1..cols).any(|j| !w.a[t][j].is_zero());
            if dirty {
                continue;
            }
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !w.a[i][j].is_multiple_of(&p));
            match offender {
                Some((i, _)) => w.add_row(t, i, &BigInt::from(1)),
                None => break,
            }
        }
        if w.a[t][t].is_negative() {
            w.negate_row(t);
        }
    }
    let d = BigMatrix { rows: w.a, cols }
        .to_i64()
        .expect("Smith diagonal entry exceeds i64");
    SmithNormalForm {
        d,
        u: BigMatrix { rows: w.u, cols: rows },
        u_inv: BigMatrix { rows: w.u_inv, cols: rows },
        v: BigMatrix { rows: w.v, cols },
        v_inv: BigMatrix { rows: w.v_inv, cols },
    }
}
