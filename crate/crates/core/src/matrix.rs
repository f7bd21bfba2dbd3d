//! Small dense matrices over Q(ζ_N).

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{Conductor, Scalar};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Arc<Conductor>,
    rows: Vec<Vec<Scalar>>,
    ncols: usize,
}

impl Matrix {
    pub fn from_rows(field: &Arc<Conductor>, rows: Vec<Vec<Scalar>>) -> Result<Matrix> {
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::ShapeMismatch("ragged matrix rows".into()));
        }
        Ok(Matrix {
            field: Arc::clone(field),
            rows,
            ncols,
        })
    }

    /// Matrix with rational integer entries.
    pub fn from_ints(field: &Arc<Conductor>, rows: &[&[i64]]) -> Result<Matrix> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| Scalar::from_integer(field, v)).collect())
            .collect();
        Matrix::from_rows(field, rows)
    }

    pub fn zero(field: &Arc<Conductor>, nrows: usize, ncols: usize) -> Matrix {
        Matrix {
            field: Arc::clone(field),
            rows: vec![vec![Scalar::zero(field); ncols]; nrows],
            ncols,
        }
    }

    pub fn identity(field: &Arc<Conductor>, n: usize) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.rows[i][i] = Scalar::one(field);
        }
        m
    }

    pub fn field(&self) -> &Arc<Conductor> {
        &self.field
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.rows[i][j] = v;
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        self.rows.iter().map(|r| r[j].clone()).collect()
    }

    pub fn diagonal(&self) -> Vec<Scalar> {
        (0..self.nrows().min(self.ncols))
            .map(|i| self.rows[i][i].clone())
            .collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.ncols, other.nrows(), "matrix shapes");
        let mut out = Matrix::zero(&self.field, self.nrows(), other.ncols);
        for i in 0..self.nrows() {
            for k in 0..self.ncols {
                let a = &self.rows[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.ncols {
                    let b = &other.rows[k][j];
                    if !b.is_zero() {
                        out.rows[i][j] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .zip(v)
                    .fold(Scalar::zero(&self.field), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        let mut out = self.clone();
        for (r, o) in out.rows.iter_mut().zip(&other.rows) {
            for (a, b) in r.iter_mut().zip(o) {
                *a -= b;
            }
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        let mut out = self.clone();
        for r in &mut out.rows {
            for a in r.iter_mut() {
                *a = &*a * c;
            }
        }
        out
    }

    pub fn trace(&self) -> Scalar {
        self.diagonal().iter().fold(Scalar::zero(&self.field), |acc, d| acc + d)
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.rows
            .iter()
            .enumerate()
            .all(|(i, r)| r[..i.min(self.ncols)].iter().all(Scalar::is_zero))
    }

    pub fn is_diagonal(&self) -> bool {
        self.rows
            .iter()
            .enumerate()
            .all(|(i, r)| r.iter().enumerate().all(|(j, a)| i == j || a.is_zero()))
    }

    /// Row echelon reduction; returns the reduced rows and pivot columns.
    fn rref(&self) -> (Vec<Vec<Scalar>>, Vec<usize>) {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.ncols {
            let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(r, p);
            let inv = rows[r][c].inv().expect("nonzero pivot");
            for x in rows[r].iter_mut() {
                *x = &*x * &inv;
            }
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i == r || row[c].is_zero() {
                    continue;
                }
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= &(&f * y);
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        (rows, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{v : M v = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let (rows, pivots) = self.rref();
        (0..self.ncols)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = vec![Scalar::zero(&self.field); self.ncols];
                v[free] = Scalar::one(&self.field);
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -&rows[r][free];
                }
                v
            })
            .collect()
    }

    pub fn determinant(&self) -> Scalar {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.nrows();
        let mut rows = self.rows.clone();
        let mut det = Scalar::one(&self.field);
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !rows[i][c].is_zero()) else {
                return Scalar::zero(&self.field);
            };
            if p != c {
                rows.swap(c, p);
                det = -det;
            }
            det = &det * &rows[c][c];
            let inv = rows[c][c].inv().expect("nonzero pivot");
            for i in c + 1..n {
                if rows[i][c].is_zero() {
                    continue;
                }
                let f = &rows[i][c] * &inv;
                let pivot_row = rows[c].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &(&f * y);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.nrows();
        let mut aug = self.clone();
        let id = Matrix::identity(&self.field, n);
        for (r, e) in aug.rows.iter_mut().zip(id.rows) {
            r.extend(e);
        }
        aug.ncols = 2 * n;
        let (rows, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::NotInvertible("singular matrix".into()));
        }
        let rows = rows.into_iter().map(|r| r[n..].to_vec()).collect();
        Matrix::from_rows(&self.field, rows)
    }

    /// Characteristic polynomial `det(tI - M)`, lowest degree first, via
    /// the Faddeev–LeVerrier recurrence.
    pub fn charpoly(&self) -> Vec<Scalar> {
        assert!(self.is_square(), "characteristic polynomial of a non-square matrix");
        let n = self.nrows();
        let mut coeffs = vec![Scalar::zero(&self.field); n + 1];
        coeffs[n] = Scalar::one(&self.field);
        let mut mk = Matrix::zero(&self.field, n, n);
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I ; c_{n-k} = -tr(A M_k) / k
            let mut next = self.mul(&mk);
            for i in 0..n {
                next.rows[i][i] += &coeffs[n - k + 1];
            }
            mk = next;
            let t = self.mul(&mk).trace();
            coeffs[n - k] = t.scale(&num_rational::BigRational::new((-1).into(), (k as i64).into()));
        }
        coeffs
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, a) in r.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{self}")
    }
}

impl serde::Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect();
        rows.serialize(s)
    }
}
