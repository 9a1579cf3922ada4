//! Dense matrices with polynomial or form entries.
//!
//! Products use `(M·N)_ij = Σ_k M_ik · N_kj` with the left factor's entry on
//! the left; for forms the entry product is the wedge.

use std::fmt;
use std::sync::Arc;

use crate::exactring::{same_ring, Coeff, LocalizedPoly, Ring, RingError, RingMap};
use crate::forms::DiffForm;

pub trait Entry: Clone + PartialEq + fmt::Display + Send + Sync {
    fn zero(ring: &Arc<Ring>) -> Self;
    fn one(ring: &Arc<Ring>) -> Self;
    fn ring(&self) -> &Arc<Ring>;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn scaled(&self, c: &Coeff) -> Self;
    fn pulled_back(&self, map: &RingMap) -> Result<Self, RingError>;
}

impl Entry for LocalizedPoly {
    fn zero(ring: &Arc<Ring>) -> Self {
        LocalizedPoly::zero(ring)
    }
    fn one(ring: &Arc<Ring>) -> Self {
        LocalizedPoly::one(ring)
    }
    fn ring(&self) -> &Arc<Ring> {
        LocalizedPoly::ring(self)
    }
    fn is_zero(&self) -> bool {
        LocalizedPoly::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn scaled(&self, c: &Coeff) -> Self {
        self.scale(c)
    }
    fn pulled_back(&self, map: &RingMap) -> Result<Self, RingError> {
        self.substitute(map)
    }
}

impl Entry for DiffForm {
    fn zero(ring: &Arc<Ring>) -> Self {
        DiffForm::zero(ring)
    }
    fn one(ring: &Arc<Ring>) -> Self {
        DiffForm::one(ring)
    }
    fn ring(&self) -> &Arc<Ring> {
        DiffForm::ring(self)
    }
    fn is_zero(&self) -> bool {
        DiffForm::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn times(&self, other: &Self) -> Self {
        self.wedge(other)
    }
    fn scaled(&self, c: &Coeff) -> Self {
        self.scale(c)
    }
    fn pulled_back(&self, map: &RingMap) -> Result<Self, RingError> {
        self.pullback(map)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    ring: Arc<Ring>,
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type PolyMatrix = Matrix<LocalizedPoly>;
pub type FormMatrix = Matrix<DiffForm>;

impl<T: Entry> Matrix<T> {
    pub fn zeros(ring: &Arc<Ring>, rows: usize, cols: usize) -> Self {
        Matrix {
            ring: ring.clone(),
            rows,
            cols,
            data: vec![T::zero(ring); rows * cols],
        }
    }

    pub fn identity(ring: &Arc<Ring>, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one(ring);
        }
        m
    }

    pub fn scalar(ring: &Arc<Ring>, n: usize, value: &T) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.data[i * n + i] = value.clone();
        }
        m
    }

    /// Build from row-major nested rows. All entries must live in `ring`.
    pub fn from_rows(ring: &Arc<Ring>, rows: Vec<Vec<T>>, ncols: usize) -> Result<Self, ShapeError> {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * ncols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != ncols {
                return Err(ShapeError(format!(
                    "row {i} has {} entries, expected {ncols}",
                    row.len()
                )));
            }
            for e in row {
                if !same_ring(e.ring(), ring) {
                    return Err(ShapeError(format!("entry in {} instead of {ring}", e.ring())));
                }
                data.push(e);
            }
        }
        Ok(Matrix {
            ring: ring.clone(),
            rows: nrows,
            cols: ncols,
            data,
        })
    }

    pub fn from_fn(ring: &Arc<Ring>, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix {
            ring: ring.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i * self.cols + j] = value;
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        let cols = self.cols.max(1);
        self.data.iter().enumerate().map(move |(k, e)| (k / cols, k % cols, e))
    }

    pub fn row_vecs(&self) -> Vec<Vec<T>> {
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(T::is_zero)
    }

    pub fn map<U: Entry>(&self, ring: &Arc<Ring>, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            ring: ring.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<U: Entry, E>(
        &self,
        ring: &Arc<Ring>,
        f: impl Fn(&T) -> Result<U, E>,
    ) -> Result<Matrix<U>, E> {
        Ok(Matrix {
            ring: ring.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<Result<_, _>>()?,
        })
    }

    pub fn pullback(&self, map: &RingMap) -> Result<Self, RingError> {
        self.try_map(map.target(), |e| e.pulled_back(map))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.ring, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    fn zip(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Result<Self, ShapeError> {
        if self.shape() != other.shape() {
            return Err(ShapeError(format!(
                "cannot combine {:?} with {:?}",
                self.shape(),
                other.shape()
            )));
        }
        Ok(Matrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self, ShapeError> {
        self.zip(other, T::plus)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ShapeError> {
        self.zip(other, T::minus)
    }

    pub fn neg(&self) -> Self {
        self.map(&self.ring, T::negated)
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        self.map(&self.ring, |e| e.scaled(c))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, ShapeError> {
        if self.cols != other.rows {
            return Err(ShapeError(format!(
                "cannot multiply {:?} by {:?}",
                self.shape(),
                other.shape()
            )));
        }
        let mut out = Self::zeros(&self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.data[idx] = out.data[idx].plus(&a.times(b));
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product `self ⊗ other`, row index `(i, k) -> i * other.rows + k`.
    pub fn kron(&self, other: &Self) -> Self {
        Self::from_fn(
            &self.ring,
            self.rows * other.rows,
            self.cols * other.cols,
            |r, c| {
                let (i, k) = (r / other.rows, r % other.rows);
                let (j, l) = (c / other.cols, c % other.cols);
                self.get(i, j).times(other.get(k, l))
            },
        )
    }

    /// Block matrix `[[a, b], [c, d]]`.
    pub fn blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Self, ShapeError> {
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(ShapeError("inconsistent block shapes".into()));
        }
        let rows = a.rows + c.rows;
        let cols = a.cols + b.cols;
        Ok(Self::from_fn(&a.ring, rows, cols, |i, j| {
            match (i < a.rows, j < a.cols) {
                (true, true) => a.get(i, j).clone(),
                (true, false) => b.get(i, j - a.cols).clone(),
                (false, true) => c.get(i - a.rows, j).clone(),
                (false, false) => d.get(i - a.rows, j - a.cols).clone(),
            }
        }))
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let z1 = Self::zeros(&self.ring, self.rows, other.cols);
        let z2 = Self::zeros(&self.ring, other.rows, self.cols);
        Self::blocks(self, &z1, &z2, other).expect("shapes agree by construction")
    }

    pub fn trace(&self) -> Result<T, ShapeError> {
        if self.rows != self.cols {
            return Err(ShapeError(format!("trace of non-square {:?}", self.shape())));
        }
        let mut acc = T::zero(&self.ring);
        for i in 0..self.rows {
            acc = acc.plus(self.get(i, i));
        }
        Ok(acc)
    }

    /// First entry (row-major) where the two matrices differ.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, usize)> {
        if self.shape() != other.shape() {
            return Some((0, 0));
        }
        self.data
            .iter()
            .zip(&other.data)
            .position(|(a, b)| a != b)
            .map(|k| (k / self.cols, k % self.cols))
    }
}

impl PolyMatrix {
    pub fn to_forms(&self) -> FormMatrix {
        self.map(&self.ring, |p| DiffForm::from(p.clone()))
    }

    /// Entrywise exterior derivative.
    pub fn d(&self) -> FormMatrix {
        self.map(&self.ring, crate::forms::d_function)
    }

    pub fn determinant(&self) -> Result<LocalizedPoly, ShapeError> {
        if self.rows != self.cols {
            return Err(ShapeError(format!("determinant of non-square {:?}", self.shape())));
        }
        Ok(det_laplace(self, &(0..self.rows).collect::<Vec<_>>(), 0))
    }

    /// Inverse via the adjugate; requires a unit determinant.
    pub fn inverse(&self) -> Result<PolyMatrix, MatrixError> {
        let det = self.determinant()?;
        let inv_det = det.inverse().map_err(|_| MatrixError::NotInvertible(det.to_string()))?;
        let n = self.rows;
        let mut out = Self::zeros(&self.ring, n, n);
        for i in 0..n {
            for j in 0..n {
                // cofactor C_ji goes to (i, j)
                let minor = self.minor(j, i);
                let c = if n == 1 {
                    LocalizedPoly::one(&self.ring)
                } else {
                    minor.determinant()?
                };
                let c = if (i + j) % 2 == 1 { -&c } else { c };
                out.set(i, j, &c * &inv_det);
            }
        }
        Ok(out)
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> PolyMatrix {
        let rows: Vec<usize> = (0..self.rows).filter(|&r| r != skip_row).collect();
        let cols: Vec<usize> = (0..self.cols).filter(|&c| c != skip_col).collect();
        Self::from_fn(&self.ring, rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        })
    }
}

fn det_laplace(m: &PolyMatrix, cols: &[usize], row: usize) -> LocalizedPoly {
    if cols.is_empty() {
        return LocalizedPoly::one(m.ring());
    }
    let mut acc = LocalizedPoly::zero(m.ring());
    for (k, &c) in cols.iter().enumerate() {
        let entry = m.get(row, c);
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = entry * &det_laplace(m, &rest, row + 1);
        acc = if k % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("shape mismatch: {0}")]
pub struct ShapeError(pub String);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatrixError {
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error("matrix is not invertible (determinant {0} is not a unit)")]
    NotInvertible(String),
}

impl<T: Entry> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .row_vecs()
            .iter()
            .map(|r| {
                let items: Vec<String> = r.iter().map(|e| e.to_string()).collect();
                format!("[{}]", items.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}
